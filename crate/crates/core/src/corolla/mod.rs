//! Corolla polynomial, its differential, and residue extraction.

mod differential;
mod polynomial;

use std::collections::BTreeSet;

use thiserror::Error;

use crate::expr::{regular_part, residue, ExprError, Expression};
use crate::graph::{EdgeSet, FeynmanGraph, GraphError};

pub use differential::{
    a_operator, apply_differential, apply_to_integrand, b_tensor, corolla_differential, Application, Derivative,
    DifferentialOperator,
};
pub use polynomial::{
    corolla, corolla_summand, ghost_factor, off_cycle_half_edge, qcd_prefactor, vertex_factor, CorollaPolynomial,
    HalfEdgeVar, Sign, VarMonomial, Variant, COLOR_TOKEN,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CorollaError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error("edge {0} is not internal")]
    NotInternal(String),
    #[error("{0}")]
    Internal(String),
}

/// Iterated residue at `A_e = 0` for `e` in `shrink`, then the regular part
/// in every other internal Schwinger parameter.
pub fn schwinger_res_reg(g: &FeynmanGraph, expr: &Expression, shrink: &EdgeSet) -> Result<Expression, CorollaError> {
    for &e in shrink {
        if !g.edge(e).is_internal() {
            return Err(CorollaError::NotInternal(g.edge(e).id.clone()));
        }
    }
    let mut out = expr.clone();
    for &e in shrink {
        out = residue(&out, &g.schwinger(e))?;
    }
    let rest: BTreeSet<_> =
        g.internal_edges().into_iter().filter(|e| !shrink.contains(e)).map(|e| g.schwinger(e)).collect();
    for s in &rest {
        out = regular_part(&out, s)?;
    }
    Ok(out)
}
