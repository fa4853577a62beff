//! Kirchhoff polynomials and the scalar parametric integrand.

mod routing;

use std::collections::BTreeSet;

use crate::expr::render::Style;
use crate::expr::{
    Expression, Monomial, PolyTensor, Polynomial, Quadric, Ratio, Slot, Symbol, TensorAtom, TensorProduct, Q,
};
use crate::graph::{cycle_basis, spanning_2forests, spanning_trees, FeynmanGraph, GraphError};

pub use routing::{automatic_routing, check_conservation, parse_routing, RoutingError};

/// `psi = sum over spanning trees T of prod_{e not in T} A_e`.
pub fn first_symanzik(g: &FeynmanGraph) -> Result<Polynomial, GraphError> {
    let internal = g.internal_edges();
    let mut psi = Polynomial::zero();
    for tree in spanning_trees(g)? {
        let m =
            Monomial::from_pairs(internal.iter().filter(|e| !tree.contains(e)).map(|&e| (g.schwinger(e), 1)).collect());
        psi.add_term(m, Q::from_integer(1.into()));
    }
    Ok(psi)
}

/// One spanning 2-forest contribution: `(sum flow)^2 * weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestTerm {
    /// Signed momenta crossing from the first component to the second.
    pub flow: Vec<(i32, Slot)>,
    pub weight: Monomial,
}

impl ForestTerm {
    /// The flow squared, expanded into dot products.
    pub fn square(&self) -> PolyTensor {
        let mut out = PolyTensor::zero();
        for (a, s) in &self.flow {
            for (b, t) in &self.flow {
                let atom = TensorAtom::dot(s.clone(), t.clone());
                out.add_term(TensorProduct::atom(atom), Polynomial::integer(i64::from(a * b)));
            }
        }
        out
    }
}

pub fn forest_terms(g: &FeynmanGraph) -> Result<Vec<ForestTerm>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    let internal = g.internal_edges();
    Ok(spanning_2forests(g)
        .into_iter()
        .map(|f| {
            let flow = internal
                .iter()
                .filter_map(|&e| {
                    let tau: i32 = f.first.iter().map(|&v| g.incidence(v, e)).sum();
                    (tau != 0).then(|| (tau, g.momentum(e)))
                })
                .collect();
            let weight = Monomial::from_pairs(
                internal.iter().filter(|e| !f.edges.contains(e)).map(|&e| (g.schwinger(e), 1)).collect(),
            );
            ForestTerm { flow, weight }
        })
        .collect())
}

/// `phi` with momenta left symbolic, as a polynomial-coefficient tensor sum.
pub fn second_symanzik(g: &FeynmanGraph) -> Result<PolyTensor, GraphError> {
    let mut phi = PolyTensor::zero();
    for t in forest_terms(g)? {
        let w = Polynomial::term(Q::from_integer(1.into()), t.weight.clone());
        phi = phi.add(&t.square().mul_poly(&w));
    }
    Ok(phi)
}

/// Factored display of `phi`, one summand per 2-forest.
pub fn render_forest_terms(terms: &[ForestTerm], style: Style) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|t| {
            let mut flow = String::new();
            for (k, (sign, s)) in t.flow.iter().enumerate() {
                let name = match style {
                    Style::Text => s.to_string(),
                    Style::Latex => crate::expr::render::latex_name(s.name()),
                };
                match (k, *sign < 0) {
                    (0, true) => flow.push('-'),
                    (0, false) => {}
                    (_, true) => flow.push_str(" - "),
                    (_, false) => flow.push_str(" + "),
                }
                if sign.abs() != 1 {
                    flow.push_str(&format!("{} ", sign.abs()));
                }
                flow.push_str(&name);
            }
            let w = style.poly(&Polynomial::term(Q::from_integer(1.into()), t.weight.clone()));
            if flow.is_empty() {
                return "0".into();
            }
            let sq = if t.flow.len() == 1 && t.flow[0].0 > 0 { format!("{flow}^2") } else { format!("({flow})^2") };
            if w == "1" {
                sq
            } else {
                format!("{sq} {w}")
            }
        })
        .collect();
    parts.join(" + ")
}

/// `prefactor * body`, with `prefactor` the product of inverse external
/// propagators and `body = exp(-phi/psi - q) / psi^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricIntegrand {
    pub psi: Polynomial,
    pub phi: PolyTensor,
    pub prefactor: Expression,
    pub body: Expression,
}

impl ParametricIntegrand {
    pub fn full(&self) -> Expression {
        self.prefactor.mul(&self.body)
    }

    pub fn exponent(&self) -> Option<&Quadric> {
        self.body.terms().next().and_then(|(_, _, e)| e)
    }
}

fn square(s: &Slot) -> TensorProduct {
    TensorProduct::atom(TensorAtom::dot(s.clone(), s.clone()))
}

fn mass_squared(m: &Option<Symbol>) -> Polynomial {
    match m {
        Some(m) => Polynomial::var(m.clone()).pow(2),
        None => Polynomial::zero(),
    }
}

pub fn parametric_integrand(g: &FeynmanGraph) -> Result<ParametricIntegrand, GraphError> {
    let psi = first_symanzik(g)?;
    let phi = second_symanzik(g)?;
    let mut prefactor = Expression::one();
    let mut affine = PolyTensor::zero();
    for (e, edge) in g.edges().iter().enumerate() {
        let a = Polynomial::var(g.schwinger(e));
        let m2 = mass_squared(&edge.mass);
        if !edge.is_internal() {
            let xi = g.momentum(e);
            affine.add_term(square(&xi), a.clone());
            let mut inv = Expression::tensors(square(&xi));
            inv.add_assign(&Expression::from_poly(m2.clone()));
            prefactor = prefactor.mul(&inv);
        }
        affine.add_term(TensorProduct::scalar(), &a * &m2);
    }
    let exp = Quadric::new(phi.clone(), psi.clone(), affine);
    let body =
        Expression::term(Ratio::from_factors(Polynomial::one(), vec![(psi.clone(), 2)]), TensorProduct::scalar(), exp);
    Ok(ParametricIntegrand { psi, phi, prefactor, body })
}

/// Loop number, which is the homogeneity degree of `psi`.
pub fn loop_count(g: &FeynmanGraph) -> Result<usize, GraphError> {
    Ok(cycle_basis(g)?.len())
}

/// Schwinger symbols of the internal edges.
pub fn internal_schwingers(g: &FeynmanGraph) -> BTreeSet<Symbol> {
    g.internal_edges().into_iter().map(|e| g.schwinger(e)).collect()
}
