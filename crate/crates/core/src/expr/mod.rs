//! Exact symbolic kernel: polynomials, rational functions, Lorentz tensors,
//! exponential factors and the expressions built from them.

pub mod expression;
pub mod gcd;
pub mod json;
pub mod laurent;
pub mod numeric;
pub mod parse;
pub mod poly;
pub mod quadric;
pub mod ratio;
pub mod render;
pub mod symbol;
pub mod tensor;

use thiserror::Error;

pub use expression::{Expression, Routing};
pub use laurent::{laurent_res_reg, regular_part, residue, MAX_POLE_ORDER};
pub use poly::{q, q_frac, Monomial, Polynomial, Q};
pub use quadric::{PolyTensor, Quadric};
pub use ratio::Ratio;
pub use render::Format;
pub use symbol::{IndexName, Slot, Symbol};
pub use tensor::{TensorAtom, TensorProduct};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("malformed expression: {0}")]
    Malformed(String),
    #[error("incomplete routing: no image for momentum slot {0}")]
    IncompleteRouting(String),
    #[error("unsupported expansion: {0}")]
    UnsupportedExpansion(String),
    #[error("pole of order {order} in {symbol} exceeds the cap of {cap}")]
    PoleOrderExceeded { symbol: String, order: u32, cap: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}
