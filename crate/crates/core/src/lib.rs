//! Symbolic construction of gauge-theory parametric integrands from
//! 3-regular scalar Feynman graphs.

pub mod corolla;
pub mod electroweak;
pub mod expr;
pub mod graph;
pub mod parametric;
