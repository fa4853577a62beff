//! Floating-point evaluation, used to cross-check the exact pipeline.
//!
//! Repeated Lorentz indices are summed over four Euclidean components, which is
//! consistent with the variance-free contraction rules. The imaginary unit is
//! not supported here.

use std::collections::{BTreeMap, HashMap};

use super::expression::Expression;
use super::poly::rational_to_f64;
use super::quadric::PolyTensor;
use super::symbol::{IndexName, Slot, Symbol};
use super::tensor::{TensorAtom, TensorProduct, SPACETIME_DIMENSION};

#[derive(Clone, Debug, Default)]
pub struct NumericPoint {
    pub scalars: HashMap<Symbol, f64>,
    pub momenta: HashMap<Slot, [f64; 4]>,
    /// Component chosen for each free index.
    pub indices: HashMap<IndexName, usize>,
}

impl NumericPoint {
    fn scalar(&self, s: &Symbol) -> f64 {
        *self.scalars.get(s).unwrap_or_else(|| panic!("no numeric value for symbol {s}"))
    }

    fn momentum(&self, s: &Slot) -> [f64; 4] {
        *self.momenta.get(s).unwrap_or_else(|| panic!("no numeric value for slot {s}"))
    }

    pub fn eval(&self, e: &Expression) -> f64 {
        let sc = |s: &Symbol| self.scalar(s);
        e.terms()
            .map(|(c, t, q)| {
                let mut v = c.eval_f64(&sc) * self.tensors(t);
                if let Some(q) = q {
                    let num = self.poly_tensor(q.ratio_num());
                    let den = q.ratio_den().eval_f64(&sc);
                    let aff = self.poly_tensor(q.affine());
                    v *= (-num / den - aff).exp();
                }
                v
            })
            .sum()
    }

    fn poly_tensor(&self, p: &PolyTensor) -> f64 {
        let sc = |s: &Symbol| self.scalar(s);
        p.terms().map(|(t, c)| c.eval_f64(&sc) * self.tensors(t)).sum()
    }

    /// Value of a tensor product with repeated indices summed.
    pub fn tensors(&self, t: &TensorProduct) -> f64 {
        let mut counts: BTreeMap<IndexName, usize> = BTreeMap::new();
        for a in t.atoms() {
            for i in a.indices() {
                *counts.entry(i.clone()).or_insert(0) += 1;
            }
        }
        let summed: Vec<IndexName> = counts.iter().filter(|(_, n)| **n >= 2).map(|(i, _)| i.clone()).collect();
        let dim = SPACETIME_DIMENSION as usize;
        let mut assignment: HashMap<IndexName, usize> = self.indices.clone();
        let total = dim.pow(summed.len() as u32);
        let mut acc = 0.0;
        for mut code in 0..total {
            for i in &summed {
                assignment.insert(i.clone(), code % dim);
                code /= dim;
            }
            acc += t.atoms().iter().map(|a| self.atom(a, &assignment)).product::<f64>();
        }
        acc
    }

    fn atom(&self, a: &TensorAtom, idx: &HashMap<IndexName, usize>) -> f64 {
        let comp = |i: &IndexName| *idx.get(i).unwrap_or_else(|| panic!("no component for index {i}"));
        match a {
            TensorAtom::Metric(x, y) => {
                if comp(x) == comp(y) {
                    1.0
                } else {
                    0.0
                }
            }
            TensorAtom::Mom(s, i) => self.momentum(s)[comp(i)],
            TensorAtom::Dot(x, y) => {
                let (u, v) = (self.momentum(x), self.momentum(y));
                u.iter().zip(v.iter()).map(|(a, b)| a * b).sum()
            }
            TensorAtom::Token(_) => 1.0,
        }
    }
}

/// Convenience for tests: f64 value of an exact rational.
pub fn to_f64(c: &super::poly::Q) -> f64 {
    rational_to_f64(c)
}
