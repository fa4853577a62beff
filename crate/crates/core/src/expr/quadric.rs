//! Exponential arguments `exp(-num/den - affine)`.

use std::collections::BTreeMap;

use super::gcd::gcd;
use super::poly::{Polynomial, Q};
use super::symbol::{IndexName, Slot, Symbol};
use super::tensor::TensorProduct;
use super::ExprError;
use super::Routing;

/// Polynomial coefficients attached to tensor products; no denominators.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PolyTensor(BTreeMap<TensorProduct, Polynomial>);

impl PolyTensor {
    pub fn zero() -> Self {
        PolyTensor::default()
    }

    pub fn scalar(p: Polynomial) -> Self {
        PolyTensor::term(p, TensorProduct::scalar())
    }

    pub fn term(p: Polynomial, t: TensorProduct) -> Self {
        let mut out = PolyTensor::zero();
        out.add_term(t, p);
        out
    }

    pub fn add_term(&mut self, t: TensorProduct, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let sum = match self.0.remove(&t) {
            Some(old) => &old + &p,
            None => p,
        };
        if !sum.is_zero() {
            self.0.insert(t, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TensorProduct, &Polynomial)> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add(&self, other: &PolyTensor) -> PolyTensor {
        let mut out = self.clone();
        for (t, p) in &other.0 {
            out.add_term(t.clone(), p.clone());
        }
        out
    }

    pub fn neg(&self) -> PolyTensor {
        PolyTensor(self.0.iter().map(|(t, p)| (t.clone(), -p)).collect())
    }

    pub fn mul_poly(&self, p: &Polynomial) -> PolyTensor {
        let mut out = PolyTensor::zero();
        for (t, c) in &self.0 {
            out.add_term(t.clone(), c * p);
        }
        out
    }

    pub fn scale(&self, c: &Q) -> PolyTensor {
        self.mul_poly(&Polynomial::constant(c.clone()))
    }

    pub fn mul(&self, other: &PolyTensor) -> PolyTensor {
        let mut out = PolyTensor::zero();
        for (t1, p1) in &self.0 {
            for (t2, p2) in &other.0 {
                out.add_term(t1.mul(t2), p1 * p2);
            }
        }
        out
    }

    /// Gcd of all coefficients (zero polynomial when empty).
    pub fn coefficient_gcd(&self) -> Polynomial {
        self.0.values().fold(Polynomial::zero(), |acc, p| gcd(&acc, p))
    }

    pub fn div_exact(&self, d: &Polynomial) -> Option<PolyTensor> {
        let mut out = PolyTensor::zero();
        for (t, p) in &self.0 {
            out.add_term(t.clone(), p.div_exact(d)?);
        }
        Some(out)
    }

    pub fn derivative(&self, slot: &Slot, index: &IndexName) -> PolyTensor {
        let mut out = PolyTensor::zero();
        for (t, p) in &self.0 {
            for (c, dt) in t.derivative(slot, index) {
                out.add_term(dt, p.scale(&c));
            }
        }
        out
    }

    pub fn substitute_symbol(&self, s: &Symbol, value: &Polynomial) -> PolyTensor {
        let mut out = PolyTensor::zero();
        for (t, p) in &self.0 {
            out.add_term(t.clone(), p.substitute(s, value));
        }
        out
    }

    pub fn substitute_momenta(&self, routing: &Routing) -> Result<PolyTensor, ExprError> {
        let mut out = PolyTensor::zero();
        for (t, p) in &self.0 {
            for (c, nt) in routing.apply(t)? {
                out.add_term(nt, p.scale(&c));
            }
        }
        Ok(out)
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut all: Vec<Symbol> = self.0.values().flat_map(|p| p.symbols()).collect();
        all.sort();
        all.dedup();
        all
    }

    /// Total degree in the listed symbols must equal `degree` in every monomial.
    pub fn is_homogeneous_in(&self, syms: &std::collections::BTreeSet<Symbol>, degree: u32) -> bool {
        self.0.values().all(|p| p.is_homogeneous_in(syms, degree))
    }
}

/// Argument of `exp(-num/den - affine)`, kept in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Quadric {
    num: PolyTensor,
    den: Polynomial,
    affine: PolyTensor,
}

impl Quadric {
    /// `None` when the whole argument vanishes.
    pub fn new(num: PolyTensor, den: Polynomial, affine: PolyTensor) -> Option<Quadric> {
        assert!(!den.is_zero(), "quadric with zero denominator");
        let (mut num, mut den, mut affine) = (num, den, affine);
        if num.is_zero() {
            den = Polynomial::one();
        } else {
            let g = gcd(&num.coefficient_gcd(), &den);
            if !g.is_constant() {
                num = num.div_exact(&g).expect("gcd divides");
                den = den.div_exact(&g).expect("gcd divides");
            }
            let c = den.content();
            den = den.scale(&c.recip());
            num = num.scale(&c.recip());
            if den.is_one() {
                affine = affine.add(&num);
                num = PolyTensor::zero();
            }
        }
        if num.is_zero() && affine.is_zero() {
            return None;
        }
        Some(Quadric { num, den, affine })
    }

    pub fn affine_only(affine: PolyTensor) -> Option<Quadric> {
        Quadric::new(PolyTensor::zero(), Polynomial::one(), affine)
    }

    pub fn ratio_num(&self) -> &PolyTensor {
        &self.num
    }

    pub fn ratio_den(&self) -> &Polynomial {
        &self.den
    }

    pub fn affine(&self) -> &PolyTensor {
        &self.affine
    }

    /// Argument of the product of two exponentials.
    pub fn combine(a: Option<&Quadric>, b: Option<&Quadric>) -> Option<Quadric> {
        match (a, b) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (Some(x), Some(y)) => {
                let affine = x.affine.add(&y.affine);
                if x.num.is_zero() {
                    return Quadric::new(y.num.clone(), y.den.clone(), affine);
                }
                if y.num.is_zero() || x.den == y.den {
                    return Quadric::new(x.num.add(&y.num), x.den.clone(), affine);
                }
                let num = x.num.mul_poly(&y.den).add(&y.num.mul_poly(&x.den));
                Quadric::new(num, &x.den * &y.den, affine)
            }
        }
    }

    /// Derivative of the exponent `-num/den - affine` as (numerator over `den`, polynomial part).
    pub fn exponent_derivative(&self, slot: &Slot, index: &IndexName) -> (PolyTensor, PolyTensor) {
        (self.num.derivative(slot, index).neg(), self.affine.derivative(slot, index).neg())
    }

    pub fn substitute_momenta(&self, routing: &Routing) -> Result<Option<Quadric>, ExprError> {
        Ok(Quadric::new(
            self.num.substitute_momenta(routing)?,
            self.den.clone(),
            self.affine.substitute_momenta(routing)?,
        ))
    }

    /// `None` in the outer option when the ratio denominator vanishes.
    pub fn substitute_symbol(&self, s: &Symbol, value: &Polynomial) -> Option<Option<Quadric>> {
        let den = self.den.substitute(s, value);
        let num = self.num.substitute_symbol(s, value);
        if den.is_zero() {
            if num.is_zero() {
                return Some(Quadric::new(num, Polynomial::one(), self.affine.substitute_symbol(s, value)));
            }
            return None;
        }
        Some(Quadric::new(num, den, self.affine.substitute_symbol(s, value)))
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.den.contains(s)
            || self.num.terms().any(|(_, p)| p.contains(s))
            || self.affine.terms().any(|(_, p)| p.contains(s))
    }
}
