//! Canonical sums of `coefficient x tensor product x exponential` terms.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use super::poly::{Polynomial, Q};
use super::quadric::{PolyTensor, Quadric};
use super::ratio::Ratio;
use super::symbol::{IndexName, Slot, Symbol};
use super::tensor::{TensorAtom, TensorProduct};
use super::ExprError;

type Key = (TensorProduct, Option<Quadric>);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Expression {
    terms: BTreeMap<Key, Ratio>,
}

impl Expression {
    pub fn zero() -> Self {
        Expression::default()
    }

    pub fn one() -> Self {
        Expression::from_ratio(Ratio::one())
    }

    pub fn integer(n: i64) -> Self {
        Expression::from_ratio(Ratio::integer(n))
    }

    pub fn constant(c: Q) -> Self {
        Expression::from_ratio(Ratio::constant(c))
    }

    pub fn from_ratio(r: Ratio) -> Self {
        Expression::term(r, TensorProduct::scalar(), None)
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Expression::from_ratio(Ratio::from_poly(p))
    }

    pub fn symbol(name: &str) -> Self {
        Expression::from_poly(Polynomial::named(name))
    }

    pub fn atom(a: TensorAtom) -> Self {
        Expression::term(Ratio::one(), TensorProduct::atom(a), None)
    }

    pub fn tensors(t: TensorProduct) -> Self {
        Expression::term(Ratio::one(), t, None)
    }

    pub fn exp(q: Option<Quadric>) -> Self {
        Expression::term(Ratio::one(), TensorProduct::scalar(), q)
    }

    pub fn term(c: Ratio, t: TensorProduct, e: Option<Quadric>) -> Self {
        let mut out = Expression::zero();
        out.add_term(c, t, e);
        out
    }

    pub fn from_poly_tensor(p: &PolyTensor) -> Self {
        let mut out = Expression::zero();
        for (t, c) in p.terms() {
            out.add_term(Ratio::from_poly(c.clone()), t.clone(), None);
        }
        out
    }

    pub fn add_term(&mut self, c: Ratio, t: TensorProduct, e: Option<Quadric>) {
        if c.is_zero() {
            return;
        }
        let key = (t, e);
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Ratio, &TensorProduct, Option<&Quadric>)> {
        self.terms.iter().map(|((t, e), c)| (c, t, e.as_ref()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().is_some_and(|((t, e), c)| t.is_scalar() && e.is_none() && c.is_one())
    }

    /// The canonical form; kept for API symmetry since every constructor canonicalizes.
    pub fn normalize(&self) -> Expression {
        let mut out = Expression::zero();
        for ((t, e), c) in &self.terms {
            out.add_term(c.clone(), t.clone(), e.clone());
        }
        out
    }

    pub fn add(&self, other: &Expression) -> Expression {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for ((t, e), c) in &small.terms {
            out.add_term(c.clone(), t.clone(), e.clone());
        }
        out
    }

    pub fn add_assign(&mut self, other: &Expression) {
        for ((t, e), c) in &other.terms {
            self.add_term(c.clone(), t.clone(), e.clone());
        }
    }

    pub fn neg(&self) -> Expression {
        Expression { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.neg())).collect() }
    }

    pub fn sub(&self, other: &Expression) -> Expression {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Expression) -> Expression {
        let mut out = Expression::zero();
        for ((t1, e1), c1) in &self.terms {
            for ((t2, e2), c2) in &other.terms {
                out.add_term(c1.mul(c2), t1.mul(t2), Quadric::combine(e1.as_ref(), e2.as_ref()));
            }
        }
        out
    }

    pub fn mul_ratio(&self, r: &Ratio) -> Expression {
        if r.is_zero() {
            return Expression::zero();
        }
        Expression { terms: self.terms.iter().map(|(k, c)| (k.clone(), c.mul(r))).collect() }
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Expression {
        self.mul_ratio(&Ratio::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &Q) -> Expression {
        if c.is_zero() {
            return Expression::zero();
        }
        Expression { terms: self.terms.iter().map(|(k, r)| (k.clone(), r.scale(c))).collect() }
    }

    pub fn pow(&self, n: u32) -> Expression {
        (0..n).fold(Expression::one(), |acc, _| acc.mul(self))
    }

    /// Contract repeated Lorentz indices in every term.
    pub fn contract_indices(&self) -> Result<Expression, ExprError> {
        let mut out = Expression::zero();
        for ((t, e), c) in &self.terms {
            let (f, nt) = t.contract()?;
            out.add_term(c.scale(&f), nt, e.clone());
        }
        Ok(out)
    }

    /// Partial derivative with respect to the `index` component of `slot`.
    pub fn differentiate(&self, slot: &Slot, index: &IndexName) -> Expression {
        let mut out = Expression::zero();
        for ((t, e), c) in &self.terms {
            for (k, dt) in t.derivative(slot, index) {
                out.add_term(c.scale(&k), dt, e.clone());
            }
            if let Some(quad) = e {
                let (over_den, poly_part) = quad.exponent_derivative(slot, index);
                for (dt, p) in over_den.terms() {
                    let coeff = c.mul(&Ratio::new(p.clone(), quad.ratio_den().clone()));
                    out.add_term(coeff, t.mul(dt), e.clone());
                }
                for (dt, p) in poly_part.terms() {
                    out.add_term(c.mul_poly(p), t.mul(dt), e.clone());
                }
            }
        }
        out
    }

    pub fn substitute_momenta(&self, routing: &Routing) -> Result<Expression, ExprError> {
        let mut out = Expression::zero();
        let mut exp_cache: BTreeMap<Quadric, Option<Quadric>> = BTreeMap::new();
        for ((t, e), c) in &self.terms {
            let ne = match e {
                None => None,
                Some(quad) => match exp_cache.get(quad) {
                    Some(x) => x.clone(),
                    None => {
                        let x = quad.substitute_momenta(routing)?;
                        exp_cache.insert(quad.clone(), x.clone());
                        x
                    }
                },
            };
            for (k, nt) in routing.apply(t)? {
                out.add_term(c.scale(&k), nt, ne.clone());
            }
        }
        Ok(out)
    }

    /// Replace a scalar symbol by a polynomial; fails when a denominator vanishes.
    pub fn substitute_symbol(&self, s: &Symbol, value: &Polynomial) -> Result<Expression, ExprError> {
        let mut out = Expression::zero();
        for ((t, e), c) in &self.terms {
            let nc = c.substitute(s, value).ok_or_else(|| {
                ExprError::UnsupportedExpansion(format!("denominator vanishes at {} = {:?}", s, value))
            })?;
            let ne = match e {
                None => None,
                Some(quad) => quad.substitute_symbol(s, value).ok_or_else(|| {
                    ExprError::UnsupportedExpansion(format!("exponential argument has a pole at {} = {:?}", s, value))
                })?,
            };
            out.add_term(nc, t.clone(), ne);
        }
        Ok(out)
    }

    /// Split off a common exponential: `self = rest * exp(q)`; `None` if some term differs.
    pub fn factor_exp(&self, q: Option<&Quadric>) -> Option<Expression> {
        let mut out = Expression::zero();
        for ((t, e), c) in &self.terms {
            if e.as_ref() != q {
                return None;
            }
            out.add_term(c.clone(), t.clone(), None);
        }
        Some(out)
    }

    pub fn has_exponential(&self) -> bool {
        self.terms.keys().any(|(_, e)| e.is_some())
    }

    pub fn exponentials(&self) -> BTreeSet<Quadric> {
        self.terms.keys().filter_map(|(_, e)| e.clone()).collect()
    }

    pub fn slots(&self) -> BTreeSet<Slot> {
        let mut out = BTreeSet::new();
        for (t, e) in self.terms.keys() {
            collect_slots(t, &mut out);
            if let Some(quad) = e {
                for pt in [quad.ratio_num(), quad.affine()] {
                    for (tp, _) in pt.terms() {
                        collect_slots(tp, &mut out);
                    }
                }
            }
        }
        out
    }

    /// Scalar symbols appearing anywhere in the expression.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for ((_, e), c) in &self.terms {
            out.extend(c.numerator().symbols());
            for f in c.denominator_factors().keys() {
                out.extend(f.symbols());
            }
            if let Some(quad) = e {
                out.extend(quad.ratio_den().symbols());
                out.extend(quad.ratio_num().symbols());
                out.extend(quad.affine().symbols());
            }
        }
        out
    }

    /// The coefficient of the pure scalar, exponential-free term.
    pub fn scalar_part(&self) -> Ratio {
        self.terms.get(&(TensorProduct::scalar(), None)).cloned().unwrap_or_else(Ratio::zero)
    }

    pub fn as_ratio(&self) -> Option<Ratio> {
        if self.is_zero() {
            return Some(Ratio::zero());
        }
        if self.terms.len() == 1 {
            let ((t, e), c) = self.terms.iter().next()?;
            if t.is_scalar() && e.is_none() {
                return Some(c.clone());
            }
        }
        None
    }

    #[cfg(test)]
    pub(crate) fn raw_terms(&self) -> &BTreeMap<Key, Ratio> {
        &self.terms
    }
}

fn collect_slots(t: &TensorProduct, out: &mut BTreeSet<Slot>) {
    for a in t.atoms() {
        for s in a.slots() {
            out.insert(s.clone());
        }
    }
}

/// Linear images of momentum slots in terms of independent slots.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Routing {
    map: BTreeMap<Slot, Vec<(Q, Slot)>>,
}

impl Routing {
    pub fn new() -> Self {
        Routing::default()
    }

    pub fn set(&mut self, slot: Slot, image: Vec<(Q, Slot)>) {
        let mut merged: BTreeMap<Slot, Q> = BTreeMap::new();
        for (c, s) in image {
            *merged.entry(s).or_insert_with(Q::zero) += c;
        }
        self.map.insert(slot, merged.into_iter().filter(|(_, c)| !c.is_zero()).map(|(s, c)| (c, s)).collect());
    }

    pub fn with(mut self, slot: &str, image: &[(i64, &str)]) -> Self {
        self.set(Slot::new(slot), image.iter().map(|(c, s)| (super::poly::q(*c), Slot::new(s))).collect());
        self
    }

    pub fn image(&self, slot: &Slot) -> Option<&[(Q, Slot)]> {
        self.map.get(slot).map(|v| v.as_slice())
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Slot, &[(Q, Slot)])> {
        self.map.iter().map(|(s, v)| (s, v.as_slice()))
    }

    pub fn independent(&self) -> BTreeSet<Slot> {
        self.map.values().flat_map(|v| v.iter().map(|(_, s)| s.clone())).filter(|s| !self.map.contains_key(s)).collect()
    }

    fn image_of(&self, s: &Slot, independent: &BTreeSet<Slot>) -> Result<Vec<(Q, Slot)>, ExprError> {
        match self.map.get(s) {
            Some(v) => Ok(v.clone()),
            None if independent.contains(s) => Ok(vec![(Q::one(), s.clone())]),
            None => Err(ExprError::IncompleteRouting(s.to_string())),
        }
    }

    /// Expand a tensor product under the routing.
    pub fn apply(&self, t: &TensorProduct) -> Result<Vec<(Q, TensorProduct)>, ExprError> {
        let independent = self.independent();
        let mut acc: BTreeMap<Vec<TensorAtom>, Q> = BTreeMap::new();
        acc.insert(Vec::new(), Q::one());
        for atom in t.atoms() {
            let images: Vec<(Q, TensorAtom)> = match atom {
                TensorAtom::Mom(s, i) => self
                    .image_of(s, &independent)?
                    .into_iter()
                    .map(|(c, n)| (c, TensorAtom::Mom(n, i.clone())))
                    .collect(),
                TensorAtom::Dot(a, b) => {
                    let ia = self.image_of(a, &independent)?;
                    let ib = self.image_of(b, &independent)?;
                    let mut v = Vec::new();
                    for (ca, na) in &ia {
                        for (cb, nb) in &ib {
                            v.push((ca * cb, TensorAtom::dot(na.clone(), nb.clone())));
                        }
                    }
                    v
                }
                other => vec![(Q::one(), other.clone())],
            };
            let mut next: BTreeMap<Vec<TensorAtom>, Q> = BTreeMap::new();
            for (atoms, c) in &acc {
                for (k, img) in &images {
                    let mut v = atoms.clone();
                    v.push(img.clone());
                    v.sort();
                    *next.entry(v).or_insert_with(Q::zero) += c * k;
                }
            }
            acc = next;
        }
        Ok(acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|(v, c)| (c, TensorProduct::from_atoms(v))).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::poly::q;

    fn v(n: &str) -> Polynomial {
        Polynomial::named(n)
    }

    fn dot(a: &str, b: &str) -> TensorAtom {
        TensorAtom::dot(Slot::new(a), Slot::new(b))
    }

    fn phi_exp() -> Quadric {
        // exp(-(xi1 - xi2)^2 A1 A2 / (A1 + A2))
        let a12 = &v("A1") * &v("A2");
        let mut num = PolyTensor::zero();
        num.add_term(TensorProduct::atom(dot("xi1", "xi1")), a12.clone());
        num.add_term(TensorProduct::atom(dot("xi2", "xi2")), a12.clone());
        num.add_term(TensorProduct::atom(dot("xi1", "xi2")), a12.scale(&q(-2)));
        Quadric::new(num, &v("A1") + &v("A2"), PolyTensor::zero()).unwrap()
    }

    #[test]
    fn cancellation_gives_empty_term_list() {
        let eta = Expression::atom(TensorAtom::metric(IndexName::new("mu"), IndexName::new("nu")));
        let a = eta.mul_poly(&v("A1").pow(2));
        assert!(a.sub(&a).is_empty());
    }

    #[test]
    fn derivative_of_dot_is_other_slot() {
        let e = Expression::atom(dot("xi1", "xi2"));
        let d = e.differentiate(&Slot::new("xi1"), &IndexName::new("mu"));
        assert_eq!(d, Expression::atom(TensorAtom::Mom(Slot::new("xi2"), IndexName::new("mu"))));
    }

    #[test]
    fn derivative_of_exponential() {
        let quad = phi_exp();
        let e = Expression::exp(Some(quad.clone()));
        let mu = IndexName::new("mu");
        let d = e.differentiate(&Slot::new("xi1"), &mu);
        let psi = &v("A1") + &v("A2");
        let a12 = &v("A1") * &v("A2");
        let mut expect = Expression::zero();
        expect.add_term(
            Ratio::new(a12.scale(&q(-2)), psi.clone()),
            TensorProduct::atom(TensorAtom::Mom(Slot::new("xi1"), mu.clone())),
            Some(quad.clone()),
        );
        expect.add_term(
            Ratio::new(a12.scale(&q(2)), psi),
            TensorProduct::atom(TensorAtom::Mom(Slot::new("xi2"), mu)),
            Some(quad),
        );
        assert_eq!(d, expect);
    }

    #[test]
    fn mixed_second_derivative_has_metric_term() {
        let quad = phi_exp();
        let e = Expression::exp(Some(quad.clone()));
        let (mu, nu) = (IndexName::new("mu"), IndexName::new("nu"));
        let d = e.differentiate(&Slot::new("xi1"), &mu).differentiate(&Slot::new("xi2"), &nu);
        let psi = &v("A1") + &v("A2");
        let a12 = &v("A1") * &v("A2");
        let key = (TensorProduct::atom(TensorAtom::metric(mu, nu)), Some(quad));
        assert_eq!(d.raw_terms().get(&key), Some(&Ratio::new(a12.scale(&q(2)), psi)));
    }

    #[test]
    fn routing_expands_bilinearly() {
        let r = Routing::new().with("xi1", &[(1, "q1"), (1, "q2")]).with("xi2", &[(1, "q1")]);
        let e = Expression::atom(dot("xi1", "xi2"));
        let s = e.substitute_momenta(&r).unwrap();
        let expect = Expression::atom(dot("q1", "q1")).add(&Expression::atom(dot("q1", "q2")));
        assert_eq!(s, expect);
    }

    #[test]
    fn routing_to_zero_and_missing_slot() {
        let r = Routing::new().with("xi1", &[(1, "q")]).with("xi2", &[]);
        let diff = Expression::atom(dot("xi1", "xi1"))
            .sub(&Expression::atom(dot("xi1", "xi2")).scale(&q(2)))
            .add(&Expression::atom(dot("xi2", "xi2")));
        assert_eq!(diff.substitute_momenta(&r).unwrap(), Expression::atom(dot("q", "q")));
        let e = Expression::atom(dot("xi3", "xi3"));
        assert!(matches!(e.substitute_momenta(&r), Err(ExprError::IncompleteRouting(_))));
    }
}
