//! Sparse multivariate polynomials with exact rational coefficients.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::symbol::Symbol;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Power product of symbols, sorted by symbol, exponents strictly positive.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(Vec<(Symbol, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        Monomial(vec![(s, 1)])
    }

    pub fn from_pairs(mut pairs: Vec<(Symbol, u32)>) -> Self {
        pairs.retain(|p| p.1 > 0);
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Symbol, u32)> = Vec::with_capacity(pairs.len());
        for (s, e) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == s => last.1 += e,
                _ => out.push((s, e)),
            }
        }
        Monomial(out)
    }

    pub fn factors(&self) -> &[(Symbol, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|p| p.1).sum()
    }

    pub fn exponent(&self, s: &Symbol) -> u32 {
        self.0.binary_search_by(|p| p.0.cmp(s)).map(|k| self.0[k].1).unwrap_or(0)
    }

    /// Product, reducing powers of the imaginary unit; returns the sign picked up.
    pub fn mul(&self, other: &Monomial) -> (Monomial, bool) {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let ord = match (self.0.get(i), other.0.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        let mut negative = false;
        if let Some(pos) = out.iter().position(|p| p.0.is_imaginary_unit()) {
            let e = out[pos].1;
            negative = (e / 2) % 2 == 1;
            if e % 2 == 0 {
                out.remove(pos);
            } else {
                out[pos].1 = 1;
            }
        }
        (Monomial(out), negative)
    }

    /// `self / other` when every exponent suffices.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (s, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *s {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *s {
                let d = other.0[j].1;
                j += 1;
                if d > *e {
                    return None;
                }
                if e - d > 0 {
                    out.push((s.clone(), e - d));
                }
            } else {
                out.push((s.clone(), *e));
            }
        }
        if j < other.0.len() {
            return None;
        }
        Some(Monomial(out))
    }

    /// Componentwise minimum of exponents.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for (s, e) in &self.0 {
            let f = other.exponent(s);
            if f > 0 {
                out.push((s.clone(), (*e).min(f)));
            }
        }
        Monomial(out)
    }

    pub fn without(&self, s: &Symbol) -> (Monomial, u32) {
        let mut e = 0;
        let rest = self
            .0
            .iter()
            .filter(|p| {
                if p.0 == *s {
                    e = p.1;
                    false
                } else {
                    true
                }
            })
            .cloned()
            .collect();
        (Monomial(rest), e)
    }
}

/// Lexicographic order in which the monomial with the higher power of the
/// first differing symbol sorts first; constants sort last.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        loop {
            match (a.get(i), b.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    Ordering::Less => return Ordering::Less,
                    Ordering::Greater => return Ordering::Greater,
                    Ordering::Equal => {
                        if x.1 != y.1 {
                            return y.1.cmp(&x.1);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Polynomial {
    terms: BTreeMap<Monomial, Q>,
}

impl PartialOrd for Polynomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Polynomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.terms.iter().cmp(other.terms.iter())
    }
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        let mut p = Polynomial::zero();
        if !c.is_zero() {
            p.terms.insert(Monomial::one(), c);
        }
        p
    }

    pub fn integer(n: i64) -> Self {
        Polynomial::constant(q(n))
    }

    pub fn var(s: Symbol) -> Self {
        Polynomial::term(Q::one(), Monomial::var(s))
    }

    pub fn named(name: &str) -> Self {
        Polynomial::var(Symbol::new(name))
    }

    pub fn term(c: Q, m: Monomial) -> Self {
        let mut p = Polynomial::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Q)>>(it: I) -> Self {
        let mut p = Polynomial::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let (m, neg) = m.mul(&Monomial::one());
        let c = if neg { -c } else { c };
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
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
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.contains_key(&Monomial::one()))
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.terms.is_empty() {
            return Some(Q::zero());
        }
        if self.is_constant() {
            return self.terms.values().next().cloned();
        }
        None
    }

    /// The single monomial with coefficient one, if that is all there is.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().next()
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial { terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().map(|(n, c)| {
            let (prod, neg) = n.mul(m);
            (prod, if neg { -c.clone() } else { c.clone() })
        }))
    }

    pub fn pow(&self, n: u32) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.terms.keys().flat_map(|m| m.factors().iter().map(|p| p.0.clone())).collect()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent(s) > 0)
    }

    pub fn degree_in(&self, s: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).max().unwrap_or(0)
    }

    pub fn min_degree_in(&self, s: &Symbol) -> u32 {
        self.terms.keys().map(|m| m.exponent(s)).min().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Homogeneous of the given degree in the listed symbols (others are parameters).
    pub fn is_homogeneous_in(&self, syms: &BTreeSet<Symbol>, degree: u32) -> bool {
        self.terms
            .keys()
            .all(|m| m.factors().iter().filter(|p| syms.contains(&p.0)).map(|p| p.1).sum::<u32>() == degree)
    }

    /// Coefficients `c_k` with `self = sum_k c_k s^k`.
    pub fn coefficients_in(&self, s: &Symbol) -> Vec<Polynomial> {
        let mut out = vec![Polynomial::zero(); self.degree_in(s) as usize + 1];
        for (m, c) in &self.terms {
            let (rest, e) = m.without(s);
            out[e as usize].add_term(rest, c.clone());
        }
        out
    }

    pub fn from_coefficients(s: &Symbol, coeffs: &[Polynomial]) -> Polynomial {
        let mut out = Polynomial::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let m = Monomial::from_pairs(vec![(s.clone(), k as u32)]);
            out = &out + &c.mul_monomial(&m);
        }
        out
    }

    pub fn substitute(&self, s: &Symbol, value: &Polynomial) -> Polynomial {
        if !self.contains(s) {
            return self.clone();
        }
        let coeffs = self.coefficients_in(s);
        // Horner scheme
        let mut acc = Polynomial::zero();
        for c in coeffs.iter().rev() {
            acc = &(&acc * value) + c;
        }
        acc
    }

    pub fn derivative(&self, s: &Symbol) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let (rest, e) = m.without(s);
            if e == 0 {
                return None;
            }
            let m2 = rest.mul(&Monomial::from_pairs(vec![(s.clone(), e - 1)])).0;
            Some((m2, c * q(e as i64)))
        }))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let mut out = Polynomial::zero();
        for (n, c) in &self.terms {
            out.terms.insert(n.div(m)?, c.clone());
        }
        Some(out)
    }

    /// Rational content `c` with `self = c * p`, `p` integral, primitive, positive leading coefficient.
    pub fn content(&self) -> Q {
        if self.is_zero() {
            return Q::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut content = Q::new(num_gcd, den_lcm);
        if self.leading().is_some_and(|(_, c)| c.is_negative()) {
            content = -content;
        }
        content
    }

    pub fn primitive(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        self.scale(&self.content().recip())
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Polynomial) -> Option<Polynomial> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.recip()));
        }
        if let Some(m) = d.as_monomial() {
            return self.div_monomial(m);
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let mut rem = self.clone();
        let mut quo = Polynomial::zero();
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let t = rm.div(&dm)?;
            let c = rc / &dc;
            rem = &rem - &d.mul_monomial(&t).scale(&c);
            quo.add_term(t, c);
        }
        Some(quo)
    }

    pub fn eval_f64(&self, value: &dyn Fn(&Symbol) -> f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let coef = rational_to_f64(c);
                m.factors().iter().fold(coef, |acc, (s, e)| acc * value(s).powi(*e as i32))
            })
            .sum()
    }

    pub fn eval_exact(&self, value: &dyn Fn(&Symbol) -> Q) -> Q {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (s, e) in m.factors() {
                t *= num_traits::pow(value(s), *e as usize);
            }
            total += t;
        }
        total
    }
}

pub fn rational_to_f64(c: &Q) -> f64 {
    use num_traits::ToPrimitive;
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (big, small) = if self.len() >= rhs.len() { (self, rhs) } else { (rhs, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let mut acc: BTreeMap<Monomial, Q> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let (m, neg) = m1.mul(m2);
                let c = c1 * c2;
                let entry = acc.entry(m).or_insert_with(Q::zero);
                if neg {
                    *entry -= c;
                } else {
                    *entry += c;
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Polynomial { terms: acc }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(n: &str) -> Polynomial {
        Polynomial::named(n)
    }

    #[test]
    fn commutative_terms_merge() {
        let a = &v("A1") * &v("A2");
        let b = &v("A2") * &v("A1");
        let s = &a + &b;
        assert_eq!(s, a.scale(&q(2)));
        assert!((&a - &b).is_zero());
    }

    #[test]
    fn leading_term_is_lex_first() {
        let p = &(&v("A2") * &v("A2")) + &v("A1");
        assert_eq!(p.leading().unwrap().0, &Monomial::var(Symbol::new("A1")));
    }

    #[test]
    fn imaginary_unit_squares_to_minus_one() {
        let i = Polynomial::var(Symbol::imaginary_unit());
        assert_eq!(&i * &i, Polynomial::integer(-1));
        assert_eq!(i.pow(3), -&i);
        assert_eq!(i.pow(4), Polynomial::one());
    }

    #[test]
    fn exact_division() {
        let psi = &v("A1") + &v("A2");
        let f = &(&psi * &psi) * &v("A3");
        assert_eq!(f.div_exact(&psi).unwrap(), &psi * &v("A3"));
        assert!(psi.div_exact(&(&v("A1") + &v("A3"))).is_none());
    }

    #[test]
    fn substitution_and_derivative() {
        let psi = &v("A1") + &v("A2");
        let p = psi.pow(2);
        assert_eq!(p.substitute(&Symbol::new("A1"), &Polynomial::zero()), v("A2").pow(2));
        assert_eq!(p.derivative(&Symbol::new("A1")), psi.scale(&q(2)));
    }

    #[test]
    fn content_makes_integral_primitive() {
        let p = &v("A1").scale(&q_frac(-3, 2)) + &Polynomial::constant(q_frac(9, 4));
        let c = p.content();
        assert_eq!(c, q_frac(-3, 4));
        assert_eq!(p.primitive(), &v("A1").scale(&q(2)) - &Polynomial::integer(3));
    }
}
