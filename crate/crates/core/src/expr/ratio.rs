//! Reduced rational functions with a factored denominator.
//!
//! The denominator is stored as single-symbol powers plus the squarefree
//! decomposition of the remaining part, so `1/(A1 (A1 + A2)^2)` keeps
//! its pole structure visible and two equal functions compare equal.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::gcd::{gcd, squarefree};
use super::poly::{Monomial, Polynomial, Q};
use super::symbol::Symbol;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ratio {
    num: Polynomial,
    den: BTreeMap<Polynomial, u32>,
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?})/{:?}", self.num, self.den)
    }
}

impl Ratio {
    pub fn zero() -> Self {
        Ratio { num: Polynomial::zero(), den: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Ratio::from_poly(Polynomial::one())
    }

    pub fn constant(c: Q) -> Self {
        Ratio::from_poly(Polynomial::constant(c))
    }

    pub fn integer(n: i64) -> Self {
        Ratio::from_poly(Polynomial::integer(n))
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Ratio { num: p, den: BTreeMap::new() }
    }

    /// `num / den` for arbitrary polynomials; panics on a zero denominator.
    pub fn new(num: Polynomial, den: Polynomial) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        build(num, vec![(den, 1)], false)
    }

    /// `num / prod f^k` where the factors need not be coprime or squarefree.
    pub fn from_factors(num: Polynomial, factors: Vec<(Polynomial, u32)>) -> Self {
        assert!(factors.iter().all(|f| !f.0.is_zero()), "zero denominator");
        build(num, factors, false)
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator_factors(&self) -> &BTreeMap<Polynomial, u32> {
        &self.den
    }

    pub fn denominator(&self) -> Polynomial {
        self.den.iter().fold(Polynomial::one(), |acc, (f, k)| &acc * &f.pow(*k))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.den.is_empty() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Power of `s` in the denominator.
    pub fn pole_order(&self, s: &Symbol) -> u32 {
        self.den.get(&Polynomial::var(s.clone())).copied().unwrap_or(0)
    }

    pub fn mul(&self, other: &Ratio) -> Ratio {
        if self.is_zero() || other.is_zero() {
            return Ratio::zero();
        }
        if other.is_polynomial() && self.is_polynomial() {
            return Ratio::from_poly(&self.num * &other.num);
        }
        let factors = self.den.iter().chain(other.den.iter()).map(|(f, k)| (f.clone(), *k)).collect();
        build(&self.num * &other.num, factors, true)
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Ratio {
        if self.is_polynomial() {
            return Ratio::from_poly(&self.num * p);
        }
        build(&self.num * p, self.den.iter().map(|(f, k)| (f.clone(), *k)).collect(), true)
    }

    pub fn scale(&self, c: &Q) -> Ratio {
        if c.is_zero() {
            return Ratio::zero();
        }
        Ratio { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn div_poly(&self, p: &Polynomial) -> Ratio {
        assert!(!p.is_zero(), "division by zero");
        let mut factors: Vec<(Polynomial, u32)> = self.den.iter().map(|(f, k)| (f.clone(), *k)).collect();
        factors.push((p.clone(), 1));
        build(self.num.clone(), factors, false)
    }

    pub fn neg(&self) -> Ratio {
        Ratio { num: -&self.num, den: self.den.clone() }
    }

    pub fn add(&self, other: &Ratio) -> Ratio {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = &self.num + &other.num;
            if self.den.is_empty() {
                return Ratio::from_poly(num);
            }
            return build(num, self.den.iter().map(|(f, k)| (f.clone(), *k)).collect(), true);
        }
        let mut lcm: BTreeMap<Polynomial, u32> = self.den.clone();
        for (f, k) in &other.den {
            let e = lcm.entry(f.clone()).or_insert(0);
            *e = (*e).max(*k);
        }
        let cofactor = |den: &BTreeMap<Polynomial, u32>| {
            lcm.iter().fold(Polynomial::one(), |acc, (f, k)| {
                let have = den.get(f).copied().unwrap_or(0);
                &acc * &f.pow(k - have)
            })
        };
        let num = &(&self.num * &cofactor(&self.den)) + &(&other.num * &cofactor(&other.den));
        build(num, lcm.into_iter().collect(), true)
    }

    pub fn sub(&self, other: &Ratio) -> Ratio {
        self.add(&other.neg())
    }

    pub fn pow(&self, n: u32) -> Ratio {
        let mut acc = Ratio::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Substitute a polynomial for a symbol; `None` when a denominator vanishes.
    pub fn substitute(&self, s: &Symbol, value: &Polynomial) -> Option<Ratio> {
        let num = self.num.substitute(s, value);
        let mut factors = Vec::with_capacity(self.den.len());
        for (f, k) in &self.den {
            let g = f.substitute(s, value);
            if g.is_zero() {
                return None;
            }
            factors.push((g, *k));
        }
        Some(build(num, factors, false))
    }

    pub fn eval_f64(&self, value: &dyn Fn(&Symbol) -> f64) -> f64 {
        let d: f64 = self.den.iter().map(|(f, k)| f.eval_f64(value).powi(*k as i32)).product();
        self.num.eval_f64(value) / d
    }

    pub fn eval_exact(&self, value: &dyn Fn(&Symbol) -> Q) -> Option<Q> {
        let mut d = Q::one();
        for (f, k) in &self.den {
            d *= num_traits::pow(f.eval_exact(value), *k as usize);
        }
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_exact(value) / d)
    }
}

/// Canonicalize `num / prod f^k`. With `squarefree_input` the non-monomial
/// parts of the factors are already squarefree.
fn build(mut num: Polynomial, factors: Vec<(Polynomial, u32)>, squarefree_input: bool) -> Ratio {
    if num.is_zero() {
        return Ratio::zero();
    }
    let mut mono: BTreeMap<Symbol, u32> = BTreeMap::new();
    let mut pieces: Vec<(Polynomial, u32)> = Vec::new();
    for (f, k) in factors {
        if k == 0 {
            continue;
        }
        if let Some(c) = f.constant_value() {
            num = num.scale(&num_traits::pow(c.recip(), k as usize));
            continue;
        }
        let m = f.monomial_content();
        for (s, e) in m.factors() {
            *mono.entry(s.clone()).or_insert(0) += e * k;
        }
        let r = f.div_monomial(&m).expect("monomial content divides");
        let c = r.content();
        num = num.scale(&num_traits::pow(c.recip(), k as usize));
        let r = r.scale(&c.recip());
        if r.is_constant() {
            continue;
        }
        if squarefree_input {
            pieces.push((r, k));
        } else {
            for (s, j) in squarefree(&r) {
                pieces.push((s, j * k));
            }
        }
    }
    // cancel symbol powers
    for (s, k) in mono.iter_mut() {
        let t = (*k).min(num.min_degree_in(s));
        if t > 0 {
            num = num.div_monomial(&Monomial::from_pairs(vec![(s.clone(), t)])).expect("checked divisibility");
            *k -= t;
        }
    }
    refine(&mut pieces);
    // cancel polynomial pieces against the numerator
    let mut done: Vec<(Polynomial, u32)> = Vec::new();
    while let Some((p, k)) = pieces.pop() {
        let g = if num.is_constant() { Polynomial::one() } else { gcd(&num, &p) };
        if g.is_constant() {
            done.push((p, k));
            continue;
        }
        num = num.div_exact(&g).expect("gcd divides");
        let rest = p.div_exact(&g).expect("gcd divides");
        if !rest.is_constant() {
            let c = rest.content();
            num = num.scale(&num_traits::pow(c.recip(), k as usize));
            done.push((rest.scale(&c.recip()), k));
        } else {
            let c = rest.constant_value().expect("constant");
            num = num.scale(&num_traits::pow(c.recip(), k as usize));
        }
        if k > 1 {
            pieces.push((g, k - 1));
        }
    }
    // group by multiplicity
    let mut grouped: BTreeMap<u32, Polynomial> = BTreeMap::new();
    for (p, k) in done {
        let e = grouped.entry(k).or_insert_with(Polynomial::one);
        *e = &*e * &p;
    }
    let mut den = BTreeMap::new();
    for (s, k) in mono {
        if k > 0 {
            den.insert(Polynomial::var(s), k);
        }
    }
    for (k, p) in grouped {
        let c = p.content();
        num = num.scale(&num_traits::pow(c.recip(), k as usize));
        den.insert(p.scale(&c.recip()), k);
    }
    Ratio { num, den }
}

/// Split pieces until they are pairwise coprime.
fn refine(pieces: &mut Vec<(Polynomial, u32)>) {
    'outer: loop {
        for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                if pieces[i].0 == pieces[j].0 {
                    let (_, k) = pieces.remove(j);
                    pieces[i].1 += k;
                    continue 'outer;
                }
                let g = gcd(&pieces[i].0, &pieces[j].0);
                if g.is_constant() {
                    continue;
                }
                let (ki, kj) = (pieces[i].1, pieces[j].1);
                let pi = pieces[i].0.div_exact(&g).expect("gcd divides").primitive();
                let pj = pieces[j].0.div_exact(&g).expect("gcd divides").primitive();
                pieces.remove(j);
                pieces.remove(i);
                for (p, k) in [(pi, ki), (pj, kj), (g, ki + kj)] {
                    if !p.is_constant() {
                        pieces.push((p, k));
                    }
                }
                continue 'outer;
            }
        }
        break;
    }
}

impl From<Polynomial> for Ratio {
    fn from(p: Polynomial) -> Self {
        Ratio::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::poly::q;

    fn v(n: &str) -> Polynomial {
        Polynomial::named(n)
    }

    #[test]
    fn gcd_is_removed() {
        let psi = &v("A1") + &v("A2");
        let r = Ratio::new(v("A1").scale(&q(2)), psi.scale(&q(2)));
        assert_eq!(r, Ratio::new(v("A1"), psi));
    }

    #[test]
    fn symbol_powers_cancel() {
        let r = Ratio::new(&v("A1") * &v("A2"), v("A1").pow(3));
        assert_eq!(r, Ratio::new(v("A2"), v("A1").pow(2)));
        assert_eq!(r.pole_order(&Symbol::new("A1")), 2);
    }

    #[test]
    fn sums_share_denominators() {
        let psi = &v("A1") + &v("A2");
        let a = Ratio::new(v("A1"), psi.clone());
        let b = Ratio::new(v("A2"), psi.clone());
        assert!(a.add(&b).is_one());
        let c = Ratio::new(Polynomial::one(), psi.pow(2));
        let d = Ratio::new(Polynomial::one(), psi.clone());
        let s = c.add(&d);
        assert_eq!(s, Ratio::new(&psi + &Polynomial::one(), psi.pow(2)));
    }

    #[test]
    fn expanded_and_factored_denominators_agree() {
        let s1 = &v("A1") + &v("A2");
        let s2 = &v("A3") + &v("A4");
        let a = Ratio::new(Polynomial::one(), &s1 * &s2);
        let b = Ratio::from_factors(Polynomial::one(), vec![(s1.clone(), 1), (s2.clone(), 1)]);
        assert_eq!(a, b);
        let c = Ratio::new(s1.clone(), (&s1 * &s2).pow(2));
        let d = Ratio::from_factors(Polynomial::one(), vec![(s1, 1), (s2, 2)]);
        assert_eq!(c, d);
    }

    #[test]
    fn substitution_can_fail_on_vanishing_denominator() {
        let r = Ratio::new(Polynomial::one(), &v("A1") + &v("A2"));
        let a1 = Symbol::new("A1");
        assert_eq!(r.substitute(&a1, &Polynomial::zero()).unwrap(), Ratio::new(Polynomial::one(), v("A2")));
        let r2 = Ratio::new(Polynomial::one(), &v("A1") - &v("A2"));
        assert!(r2.substitute(&a1, &v("A2")).is_none());
    }
}
