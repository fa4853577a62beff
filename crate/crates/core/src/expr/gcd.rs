//! Multivariate gcd over the rationals (recursive primitive remainder
//! sequences) and squarefree decomposition.

use super::poly::{Monomial, Polynomial};
use super::symbol::Symbol;

/// Monic-free normalized gcd: primitive, integral, positive leading coefficient.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if a == b {
        return a.primitive();
    }
    // Common monomial factor first: cheap and keeps the PRS small.
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a0 = a.div_monomial(&ma).expect("monomial content divides");
    let b0 = b.div_monomial(&mb).expect("monomial content divides");
    let core = gcd_no_monomial(&a0, &b0);
    core.mul_monomial(&mg).primitive()
}

fn gcd_no_monomial(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }
    if let Some(d) = trial_divisor(a, b) {
        return d;
    }
    let sa = a.symbols();
    let sb = b.symbols();
    let x = match sa.union(&sb).next() {
        Some(x) => x.clone(),
        None => return Polynomial::one(),
    };
    if !a.contains(&x) {
        return gcd_no_monomial(a, &content_in(b, &x));
    }
    if !b.contains(&x) {
        return gcd_no_monomial(&content_in(a, &x), b);
    }
    let ca = content_in(a, &x);
    let cb = content_in(b, &x);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_no_monomial(&ca, &cb);
    let g = primitive_prs(pa, pb, &x);
    (&c * &g).primitive()
}

/// Shortcut when one argument divides the other.
fn trial_divisor(a: &Polynomial, b: &Polynomial) -> Option<Polynomial> {
    if a.len() <= b.len() && b.div_exact(a).is_some() {
        return Some(a.primitive());
    }
    if b.len() < a.len() && a.div_exact(b).is_some() {
        return Some(b.primitive());
    }
    None
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x`.
pub fn content_in(p: &Polynomial, x: &Symbol) -> Polynomial {
    let mut acc = Polynomial::zero();
    for c in p.coefficients_in(x) {
        if c.is_zero() {
            continue;
        }
        acc = if acc.is_zero() { c.primitive() } else { gcd(&acc, &c) };
        if acc.is_constant() {
            return Polynomial::one();
        }
    }
    if acc.is_zero() {
        Polynomial::one()
    } else {
        acc
    }
}

fn primitive_part_in(p: &Polynomial, x: &Symbol) -> Polynomial {
    let c = content_in(p, x);
    p.div_exact(&c).expect("content divides").primitive()
}

fn leading_coefficient_in(p: &Polynomial, x: &Symbol) -> Polynomial {
    p.coefficients_in(x).pop().unwrap_or_else(Polynomial::zero)
}

fn pseudo_remainder(f: &Polynomial, g: &Polynomial, x: &Symbol) -> Polynomial {
    let dg = g.degree_in(x);
    let lg = leading_coefficient_in(g, x);
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(x) >= dg {
        let dr = r.degree_in(x);
        let lr = leading_coefficient_in(&r, x);
        let shift = Monomial::from_pairs(vec![(x.clone(), dr - dg)]);
        r = &(&lg * &r) - &(&lr * &g.mul_monomial(&shift));
    }
    r
}

fn primitive_prs(a: Polynomial, b: Polynomial, x: &Symbol) -> Polynomial {
    let (mut f, mut g) = if a.degree_in(x) >= b.degree_in(x) { (a, b) } else { (b, a) };
    loop {
        let r = pseudo_remainder(&f, &g, x);
        if r.is_zero() {
            return primitive_part_in(&g, x);
        }
        if r.degree_in(x) == 0 {
            return Polynomial::one();
        }
        f = g;
        g = primitive_part_in(&r, x);
    }
}

/// Squarefree decomposition `p = c * prod_k s_k^k` of a polynomial without
/// monomial content; returns `(s_k, k)` for non-constant `s_k`, each primitive.
pub fn squarefree(p: &Polynomial) -> Vec<(Polynomial, u32)> {
    let mut out: Vec<(Polynomial, u32)> = Vec::new();
    squarefree_into(&p.primitive(), &mut out);
    // merge equal multiplicities
    out.sort_by_key(|a| a.1);
    let mut merged: Vec<(Polynomial, u32)> = Vec::new();
    for (f, k) in out {
        match merged.last_mut() {
            Some(last) if last.1 == k => last.0 = (&last.0 * &f).primitive(),
            _ => merged.push((f, k)),
        }
    }
    merged
}

fn squarefree_into(p: &Polynomial, out: &mut Vec<(Polynomial, u32)>) {
    if p.is_constant() {
        return;
    }
    let x = p.symbols().into_iter().next().expect("non-constant");
    let cont = content_in(p, &x);
    squarefree_into(&cont, out);
    let f = p.div_exact(&cont).expect("content divides").primitive();
    if f.is_constant() {
        return;
    }
    // Yun's algorithm in x; valid since f is primitive in x.
    let df = f.derivative(&x);
    let mut a = gcd(&f, &df);
    let mut b = f.div_exact(&a).expect("gcd divides");
    let mut c = df.div_exact(&a).expect("gcd divides");
    let mut d = &c - &b.derivative(&x);
    let mut k = 1;
    while !b.is_constant() {
        a = gcd(&b, &d);
        if !a.is_constant() {
            out.push((a.primitive(), k));
        }
        let b_next = b.div_exact(&a).expect("gcd divides");
        c = d.div_exact(&a).expect("gcd divides");
        d = &c - &b_next.derivative(&x);
        b = b_next;
        k += 1;
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
    fn gcd_of_common_factor() {
        let psi = &v("A1") + &v("A2");
        let a = &(&psi * &psi) * &v("A3");
        let b = &psi * &(&v("A1") - &v("A3"));
        assert_eq!(gcd(&a, &b), psi);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = &v("A1") + &v("A2");
        let b = &v("A1") + &v("A3");
        assert!(gcd(&a, &b).is_one());
    }

    #[test]
    fn gcd_with_scaled_inputs() {
        let g = &(&v("x") * &v("y")) + &Polynomial::integer(3);
        let a = (&g * &(&v("x") + &v("z"))).scale(&q(6));
        let b = (&g * &(&v("y") - &v("z"))).scale(&q(-4));
        assert_eq!(gcd(&a, &b), g);
    }

    #[test]
    fn squarefree_splits_powers() {
        let s1 = &v("A1") + &v("A2");
        let s2 = &v("A1") + &v("A3");
        let p = &s1.pow(2) * &s2.pow(3);
        let parts = squarefree(&p);
        assert_eq!(parts, vec![(s1, 2), (s2, 3)]);
    }

    #[test]
    fn squarefree_merges_equal_multiplicity() {
        let s1 = &v("A1") + &v("A2");
        let s2 = &v("A3") + &v("A4");
        let p = (&s1 * &s2).pow(2);
        let parts = squarefree(&p);
        assert_eq!(parts, vec![((&s1 * &s2).primitive(), 2)]);
    }
}
