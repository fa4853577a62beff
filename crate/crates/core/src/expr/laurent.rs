//! Laurent expansion in a single Schwinger parameter around zero.
//!
//! A term `c(x) * T * exp(Q(x))` is written as `x^-k g(x) exp(Q(0)) exp(E(x))`
//! with `g` and `E` analytic at zero, `E(0) = 0`; only the first `k`
//! series coefficients are ever needed.

use std::collections::BTreeSet;

use super::expression::Expression;
use super::poly::{q, Polynomial};
use super::quadric::{PolyTensor, Quadric};
use super::ratio::Ratio;
use super::symbol::Symbol;
use super::tensor::TensorProduct;
use super::ExprError;

/// Highest pole order accepted in one parameter.
pub const MAX_POLE_ORDER: u32 = 4;

struct Expansion {
    order: u32,
    /// `coeffs[n]` multiplies `x^(n - order)`; exponential-free.
    coeffs: Vec<Expression>,
    tensors: TensorProduct,
    exp_at_zero: Option<Quadric>,
}

/// Residue at `x = 0`: the coefficient of `x^-1`.
pub fn residue(expr: &Expression, x: &Symbol) -> Result<Expression, ExprError> {
    let mut out = Expression::zero();
    for (c, t, e) in expr.terms() {
        let Some(exp) = expand(c, t, e, x)? else { continue };
        let a = &exp.coeffs[exp.order as usize - 1];
        out.add_assign(&a.mul(&Expression::term(Ratio::one(), exp.tensors.clone(), exp.exp_at_zero.clone())));
    }
    Ok(out)
}

/// The expression with its principal part at `x = 0` removed.
pub fn regular_part(expr: &Expression, x: &Symbol) -> Result<Expression, ExprError> {
    let mut out = expr.clone();
    for (c, t, e) in expr.terms() {
        let Some(exp) = expand(c, t, e, x)? else { continue };
        let tail = Expression::term(Ratio::one(), exp.tensors.clone(), exp.exp_at_zero.clone());
        for (n, a) in exp.coeffs.iter().enumerate() {
            let pole = Ratio::from_factors(Polynomial::one(), vec![(Polynomial::var(x.clone()), exp.order - n as u32)]);
            out = out.sub(&a.mul_ratio(&pole).mul(&tail));
        }
    }
    Ok(out)
}

/// Iterated residue over `symbols` and iterated regular part over the same set.
pub fn laurent_res_reg(expr: &Expression, symbols: &BTreeSet<Symbol>) -> Result<(Expression, Expression), ExprError> {
    let mut res = expr.clone();
    let mut reg = expr.clone();
    for s in symbols {
        res = residue(&res, s)?;
        reg = regular_part(&reg, s)?;
    }
    Ok((res, reg))
}

/// `None` when the term has no pole in `x`.
fn expand(c: &Ratio, t: &TensorProduct, e: Option<&Quadric>, x: &Symbol) -> Result<Option<Expansion>, ExprError> {
    let order = c.pole_order(x);
    if order == 0 {
        return Ok(None);
    }
    if order > MAX_POLE_ORDER {
        return Err(ExprError::PoleOrderExceeded { symbol: x.to_string(), order, cap: MAX_POLE_ORDER });
    }
    let n = order as usize;
    let xvar = Polynomial::var(x.clone());
    let rest: Polynomial = c
        .denominator_factors()
        .iter()
        .filter(|(f, _)| **f != xvar)
        .fold(Polynomial::one(), |acc, (f, k)| &acc * &f.pow(*k));
    let g = quotient_series(&c.numerator().coefficients_in(x), &rest, x, n)?;

    let (exp_at_zero, exp_series) = match e {
        Some(quad) if quad.contains_symbol(x) => {
            let den = quad.ratio_den();
            let d0 = den.substitute(x, &Polynomial::zero());
            if d0.is_zero() {
                return Err(ExprError::UnsupportedExpansion(format!("exponential argument has a pole at {} = 0", x)));
            }
            let num_coeffs = poly_tensor_coefficients(quad.ratio_num(), x, n);
            let aff_coeffs = poly_tensor_coefficients(quad.affine(), x, n);
            let inv = inverse_series(den, x, n)?;
            // E_m = -(N/D)_m - L_m
            let mut arg = Vec::with_capacity(n);
            for m in 0..n {
                let mut em = Expression::from_poly_tensor(&aff_coeffs[m]).neg();
                for j in 0..=m {
                    if num_coeffs[j].is_zero() {
                        continue;
                    }
                    em = em.sub(&Expression::from_poly_tensor(&num_coeffs[j]).mul_ratio(&inv[m - j]));
                }
                arg.push(em);
            }
            let q0 = Quadric::new(num_coeffs[0].clone(), d0, aff_coeffs[0].clone());
            (q0, exp_series(&arg))
        }
        other => {
            let mut y = vec![Expression::zero(); n];
            y[0] = Expression::one();
            (other.cloned(), y)
        }
    };

    let mut coeffs = Vec::with_capacity(n);
    for m in 0..n {
        let mut a = Expression::zero();
        for i in 0..=m {
            if g[i].is_zero() || exp_series[m - i].is_zero() {
                continue;
            }
            a.add_assign(&exp_series[m - i].mul_ratio(&g[i]));
        }
        coeffs.push(a);
    }
    Ok(Some(Expansion { order, coeffs, tensors: t.clone(), exp_at_zero }))
}

/// Taylor coefficients of `exp(E)` from those of `E` (whose constant term is ignored).
fn exp_series(arg: &[Expression]) -> Vec<Expression> {
    let n = arg.len();
    let mut y = vec![Expression::zero(); n];
    y[0] = Expression::one();
    for m in 1..n {
        let mut acc = Expression::zero();
        for j in 1..=m {
            if arg[j].is_zero() || y[m - j].is_zero() {
                continue;
            }
            acc.add_assign(&arg[j].mul(&y[m - j]).scale(&q(j as i64)));
        }
        y[m] = acc.scale(&q(m as i64).recip());
    }
    y
}

/// First `n` Taylor coefficients of `1/den` in `x`.
fn inverse_series(den: &Polynomial, x: &Symbol, n: usize) -> Result<Vec<Ratio>, ExprError> {
    let d = den.coefficients_in(x);
    if d[0].is_zero() {
        return Err(ExprError::UnsupportedExpansion(format!("denominator vanishes at {} = 0", x)));
    }
    let d0 = Ratio::new(Polynomial::one(), d[0].clone());
    let mut inv: Vec<Ratio> = vec![d0.clone()];
    for m in 1..n {
        let mut acc = Ratio::zero();
        for j in 1..=m.min(d.len() - 1) {
            if d[j].is_zero() {
                continue;
            }
            acc = acc.add(&inv[m - j].mul_poly(&d[j]));
        }
        inv.push(acc.mul(&d0).neg());
    }
    Ok(inv)
}

/// First `n` Taylor coefficients of `sum_j num[j] x^j / den`.
fn quotient_series(num: &[Polynomial], den: &Polynomial, x: &Symbol, n: usize) -> Result<Vec<Ratio>, ExprError> {
    let inv = inverse_series(den, x, n)?;
    let mut out = Vec::with_capacity(n);
    for m in 0..n {
        let mut acc = Ratio::zero();
        for j in 0..=m.min(num.len().saturating_sub(1)) {
            if num[j].is_zero() {
                continue;
            }
            acc = acc.add(&inv[m - j].mul_poly(&num[j]));
        }
        out.push(acc);
    }
    Ok(out)
}

fn poly_tensor_coefficients(p: &PolyTensor, x: &Symbol, n: usize) -> Vec<PolyTensor> {
    let mut out = vec![PolyTensor::zero(); n];
    for (t, c) in p.terms() {
        for (j, cj) in c.coefficients_in(x).into_iter().enumerate().take(n) {
            out[j].add_term(t.clone(), cj);
        }
    }
    out
}
