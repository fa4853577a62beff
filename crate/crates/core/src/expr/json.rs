//! JSON form of expressions.
//!
//! ```json
//! {"terms":[{"num":[{"coeff":"2","powers":[["A1",1]]}],
//!            "den":[{"factor":[{"coeff":"1","powers":[["A1",1]]},
//!                              {"coeff":"1","powers":[["A2",1]]}],"power":1}],
//!            "tensors":[{"metric":["mu3","mu4"]}],
//!            "exp":null}]}
//! ```
//! Coefficients are exact rationals written as decimal strings (`"-3"`, `"5/2"`).
//! Tensor atoms are `{"metric":[i,j]}`, `{"mom":[slot,i]}`, `{"dot":[s,t]}`
//! or `{"token":"..."}`. An exponential is
//! `{"num":[{"tensors":[..],"coeff":poly}],"den":poly,"affine":[..]}`
//! and stands for `exp(-num/den - affine)`.

use serde::{Deserialize, Serialize};

use super::expression::Expression;
use super::poly::{Monomial, Polynomial, Q};
use super::quadric::{PolyTensor, Quadric};
use super::ratio::Ratio;
use super::symbol::{IndexName, Slot, Symbol};
use super::tensor::{TensorAtom, TensorProduct};
use super::ExprError;

#[derive(Serialize, Deserialize)]
struct JsonExpression {
    terms: Vec<JsonTerm>,
}

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    num: Vec<JsonMonomial>,
    den: Vec<JsonFactor>,
    tensors: Vec<JsonAtom>,
    exp: Option<JsonExp>,
}

#[derive(Serialize, Deserialize)]
struct JsonMonomial {
    coeff: String,
    powers: Vec<(String, u32)>,
}

#[derive(Serialize, Deserialize)]
struct JsonFactor {
    factor: Vec<JsonMonomial>,
    power: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum JsonAtom {
    Metric(String, String),
    Mom(String, String),
    Dot(String, String),
    Token(String),
}

#[derive(Serialize, Deserialize)]
struct JsonTensorCoeff {
    tensors: Vec<JsonAtom>,
    coeff: Vec<JsonMonomial>,
}

#[derive(Serialize, Deserialize)]
struct JsonExp {
    num: Vec<JsonTensorCoeff>,
    den: Vec<JsonMonomial>,
    affine: Vec<JsonTensorCoeff>,
}

fn poly_out(p: &Polynomial) -> Vec<JsonMonomial> {
    p.terms()
        .map(|(m, c)| JsonMonomial {
            coeff: c.to_string(),
            powers: m.factors().iter().map(|(s, e)| (s.name().to_string(), *e)).collect(),
        })
        .collect()
}

fn atoms_out(t: &TensorProduct) -> Vec<JsonAtom> {
    t.atoms()
        .iter()
        .map(|a| match a {
            TensorAtom::Metric(i, j) => JsonAtom::Metric(i.to_string(), j.to_string()),
            TensorAtom::Mom(s, i) => JsonAtom::Mom(s.to_string(), i.to_string()),
            TensorAtom::Dot(s, t) => JsonAtom::Dot(s.to_string(), t.to_string()),
            TensorAtom::Token(x) => JsonAtom::Token(x.clone()),
        })
        .collect()
}

fn poly_tensor_out(p: &PolyTensor) -> Vec<JsonTensorCoeff> {
    p.terms().map(|(t, c)| JsonTensorCoeff { tensors: atoms_out(t), coeff: poly_out(c) }).collect()
}

pub fn to_json(expr: &Expression) -> String {
    let doc = JsonExpression {
        terms: expr
            .terms()
            .map(|(c, t, e)| JsonTerm {
                num: poly_out(c.numerator()),
                den: c
                    .denominator_factors()
                    .iter()
                    .map(|(f, k)| JsonFactor { factor: poly_out(f), power: *k })
                    .collect(),
                tensors: atoms_out(t),
                exp: e.map(|q| JsonExp {
                    num: poly_tensor_out(q.ratio_num()),
                    den: poly_out(q.ratio_den()),
                    affine: poly_tensor_out(q.affine()),
                }),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("serializable")
}

fn parse_q(s: &str) -> Result<Q, ExprError> {
    s.trim().parse::<Q>().map_err(|_| ExprError::Parse(format!("bad rational coefficient `{s}`")))
}

fn poly_in(terms: &[JsonMonomial]) -> Result<Polynomial, ExprError> {
    let mut p = Polynomial::zero();
    for t in terms {
        let m = Monomial::from_pairs(t.powers.iter().map(|(s, e)| (Symbol::new(s), *e)).collect());
        p.add_term(m, parse_q(&t.coeff)?);
    }
    Ok(p)
}

fn atoms_in(atoms: &[JsonAtom]) -> TensorProduct {
    TensorProduct::from_atoms(
        atoms
            .iter()
            .map(|a| match a {
                JsonAtom::Metric(i, j) => TensorAtom::metric(IndexName::new(i), IndexName::new(j)),
                JsonAtom::Mom(s, i) => TensorAtom::Mom(Slot::new(s), IndexName::new(i)),
                JsonAtom::Dot(s, t) => TensorAtom::dot(Slot::new(s), Slot::new(t)),
                JsonAtom::Token(x) => TensorAtom::Token(x.clone()),
            })
            .collect(),
    )
}

fn poly_tensor_in(items: &[JsonTensorCoeff]) -> Result<PolyTensor, ExprError> {
    let mut p = PolyTensor::zero();
    for it in items {
        p.add_term(atoms_in(&it.tensors), poly_in(&it.coeff)?);
    }
    Ok(p)
}

pub fn from_json(text: &str) -> Result<Expression, ExprError> {
    let doc: JsonExpression = serde_json::from_str(text).map_err(|e| ExprError::Parse(format!("json: {e}")))?;
    let mut out = Expression::zero();
    for t in &doc.terms {
        let num = poly_in(&t.num)?;
        let mut factors = Vec::new();
        for f in &t.den {
            let p = poly_in(&f.factor)?;
            if p.is_zero() {
                return Err(ExprError::Parse("zero denominator factor".into()));
            }
            factors.push((p, f.power));
        }
        let exp = match &t.exp {
            None => None,
            Some(e) => {
                let den = poly_in(&e.den)?;
                if den.is_zero() {
                    return Err(ExprError::Parse("zero exponential denominator".into()));
                }
                Quadric::new(poly_tensor_in(&e.num)?, den, poly_tensor_in(&e.affine)?)
            }
        };
        out.add_term(Ratio::from_factors(num, factors), atoms_in(&t.tensors), exp);
    }
    Ok(out)
}
