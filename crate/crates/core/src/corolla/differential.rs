//! Corolla differential: `a_{h,k} -> -k eps / (2 A) d/dxi`, `b_h -> metric`.

use std::collections::BTreeMap;

use crate::expr::{Expression, IndexName, Polynomial, Ratio, Routing, Slot, TensorAtom, TensorProduct};
use crate::graph::{FeynmanGraph, HalfEdge};
use crate::parametric::{parametric_integrand, ParametricIntegrand};

use super::polynomial::{CorollaPolynomial, HalfEdgeVar, Sign};
use super::CorollaError;

/// One derivative: `d/d slot^index`.
pub type Derivative = (Slot, IndexName);

/// `coefficient * metrics * product of derivatives`, summed. Derivative lists
/// are sorted, so equal operators compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DifferentialOperator {
    summands: BTreeMap<(Vec<Derivative>, TensorProduct), Expression>,
}

/// The first-order operator for `a_{h,k}`: prefactor, slot and index.
pub fn a_operator(g: &FeynmanGraph, h: HalfEdge, k: Sign) -> (Ratio, Derivative) {
    let (succ, pred) = g.orientation(h);
    let target = if k == Sign::Plus { succ } else { pred };
    let eps = i64::from(g.incidence(target.vertex, target.edge));
    let coeff = Ratio::from_factors(
        Polynomial::integer(-k.value() * eps),
        vec![(Polynomial::integer(2), 1), (Polynomial::var(g.schwinger(target.edge)), 1)],
    );
    (coeff, (g.momentum(target.edge), g.lorentz_index(h.edge)))
}

/// The metric for `b_h`: indices of the successor and predecessor edges.
pub fn b_tensor(g: &FeynmanGraph, h: HalfEdge) -> TensorAtom {
    let (succ, pred) = g.orientation(h);
    TensorAtom::metric(g.lorentz_index(succ.edge), g.lorentz_index(pred.edge))
}

impl DifferentialOperator {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The identity operator.
    pub fn identity() -> Self {
        let mut d = Self::zero();
        d.add_summand(Vec::new(), TensorProduct::scalar(), Expression::one());
        d
    }

    pub fn add_summand(&mut self, mut derivs: Vec<Derivative>, metrics: TensorProduct, c: Expression) {
        if c.is_zero() {
            return;
        }
        derivs.sort();
        let key = (derivs, metrics);
        let sum = match self.summands.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.summands.insert(key, sum);
        }
    }

    pub fn summands(&self) -> impl Iterator<Item = (&[Derivative], &TensorProduct, &Expression)> {
        self.summands.iter().map(|((d, t), c)| (d.as_slice(), t, c))
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, t, c) in other.summands() {
            out.add_summand(d.to_vec(), t.clone(), c.clone());
        }
        out
    }

    /// `sum coefficient * metrics * d...d (f)`, with each distinct derivative
    /// list evaluated once.
    pub fn apply(&self, f: &Expression) -> Expression {
        let mut memo: BTreeMap<Vec<Derivative>, Expression> = BTreeMap::new();
        memo.insert(Vec::new(), f.clone());
        let mut out = Expression::zero();
        for (derivs, metrics, c) in self.summands() {
            let df = derivative_chain(&mut memo, derivs);
            out.add_assign(&c.mul(&Expression::tensors(metrics.clone())).mul(&df));
        }
        out
    }
}

fn derivative_chain(memo: &mut BTreeMap<Vec<Derivative>, Expression>, derivs: &[Derivative]) -> Expression {
    if let Some(x) = memo.get(derivs) {
        return x.clone();
    }
    let (last, head) = derivs.split_last().expect("empty list is memoized");
    let inner = derivative_chain(memo, head);
    let out = inner.differentiate(&last.0, &last.1);
    memo.insert(derivs.to_vec(), out.clone());
    out
}

/// Substitute every half-edge variable by its operator.
pub fn corolla_differential(g: &FeynmanGraph, c: &CorollaPolynomial) -> DifferentialOperator {
    let mut d = DifferentialOperator::zero();
    for (_, mono, coeff) in c.terms() {
        let mut scalar = Ratio::one();
        let mut derivs = Vec::new();
        let mut metrics = Vec::new();
        for v in mono {
            match *v {
                HalfEdgeVar::A(h, k) => {
                    let (r, der) = a_operator(g, h, k);
                    scalar = scalar.mul(&r);
                    derivs.push(der);
                }
                HalfEdgeVar::B(h) => metrics.push(b_tensor(g, h)),
            }
        }
        d.add_summand(derivs, TensorProduct::from_atoms(metrics), coeff.mul_ratio(&scalar));
    }
    d
}

/// Result of acting on the parametric integrand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Application {
    /// `D (P * B)` after contraction and momentum substitution.
    pub full: Expression,
    /// `D(B) / B` after substitution; free of exponentials.
    pub gauge_factor: Expression,
    /// `full - P * D(B)`: the part where derivatives hit the external
    /// propagator product.
    pub prefactor_remainder: Expression,
    /// The substituted integrand `P * B`.
    pub integrand: Expression,
}

pub fn apply_differential(
    g: &FeynmanGraph,
    d: &DifferentialOperator,
    routing: &Routing,
) -> Result<Application, CorollaError> {
    let pi = parametric_integrand(g)?;
    apply_to_integrand(&pi, d, routing)
}

pub fn apply_to_integrand(
    pi: &ParametricIntegrand,
    d: &DifferentialOperator,
    routing: &Routing,
) -> Result<Application, CorollaError> {
    let on_body = d.apply(&pi.body).contract_indices()?.substitute_momenta(routing)?;
    let on_full = d.apply(&pi.full()).contract_indices()?.substitute_momenta(routing)?;
    let body = pi.body.substitute_momenta(routing)?;
    let prefactor = pi.prefactor.substitute_momenta(routing)?;
    let exponent = body.terms().next().and_then(|(_, _, e)| e.cloned());
    let psi_squared = Ratio::from_poly(pi.psi.pow(2));
    let gauge_factor = on_body
        .factor_exp(exponent.as_ref())
        .ok_or_else(|| CorollaError::Internal("exponential does not factor out".into()))?
        .mul_ratio(&psi_squared);
    let prefactor_remainder = on_full.sub(&prefactor.mul(&on_body));
    Ok(Application { full: on_full, gauge_factor, prefactor_remainder, integrand: prefactor.mul(&body) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corolla::{corolla, corolla_summand, Variant};
    use crate::graph::parse_graph;

    const ONE_LOOP: &str = "v a\nv b\ne 1 b a\ne 2 a b\nx 3 a\nx 4 b\nrot a 3 2 1\nrot b 4 1 2\n";

    fn routing() -> Routing {
        Routing::new().with("xi1", &[]).with("xi2", &[(1, "q")]).with("xi3", &[(1, "q")]).with("xi4", &[(-1, "q")])
    }

    #[test]
    fn operator_signs() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let h = HalfEdge { vertex: 0, edge: 2 };
        let (r, (s, i)) = a_operator(&g, h, Sign::Plus);
        assert_eq!(r, Ratio::new(Polynomial::one(), Polynomial::named("A2").scale(&crate::expr::q(2))));
        assert_eq!((s.name(), i.name()), ("xi2", "mu3"));
        assert_eq!(b_tensor(&g, h), TensorAtom::metric(IndexName::new("mu2"), IndexName::new("mu1")));
    }

    #[test]
    fn zero_and_identity() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let zero = apply_differential(&g, &DifferentialOperator::zero(), &routing()).unwrap();
        assert!(zero.full.is_zero() && zero.gauge_factor.is_zero());
        let id = apply_differential(&g, &DifferentialOperator::identity(), &routing()).unwrap();
        assert!(id.gauge_factor.is_one());
        assert_eq!(id.full, id.integrand);
        assert!(corolla_differential(&g, &CorollaPolynomial::zero()).is_zero());
    }

    #[test]
    fn substitution_is_additive() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let (c0, c1) = (corolla_summand(&g, 0), corolla_summand(&g, 1));
        assert_eq!(
            corolla_differential(&g, &c0.add(&c1)),
            corolla_differential(&g, &c0).add(&corolla_differential(&g, &c1))
        );
    }

    #[test]
    fn gauge_factor_has_no_exponential() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let d = corolla_differential(&g, &corolla(&g, Variant::Plain));
        let app = apply_differential(&g, &d, &routing()).unwrap();
        assert!(!app.gauge_factor.has_exponential());
        assert!(!app.gauge_factor.is_zero());
    }
}
