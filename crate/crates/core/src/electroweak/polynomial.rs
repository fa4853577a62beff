//! The electroweak Corolla polynomial and its action on the integrand.

use crate::corolla::{
    corolla, corolla_differential, ghost_factor, vertex_factor, CorollaPolynomial, HalfEdgeVar, Sign, Variant,
};
use crate::expr::{Expression, PolyTensor, Polynomial, Quadric, Ratio, Routing, TensorAtom, TensorProduct};
use crate::graph::{disjoint_cycle_tuples, Cycle, FeynmanGraph, GraphError};
use crate::parametric::parametric_integrand;

use super::labeling::{coupling_product, labeling_family, ExternalPolicy, ParticleLabeling};
use super::rules::CouplingRuleTable;
use super::scalar::ScalarSets;
use super::ElectroweakError;

/// Argument of `exp(sum_{shrunk} A xi^2 - sum_{other} A m_L^2)`.
pub fn mass_exponent(
    g: &FeynmanGraph,
    s: &ScalarSets,
    l: &ParticleLabeling,
    rules: &CouplingRuleTable,
) -> Option<Quadric> {
    let mut affine = PolyTensor::zero();
    for e in 0..g.edges().len() {
        let a = Polynomial::var(g.schwinger(e));
        if s.p4.contains(&e) {
            let xi = g.momentum(e);
            affine.add_term(TensorProduct::atom(TensorAtom::dot(xi.clone(), xi)), -a);
        } else if let Some(m) = l.label(e).and_then(|p| rules.mass(p)) {
            affine.add_term(TensorProduct::scalar(), &a * &Polynomial::var(m.clone()).pow(2));
        }
    }
    Quadric::affine_only(affine)
}

/// Half-edge structure shared by every labeling of `s`.
fn structure(g: &FeynmanGraph, s: &ScalarSets) -> CorollaPolynomial {
    let mut out = CorollaPolynomial::one();
    for c in &s.ghosts {
        out = out.mul(&ghost_factor(g, c));
    }
    for &e in &s.p4 {
        match s.h2_of(e) {
            Some(&[h1, h2]) => {
                let mut b = CorollaPolynomial::zero();
                b.add_term(0, vec![HalfEdgeVar::B(h1), HalfEdgeVar::B(h2)], Expression::one());
                out = out.mul(&b);
            }
            None => return CorollaPolynomial::zero(),
        }
    }
    let mut covered = s.ghost_vertices();
    covered.extend(s.scalar_vertices(g));
    for v in (0..g.vertex_count()).filter(|v| !covered.contains(v)) {
        out = out.mul(&vertex_factor(g, v));
    }
    for h in g.half_edges() {
        let (succ, pred) = g.orientation(h);
        let (open, open_succ, open_pred) = (s.is_open_scalar(h), s.is_open_scalar(succ), s.is_open_scalar(pred));
        if open && !open_succ && !open_pred {
            out = out.mul(&CorollaPolynomial::var(HalfEdgeVar::B(h)));
        }
        if !open && open_succ && open_pred {
            let sum = CorollaPolynomial::var(HalfEdgeVar::A(h, Sign::Plus))
                .add(&CorollaPolynomial::var(HalfEdgeVar::A(h, Sign::Minus)));
            out = out.mul(&sum);
        }
    }
    out
}

fn summand_for_tuple(
    g: &FeynmanGraph,
    ghosts: &[Cycle],
    rules: &CouplingRuleTable,
    policy: ExternalPolicy,
) -> Result<CorollaPolynomial, ElectroweakError> {
    let family = labeling_family(g, ghosts, rules, policy);
    let mut out = CorollaPolynomial::zero();
    let mut k = 0;
    while k < family.len() {
        let s = &family[k].sets;
        let mut coeff = Expression::zero();
        while k < family.len() && family[k].sets == *s {
            let w = &family[k];
            let c = coupling_product(g, &w.labeling, s, rules)?;
            let e = Expression::term(
                Ratio::constant(w.weight()),
                TensorProduct::scalar(),
                mass_exponent(g, s, &w.labeling, rules),
            );
            coeff.add_assign(&c.mul(&e));
            k += 1;
        }
        if !coeff.is_zero() {
            out = out.add(&structure(g, s).scale(&coeff));
        }
    }
    Ok(out)
}

/// `C^i_EW`, summed over disjoint ghost-cycle tuples of size `i`.
pub fn corolla_ew_summand(
    g: &FeynmanGraph,
    i: usize,
    rules: &CouplingRuleTable,
    policy: ExternalPolicy,
) -> Result<CorollaPolynomial, ElectroweakError> {
    let mut out = CorollaPolynomial::zero();
    for tuple in disjoint_cycle_tuples(g, i) {
        out = out.add(&summand_for_tuple(g, &tuple, rules, policy)?);
    }
    Ok(out)
}

/// `sum_i (-1)^i C^i_EW` up to the largest disjoint cycle tuple.
pub fn corolla_ew(
    g: &FeynmanGraph,
    rules: &CouplingRuleTable,
    policy: ExternalPolicy,
) -> Result<CorollaPolynomial, ElectroweakError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected.into());
    }
    let mut out = CorollaPolynomial::zero();
    let mut i = 0;
    while i == 0 || !disjoint_cycle_tuples(g, i).is_empty() {
        let c = corolla_ew_summand(g, i, rules, policy)?;
        out = if i % 2 == 0 { out.add(&c) } else { out.sub(&c) };
        i += 1;
    }
    Ok(out)
}

/// `(D_QCD + D_EW) I`, contracted and with momenta substituted.
pub fn apply_ew(
    g: &FeynmanGraph,
    rules: &CouplingRuleTable,
    policy: ExternalPolicy,
    routing: &Routing,
) -> Result<Expression, ElectroweakError> {
    let c_ew = corolla_ew(g, rules, policy)?;
    let pi = parametric_integrand(g)?;
    let d = corolla_differential(g, &corolla(g, Variant::Qcd)).add(&corolla_differential(g, &c_ew));
    Ok(d.apply(&pi.full()).contract_indices()?.substitute_momenta(routing)?)
}
