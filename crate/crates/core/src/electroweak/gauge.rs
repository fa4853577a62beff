//! W/Z/A labelings from 2-factors and the J factor.

use std::collections::BTreeSet;

use crate::corolla::qcd_prefactor;
use crate::expr::{Expression, PolyTensor, Polynomial, Quadric, Ratio, Symbol, TensorProduct, Q};
use crate::graph::{iso_count, symmetry_factor, two_factors, EdgeSet, FeynmanGraph, GraphError, TwoFactor};

use super::scalar::subsets;
use super::Particle;

/// W edges form a 2-factor; Z and A split its complement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaugeLabeling {
    pub w_factor: TwoFactor,
    pub z_set: EdgeSet,
    pub a_set: EdgeSet,
    pub sym: usize,
    pub iso: usize,
}

impl GaugeLabeling {
    pub fn label(&self, e: usize) -> Particle {
        if self.w_factor.edges.contains(&e) {
            Particle::W
        } else if self.z_set.contains(&e) {
            Particle::Z
        } else {
            Particle::A
        }
    }

    pub fn labels(&self, g: &FeynmanGraph) -> Vec<Particle> {
        (0..g.edges().len()).map(|e| self.label(e)).collect()
    }

    /// Vertices touched by a Z edge.
    pub fn z_vertices(&self, g: &FeynmanGraph) -> BTreeSet<usize> {
        g.vertices_of(&self.z_set)
    }
}

fn names(labels: &[Particle]) -> Vec<String> {
    labels.iter().map(|p| p.name().to_string()).collect()
}

pub fn gauge_boson_labelings(g: &FeynmanGraph) -> Vec<GaugeLabeling> {
    let mut out = Vec::new();
    for f in two_factors(g) {
        let rest: Vec<usize> = (0..g.edges().len()).filter(|e| !f.edges.contains(e)).collect();
        for z in subsets(&rest) {
            let a = rest.iter().copied().filter(|e| !z.contains(e)).collect();
            out.push(GaugeLabeling { w_factor: f.clone(), z_set: z, a_set: a, sym: 0, iso: 0 });
        }
    }
    let family: Vec<Vec<String>> = out.iter().map(|l| names(&l.labels(g))).collect();
    for (k, l) in out.iter_mut().enumerate() {
        l.sym = symmetry_factor(g, Some(&family[k]));
        l.iso = iso_count(g, &family, k);
    }
    out
}

fn mass_term(g: &FeynmanGraph, edges: &EdgeSet, mass: &str) -> Polynomial {
    let m2 = Polynomial::named(mass).pow(2);
    let mut sum = Polynomial::zero();
    for &e in edges {
        sum = &sum + &Polynomial::var(g.schwinger(e));
    }
    &sum * &m2
}

/// `i^{|V|+|E|} (g cW)^{|Z vertices|} e^{|other vertices|} exp(-masses)`.
fn summand(g: &FeynmanGraph, l: &GaugeLabeling) -> Expression {
    let nz = l.z_vertices(g).len() as u32;
    let nv = g.vertex_count() as u32;
    let coupling = Polynomial::var(Symbol::imaginary_unit()).pow(nv + g.edges().len() as u32);
    let coupling = &coupling * &(&Polynomial::named("g") * &Polynomial::named("cW")).pow(nz);
    let coupling = &coupling * &Polynomial::named("e").pow(nv - nz);
    let masses = &mass_term(g, &l.w_factor.edges, "mW") + &mass_term(g, &l.z_set, "mZ");
    Expression::term(
        Ratio::from_poly(coupling),
        TensorProduct::scalar(),
        Quadric::affine_only(PolyTensor::scalar(masses)),
    )
}

fn connected(g: &FeynmanGraph) -> Result<(), GraphError> {
    if g.is_connected() {
        Ok(())
    } else {
        Err(GraphError::Disconnected)
    }
}

/// QCD term plus one summand per gauge labeling, without symmetry ratios.
pub fn j_factor(g: &FeynmanGraph) -> Result<Expression, GraphError> {
    connected(g)?;
    let mut j = qcd_prefactor(g);
    for l in gauge_boson_labelings(g) {
        j.add_assign(&summand(g, &l));
    }
    Ok(j)
}

/// As [`j_factor`], each summand weighted by `sym(graph) / (sym iso)`.
pub fn j_factor_with_symmetry(g: &FeynmanGraph) -> Result<Expression, GraphError> {
    connected(g)?;
    let sym = symmetry_factor(g, None);
    let mut j = qcd_prefactor(g);
    for l in gauge_boson_labelings(g) {
        let w = Q::new(sym.into(), (l.sym * l.iso).into());
        j.add_assign(&summand(g, &l).scale(&w));
    }
    Ok(j)
}
