//! Particle labelings admitted by a coupling-rule table.

use std::collections::{BTreeSet, HashSet};

use crate::expr::{Expression, Q};
use crate::graph::{automorphisms, symmetry_factor, Cycle, FeynmanGraph};

use super::rules::CouplingRuleTable;
use super::scalar::{scalar_sets, ScalarSets};
use super::{ElectroweakError, Particle};

/// How external edges may be labeled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExternalPolicy {
    /// Any label the vertex rules allow.
    #[default]
    Free,
    /// All external edges carry the same label.
    Uniform,
}

/// One label per edge; shrunk edges carry none.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ParticleLabeling {
    pub labels: Vec<Option<Particle>>,
}

impl ParticleLabeling {
    pub fn label(&self, e: usize) -> Option<Particle> {
        self.labels[e]
    }

    /// Per-edge strings for automorphism checks; ghost edges are primed and
    /// shrunk edges are `*`.
    pub fn key(&self, ghost_edges: &BTreeSet<usize>) -> Vec<String> {
        self.labels
            .iter()
            .enumerate()
            .map(|(e, l)| {
                let base = l.map_or("*", |p| p.name());
                if ghost_edges.contains(&e) {
                    format!("{base}'")
                } else {
                    base.to_string()
                }
            })
            .collect()
    }

    pub fn render(&self, g: &FeynmanGraph) -> String {
        let parts: Vec<String> = self
            .labels
            .iter()
            .enumerate()
            .map(|(e, l)| format!("{}:{}", g.edge(e).id, l.map_or("*", |p| p.name())))
            .collect();
        parts.join(" ")
    }
}

/// A labeling with its generating sets and symmetry bookkeeping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedLabeling {
    pub sets: ScalarSets,
    pub labeling: ParticleLabeling,
    pub graph_sym: usize,
    pub sym: usize,
    pub iso: usize,
}

impl WeightedLabeling {
    /// `sym(graph) / (sym(labeling) iso(labeling))`.
    pub fn weight(&self) -> Q {
        Q::new(self.graph_sym.into(), (self.sym * self.iso).into())
    }
}

/// Edge lists of the effective vertices: plain vertices, and one merged
/// vertex per shrink edge.
pub(crate) fn vertex_groups(g: &FeynmanGraph, s: &ScalarSets) -> Vec<Vec<usize>> {
    let mut merged = vec![false; g.vertex_count()];
    let mut out = Vec::new();
    for &e in &s.p4 {
        let mut group = Vec::new();
        for v in g.edge(e).endpoints() {
            merged[v] = true;
            let mut skipped = false;
            for &x in g.rotation(v) {
                if x == e && !skipped {
                    skipped = true;
                } else {
                    group.push(x);
                }
            }
        }
        out.push(group);
    }
    for v in (0..g.vertex_count()).filter(|&v| !merged[v]) {
        out.push(g.rotation(v).to_vec());
    }
    out
}

/// All labelings for one choice of sets: gauge labels off `p_hg`, scalar
/// labels on it, and a rule for every effective vertex.
pub fn enumerate_labelings(
    g: &FeynmanGraph,
    s: &ScalarSets,
    rules: &CouplingRuleTable,
    policy: ExternalPolicy,
) -> Vec<ParticleLabeling> {
    let n = g.edges().len();
    let groups = vertex_groups(g, s);
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, grp) in groups.iter().enumerate() {
        if let Some(&last) = grp.iter().max() {
            closing[last].push(k);
        }
    }
    let domains: Vec<Vec<Option<Particle>>> = (0..n)
        .map(|e| {
            if s.p4.contains(&e) {
                vec![None]
            } else if s.p_hg.contains(&e) {
                Particle::SCALAR.iter().map(|&p| Some(p)).collect()
            } else {
                Particle::GAUGE.iter().map(|&p| Some(p)).collect()
            }
        })
        .collect();
    let externals = g.external_edges();
    let mut out = Vec::new();
    let mut current = vec![None; n];
    search(0, &mut current, &domains, &groups, &closing, rules, policy, &externals, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn search(
    e: usize,
    current: &mut Vec<Option<Particle>>,
    domains: &[Vec<Option<Particle>>],
    groups: &[Vec<usize>],
    closing: &[Vec<usize>],
    rules: &CouplingRuleTable,
    policy: ExternalPolicy,
    externals: &[usize],
    out: &mut Vec<ParticleLabeling>,
) {
    if e == current.len() {
        out.push(ParticleLabeling { labels: current.clone() });
        return;
    }
    for &choice in &domains[e] {
        current[e] = choice;
        if policy == ExternalPolicy::Uniform && externals.contains(&e) && current[externals[0]] != choice {
            continue;
        }
        let ok = closing[e].iter().all(|&k| {
            let labels: Option<Vec<Particle>> = groups[k].iter().map(|&x| current[x]).collect();
            labels.is_some_and(|l| rules.coupling(&l).is_some())
        });
        if ok {
            search(e + 1, current, domains, groups, closing, rules, policy, externals, out);
        }
    }
    current[e] = None;
}

/// Product of the vertex couplings over all effective vertices.
pub fn coupling_product(
    g: &FeynmanGraph,
    l: &ParticleLabeling,
    s: &ScalarSets,
    rules: &CouplingRuleTable,
) -> Result<Expression, ElectroweakError> {
    let mut out = Expression::one();
    for grp in vertex_groups(g, s) {
        let labels: Option<Vec<Particle>> = grp.iter().map(|&x| l.label(x)).collect();
        let labels = labels
            .ok_or_else(|| ElectroweakError::MissingRule { valence: grp.len(), labels: "an unlabeled edge".into() })?;
        out = out.mul(&rules.coupling_expression(&labels)?);
    }
    Ok(out)
}

/// Every labeling for the ghost cycles `ghosts`, over all scalar and shrink
/// sets, with `iso` counted inside this family.
pub fn labeling_family(
    g: &FeynmanGraph,
    ghosts: &[Cycle],
    rules: &CouplingRuleTable,
    policy: ExternalPolicy,
) -> Vec<WeightedLabeling> {
    let graph_sym = symmetry_factor(g, None);
    let ghost_edges: BTreeSet<usize> = ghosts.iter().flat_map(|c| c.edges.iter().copied()).collect();
    let mut family = Vec::new();
    for s in scalar_sets(g, ghosts) {
        for l in enumerate_labelings(g, &s, rules, policy) {
            family.push((s.clone(), l));
        }
    }
    let keys: Vec<Vec<String>> = family.iter().map(|(_, l)| l.key(&ghost_edges)).collect();
    let present: HashSet<&Vec<String>> = keys.iter().collect();
    let autos = automorphisms(g, None);
    family
        .into_iter()
        .zip(&keys)
        .map(|((sets, labeling), key)| {
            let images: BTreeSet<Vec<String>> = autos
                .iter()
                .map(|a| {
                    let mut img = key.clone();
                    for (e, &t) in a.edges.iter().enumerate() {
                        img[t] = key[e].clone();
                    }
                    img
                })
                .collect();
            let iso = images.iter().filter(|k| present.contains(k)).count();
            let sym = symmetry_factor(g, Some(key));
            WeightedLabeling { sets, labeling, graph_sym, sym, iso }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::electroweak::parse_rules;
    use crate::expr::render::render;
    use crate::expr::Format;
    use crate::graph::fixtures::one_loop;

    const RULES: &str = "rule 3 W,W,Z = g*cos(tW)\nrule 3 W,W,A = e\nrule 3 h,W,W = g*mW\n\
                         rule 3 h,Z,Z = g*mZ/cos(tW)\nrule 3 phi,W,A = e*mW\nrule 3 phi,W,Z = g*mZ*sin(tW)^2\n";

    fn sets_with(g: &FeynmanGraph, p: &[&str]) -> ScalarSets {
        let p: BTreeSet<usize> = p.iter().map(|id| g.edge_index(id).unwrap()).collect();
        scalar_sets(g, &[]).into_iter().find(|s| s.p_hg == p && s.p4.is_empty()).unwrap()
    }

    #[test]
    fn scalar_edge_one_gives_six_couplings() {
        let g = one_loop();
        let rules = parse_rules(RULES).unwrap();
        let s = sets_with(&g, &["1"]);
        let ls = enumerate_labelings(&g, &s, &rules, ExternalPolicy::Uniform);
        let mut c: Vec<String> =
            ls.iter().map(|l| render(&coupling_product(&g, l, &s, &rules).unwrap(), Format::Text)).collect();
        c.sort();
        assert_eq!(c, ["e^2 mW^2", "e^2 mW^2", "g^2 mW^2", "g^2 mZ^2 sW^4", "g^2 mZ^2 sW^4", "g^2 mZ^2/cW^2"]);
        assert_eq!(enumerate_labelings(&g, &s, &rules, ExternalPolicy::Free).len(), 8);
    }

    #[test]
    fn gauge_only_family_matches_two_factors() {
        let g = one_loop();
        let rules = parse_rules(RULES).unwrap().restricted(|p| !p.is_scalar());
        let fam = labeling_family(&g, &[], &rules, ExternalPolicy::Free);
        assert_eq!(fam.len(), 8);
        assert!(fam.iter().all(|w| w.weight() == Q::from_integer(1.into())));
    }
}
