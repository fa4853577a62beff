//! Scalar edge sets and the edges that may be shrunk to 4-valent vertices.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Cycle, EdgeSet, FeynmanGraph, HalfEdge};

/// One choice of ghost cycles, scalar edges `p_hg`, and shrink edges `p4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSets {
    pub ghosts: Vec<Cycle>,
    pub p_hg: EdgeSet,
    pub p4: EdgeSet,
    /// For each internal scalar edge with exactly two non-scalar neighbouring
    /// half-edges, those two half-edges.
    pub h2: BTreeMap<usize, [HalfEdge; 2]>,
}

impl ScalarSets {
    pub fn ghost_edges(&self) -> EdgeSet {
        self.ghosts.iter().flat_map(|c| c.edges.iter().copied()).collect()
    }

    pub fn ghost_vertices(&self) -> BTreeSet<usize> {
        self.ghosts.iter().flat_map(|c| c.vertices.iter().copied()).collect()
    }

    /// Vertices touched by a scalar edge.
    pub fn scalar_vertices(&self, g: &FeynmanGraph) -> BTreeSet<usize> {
        g.vertices_of(&self.p_hg)
    }

    /// `H2(e)` for a shrink edge; `None` stands for the empty set.
    pub fn h2_of(&self, e: usize) -> Option<&[HalfEdge; 2]> {
        self.h2.get(&e)
    }

    /// Scalar half-edges that are not on a shrink edge.
    pub fn is_open_scalar(&self, h: HalfEdge) -> bool {
        self.p_hg.contains(&h.edge) && !self.p4.contains(&h.edge)
    }
}

/// Half-edges at the endpoints of internal edge `e`, other than `e`'s own.
pub(crate) fn neighbours(g: &FeynmanGraph, e: usize) -> Vec<HalfEdge> {
    let ends = g.edge(e).endpoints();
    let mut out = Vec::new();
    for &v in &ends {
        let mut skipped = false;
        for h in g.half_edges_at(v) {
            if h.edge == e && !skipped {
                skipped = true;
                continue;
            }
            out.push(h);
        }
    }
    out
}

/// Internal edges of `p` that may be shrunk: two or four scalar neighbours
/// (two on distinct edges), no endpoint touching a ghost or `excluded` edge.
pub fn shrink_candidates(g: &FeynmanGraph, p: &EdgeSet, ghost_edges: &EdgeSet, excluded: &EdgeSet) -> EdgeSet {
    p.iter()
        .copied()
        .filter(|&e| g.edge(e).is_internal())
        .filter(|&e| {
            let scalar: Vec<usize> = neighbours(g, e).iter().map(|h| h.edge).filter(|x| p.contains(x)).collect();
            match scalar.len() {
                4 => true,
                2 => scalar[0] != scalar[1],
                _ => false,
            }
        })
        .filter(|&e| {
            g.edge(e).endpoints().iter().all(|&v| {
                g.incident_edges(v).iter().all(|x| *x == e || !(ghost_edges.contains(x) || excluded.contains(x)))
            })
        })
        .collect()
}

fn share_vertex(g: &FeynmanGraph, a: usize, b: usize) -> bool {
    let ea = g.edge(a).endpoints();
    g.edge(b).endpoints().iter().any(|v| ea.contains(v))
}

/// Whether `p4` is an admissible shrink set for scalar edges `p`.
pub fn is_admissible_shrink_set(g: &FeynmanGraph, p: &EdgeSet, ghost_edges: &EdgeSet, p4: &EdgeSet) -> bool {
    let cands = shrink_candidates(g, p, ghost_edges, &EdgeSet::new());
    p4.is_subset(&cands) && p4.iter().all(|&a| p4.iter().all(|&b| a == b || !share_vertex(g, a, b)))
}

/// Subsets of `items`, ordered by size and then lexicographically.
pub(crate) fn subsets(items: &[usize]) -> Vec<EdgeSet> {
    let mut out: Vec<EdgeSet> = (0u64..1 << items.len())
        .map(|mask| items.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect())
        .collect();
    out.sort_by(|a: &EdgeSet, b| a.len().cmp(&b.len()).then_with(|| a.iter().cmp(b.iter())));
    out
}

fn h2_map(g: &FeynmanGraph, p: &EdgeSet) -> BTreeMap<usize, [HalfEdge; 2]> {
    let mut out = BTreeMap::new();
    for &e in p.iter().filter(|&&e| g.edge(e).is_internal()) {
        let gauge: Vec<HalfEdge> = neighbours(g, e).into_iter().filter(|h| !p.contains(&h.edge)).collect();
        if let [a, b] = gauge[..] {
            out.insert(e, [a.min(b), a.max(b)]);
        }
    }
    out
}

/// Every `(p_hg, p4)` pair compatible with the ghost cycles `ghosts`.
pub fn scalar_sets(g: &FeynmanGraph, ghosts: &[Cycle]) -> Vec<ScalarSets> {
    let ghost_edges: EdgeSet = ghosts.iter().flat_map(|c| c.edges.iter().copied()).collect();
    let free: Vec<usize> = (0..g.edges().len()).filter(|e| !ghost_edges.contains(e)).collect();
    let mut out = Vec::new();
    for p in subsets(&free) {
        let cands: Vec<usize> = shrink_candidates(g, &p, &ghost_edges, &EdgeSet::new()).into_iter().collect();
        let h2 = h2_map(g, &p);
        for p4 in subsets(&cands) {
            if p4.iter().all(|&a| p4.iter().all(|&b| a == b || !share_vertex(g, a, b))) {
                out.push(ScalarSets { ghosts: ghosts.to_vec(), p_hg: p.clone(), p4, h2: h2.clone() });
            }
        }
    }
    out
}
