use std::collections::BTreeSet;

use super::{EdgeKind, EdgeSet, FeynmanGraph, GraphError};

/// A spanning 2-forest. `first` holds the component containing vertex 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoForest {
    pub edges: EdgeSet,
    pub first: BTreeSet<usize>,
    pub second: BTreeSet<usize>,
}

/// Spanning subgraph of factor-valence 2 everywhere, external edges allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactor {
    pub edges: EdgeSet,
    pub cycles: Vec<EdgeSet>,
    /// Paths between two external edges (both included).
    pub paths: Vec<EdgeSet>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
}

/// Acyclic subsets of internal edges with exactly `size` edges.
fn forests_of_size(g: &FeynmanGraph, size: usize) -> Vec<EdgeSet> {
    fn go(g: &FeynmanGraph, edges: &[usize], k: usize, size: usize, chosen: &mut Vec<usize>, out: &mut Vec<EdgeSet>) {
        if chosen.len() == size {
            out.push(chosen.iter().copied().collect());
            return;
        }
        if edges.len() - k < size - chosen.len() {
            return;
        }
        let e = edges[k];
        chosen.push(e);
        if acyclic(g, chosen) {
            go(g, edges, k + 1, size, chosen, out);
        }
        chosen.pop();
        go(g, edges, k + 1, size, chosen, out);
    }
    let edges = g.internal_edges();
    let mut out = Vec::new();
    go(g, &edges, 0, size, &mut Vec::new(), &mut out);
    out
}

fn acyclic(g: &FeynmanGraph, edges: &[usize]) -> bool {
    let mut uf = UnionFind((0..g.vertex_count()).collect());
    for &e in edges {
        let EdgeKind::Internal { start, end } = g.edge(e).kind else { continue };
        let (a, b) = (uf.find(start), uf.find(end));
        if a == b {
            return false;
        }
        uf.0[a] = b;
    }
    true
}

pub fn spanning_trees(g: &FeynmanGraph) -> Result<Vec<EdgeSet>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    Ok(forests_of_size(g, g.vertex_count().saturating_sub(1)))
}

pub fn spanning_2forests(g: &FeynmanGraph) -> Vec<TwoForest> {
    let n = g.vertex_count();
    if n < 2 {
        return Vec::new();
    }
    forests_of_size(g, n - 2)
        .into_iter()
        .filter_map(|edges| {
            let mut uf = UnionFind((0..n).collect());
            for &e in &edges {
                let EdgeKind::Internal { start, end } = g.edge(e).kind else { continue };
                let (a, b) = (uf.find(start), uf.find(end));
                uf.0[a] = b;
            }
            let root = uf.find(0);
            let (first, second): (BTreeSet<usize>, BTreeSet<usize>) = (0..n).partition(|&v| uf.find(v) == root);
            // With n - 2 acyclic edges there are exactly two components.
            (!second.is_empty()).then_some(TwoForest { edges, first, second })
        })
        .collect()
}

pub fn two_factors(g: &FeynmanGraph) -> Vec<TwoFactor> {
    let n = g.vertex_count();
    let m = g.edges().len();
    // remaining[v] = incident edge slots of v not yet decided
    let mut remaining = vec![0usize; n];
    for e in g.edges() {
        for v in e.endpoints() {
            remaining[v] += 1;
        }
    }
    let mut degree = vec![0usize; n];
    let mut chosen = Vec::new();
    let mut out = Vec::new();
    factor_search(g, 0, m, &mut remaining, &mut degree, &mut chosen, &mut out);
    out.into_iter().map(|edges| split_components(g, edges)).collect()
}

fn factor_search(
    g: &FeynmanGraph,
    k: usize,
    m: usize,
    remaining: &mut [usize],
    degree: &mut [usize],
    chosen: &mut Vec<usize>,
    out: &mut Vec<EdgeSet>,
) {
    if k == m {
        if degree.iter().all(|&d| d == 2) {
            out.push(chosen.iter().copied().collect());
        }
        return;
    }
    let ends = g.edge(k).endpoints();
    for &v in &ends {
        remaining[v] -= 1;
    }
    // include
    if ends.iter().all(|&v| degree[v] < 2) {
        for &v in &ends {
            degree[v] += 1;
        }
        if ends.iter().all(|&v| degree[v] + remaining[v] >= 2) {
            chosen.push(k);
            factor_search(g, k + 1, m, remaining, degree, chosen, out);
            chosen.pop();
        }
        for &v in &ends {
            degree[v] -= 1;
        }
    }
    // exclude
    if ends.iter().all(|&v| degree[v] + remaining[v] >= 2) {
        factor_search(g, k + 1, m, remaining, degree, chosen, out);
    }
    for &v in &ends {
        remaining[v] += 1;
    }
}

fn split_components(g: &FeynmanGraph, edges: EdgeSet) -> TwoFactor {
    let mut unseen = edges.clone();
    let mut cycles = Vec::new();
    let mut paths = Vec::new();
    while let Some(&e0) = unseen.iter().next() {
        let mut comp = EdgeSet::new();
        let mut stack = vec![e0];
        while let Some(e) = stack.pop() {
            if !unseen.remove(&e) {
                continue;
            }
            comp.insert(e);
            for v in g.edge(e).endpoints() {
                stack.extend(g.incident_edges(v).into_iter().filter(|f| unseen.contains(f)));
            }
        }
        if comp.iter().any(|&e| !g.edge(e).is_internal()) {
            paths.push(comp);
        } else {
            cycles.push(comp);
        }
    }
    TwoFactor { edges, cycles, paths }
}
