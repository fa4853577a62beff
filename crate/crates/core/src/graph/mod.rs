//! Feynman graphs with a rotation system, and the combinatorial enumerators
//! built on them.

mod automorphism;
mod cycles;
mod forests;
mod parse;
mod validate;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::expr::{IndexName, Slot, Symbol};

pub use automorphism::{automorphisms, iso_count, symmetry_factor, Automorphism};
pub(crate) use cycles::bfs_tree as bfs_tree_parents;
pub use cycles::{all_cycles, cycle_basis, disjoint_cycle_tuples, Cycle};
pub use forests::{spanning_2forests, spanning_trees, two_factors, TwoFactor, TwoForest};
pub use parse::{parse_graph, parse_unvalidated};
pub use validate::{validate, ValidationReport, Violation};

/// Sorted set of edge indices.
pub type EdgeSet = BTreeSet<usize>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Internal { start: usize, end: usize },
    External { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub kind: EdgeKind,
    pub mass: Option<Symbol>,
}

impl Edge {
    pub fn is_internal(&self) -> bool {
        matches!(self.kind, EdgeKind::Internal { .. })
    }

    pub fn endpoints(&self) -> Vec<usize> {
        match self.kind {
            EdgeKind::Internal { start, end } => vec![start, end],
            EdgeKind::External { vertex } => vec![vertex],
        }
    }
}

/// A (vertex, edge) incidence. Both indices refer to the owning graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub vertex: usize,
    pub edge: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid graph: {0}")]
    Invalid(ValidationReport),
    #[error("graph is disconnected")]
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeynmanGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    /// Cyclic order of incident edge indices at each vertex.
    rotation: Vec<Vec<usize>>,
}

impl FeynmanGraph {
    /// Assemble a graph without validating it. A vertex without an explicit
    /// rotation gets its incident edges in declaration order.
    pub fn from_parts(vertices: Vec<String>, edges: Vec<Edge>, rotation: Vec<Option<Vec<usize>>>) -> Self {
        let mut g = FeynmanGraph { vertices, edges, rotation: Vec::new() };
        let mut rotation = rotation;
        rotation.resize(g.vertices.len(), None);
        g.rotation = rotation.into_iter().enumerate().map(|(v, r)| r.unwrap_or_else(|| g.incident_edges(v))).collect();
        g
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    pub fn internal_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].is_internal()).collect()
    }

    pub fn external_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| !self.edges[e].is_internal()).collect()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    /// Incident edges of `v` in declaration order; a self-loop appears twice.
    pub fn incident_edges(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            for w in e.endpoints() {
                if w == v {
                    out.push(k);
                }
            }
        }
        out
    }

    /// Half-edges at `v` in rotation order.
    pub fn half_edges_at(&self, v: usize) -> Vec<HalfEdge> {
        self.rotation[v].iter().map(|&edge| HalfEdge { vertex: v, edge }).collect()
    }

    pub fn half_edges(&self) -> Vec<HalfEdge> {
        (0..self.vertices.len()).flat_map(|v| self.half_edges_at(v)).collect()
    }

    /// Successor and predecessor of `h` in the cyclic order at its vertex.
    pub fn orientation(&self, h: HalfEdge) -> (HalfEdge, HalfEdge) {
        let rot = &self.rotation[h.vertex];
        let k = rot.iter().position(|&e| e == h.edge).expect("half-edge belongs to its vertex");
        let n = rot.len();
        (
            HalfEdge { vertex: h.vertex, edge: rot[(k + 1) % n] },
            HalfEdge { vertex: h.vertex, edge: rot[(k + n - 1) % n] },
        )
    }

    pub fn successor(&self, h: HalfEdge) -> HalfEdge {
        self.orientation(h).0
    }

    pub fn predecessor(&self, h: HalfEdge) -> HalfEdge {
        self.orientation(h).1
    }

    /// Incidence entry: +1 at the end of an internal edge, -1 at its start,
    /// +1 for an external edge at its vertex, 0 otherwise.
    pub fn incidence(&self, v: usize, e: usize) -> i32 {
        match self.edges[e].kind {
            EdgeKind::Internal { start, end } => {
                let mut x = 0;
                if end == v {
                    x += 1;
                }
                if start == v {
                    x -= 1;
                }
                x
            }
            EdgeKind::External { vertex } => i32::from(vertex == v),
        }
    }

    pub fn incidence_matrix(&self) -> Vec<Vec<i32>> {
        (0..self.vertices.len()).map(|v| (0..self.edges.len()).map(|e| self.incidence(v, e)).collect()).collect()
    }

    /// Other endpoint of internal edge `e` seen from `v`.
    pub fn opposite(&self, e: usize, v: usize) -> Option<usize> {
        match self.edges[e].kind {
            EdgeKind::Internal { start, end } if start == v => Some(end),
            EdgeKind::Internal { start, end } if end == v => Some(start),
            _ => None,
        }
    }

    /// Connected components over internal edges, as sorted vertex lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(v) = stack.pop() {
                members.push(v);
                for e in self.incident_edges(v) {
                    if let Some(w) = self.opposite(e, v) {
                        if comp[w] == usize::MAX {
                            comp[w] = id;
                            stack.push(w);
                        }
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn loop_number(&self) -> usize {
        let internal = self.internal_edges().len();
        internal + self.components().len() - self.vertices.len()
    }

    pub fn schwinger(&self, e: usize) -> Symbol {
        Symbol::new(&format!("A{}", self.edges[e].id))
    }

    pub fn momentum(&self, e: usize) -> Slot {
        Slot::new(&format!("xi{}", self.edges[e].id))
    }

    pub fn lorentz_index(&self, e: usize) -> IndexName {
        IndexName::new(&format!("mu{}", self.edges[e].id))
    }

    /// Vertices touched by a set of edges.
    pub fn vertices_of(&self, edges: &EdgeSet) -> BTreeSet<usize> {
        edges.iter().flat_map(|&e| self.edges[e].endpoints()).collect()
    }

    pub fn half_edge_label(&self, h: HalfEdge) -> String {
        format!("({},{})", self.vertices[h.vertex], self.edges[h.edge].id)
    }
}

impl fmt::Display for FeynmanGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.vertices {
            writeln!(f, "v {v}")?;
        }
        for e in &self.edges {
            match e.kind {
                EdgeKind::Internal { start, end } => {
                    writeln!(f, "e {} {} {}", e.id, self.vertices[start], self.vertices[end])?
                }
                EdgeKind::External { vertex } => writeln!(f, "x {} {}", e.id, self.vertices[vertex])?,
            }
        }
        for (v, rot) in self.rotation.iter().enumerate() {
            let ids: Vec<&str> = rot.iter().map(|&e| self.edges[e].id.as_str()).collect();
            writeln!(f, "rot {} {}", self.vertices[v], ids.join(" "))?;
        }
        for e in &self.edges {
            if let Some(m) = &e.mass {
                writeln!(f, "mass {} {}", e.id, m)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub const ONE_LOOP: &str = "v a\nv b\ne 1 b a\ne 2 a b\nx 3 a\nx 4 b\nrot a 3 2 1\nrot b 4 1 2\n";

    pub const TRIANGLE: &str = "v a\nv b\nv c\ne 1 a b\ne 2 b c\ne 3 c a\nx 4 a\nx 5 b\nx 6 c\n";

    pub const K4: &str = "v a\nv b\nv c\nv d\ne 1 a b\ne 2 a c\ne 3 a d\ne 4 b c\ne 5 b d\ne 6 c d\n";

    pub fn one_loop() -> FeynmanGraph {
        parse_graph(ONE_LOOP).unwrap()
    }

    pub fn triangle() -> FeynmanGraph {
        parse_graph(TRIANGLE).unwrap()
    }

    pub fn k4() -> FeynmanGraph {
        parse_graph(K4).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn orientation_reads_rotation() {
        let g = one_loop();
        let a = g.vertex_index("a").unwrap();
        let h = HalfEdge { vertex: a, edge: g.edge_index("3").unwrap() };
        let (s, p) = g.orientation(h);
        assert_eq!(g.edge(s.edge).id, "2");
        assert_eq!(g.edge(p.edge).id, "1");
        for h in g.half_edges() {
            assert_eq!(g.successor(g.predecessor(h)), h);
            assert_eq!(g.predecessor(g.successor(h)), h);
        }
    }

    #[test]
    fn incidence_columns() {
        let g = one_loop();
        let m = g.incidence_matrix();
        for e in g.internal_edges() {
            assert_eq!(m.iter().map(|row| row[e]).sum::<i32>(), 0);
        }
        for e in g.external_edges() {
            assert_eq!(m.iter().filter(|row| row[e] != 0).count(), 1);
        }
    }

    #[test]
    fn triangle_successor_is_a_three_cycle() {
        let g = triangle();
        for v in 0..g.vertex_count() {
            let h0 = g.half_edges_at(v)[0];
            let h1 = g.successor(h0);
            let h2 = g.successor(h1);
            assert!(h0 != h1 && h1 != h2 && h0 != h2);
            assert_eq!(g.successor(h2), h0);
        }
    }

    #[test]
    fn display_round_trips() {
        let g = one_loop();
        assert_eq!(parse_graph(&g.to_string()).unwrap(), g);
    }
}
