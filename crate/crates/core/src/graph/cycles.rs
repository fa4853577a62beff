use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{EdgeKind, EdgeSet, FeynmanGraph, GraphError};

/// A simple cycle of internal edges with a fixed traversal direction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Cycle {
    pub edges: EdgeSet,
    pub vertices: BTreeSet<usize>,
    /// `(vertex, edge)` steps: leave `vertex` along `edge`. Starts at the
    /// smallest vertex, along its smallest cycle edge.
    pub walk: Vec<(usize, usize)>,
}

impl Cycle {
    fn from_walk(g: &FeynmanGraph, steps: Vec<(usize, usize)>) -> Cycle {
        let n = steps.len();
        let start = (0..n).min_by_key(|&k| steps[k].0).expect("non-empty cycle");
        let mut walk: Vec<(usize, usize)> = (0..n).map(|k| steps[(start + k) % n]).collect();
        let v0 = walk[0].0;
        let back = walk[n - 1].1;
        if back < walk[0].1 {
            // Reverse direction: leave v0 along `back` instead.
            let mut rev = Vec::with_capacity(n);
            let mut v = v0;
            for k in (0..n).rev() {
                let e = walk[k].1;
                rev.push((v, e));
                v = g.opposite(e, v).expect("internal edge");
            }
            walk = rev;
        }
        Cycle { edges: walk.iter().map(|&(_, e)| e).collect(), vertices: walk.iter().map(|&(v, _)| v).collect(), walk }
    }

    /// +1 if the traversal runs along the edge orientation, -1 against it,
    /// 0 if the edge is not on the cycle.
    pub fn direction(&self, g: &FeynmanGraph, e: usize) -> i32 {
        match self.walk.iter().find(|&&(_, f)| f == e) {
            Some(&(v, _)) => match g.edge(e).kind {
                EdgeKind::Internal { start, .. } if start == v => 1,
                _ => -1,
            },
            None => 0,
        }
    }

    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }

    pub fn is_disjoint(&self, other: &Cycle) -> bool {
        self.vertices.is_disjoint(&other.vertices)
    }
}

/// BFS spanning tree over internal edges from `root`: parent edge per vertex.
pub(crate) fn bfs_tree(g: &FeynmanGraph, root: usize) -> Vec<Option<(usize, usize)>> {
    let mut parent = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for e in g.incident_edges(v) {
            if let Some(w) = g.opposite(e, v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some((v, e));
                    queue.push_back(w);
                }
            }
        }
    }
    parent
}

/// Fundamental cycles of a BFS spanning tree rooted at the first vertex.
pub fn cycle_basis(g: &FeynmanGraph) -> Result<Vec<Cycle>, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if g.vertex_count() == 0 {
        return Ok(Vec::new());
    }
    let parent = bfs_tree(g, 0);
    let tree: BTreeSet<usize> = parent.iter().flatten().map(|&(_, e)| e).collect();
    let path_to_root = |mut v: usize| {
        let mut path = vec![v];
        while let Some((p, _)) = parent[v] {
            path.push(p);
            v = p;
        }
        path
    };
    let mut out = Vec::new();
    for e in g.internal_edges() {
        if tree.contains(&e) {
            continue;
        }
        let EdgeKind::Internal { start, end } = g.edge(e).kind else { unreachable!() };
        let (pu, pw) = (path_to_root(start), path_to_root(end));
        let on_w: BTreeSet<usize> = pw.iter().copied().collect();
        let lca = *pu.iter().find(|v| on_w.contains(v)).expect("connected");
        // start -> ... -> lca -> ... -> end -> start
        let mut steps = Vec::new();
        for &v in pu.iter().take_while(|&&v| v != lca) {
            steps.push((v, parent[v].expect("below lca").1));
        }
        let down: Vec<usize> = pw.iter().copied().take_while(|&v| v != lca).collect();
        for &v in down.iter().rev() {
            let (p, pe) = parent[v].expect("below lca");
            steps.push((p, pe));
        }
        steps.push((end, e));
        out.push(Cycle::from_walk(g, steps));
    }
    Ok(out)
}

/// Every simple cycle exactly once, including 2-cycles of parallel edges.
pub fn all_cycles(g: &FeynmanGraph) -> Vec<Cycle> {
    let mut found: BTreeMap<EdgeSet, Cycle> = BTreeMap::new();
    for s in 0..g.vertex_count() {
        let mut path: Vec<(usize, usize)> = Vec::new();
        let mut on_path = vec![false; g.vertex_count()];
        on_path[s] = true;
        extend(g, s, s, &mut path, &mut on_path, &mut found);
    }
    found.into_values().collect()
}

fn extend(
    g: &FeynmanGraph,
    s: usize,
    v: usize,
    path: &mut Vec<(usize, usize)>,
    on_path: &mut [bool],
    found: &mut BTreeMap<EdgeSet, Cycle>,
) {
    for e in g.incident_edges(v) {
        if path.last().is_some_and(|&(_, last)| last == e) {
            continue;
        }
        let Some(w) = g.opposite(e, v) else { continue };
        if w == s && !path.is_empty() {
            path.push((v, e));
            let key: EdgeSet = path.iter().map(|&(_, f)| f).collect();
            found.entry(key).or_insert_with(|| Cycle::from_walk(g, path.clone()));
            path.pop();
        } else if w > s && !on_path[w] {
            on_path[w] = true;
            path.push((v, e));
            extend(g, s, w, path, on_path, found);
            path.pop();
            on_path[w] = false;
        }
    }
}

/// Unordered `i`-sets of pairwise vertex-disjoint simple cycles.
pub fn disjoint_cycle_tuples(g: &FeynmanGraph, i: usize) -> Vec<Vec<Cycle>> {
    fn go(cycles: &[Cycle], from: usize, i: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<Cycle>>) {
        if cur.len() == i {
            out.push(cur.iter().map(|&k| cycles[k].clone()).collect());
            return;
        }
        for k in from..cycles.len() {
            if cur.iter().all(|&j| cycles[j].is_disjoint(&cycles[k])) {
                cur.push(k);
                go(cycles, k + 1, i, cur, out);
                cur.pop();
            }
        }
    }
    if i == 0 {
        return vec![Vec::new()];
    }
    let cycles = all_cycles(g);
    let mut out = Vec::new();
    go(&cycles, 0, i, &mut Vec::new(), &mut out);
    out
}
