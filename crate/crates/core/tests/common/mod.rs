//! Shared helpers for the integration suites: the graph corpus, a random
//! 3-regular graph generator and edge-subset brute force.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use corolla_core::graph::{parse_graph, EdgeSet, FeynmanGraph};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const ONE_LOOP: &str = "v a\nv b\ne 1 b a\ne 2 a b\nx 3 a\nx 4 b\nrot a 3 2 1\nrot b 4 1 2\n";

pub fn one_loop() -> FeynmanGraph {
    parse_graph(ONE_LOOP).unwrap()
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn read_data(rel: &str) -> String {
    std::fs::read_to_string(data_dir().join(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

/// Every graph shipped under `data/graphs`, by file stem.
pub fn shipped_graphs() -> Vec<(String, FeynmanGraph)> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(data_dir().join("graphs"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "graph"))
        .collect();
    paths.sort();
    paths
        .into_iter()
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            let name = p.file_stem().unwrap().to_string_lossy().into_owned();
            (name.clone(), parse_graph(&text).unwrap_or_else(|e| panic!("{name}: {e}")))
        })
        .collect()
}

/// Graph file text for a random connected 3-regular graph without self-loops,
/// or `None` if the stub pairing produced one that is invalid.
fn random_graph_text(rng: &mut StdRng, max_internal: usize) -> Option<String> {
    let n = rng.gen_range(1..=6);
    let externals: Vec<usize> =
        (0..=3 * n).filter(|k| (3 * n - k) % 2 == 0 && (3 * n - k) / 2 <= max_internal).collect();
    let k = *externals.choose(rng)?;
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
    stubs.shuffle(rng);
    let mut text: String = (0..n).map(|v| format!("v v{v}\n")).collect();
    let mut id = 1;
    let (ext, rest) = stubs.split_at(k);
    for pair in rest.chunks(2) {
        if pair[0] == pair[1] {
            return None;
        }
        text.push_str(&format!("e {id} v{} v{}\n", pair[0], pair[1]));
        id += 1;
    }
    for &v in ext {
        text.push_str(&format!("x {id} v{v}\n"));
        id += 1;
    }
    Some(text)
}

/// `count` distinct random connected valid graphs with at most `max_internal`
/// internal edges, reproducible from `seed`.
pub fn random_graphs(seed: u64, count: usize, max_internal: usize) -> Vec<FeynmanGraph> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let Some(text) = random_graph_text(&mut rng, max_internal) else { continue };
        let Ok(g) = parse_graph(&text) else { continue };
        if !g.is_connected() || !seen.insert(text) {
            continue;
        }
        out.push(g);
    }
    out
}

/// Shipped graphs followed by a fixed random sample.
pub fn corpus() -> Vec<FeynmanGraph> {
    let mut out: Vec<FeynmanGraph> = shipped_graphs().into_iter().map(|(_, g)| g).collect();
    out.extend(random_graphs(0xC0_801A, 24, 6));
    out
}

pub fn all_subsets(items: &[usize]) -> impl Iterator<Item = EdgeSet> + '_ {
    (0u32..1 << items.len())
        .map(move |m| items.iter().enumerate().filter(|(k, _)| m >> k & 1 == 1).map(|(_, &e)| e).collect())
}

/// Components of `(all vertices, edges)` as sorted vertex sets.
pub fn components(g: &FeynmanGraph, edges: &EdgeSet) -> Vec<BTreeSet<usize>> {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] == x {
            x
        } else {
            let r = find(p, p[x]);
            p[x] = r;
            r
        }
    }
    for &e in edges {
        let ends = g.edge(e).endpoints();
        if let [a, b] = ends[..] {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut comps: std::collections::BTreeMap<usize, BTreeSet<usize>> = Default::default();
    for v in 0..n {
        let r = find(&mut parent, v);
        comps.entry(r).or_default().insert(v);
    }
    comps.into_values().collect()
}

fn is_forest(g: &FeynmanGraph, edges: &EdgeSet) -> bool {
    g.vertex_count() - components(g, edges).len() == edges.len()
}

pub fn brute_spanning_trees(g: &FeynmanGraph) -> BTreeSet<EdgeSet> {
    let internal = g.internal_edges();
    all_subsets(&internal).filter(|s| is_forest(g, s) && components(g, s).len() == 1).collect()
}

/// Spanning 2-forests as (edges, {component, component}).
pub fn brute_2forests(g: &FeynmanGraph) -> BTreeSet<(EdgeSet, BTreeSet<BTreeSet<usize>>)> {
    let internal = g.internal_edges();
    all_subsets(&internal)
        .filter(|s| is_forest(g, s))
        .filter_map(|s| {
            let comps = components(g, &s);
            (comps.len() == 2).then(|| (s, comps.into_iter().collect()))
        })
        .collect()
}

/// Edge sets (external edges included) giving every vertex degree 2.
pub fn brute_2factors(g: &FeynmanGraph) -> BTreeSet<EdgeSet> {
    let all: Vec<usize> = (0..g.edges().len()).collect();
    all_subsets(&all)
        .filter(|s| {
            let mut deg = vec![0; g.vertex_count()];
            for &e in s {
                for v in g.edge(e).endpoints() {
                    deg[v] += 1;
                }
            }
            deg.iter().all(|&d| d == 2)
        })
        .collect()
}

/// Non-empty internal edge sets whose touched vertices all have degree 2 and
/// which are connected.
pub fn brute_cycles(g: &FeynmanGraph) -> BTreeSet<EdgeSet> {
    let internal = g.internal_edges();
    all_subsets(&internal)
        .filter(|s| !s.is_empty())
        .filter(|s| {
            let mut deg = vec![0; g.vertex_count()];
            for &e in s {
                for v in g.edge(e).endpoints() {
                    deg[v] += 1;
                }
            }
            if deg.iter().any(|&d| d != 0 && d != 2) {
                return false;
            }
            components(g, s).iter().filter(|c| c.iter().any(|&v| deg[v] > 0)).count() == 1
        })
        .collect()
}
