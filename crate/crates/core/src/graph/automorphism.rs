//! Automorphisms fixing external edges pointwise.
//!
//! Edge orientation and the rotation system are ignored; optional per-edge
//! labels must be preserved.

use std::collections::{BTreeMap, BTreeSet};

use super::{EdgeKind, FeynmanGraph};

/// Vertex permutation together with the induced edge permutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
}

fn pair(u: usize, w: usize) -> (usize, usize) {
    (u.min(w), u.max(w))
}

/// Internal edges grouped by unordered endpoint pair.
fn parallel_classes(g: &FeynmanGraph) -> BTreeMap<(usize, usize), Vec<usize>> {
    let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for e in g.internal_edges() {
        if let EdgeKind::Internal { start, end } = g.edge(e).kind {
            out.entry(pair(start, end)).or_default().push(e);
        }
    }
    out
}

fn label_of(labels: Option<&[String]>, e: usize) -> Option<&str> {
    labels.map(|l| l[e].as_str())
}

/// All automorphisms, optionally preserving `labels` (indexed by edge).
pub fn automorphisms(g: &FeynmanGraph, labels: Option<&[String]>) -> Vec<Automorphism> {
    let n = g.vertex_count();
    let classes = parallel_classes(g);
    let fixed: BTreeSet<usize> = g.external_edges().into_iter().flat_map(|e| g.edge(e).endpoints()).collect();
    let mult = |u: usize, w: usize| -> Vec<Option<&str>> {
        let mut ls: Vec<Option<&str>> =
            classes.get(&pair(u, w)).map(|es| es.iter().map(|&e| label_of(labels, e)).collect()).unwrap_or_default();
        ls.sort_unstable();
        ls
    };

    let mut vertex_maps = Vec::new();
    let mut sigma = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn assign<'a>(
        v: usize,
        n: usize,
        fixed: &BTreeSet<usize>,
        mult: &dyn Fn(usize, usize) -> Vec<Option<&'a str>>,
        sigma: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if v == n {
            out.push(sigma.clone());
            return;
        }
        let candidates: Vec<usize> = if fixed.contains(&v) { vec![v] } else { (0..n).collect() };
        for t in candidates {
            if used[t] || (t != v && fixed.contains(&t)) {
                continue;
            }
            let consistent = (0..v).all(|u| mult(u, v) == mult(sigma[u], t));
            if consistent {
                sigma[v] = t;
                used[t] = true;
                assign(v + 1, n, fixed, mult, sigma, used, out);
                used[t] = false;
                sigma[v] = usize::MAX;
            }
        }
    }
    assign(0, n, &fixed, &mult, &mut sigma, &mut used, &mut vertex_maps);

    let mut out = Vec::new();
    for sigma in vertex_maps {
        // Each parallel class maps onto its image class; enumerate label-preserving bijections.
        let mut partial: Vec<Vec<usize>> = vec![(0..g.edges().len()).collect()];
        for ((u, w), es) in &classes {
            let targets = &classes[&pair(sigma[*u], sigma[*w])];
            let mut next = Vec::new();
            for base in &partial {
                for perm in bijections(es, targets, |a, b| label_of(labels, a) == label_of(labels, b)) {
                    let mut m = base.clone();
                    for (a, b) in es.iter().zip(perm) {
                        m[*a] = b;
                    }
                    next.push(m);
                }
            }
            partial = next;
        }
        out.extend(partial.into_iter().map(|edges| Automorphism { vertices: sigma.clone(), edges }));
    }
    out.sort();
    out
}

/// Every bijection `from -> to` (as the image list of `from`) with `ok(a, b)`.
fn bijections(from: &[usize], to: &[usize], ok: impl Fn(usize, usize) -> bool + Copy) -> Vec<Vec<usize>> {
    fn go(
        from: &[usize],
        to: &[usize],
        k: usize,
        used: &mut Vec<bool>,
        cur: &mut Vec<usize>,
        ok: impl Fn(usize, usize) -> bool + Copy,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == from.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..to.len() {
            if !used[j] && ok(from[k], to[j]) {
                used[j] = true;
                cur.push(to[j]);
                go(from, to, k + 1, used, cur, ok, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(from, to, 0, &mut vec![false; to.len()], &mut Vec::new(), ok, &mut out);
    out
}

/// Order of the (label-preserving) automorphism group.
pub fn symmetry_factor(g: &FeynmanGraph, labels: Option<&[String]>) -> usize {
    automorphisms(g, labels).len()
}

/// Number of entries of `family` isomorphic to `family[member]` under an
/// automorphism of the unlabeled graph.
pub fn iso_count(g: &FeynmanGraph, family: &[Vec<String>], member: usize) -> usize {
    let base = &family[member];
    let images: BTreeSet<Vec<String>> = automorphisms(g, None)
        .into_iter()
        .map(|a| {
            let mut img = base.clone();
            for (e, &t) in a.edges.iter().enumerate() {
                img[t] = base[e].clone();
            }
            img
        })
        .collect();
    family.iter().filter(|l| images.contains(*l)).count()
}
