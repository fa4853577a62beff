//! Momentum routings: explicit files and the automatic spanning-tree default.
//!
//! ```text
//! route 1 = 0
//! route 2 = q
//! route 4 = -q
//! ```

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::expr::{Routing, Slot, Q};
use crate::graph::FeynmanGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RoutingError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("momentum is not conserved at vertex {0}")]
    Conservation(String),
}

type Linear = BTreeMap<Slot, Q>;

fn add_scaled(acc: &mut Linear, c: &Q, x: &Linear) {
    for (s, v) in x {
        let e = acc.entry(s.clone()).or_insert_with(Q::zero);
        *e += c * v;
        if e.is_zero() {
            acc.remove(s);
        }
    }
}

fn to_image(x: &Linear) -> Vec<(Q, Slot)> {
    x.iter().map(|(s, c)| (c.clone(), s.clone())).collect()
}

/// External edge `e` carries `q<id>` inward; the last external balances the
/// others. Tree edges follow from conservation, all other internal edges
/// carry nothing.
pub fn automatic_routing(g: &FeynmanGraph) -> Routing {
    let mut value: Vec<Option<Linear>> = vec![None; g.edges().len()];
    let externals = g.external_edges();
    if let Some((&last, rest)) = externals.split_last() {
        let mut total = Linear::new();
        for &e in rest {
            let own = Linear::from([(Slot::new(&format!("q{}", g.edge(e).id)), Q::one())]);
            add_scaled(&mut total, &-Q::one(), &own);
            value[e] = Some(own);
        }
        value[last] = Some(total);
    }
    for comp in g.components() {
        let root = comp[0];
        let parent = crate::graph::bfs_tree_parents(g, root);
        let mut order = vec![root];
        let mut k = 0;
        while k < order.len() {
            let v = order[k];
            for w in &comp {
                if parent[*w].is_some_and(|(p, _)| p == v) {
                    order.push(*w);
                }
            }
            k += 1;
        }
        let tree: Vec<usize> = comp.iter().filter_map(|&v| parent[v].map(|(_, e)| e)).collect();
        for &v in &comp {
            for e in g.incident_edges(v) {
                if g.edge(e).is_internal() && !tree.contains(&e) {
                    value[e] = Some(Linear::new());
                }
            }
        }
        for &v in order.iter().skip(1).rev() {
            let (_, pe) = parent[v].expect("non-root");
            let mut rest = Linear::new();
            for e in g.incident_edges(v) {
                if e != pe {
                    let x = value[e].clone().unwrap_or_default();
                    add_scaled(&mut rest, &Q::from_integer(g.incidence(v, e).into()), &x);
                }
            }
            let eps = Q::from_integer(g.incidence(v, pe).into());
            let mut solved = Linear::new();
            add_scaled(&mut solved, &(-eps.recip()), &rest);
            value[pe] = Some(solved);
        }
    }
    let mut routing = Routing::new();
    for (e, x) in value.iter().enumerate() {
        routing.set(g.momentum(e), to_image(&x.clone().unwrap_or_default()));
    }
    routing
}

/// Parse `route` lines and fill the remaining edges from `fallback`.
pub fn parse_routing(text: &str, g: &FeynmanGraph, fallback: &Routing) -> Result<Routing, RoutingError> {
    let mut routing = fallback.clone();
    let mut seen = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let col0 = content.len() - trimmed.len() + 1;
        let err = |column: usize, message: String| RoutingError::Parse { line, column, message };
        let Some(rest) = trimmed.strip_prefix("route").filter(|r| r.starts_with(char::is_whitespace)) else {
            return Err(err(col0, "expected `route <edge> = <momenta>`".into()));
        };
        let Some((lhs, rhs)) = rest.split_once('=') else {
            return Err(err(col0, "missing `=`".into()));
        };
        let id = lhs.trim();
        let id_col = col0 + 5 + lhs.find(id).unwrap_or(0);
        let e = g.edge_index(id).ok_or_else(|| err(id_col, format!("unknown edge `{id}`")))?;
        if seen.insert(e, line).is_some() {
            return Err(err(id_col, format!("edge `{id}` routed twice")));
        }
        let rhs_col = col0 + 5 + lhs.len() + 1;
        let image = parse_linear(rhs).map_err(|(off, msg)| err(rhs_col + off, msg))?;
        routing.set(g.momentum(e), to_image(&image));
    }
    Ok(routing)
}

/// `± c name ± ...` or `0`; errors carry a 0-based character offset.
fn parse_linear(src: &str) -> Result<Linear, (usize, String)> {
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut out = Linear::new();
    let skip = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    skip(&mut i);
    if i == chars.len() {
        return Err((i, "empty momentum".into()));
    }
    let mut first = true;
    while i < chars.len() {
        let mut sign = Q::one();
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
            skip(&mut i);
        } else if !first {
            return Err((i, "expected `+` or `-`".into()));
        }
        let start = i;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
        let coeff: Q = if i > start {
            let n: i64 =
                chars[start..i].iter().collect::<String>().parse().map_err(|_| (start, "bad integer".to_string()))?;
            Q::from_integer(n.into())
        } else {
            Q::one()
        };
        skip(&mut i);
        let nstart = i;
        while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
            i += 1;
        }
        if i == nstart {
            if start == nstart {
                return Err((i, "expected a momentum name".into()));
            }
            if !coeff.is_zero() {
                return Err((start, "constant momentum must be 0".into()));
            }
        } else {
            if !chars[nstart].is_alphabetic() {
                return Err((nstart, "momentum names start with a letter".into()));
            }
            let name: String = chars[nstart..i].iter().collect();
            add_scaled(&mut out, &(sign * coeff), &Linear::from([(Slot::new(&name), Q::one())]));
        }
        skip(&mut i);
        first = false;
    }
    Ok(out)
}

/// Incoming momenta sum to zero at every vertex under `routing`.
pub fn check_conservation(g: &FeynmanGraph, routing: &Routing) -> Result<(), RoutingError> {
    for v in 0..g.vertex_count() {
        let mut total = Linear::new();
        for e in g.incident_edges(v) {
            let Some(img) = routing.image(&g.momentum(e)) else { continue };
            let x: Linear = img.iter().map(|(c, s)| (s.clone(), c.clone())).collect();
            add_scaled(&mut total, &Q::from_integer(g.incidence(v, e).into()), &x);
        }
        if !total.is_empty() {
            return Err(RoutingError::Conservation(g.vertices()[v].clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    const ONE_LOOP: &str = "v a\nv b\ne 1 b a\ne 2 a b\nx 3 a\nx 4 b\nrot a 3 2 1\nrot b 4 1 2\n";

    #[test]
    fn automatic_routing_conserves() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let r = automatic_routing(&g);
        check_conservation(&g, &r).unwrap();
        assert_eq!(r.image(&Slot::new("xi3")).unwrap(), &[(Q::one(), Slot::new("q3"))]);
        assert_eq!(r.image(&Slot::new("xi2")).unwrap(), &[]);
    }

    #[test]
    fn file_overrides_default() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let text = "# explicit\nroute 1 = 0\nroute 2 = q\nroute 3 = q\nroute 4 = -q\n";
        let r = parse_routing(text, &g, &automatic_routing(&g)).unwrap();
        check_conservation(&g, &r).unwrap();
        assert_eq!(r.image(&Slot::new("xi4")).unwrap(), &[(-Q::one(), Slot::new("q"))]);
    }

    #[test]
    fn linear_forms() {
        let x = parse_linear(" q1 - 2 q2 + q1").unwrap();
        assert_eq!(x[&Slot::new("q1")], Q::from_integer(2.into()));
        assert_eq!(x[&Slot::new("q2")], Q::from_integer((-2).into()));
        assert!(parse_linear("q1 q2").is_err());
        assert!(parse_linear("").is_err());
        assert!(parse_linear("3").is_err());
        assert!(parse_linear("0").unwrap().is_empty());
    }

    #[test]
    fn bad_lines_are_located() {
        let g = parse_graph(ONE_LOOP).unwrap();
        match parse_routing("route 9 = q\n", &g, &Routing::new()) {
            Err(RoutingError::Parse { line: 1, column: 7, .. }) => {}
            other => panic!("{other:?}"),
        }
        let bad = parse_routing("route 1 = q\nroute 2 = q\nroute 3 = q\nroute 4 = q\n", &g, &Routing::new()).unwrap();
        assert!(matches!(check_conservation(&g, &bad), Err(RoutingError::Conservation(_))));
    }
}
