//! Line-based graph files.
//!
//! ```text
//! # one-loop self-energy
//! v a
//! v b
//! e 1 b a        # internal edge 1 from b to a
//! e 2 a b
//! x 3 a          # external edge 3 at a
//! x 4 b
//! rot a 3 2 1    # cyclic order at a
//! rot b 4 1 2
//! mass 1 m       # optional
//! ```

use std::collections::HashMap;

use super::{validate, Edge, EdgeKind, FeynmanGraph, GraphError};
use crate::expr::Symbol;

struct Token<'a> {
    text: &'a str,
    column: usize,
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    let mut out = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut start = None;
        for (i, c) in content.char_indices() {
            match (c.is_whitespace(), start) {
                (false, None) => start = Some(i),
                (true, Some(s)) => {
                    tokens.push(Token { text: &content[s..i], column: content[..s].chars().count() + 1 });
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            tokens.push(Token { text: &content[s..], column: content[..s].chars().count() + 1 });
        }
        if !tokens.is_empty() {
            out.push(Line { number: k + 1, tokens });
        }
    }
    out
}

fn err(line: usize, column: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse { line, column, message: message.into() }
}

/// Parse without checking valence, tadpoles or rotation consistency.
pub fn parse_unvalidated(text: &str) -> Result<FeynmanGraph, GraphError> {
    let lines = tokenize(text);
    if lines.is_empty() {
        return Err(err(1, 1, "empty graph file"));
    }
    let arity = |l: &Line, n: usize| -> Result<(), GraphError> {
        if l.tokens.len() != n {
            let col = l.tokens.get(n).map_or(l.tokens.last().map_or(1, |t| t.column), |t| t.column);
            return Err(err(
                l.number,
                col,
                format!("`{}` expects {} arguments, found {}", l.tokens[0].text, n - 1, l.tokens.len() - 1),
            ));
        }
        Ok(())
    };

    let mut vertices: Vec<String> = Vec::new();
    let mut vindex: HashMap<&str, usize> = HashMap::new();
    for l in &lines {
        match l.tokens[0].text {
            "v" => {
                arity(l, 2)?;
                let t = &l.tokens[1];
                if vindex.insert(t.text, vertices.len()).is_some() {
                    return Err(err(l.number, t.column, format!("duplicate vertex `{}`", t.text)));
                }
                vertices.push(t.text.to_string());
            }
            "e" | "x" | "rot" | "mass" => {}
            other => {
                return Err(err(l.number, l.tokens[0].column, format!("unknown directive `{other}`")));
            }
        }
    }
    let vertex = |l: &Line, t: &Token| -> Result<usize, GraphError> {
        vindex.get(t.text).copied().ok_or_else(|| err(l.number, t.column, format!("unknown vertex `{}`", t.text)))
    };

    let mut edges: Vec<Edge> = Vec::new();
    let mut eindex: HashMap<&str, usize> = HashMap::new();
    for l in &lines {
        let kind = match l.tokens[0].text {
            "e" => {
                arity(l, 4)?;
                EdgeKind::Internal { start: vertex(l, &l.tokens[2])?, end: vertex(l, &l.tokens[3])? }
            }
            "x" => {
                arity(l, 3)?;
                EdgeKind::External { vertex: vertex(l, &l.tokens[2])? }
            }
            _ => continue,
        };
        let t = &l.tokens[1];
        if eindex.insert(t.text, edges.len()).is_some() {
            return Err(err(l.number, t.column, format!("duplicate edge `{}`", t.text)));
        }
        edges.push(Edge { id: t.text.to_string(), kind, mass: None });
    }
    let edge = |l: &Line, t: &Token| -> Result<usize, GraphError> {
        eindex.get(t.text).copied().ok_or_else(|| err(l.number, t.column, format!("unknown edge `{}`", t.text)))
    };

    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; vertices.len()];
    for l in &lines {
        match l.tokens[0].text {
            "rot" => {
                if l.tokens.len() < 2 {
                    return Err(err(l.number, l.tokens[0].column, "`rot` expects a vertex and its edges"));
                }
                let v = vertex(l, &l.tokens[1])?;
                if rotation[v].is_some() {
                    return Err(err(l.number, l.tokens[1].column, "duplicate rotation for vertex"));
                }
                let order = l.tokens[2..].iter().map(|t| edge(l, t)).collect::<Result<Vec<_>, _>>()?;
                rotation[v] = Some(order);
            }
            "mass" => {
                arity(l, 3)?;
                let e = edge(l, &l.tokens[1])?;
                let m = l.tokens[2].text;
                if edges[e].mass.is_some() {
                    return Err(err(l.number, l.tokens[1].column, "duplicate mass for edge"));
                }
                if !m.chars().all(|c| c.is_alphanumeric() || c == '_') {
                    return Err(err(l.number, l.tokens[2].column, format!("bad mass symbol `{m}`")));
                }
                if m != "0" {
                    edges[e].mass = Some(Symbol::new(m));
                }
            }
            _ => {}
        }
    }
    Ok(FeynmanGraph::from_parts(vertices, edges, rotation))
}

/// Parse and validate.
pub fn parse_graph(text: &str) -> Result<FeynmanGraph, GraphError> {
    let g = parse_unvalidated(text)?;
    let report = validate(&g);
    if report.is_valid() {
        Ok(g)
    } else {
        Err(GraphError::Invalid(report))
    }
}
