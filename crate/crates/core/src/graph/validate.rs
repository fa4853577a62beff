use std::fmt;

use super::{EdgeKind, FeynmanGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// Vertex whose total valence is not 3.
    Valence { vertex: String, valence: usize },
    /// Internal edge whose endpoints coincide.
    Tadpole { edge: String },
    /// Rotation that is not a permutation of the incident edges.
    Rotation { vertex: String, detail: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Valence { vertex, valence } => {
                write!(f, "vertex {vertex} has valence {valence}, expected 3")
            }
            Violation::Tadpole { edge } => write!(f, "edge {edge} is a self-loop"),
            Violation::Rotation { vertex, detail } => write!(f, "rotation at {vertex}: {detail}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        write!(f, "{}", parts.join("; "))
    }
}

/// Collect every violation instead of stopping at the first.
pub fn validate(g: &FeynmanGraph) -> ValidationReport {
    let mut violations = Vec::new();
    for (e, edge) in g.edges().iter().enumerate() {
        if let EdgeKind::Internal { start, end } = edge.kind {
            if start == end {
                violations.push(Violation::Tadpole { edge: g.edge(e).id.clone() });
            }
        }
    }
    for v in 0..g.vertex_count() {
        let name = g.vertices()[v].clone();
        let mut incident = g.incident_edges(v);
        if incident.len() != 3 {
            violations.push(Violation::Valence { vertex: name.clone(), valence: incident.len() });
        }
        let mut rot = g.rotation(v).to_vec();
        incident.sort_unstable();
        rot.sort_unstable();
        if rot != incident {
            let ids = |xs: &[usize]| xs.iter().map(|&e| g.edge(e).id.as_str()).collect::<Vec<_>>().join(" ");
            violations.push(Violation::Rotation {
                vertex: name,
                detail: format!("lists [{}] but incident edges are [{}]", ids(g.rotation(v)), ids(&incident)),
            });
        }
    }
    ValidationReport { violations }
}
