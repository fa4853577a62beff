//! Coupling-rule files:
//!
//! ```text
//! # comment
//! rule 3 W,W,Z = g*cos(tW)
//! mass W mW
//! ```

use std::collections::BTreeMap;

use crate::expr::parse::parse_scalar;
use crate::expr::{ExprError, Expression, Ratio, Symbol};

use super::{ElectroweakError, Particle};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CouplingRuleTable {
    /// Keyed by the sorted label multiset; the valence is its length.
    rules: BTreeMap<Vec<Particle>, Ratio>,
    masses: BTreeMap<Particle, Symbol>,
}

impl CouplingRuleTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Insert a rule, replacing any previous one for the same multiset.
    pub fn insert(&mut self, mut labels: Vec<Particle>, coupling: Ratio) {
        labels.sort_unstable();
        self.rules.insert(labels, coupling);
    }

    pub fn set_mass(&mut self, p: Particle, m: Option<Symbol>) {
        match m {
            Some(m) => self.masses.insert(p, m),
            None => self.masses.remove(&p),
        };
    }

    pub fn coupling(&self, labels: &[Particle]) -> Option<&Ratio> {
        let mut key = labels.to_vec();
        key.sort_unstable();
        self.rules.get(&key)
    }

    pub fn mass(&self, p: Particle) -> Option<&Symbol> {
        self.masses.get(&p)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&[Particle], &Ratio)> {
        self.rules.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Keep only rules whose labels all satisfy `keep`.
    pub fn restricted(&self, keep: impl Fn(Particle) -> bool) -> Self {
        let rules = self.rules.iter().filter(|(k, _)| k.iter().all(|&p| keep(p))).map(|(k, v)| (k.clone(), v.clone()));
        CouplingRuleTable { rules: rules.collect(), masses: self.masses.clone() }
    }

    /// Same multisets, every coupling set to zero.
    pub fn zeroed(&self) -> Self {
        CouplingRuleTable {
            rules: self.rules.keys().map(|k| (k.clone(), Ratio::zero())).collect(),
            masses: self.masses.clone(),
        }
    }

    pub fn coupling_expression(&self, labels: &[Particle]) -> Result<Expression, ElectroweakError> {
        self.coupling(labels).map(|r| Expression::from_ratio(r.clone())).ok_or_else(|| {
            let mut sorted = labels.to_vec();
            sorted.sort_unstable();
            let names: Vec<&str> = sorted.iter().map(|p| p.name()).collect();
            ElectroweakError::MissingRule { valence: labels.len(), labels: names.join(",") }
        })
    }
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ElectroweakError {
    ElectroweakError::Rules { line, column, message: message.into() }
}

/// Schwinger parameters are `A` followed by an edge id; none may appear in a coupling.
fn looks_like_schwinger(s: &Symbol) -> bool {
    let n = s.name();
    n.len() > 1 && n.starts_with('A') && n[1..].chars().all(|c| c.is_ascii_digit())
}

pub fn parse_rules(text: &str) -> Result<CouplingRuleTable, ElectroweakError> {
    let mut table = CouplingRuleTable::new();
    let mut seen_mass = BTreeMap::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("");
        let trimmed = content.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let offset = content.len() - trimmed.len();
        let (head, rest) = trimmed.split_once(char::is_whitespace).unwrap_or((trimmed, ""));
        let rest_col = offset + head.len() + 2;
        match head {
            "rule" => parse_rule(line, rest_col, rest, &mut table)?,
            "mass" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() != 2 {
                    return Err(err(line, offset + 1, "expected `mass <label> <symbol>`"));
                }
                let col = rest_col + rest.find(toks[0]).unwrap_or(0);
                let p = Particle::from_name(toks[0])
                    .ok_or_else(|| err(line, col, format!("unknown label `{}`", toks[0])))?;
                if seen_mass.insert(p, line).is_some() {
                    return Err(err(line, col, format!("duplicate mass for `{p}`")));
                }
                let m = (toks[1] != "0").then(|| Symbol::new(toks[1]));
                table.set_mass(p, m);
            }
            other => return Err(err(line, offset + 1, format!("unknown directive `{other}`"))),
        }
    }
    Ok(table)
}

fn parse_rule(line: usize, col: usize, rest: &str, table: &mut CouplingRuleTable) -> Result<(), ElectroweakError> {
    let Some((lhs, rhs)) = rest.split_once('=') else {
        return Err(err(line, col, "expected `=`"));
    };
    let lhs_trim = lhs.trim_start();
    let lhs_col = col + lhs.len() - lhs_trim.len();
    let (valence, labels) = lhs_trim.split_once(char::is_whitespace).unwrap_or((lhs_trim, ""));
    let valence: usize = valence.parse().map_err(|_| err(line, lhs_col, format!("bad valence `{valence}`")))?;
    let label_col = lhs_col + lhs_trim.len() - labels.trim_start().len();
    let mut particles = Vec::new();
    for name in labels.split(',').map(str::trim) {
        let p = Particle::from_name(name).ok_or_else(|| err(line, label_col, format!("unknown label `{name}`")))?;
        particles.push(p);
    }
    if particles.len() != valence {
        return Err(err(line, label_col, format!("{} labels for valence {valence}", particles.len())));
    }
    if !(3..=4).contains(&valence) {
        return Err(err(line, lhs_col, "valence must be 3 or 4"));
    }
    if table.coupling(&particles).is_some() {
        return Err(err(line, label_col, "duplicate rule"));
    }
    let rhs_col = col + lhs.len() + 1;
    let coupling = parse_scalar(rhs.trim()).map_err(|e| match e {
        ExprError::Parse(m) => {
            let start = rhs_col + rhs.len() - rhs.trim_start().len();
            // The expression parser reports columns relative to the coupling.
            let inner = m.strip_prefix("column ").and_then(|s| s.split_once(": "));
            match inner.and_then(|(n, msg)| Some((n.parse::<usize>().ok()?, msg))) {
                Some((n, msg)) => err(line, start + n - 1, msg),
                None => err(line, start, m),
            }
        }
        other => err(line, rhs_col, other.to_string()),
    })?;
    let mut syms = coupling.numerator().symbols();
    syms.extend(coupling.denominator().symbols());
    if let Some(s) = syms.iter().find(|s| looks_like_schwinger(s)) {
        return Err(err(line, rhs_col, format!("coupling mentions Schwinger parameter `{s}`")));
    }
    table.insert(particles, coupling);
    Ok(())
}
