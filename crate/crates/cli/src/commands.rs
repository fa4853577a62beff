use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;

use corolla_core::corolla::{
    apply_differential, corolla, corolla_differential, corolla_summand, schwinger_res_reg, CorollaError,
    CorollaPolynomial, Variant,
};
use corolla_core::electroweak::{
    apply_ew, coupling_product, gauge_boson_labelings, j_factor, labeling_family, parse_rules, scalar_sets,
    CouplingRuleTable, ElectroweakError, ExternalPolicy,
};
use corolla_core::expr::json::to_json;
use corolla_core::expr::render::{render, Style};
use corolla_core::expr::{ExprError, Expression, Format, Routing};
use corolla_core::graph::{
    all_cycles, disjoint_cycle_tuples, parse_graph, spanning_2forests, spanning_trees, two_factors, EdgeSet,
    FeynmanGraph, GraphError,
};
use corolla_core::parametric::{
    automatic_routing, check_conservation, first_symanzik, forest_terms, parametric_integrand, parse_routing,
    render_forest_terms, second_symanzik, RoutingError,
};

use crate::{Command, Common, Externals, OutputFormat};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Computation(String),
}

fn in_file(path: &Path, e: impl std::fmt::Display) -> String {
    format!("{}: {e}", path.display())
}

impl CliError {
    fn graph(path: &Path, e: GraphError) -> Self {
        match e {
            GraphError::Parse { .. } => CliError::Parse(in_file(path, e)),
            GraphError::Invalid(_) | GraphError::Disconnected => CliError::Validation(in_file(path, e)),
        }
    }
}

impl From<ExprError> for CliError {
    fn from(e: ExprError) -> Self {
        CliError::Computation(e.to_string())
    }
}

impl From<CorollaError> for CliError {
    fn from(e: CorollaError) -> Self {
        match e {
            CorollaError::Graph(GraphError::Disconnected) | CorollaError::NotInternal(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Computation(other.to_string()),
        }
    }
}

impl From<ElectroweakError> for CliError {
    fn from(e: ElectroweakError) -> Self {
        match e {
            ElectroweakError::Graph(GraphError::Disconnected) => CliError::Validation(e.to_string()),
            ElectroweakError::Corolla(c) => c.into(),
            other => CliError::Computation(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Usage(in_file(path, e)))
}

fn load_graph(c: &Common) -> Result<FeynmanGraph, CliError> {
    parse_graph(&read(&c.graph)?).map_err(|e| CliError::graph(&c.graph, e))
}

fn load_routing(g: &FeynmanGraph, c: &Common) -> Result<Routing, CliError> {
    let auto = automatic_routing(g);
    let Some(path) = &c.routing else {
        return Ok(auto);
    };
    let routing = parse_routing(&read(path)?, g, &auto).map_err(|e| match e {
        RoutingError::Parse { .. } => CliError::Parse(in_file(path, e)),
        RoutingError::Conservation(_) => CliError::Validation(in_file(path, e)),
    })?;
    check_conservation(g, &routing).map_err(|e| CliError::Validation(in_file(path, e)))?;
    Ok(routing)
}

fn load_rules(c: &Common) -> Result<CouplingRuleTable, CliError> {
    let path = c.rules.as_ref().ok_or_else(|| CliError::Usage("this subcommand needs --rules".into()))?;
    parse_rules(&read(path)?).map_err(|e| match e {
        ElectroweakError::Rules { .. } => CliError::Parse(in_file(path, e)),
        other => other.into(),
    })
}

fn edge_ids(g: &FeynmanGraph, ids: &[String]) -> Result<EdgeSet, CliError> {
    ids.iter().map(|id| g.edge_index(id).ok_or_else(|| CliError::Usage(format!("unknown edge `{id}`")))).collect()
}

fn policy(c: &Common) -> ExternalPolicy {
    match c.externals {
        Externals::Free => ExternalPolicy::Free,
        Externals::Uniform => ExternalPolicy::Uniform,
    }
}

fn set_text(g: &FeynmanGraph, s: &EdgeSet) -> String {
    let ids: Vec<&str> = s.iter().map(|&e| g.edge(e).id.as_str()).collect();
    format!("{{{}}}", ids.join(","))
}

fn set_json(g: &FeynmanGraph, s: &EdgeSet) -> Value {
    s.iter().map(|&e| Value::from(g.edge(e).id.clone())).collect()
}

fn expr_json(e: &Expression) -> Value {
    serde_json::from_str(&to_json(e)).expect("expression JSON is well formed")
}

fn show(e: &Expression, f: OutputFormat) -> String {
    match f {
        OutputFormat::Text => render(e, Format::Text),
        OutputFormat::Latex => render(e, Format::Latex),
        OutputFormat::Json => to_json(e),
    }
}

fn style(f: OutputFormat) -> Style {
    match f {
        OutputFormat::Latex => Style::Latex,
        _ => Style::Text,
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// `name = value` for text and LaTeX, the bare JSON otherwise.
fn labeled(name: &str, latex: &str, e: &Expression, f: OutputFormat) -> String {
    match f {
        OutputFormat::Text => format!("{name} = {}\n", show(e, f)),
        OutputFormat::Latex => format!("{latex} = {}\n", show(e, f)),
        OutputFormat::Json => format!("{}\n", show(e, f)),
    }
}

pub fn run(cmd: &Command) -> Result<String, CliError> {
    match cmd {
        Command::Symanzik(c) => symanzik(c),
        Command::Integrand(c) => {
            let g = load_graph(c)?;
            let pi = parametric_integrand(&g).map_err(|e| CliError::graph(&c.graph, e))?;
            Ok(labeled("I", "I", &pi.full(), c.format))
        }
        Command::Corolla(c) => {
            let g = load_graph(c)?;
            let p = match c.ghost_order {
                Some(i) => corolla_summand(&g, i),
                None => corolla(&g, Variant::Plain),
            };
            Ok(corolla_output(&g, &p, c.format))
        }
        Command::Diff(c) => {
            let g = load_graph(c)?;
            let routing = load_routing(&g, c)?;
            let d = corolla_differential(&g, &corolla(&g, Variant::Qcd));
            let app = apply_differential(&g, &d, &routing)?;
            Ok(labeled("gauge factor", r"\mathrm{gauge\ factor}", &app.gauge_factor, c.format))
        }
        Command::Resreg(c) => {
            let g = load_graph(c)?;
            let routing = load_routing(&g, c)?;
            let shrink = edge_ids(&g, &c.shrink)?;
            let d = corolla_differential(&g, &corolla(&g, Variant::Qcd));
            let app = apply_differential(&g, &d, &routing)?;
            let out = schwinger_res_reg(&g, &app.full, &shrink)?;
            Ok(labeled("result", r"\mathrm{result}", &out, c.format))
        }
        Command::EwGauge(c) => ew_gauge(c),
        Command::EwScalar(c) => ew_scalar(c),
        Command::EwApply(c) => {
            let g = load_graph(c)?;
            let rules = load_rules(c)?;
            let routing = load_routing(&g, c)?;
            let out = apply_ew(&g, &rules, policy(c), &routing)?;
            Ok(labeled("result", r"\mathrm{result}", &out, c.format))
        }
        Command::Enumerate(c) => enumerate(c),
    }
}

fn symanzik(c: &Common) -> Result<String, CliError> {
    let g = load_graph(c)?;
    let graph_err = |e| CliError::graph(&c.graph, e);
    let psi = Expression::from_poly(first_symanzik(&g).map_err(graph_err)?);
    let terms = forest_terms(&g).map_err(graph_err)?;
    Ok(match c.format {
        OutputFormat::Json => {
            let phi = Expression::from_poly_tensor(&second_symanzik(&g).map_err(graph_err)?);
            pretty(&json!({ "psi": expr_json(&psi), "phi": expr_json(&phi) }))
        }
        OutputFormat::Text => {
            format!("psi = {}\nphi = {}\n", show(&psi, c.format), render_forest_terms(&terms, Style::Text))
        }
        OutputFormat::Latex => {
            format!("\\psi = {}\n\\varphi = {}\n", show(&psi, c.format), render_forest_terms(&terms, Style::Latex))
        }
    })
}

fn corolla_output(g: &FeynmanGraph, p: &CorollaPolynomial, f: OutputFormat) -> String {
    if f != OutputFormat::Json {
        return format!("{}\n", p.render(g, style(f)));
    }
    let terms: Vec<Value> = p
        .terms()
        .map(|(d, m, coeff)| {
            let vars: Vec<String> = m.iter().map(|v| v.render(g, Style::Text)).collect();
            json!({ "ghost_degree": d, "monomial": vars, "coefficient": expr_json(coeff) })
        })
        .collect();
    pretty(&json!({ "terms": terms }))
}

fn ew_gauge(c: &Common) -> Result<String, CliError> {
    let g = load_graph(c)?;
    let j = j_factor(&g).map_err(|e| CliError::graph(&c.graph, e))?;
    let ls = gauge_boson_labelings(&g);
    if c.format == OutputFormat::Json {
        let rows: Vec<Value> = ls
            .iter()
            .map(|l| {
                json!({
                    "w": set_json(&g, &l.w_factor.edges),
                    "z": set_json(&g, &l.z_set),
                    "a": set_json(&g, &l.a_set),
                    "sym": l.sym,
                    "iso": l.iso,
                })
            })
            .collect();
        return Ok(pretty(&json!({ "j": expr_json(&j), "labelings": rows })));
    }
    let mut out = labeled("J", "J", &j, c.format);
    let _ = writeln!(out, "labelings: {}", ls.len());
    for l in &ls {
        let _ = writeln!(
            out,
            "W {} Z {} A {} sym {} iso {} sym*iso {}",
            set_text(&g, &l.w_factor.edges),
            set_text(&g, &l.z_set),
            set_text(&g, &l.a_set),
            l.sym,
            l.iso,
            l.sym * l.iso
        );
    }
    Ok(out)
}

fn ew_scalar(c: &Common) -> Result<String, CliError> {
    let g = load_graph(c)?;
    let rules = load_rules(c)?;
    let only = c.scalar.as_ref().map(|ids| edge_ids(&g, ids)).transpose()?;
    let i = c.ghost_order.unwrap_or(0);
    let mut text = String::new();
    let mut blocks = Vec::new();
    for ghosts in disjoint_cycle_tuples(&g, i) {
        let ghost_edges: EdgeSet = ghosts.iter().flat_map(|c| c.edges.iter().copied()).collect();
        let family = labeling_family(&g, &ghosts, &rules, policy(c));
        let _ = writeln!(text, "ghosts {}", set_text(&g, &ghost_edges));
        let mut sets_json = Vec::new();
        for s in scalar_sets(&g, &ghosts) {
            if only.as_ref().is_some_and(|p| *p != s.p_hg) {
                continue;
            }
            let h2: Vec<(String, Vec<String>)> = s
                .p4
                .iter()
                .map(|&e| {
                    let hs = s.h2_of(e).map_or(Vec::new(), |pair| pair.iter().map(|h| g.half_edge_label(*h)).collect());
                    (g.edge(e).id.clone(), hs)
                })
                .collect();
            let members: Vec<_> = family.iter().filter(|w| w.sets == s).collect();
            let _ = write!(text, "  P {} P4 {}", set_text(&g, &s.p_hg), set_text(&g, &s.p4));
            for (e, hs) in &h2 {
                let _ = write!(text, " H2({e}) {{{}}}", hs.join(","));
            }
            let _ = writeln!(text, " labelings {}", members.len());
            let mut rows = Vec::new();
            for w in members {
                let coupling = coupling_product(&g, &w.labeling, &s, &rules)?;
                let _ = writeln!(
                    text,
                    "    {}  coupling {}  sym {} iso {}",
                    w.labeling.render(&g),
                    show(&coupling, c.format),
                    w.sym,
                    w.iso
                );
                rows.push(json!({
                    "labels": w.labeling.render(&g),
                    "coupling": expr_json(&coupling),
                    "sym": w.sym,
                    "iso": w.iso,
                }));
            }
            let h2_json: serde_json::Map<String, Value> = h2.into_iter().map(|(e, hs)| (e, Value::from(hs))).collect();
            sets_json.push(json!({
                "p_hg": set_json(&g, &s.p_hg),
                "p4": set_json(&g, &s.p4),
                "h2": h2_json,
                "labelings": rows,
            }));
        }
        blocks.push(json!({ "ghosts": set_json(&g, &ghost_edges), "sets": sets_json }));
    }
    Ok(if c.format == OutputFormat::Json { pretty(&Value::from(blocks)) } else { text })
}

fn enumerate(c: &Common) -> Result<String, CliError> {
    let g = load_graph(c)?;
    let trees = spanning_trees(&g).map_err(|e| CliError::graph(&c.graph, e))?;
    let forests = spanning_2forests(&g);
    let factors = two_factors(&g);
    let cycles = all_cycles(&g);
    let names = |vs: &std::collections::BTreeSet<usize>| -> Vec<String> {
        vs.iter().map(|&v| g.vertices()[v].clone()).collect()
    };
    if c.format == OutputFormat::Json {
        let v = json!({
            "spanning_trees": trees.iter().map(|t| set_json(&g, t)).collect::<Vec<_>>(),
            "spanning_2forests": forests.iter().map(|f| json!({
                "edges": set_json(&g, &f.edges),
                "first": names(&f.first),
                "second": names(&f.second),
            })).collect::<Vec<_>>(),
            "two_factors": factors.iter().map(|f| set_json(&g, &f.edges)).collect::<Vec<_>>(),
            "cycles": cycles.iter().map(|c| set_json(&g, &c.edges)).collect::<Vec<_>>(),
        });
        return Ok(pretty(&v));
    }
    let mut out = String::new();
    let _ = writeln!(out, "spanning trees: {}", trees.len());
    for t in &trees {
        let _ = writeln!(out, "  {}", set_text(&g, t));
    }
    let _ = writeln!(out, "spanning 2-forests: {}", forests.len());
    for f in &forests {
        let _ = writeln!(
            out,
            "  {} | {} / {}",
            set_text(&g, &f.edges),
            names(&f.first).join(","),
            names(&f.second).join(",")
        );
    }
    let _ = writeln!(out, "2-factors: {}", factors.len());
    for f in &factors {
        let _ = writeln!(out, "  {}", set_text(&g, &f.edges));
    }
    let _ = writeln!(out, "cycles: {}", cycles.len());
    for cy in &cycles {
        let _ = writeln!(out, "  {}", set_text(&g, &cy.edges));
    }
    Ok(out)
}
