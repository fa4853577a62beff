//! Polynomials in half-edge variables.

use std::collections::BTreeMap;
use std::fmt;

use crate::expr::render::Style;
use crate::expr::{Expression, Polynomial, Ratio, Symbol, TensorAtom, TensorProduct};
use crate::graph::{disjoint_cycle_tuples, Cycle, FeynmanGraph, HalfEdge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    fn mark(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// `a_{h+}`, `a_{h-}` or `b_h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfEdgeVar {
    A(HalfEdge, Sign),
    B(HalfEdge),
}

impl HalfEdgeVar {
    pub fn half_edge(self) -> HalfEdge {
        match self {
            HalfEdgeVar::A(h, _) | HalfEdgeVar::B(h) => h,
        }
    }

    pub fn render(self, g: &FeynmanGraph, style: Style) -> String {
        let h = self.half_edge();
        let (v, e) = (&g.vertices()[h.vertex], &g.edge(h.edge).id);
        match (self, style) {
            (HalfEdgeVar::A(_, k), Style::Text) => format!("a{}({v},{e})", k.mark()),
            (HalfEdgeVar::B(_), Style::Text) => format!("b({v},{e})"),
            (HalfEdgeVar::A(_, k), Style::Latex) => format!("a_{{({v},{e}){}}}", k.mark()),
            (HalfEdgeVar::B(_), Style::Latex) => format!("b_{{({v},{e})}}"),
        }
    }
}

/// Squarefree monomial: a sorted list of distinct variables.
pub type VarMonomial = Vec<HalfEdgeVar>;

/// Sum of `coefficient * monomial`, each term tagged with its ghost degree.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorollaPolynomial {
    terms: BTreeMap<(usize, VarMonomial), Expression>,
}

impl CorollaPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Expression::one())
    }

    pub fn constant(c: Expression) -> Self {
        let mut p = Self::zero();
        p.add_term(0, Vec::new(), c);
        p
    }

    pub fn var(v: HalfEdgeVar) -> Self {
        let mut p = Self::zero();
        p.add_term(0, vec![v], Expression::one());
        p
    }

    pub fn add_term(&mut self, ghost_degree: usize, mut mono: VarMonomial, c: Expression) {
        if c.is_zero() {
            return;
        }
        mono.sort_unstable();
        let key = (ghost_degree, mono);
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&c),
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    /// `(ghost degree, monomial, coefficient)` in canonical order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &VarMonomial, &Expression)> {
        self.terms.iter().map(|((d, m), c)| (*d, m, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, m, c) in other.terms() {
            out.add_term(d, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Expression::integer(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// Product; a repeated variable would square it, which never happens for
    /// the vertex-disjoint factors built here.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (d1, m1, c1) in self.terms() {
            for (d2, m2, c2) in other.terms() {
                let mut m = m1.clone();
                m.extend(m2.iter().copied());
                out.add_term(d1 + d2, m, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &Expression) -> Self {
        let mut out = Self::zero();
        for (d, m, k) in self.terms() {
            out.add_term(d, m.clone(), k.mul(c));
        }
        out
    }

    /// Terms of one ghost degree.
    pub fn ghost_sector(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (d, m, c) in self.terms() {
            if d == i {
                out.add_term(d, m.clone(), c.clone());
            }
        }
        out
    }

    pub fn render(&self, g: &FeynmanGraph, style: Style) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, (_, m, c)) in self.terms().enumerate() {
            let vars: Vec<String> = m.iter().map(|v| v.render(g, style)).collect();
            let mut coeff = style.expression(c);
            let negative = coeff.starts_with('-') && c.len() == 1;
            if negative {
                coeff = coeff[1..].trim_start().to_string();
            }
            let sep = match (k, negative) {
                (0, false) => "",
                (0, true) => "-",
                (_, false) => " + ",
                (_, true) => " - ",
            };
            out.push_str(sep);
            let body = vars.join(" ");
            match (coeff.as_str(), body.is_empty()) {
                ("1", true) => out.push('1'),
                ("1", false) => out.push_str(&body),
                (_, true) => out.push_str(&coeff),
                _ if c.len() > 1 => out.push_str(&format!("({coeff}) {body}")),
                _ => out.push_str(&format!("{coeff} {body}")),
            }
        }
        out
    }
}

impl fmt::Display for CorollaPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (d, m, c) in self.terms() {
            writeln!(f, "[{d}] {m:?} -> {c:?}")?;
        }
        Ok(())
    }
}

/// `V_v = sum over half-edges h at v of b_h (a_{h+} + a_{h-})`.
pub fn vertex_factor(g: &FeynmanGraph, v: usize) -> CorollaPolynomial {
    let mut out = CorollaPolynomial::zero();
    for h in g.half_edges_at(v) {
        for k in [Sign::Plus, Sign::Minus] {
            out.add_term(0, vec![HalfEdgeVar::B(h), HalfEdgeVar::A(h, k)], Expression::one());
        }
    }
    out
}

/// The half-edge at `v` that is not on `cycle`.
pub fn off_cycle_half_edge(g: &FeynmanGraph, cycle: &Cycle, v: usize) -> HalfEdge {
    g.half_edges_at(v)
        .into_iter()
        .find(|h| !cycle.edges.contains(&h.edge))
        .expect("3-valent vertex has one edge off the cycle")
}

/// `sum over k of prod_{v in C} a_{h(C,v) k}`.
pub fn ghost_factor(g: &FeynmanGraph, cycle: &Cycle) -> CorollaPolynomial {
    let mut out = CorollaPolynomial::zero();
    for k in [Sign::Plus, Sign::Minus] {
        let mono = cycle.vertices.iter().map(|&v| HalfEdgeVar::A(off_cycle_half_edge(g, cycle, v), k)).collect();
        out.add_term(1, mono, Expression::one());
    }
    out
}

/// `C^i`: ghost factors of every `i`-set of disjoint cycles times vertex
/// factors of the remaining vertices.
pub fn corolla_summand(g: &FeynmanGraph, i: usize) -> CorollaPolynomial {
    let mut out = CorollaPolynomial::zero();
    for tuple in disjoint_cycle_tuples(g, i) {
        let mut term = CorollaPolynomial::one();
        let mut covered = vec![false; g.vertex_count()];
        for c in &tuple {
            term = term.mul(&ghost_factor(g, c));
            for &v in &c.vertices {
                covered[v] = true;
            }
        }
        for v in (0..g.vertex_count()).filter(|&v| !covered[v]) {
            term = term.mul(&vertex_factor(g, v));
        }
        out = out.add(&term);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Variant {
    Plain,
    /// Multiply by `i^{|E|} gs^{|V|}` and the opaque color factor.
    Qcd,
}

/// Name of the opaque color-factor token.
pub const COLOR_TOKEN: &str = "color";

/// `sum_i (-1)^i C^i`, including the ghost-free `i = 0` term.
pub fn corolla(g: &FeynmanGraph, variant: Variant) -> CorollaPolynomial {
    let mut out = CorollaPolynomial::zero();
    let mut i = 0;
    loop {
        let c = corolla_summand(g, i);
        if c.is_zero() && i > 0 {
            break;
        }
        out = if i % 2 == 0 { out.add(&c) } else { out.sub(&c) };
        i += 1;
    }
    match variant {
        Variant::Plain => out,
        Variant::Qcd => out.scale(&qcd_prefactor(g)),
    }
}

/// `i^{|E|} gs^{|V|} color`.
pub fn qcd_prefactor(g: &FeynmanGraph) -> Expression {
    let imag = Polynomial::var(Symbol::imaginary_unit()).pow(g.edges().len() as u32);
    let gs = Polynomial::named("gs").pow(g.vertex_count() as u32);
    Expression::term(Ratio::from_poly(&imag * &gs), TensorProduct::atom(TensorAtom::Token(COLOR_TOKEN.into())), None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    const ONE_LOOP: &str = "v a\nv b\ne 1 b a\ne 2 a b\nx 3 a\nx 4 b\nrot a 3 2 1\nrot b 4 1 2\n";

    fn he(g: &FeynmanGraph, v: &str, e: &str) -> HalfEdge {
        HalfEdge { vertex: g.vertex_index(v).unwrap(), edge: g.edge_index(e).unwrap() }
    }

    #[test]
    fn one_loop_ghost_sector() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let c1 = corolla_summand(&g, 1);
        let (alpha, delta) = (he(&g, "a", "3"), he(&g, "b", "4"));
        let mut expected = CorollaPolynomial::zero();
        for k in [Sign::Plus, Sign::Minus] {
            expected.add_term(1, vec![HalfEdgeVar::A(alpha, k), HalfEdgeVar::A(delta, k)], Expression::one());
        }
        assert_eq!(c1, expected);
        assert!(corolla_summand(&g, 2).is_zero());
    }

    #[test]
    fn one_loop_c0_has_36_monomials() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let c0 = corolla_summand(&g, 0);
        assert_eq!(c0.len(), 36);
        for (_, m, c) in c0.terms() {
            assert!(c.is_one());
            assert_eq!(m.iter().filter(|v| matches!(v, HalfEdgeVar::B(_))).count(), 2);
        }
        let c = corolla(&g, Variant::Plain);
        assert_eq!(c, c0.sub(&corolla_summand(&g, 1)));
    }

    #[test]
    fn qcd_prefactor_reduces_powers_of_i() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let p = qcd_prefactor(&g);
        assert_eq!(crate::expr::render::render(&p, crate::expr::Format::Text), "gs^2 color");
    }

    #[test]
    fn render_ghost_sector() {
        let g = parse_graph(ONE_LOOP).unwrap();
        let s = corolla_summand(&g, 1).render(&g, Style::Text);
        assert_eq!(s, "a+(a,3) a+(b,4) + a-(a,3) a-(b,4)");
    }
}
