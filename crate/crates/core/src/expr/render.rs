//! Text, LaTeX and JSON serialization.

use std::fmt::Write as _;

use num_traits::{One, Signed};

use super::expression::Expression;
use super::poly::{Monomial, Polynomial, Q};
use super::quadric::{PolyTensor, Quadric};
use super::ratio::Ratio;
use super::tensor::{TensorAtom, TensorProduct};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "latex" => Ok(Format::Latex),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}`")),
        }
    }
}

pub fn render(expr: &Expression, format: Format) -> String {
    match format {
        Format::Text => Style::Text.expression(expr),
        Format::Latex => Style::Latex.expression(expr),
        Format::Json => super::json::to_json(expr),
    }
}

pub fn render_polynomial(p: &Polynomial, format: Format) -> String {
    match format {
        Format::Text => Style::Text.poly(p),
        Format::Latex => Style::Latex.poly(p),
        Format::Json => super::json::to_json(&Expression::from_poly(p.clone())),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Text,
    Latex,
}

const GREEK: &[&str] = &[
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota", "kappa", "lambda", "mu", "nu", "xi",
    "pi", "rho", "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega",
];

/// LaTeX spelling of a symbol, slot or index name.
pub fn latex_name(name: &str) -> String {
    match name {
        "cW" => return r"\cos\theta_W".to_string(),
        "sW" => return r"\sin\theta_W".to_string(),
        "i" => return "i".to_string(),
        _ => {}
    }
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (base, digits) = name.split_at(split);
    let base_tex = if GREEK.contains(&base) {
        format!("\\{base}")
    } else if base.len() == 2 && (base.starts_with('m') || base.starts_with('g')) {
        format!("{}_{}", &base[..1], &base[1..])
    } else {
        base.to_string()
    };
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return format!("{base_tex}{digits}");
    }
    if digits.len() == 1 {
        format!("{base_tex}_{digits}")
    } else {
        format!("{base_tex}_{{{digits}}}")
    }
}

fn rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl Style {
    fn name(self, n: &str) -> String {
        match self {
            Style::Text => n.to_string(),
            Style::Latex => latex_name(n),
        }
    }

    fn power(self, base: String, e: u32) -> String {
        if e == 1 {
            base
        } else {
            match self {
                Style::Text => format!("{base}^{e}"),
                Style::Latex => format!("{base}^{{{e}}}"),
            }
        }
    }

    fn monomial(self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .factors()
            .iter()
            .map(|(s, e)| {
                let n = self.name(s.name());
                let n = if self == Style::Latex && *e > 1 && n.contains("\\theta") { format!("({n})") } else { n };
                self.power(n, *e)
            })
            .collect();
        parts.join(" ")
    }

    fn coefficient_times(self, c: &Q, body: &str) -> String {
        // c is positive here
        if body.is_empty() {
            return self.number(c);
        }
        if c.is_one() {
            return body.to_string();
        }
        format!("{} {}", self.number(c), body)
    }

    fn number(self, c: &Q) -> String {
        match self {
            Style::Text => rational(c),
            Style::Latex => {
                if c.is_integer() {
                    c.numer().to_string()
                } else {
                    format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
                }
            }
        }
    }

    /// Sum of signed pieces, each given as (negative, magnitude text).
    fn join_signed(pieces: &[(bool, String)]) -> String {
        let mut out = String::new();
        for (k, (neg, body)) in pieces.iter().enumerate() {
            match (k, neg) {
                (0, false) => out.push_str(body),
                (0, true) => {
                    out.push('-');
                    out.push_str(body);
                }
                (_, false) => {
                    out.push_str(" + ");
                    out.push_str(body);
                }
                (_, true) => {
                    out.push_str(" - ");
                    out.push_str(body);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn poly(self, p: &Polynomial) -> String {
        let pieces: Vec<(bool, String)> =
            p.terms().map(|(m, c)| (c.is_negative(), self.coefficient_times(&c.abs(), &self.monomial(m)))).collect();
        Style::join_signed(&pieces)
    }

    /// Polynomial wrapped in parentheses when it has more than one term.
    fn poly_factor(self, p: &Polynomial) -> String {
        let s = self.poly(p);
        if p.len() > 1 || (p.len() == 1 && p.leading().is_some_and(|(_, c)| c.is_negative())) {
            format!("({s})")
        } else {
            s
        }
    }

    fn denominator(self, r: &Ratio) -> String {
        let parts: Vec<String> =
            r.denominator_factors().iter().map(|(f, k)| self.power(self.poly_factor(f), *k)).collect();
        parts.join(" ")
    }

    fn atom(self, a: &TensorAtom) -> String {
        match (self, a) {
            (Style::Text, TensorAtom::Metric(x, y)) => format!("eta({x},{y})"),
            (Style::Text, TensorAtom::Mom(s, i)) => format!("{s}({i})"),
            (Style::Text, TensorAtom::Dot(x, y)) if x == y => format!("{x}^2"),
            (Style::Text, TensorAtom::Dot(x, y)) => format!("{x}.{y}"),
            (Style::Latex, TensorAtom::Metric(x, y)) => {
                format!("\\eta^{{{}{}}}", latex_name(x.name()), latex_name(y.name()))
            }
            (Style::Latex, TensorAtom::Mom(s, i)) => {
                format!("{}^{{{}}}", latex_name(s.name()), latex_name(i.name()))
            }
            (Style::Latex, TensorAtom::Dot(x, y)) if x == y => format!("{}^2", latex_name(x.name())),
            (Style::Latex, TensorAtom::Dot(x, y)) => {
                format!("{} \\cdot {}", latex_name(x.name()), latex_name(y.name()))
            }
            (_, TensorAtom::Token(t)) => t.clone(),
        }
    }

    pub fn tensors(self, t: &TensorProduct) -> String {
        let atoms = t.atoms();
        let mut parts: Vec<String> = Vec::new();
        let mut k = 0;
        while k < atoms.len() {
            let n = atoms[k..].iter().take_while(|a| **a == atoms[k]).count();
            let s = self.atom(&atoms[k]);
            let s = if n > 1 && matches!(atoms[k], TensorAtom::Dot(..)) { format!("({s})") } else { s };
            parts.push(self.power(s, n as u32));
            k += n;
        }
        parts.join(" ")
    }

    fn poly_tensor(self, p: &PolyTensor) -> (Vec<(bool, String)>, usize) {
        let mut pieces = Vec::new();
        for (t, c) in p.terms() {
            let ts = self.tensors(t);
            for (m, k) in c.terms() {
                let body =
                    [self.monomial(m), ts.clone()].into_iter().filter(|s| !s.is_empty()).collect::<Vec<_>>().join(" ");
                pieces.push((k.is_negative(), self.coefficient_times(&k.abs(), &body)));
            }
        }
        let n = pieces.len();
        (pieces, n)
    }

    fn quadric(self, q: &Quadric) -> String {
        let mut out = String::new();
        let ratio = !q.ratio_num().is_zero();
        if ratio {
            let (num, _) = self.poly_tensor(q.ratio_num());
            let num = Style::join_signed(&num);
            let den = self.poly(q.ratio_den());
            match self {
                Style::Text => {
                    let _ = write!(out, "-({num})/({den})");
                }
                Style::Latex => {
                    let _ = write!(out, "-\\frac{{{num}}}{{{den}}}");
                }
            }
        }
        if !q.affine().is_zero() {
            let (aff, n) = self.poly_tensor(q.affine());
            let aff = Style::join_signed(&aff);
            if n == 1 && !ratio {
                let _ = write!(out, "-{aff}");
            } else {
                if ratio {
                    out.push(' ');
                }
                let _ = write!(out, "- ({aff})");
            }
        }
        match self {
            Style::Text => format!("exp({out})"),
            Style::Latex => format!("e^{{{out}}}"),
        }
    }

    /// One term with its sign split off.
    fn term(self, c: &Ratio, t: &TensorProduct, e: Option<&Quadric>) -> (bool, String) {
        let num = c.numerator();
        let single = num.len() == 1;
        let negative = single && num.leading().is_some_and(|(_, k)| k.is_negative());
        let num_abs = if negative { -num } else { num.clone() };
        let tens = self.tensors(t);
        let exp = e.map(|q| self.quadric(q)).unwrap_or_default();
        let has_den = !c.is_polynomial();

        let num_str = if num_abs.is_one() && (!tens.is_empty() || !exp.is_empty()) {
            String::new()
        } else if single || (tens.is_empty() && exp.is_empty() && (self == Style::Latex || !has_den)) {
            self.poly(&num_abs)
        } else {
            format!("({})", self.poly(&num_abs))
        };
        let body = |parts: &[&str]| parts.iter().filter(|s| !s.is_empty()).cloned().collect::<Vec<_>>().join(" ");
        let text = match (self, has_den) {
            (_, false) => body(&[&num_str, &tens, &exp]),
            (Style::Text, true) => {
                let n = if num_str.is_empty() { "1".to_string() } else { num_str };
                let den = self.denominator(c);
                let den = if c.denominator_factors().len() > 1 { format!("({den})") } else { den };
                body(&[&format!("{n}/{den}"), &tens, &exp])
            }
            (Style::Latex, true) => {
                let top = body(&[&num_str, &tens]);
                let top = if top.is_empty() { "1".to_string() } else { top };
                let den = self.denominator(c);
                let den = if c.denominator_factors().len() == 1 {
                    let (f, k) = c.denominator_factors().iter().next().expect("one factor");
                    if *k == 1 {
                        self.poly(f)
                    } else {
                        den
                    }
                } else {
                    den
                };
                body(&[&format!("\\frac{{{top}}}{{{den}}}"), &exp])
            }
        };
        (negative, text)
    }

    pub fn ratio(self, r: &Ratio) -> String {
        if r.is_zero() {
            return "0".to_string();
        }
        let (neg, s) = self.term(r, &TensorProduct::scalar(), None);
        Style::join_signed(&[(neg, s)])
    }

    pub fn expression(self, e: &Expression) -> String {
        let pieces: Vec<(bool, String)> = e.terms().map(|(c, t, q)| self.term(c, t, q)).collect();
        Style::join_signed(&pieces)
    }
}
