//! Infix parser for scalar coupling expressions such as `g*mZ*sin(tW)^2`.
//!
//! Identifiers become symbols; `cos(tX)` and `sin(tX)` become the symbols
//! `cX` and `sX`. Supports `+ - * / ^`, integer exponents and parentheses.

use super::poly::Polynomial;
use super::ratio::Ratio;
use super::ExprError;

pub fn parse_scalar(src: &str) -> Result<Ratio, ExprError> {
    let mut p = Parser { src, pos: 0 };
    let r = p.sum()?;
    p.skip_ws();
    if p.pos < src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(r)
}

/// Symbol name used for `func(arg)`.
pub fn trig_symbol(func: &str, arg: &str) -> String {
    let head = &func[..1];
    match arg.strip_prefix('t') {
        Some(rest) if !rest.is_empty() => format!("{head}{rest}"),
        _ => format!("{func}_{arg}"),
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> ExprError {
        ExprError::Parse(format!("column {}: {}", self.pos + 1, msg))
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Ratio, ExprError> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.product()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Ratio, ExprError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(self.error("division by zero"));
                }
                let inv = Ratio::from_factors(d.denominator(), vec![(d.numerator().clone(), 1)]);
                acc = acc.mul(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Ratio, ExprError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ratio, ExprError> {
        let base = self.atom()?;
        if self.eat('^') {
            self.skip_ws();
            let digits = self.take_while(|c| c.is_ascii_digit());
            let n: u32 = digits.parse().map_err(|_| self.error("expected integer exponent"))?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn take_while(&mut self, f: impl Fn(char) -> bool) -> &str {
        let start = self.pos;
        while self.peek().is_some_and(&f) {
            self.pos += self.peek().map_or(0, char::len_utf8);
        }
        &self.src[start..self.pos]
    }

    fn atom(&mut self) -> Result<Ratio, ExprError> {
        self.skip_ws();
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let r = self.sum()?;
                if !self.eat(')') {
                    return Err(self.error("expected `)`"));
                }
                Ok(r)
            }
            Some(c) if c.is_ascii_digit() => {
                let digits = self.take_while(|c| c.is_ascii_digit());
                let n: i64 = digits.parse().map_err(|_| self.error("integer too large"))?;
                Ok(Ratio::integer(n))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let name = self.take_while(|c| c.is_alphanumeric() || c == '_').to_string();
                if self.eat('(') {
                    self.skip_ws();
                    let arg = self.take_while(|c| c.is_alphanumeric() || c == '_').to_string();
                    if arg.is_empty() || !self.eat(')') {
                        return Err(self.error("expected `name(symbol)`"));
                    }
                    return Ok(Ratio::from_poly(Polynomial::named(&trig_symbol(&name, &arg))));
                }
                Ok(Ratio::from_poly(Polynomial::named(&name)))
            }
            Some(_) => Err(self.error("unexpected character")),
            None => Err(self.error("unexpected end of expression")),
        }
    }
}
