//! Preset expressions for standard manifolds.
//!
//! ```text
//! atom := S<n> | CP2 | T<n>
//! expr := atom | prod(expr, expr) | connsum(expr, expr) | connsum^<k>(expr)
//! ```

use crate::error::{Error, Result};
use crate::ring::{make_connected_sum, make_connected_sum_power, make_cp2, make_product, make_sphere, make_torus, GradedRing};

/// Parses and builds a preset; errors carry a character position.
pub fn parse_preset(expr: &str) -> Result<GradedRing> {
    let mut p = Parser {
        chars: expr.chars().collect(),
        pos: 0,
    };
    let ring = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(Error::parse(p.pos, format!("unexpected `{}` after expression", p.chars[p.pos])));
    }
    Ok(ring)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, want: char) -> Result<()> {
        self.skip_ws();
        match self.peek() {
            Some(c) if c == want => {
                self.pos += 1;
                Ok(())
            }
            Some(c) => Err(Error::parse(self.pos, format!("expected `{want}`, found `{c}`"))),
            None => Err(Error::parse(self.pos, format!("expected `{want}`, found end of input"))),
        }
    }

    fn word(&mut self) -> String {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| Error::parse(start, format!("number `{text}` is too large")))
    }

    /// Constructor errors are reported at the start of the offending term.
    fn at(start: usize, r: Result<GradedRing>) -> Result<GradedRing> {
        r.map_err(|e| match e {
            Error::InvalidRing(msg) => Error::parse(start, msg),
            Error::DimensionMismatch { left, right } => {
                Error::parse(start, format!("connected sum of a {left}-manifold and a {right}-manifold"))
            }
            other => other,
        })
    }

    fn expr(&mut self) -> Result<GradedRing> {
        self.skip_ws();
        let start = self.pos;
        let name = self.word();
        match name.as_str() {
            "" => match self.peek() {
                Some(c) => Err(Error::parse(start, format!("expected a manifold, found `{c}`"))),
                None => Err(Error::parse(start, "expected a manifold, found end of input")),
            },
            "S" => {
                let n = self.number()?;
                Self::at(start, make_sphere(n))
            }
            "T" => {
                let n = self.number()?;
                if n > 12 {
                    return Err(Error::parse(start, format!("torus dimension {n} exceeds 12")));
                }
                Self::at(start, make_torus(n))
            }
            "CP" => {
                let n = self.number()?;
                if n != 2 {
                    return Err(Error::parse(start, format!("only CP2 is available, found CP{n}")));
                }
                Ok(make_cp2())
            }
            "prod" | "connsum" => {
                if name == "connsum" && self.peek() == Some('^') {
                    self.pos += 1;
                    let k_pos = self.pos;
                    let k = self.number()?;
                    if k == 0 {
                        return Err(Error::parse(k_pos, "connected-sum power must be at least 1"));
                    }
                    self.expect('(')?;
                    let inner = self.expr()?;
                    self.expect(')')?;
                    return Self::at(start, make_connected_sum_power(&inner, k));
                }
                self.expect('(')?;
                let a = self.expr()?;
                self.expect(',')?;
                let b = self.expr()?;
                self.expect(')')?;
                if name == "prod" {
                    Self::at(start, make_product(&a, &b))
                } else {
                    Self::at(start, make_connected_sum(&a, &b))
                }
            }
            other => Err(Error::parse(start, format!("unknown manifold `{other}`"))),
        }
    }
}
