//! Recursive-descent parser for generator expressions.
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := atom ['^' uint]
//! atom   := number ['i'] | 'i' | z1 | z2 | zb1 | zb2 | exp '(' expr ')' | '(' expr ')'
//! ```
//!
//! Products are limited to what a [`Generator`] can hold: polynomials multiply
//! freely, an exponential may be scaled by a constant or multiplied by another
//! lone exponential.

use num_complex::Complex;

use super::{ExpWrapped, Generator, MixedPoly, Var};
use crate::error::{Error, Result};
use crate::Real;

pub fn parse_generator<T: Real>(src: &str) -> Result<Generator<T>> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let g = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    if !coefficients_finite(&g) {
        return Err(Error::Parse { pos: 0, msg: "non-finite coefficient".into() });
    }
    Ok(g.to_scalar())
}

fn coefficients_finite(g: &Generator<f64>) -> bool {
    let ok = |p: &MixedPoly<f64>| p.terms().all(|(_, c)| c.re.is_finite() && c.im.is_finite());
    ok(&g.poly) && g.exps.iter().all(|e| ok(&e.base) && e.scale.re.is_finite() && e.scale.im.is_finite())
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type G = Generator<f64>;

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<G> {
        let mut sign = 1.0;
        if self.eat(b'-') {
            sign = -1.0;
        } else {
            self.eat(b'+');
        }
        let mut acc = self.term()?.scale(Complex::new(sign, 0.0));
        loop {
            let s = if self.eat(b'+') {
                1.0
            } else if self.eat(b'-') {
                -1.0
            } else {
                break;
            };
            let t = self.term()?.scale(Complex::new(s, 0.0));
            acc = add(acc, t);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<G> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            let start = self.pos;
            let f = self.factor()?;
            acc = mul(acc, f).ok_or(Error::Parse {
                pos: start,
                msg: "unsupported product (a polynomial times an exponential)".into(),
            })?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<G> {
        let a = self.atom()?;
        if self.eat(b'^') {
            let n = self.uint()?;
            return match a.as_poly() {
                Some(p) => Ok(p.pow(n).into()),
                None => Err(self.err("powers of exponentials are not supported")),
            };
        }
        Ok(a)
    }

    fn uint(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or(Error::Parse { pos: start, msg: "expected a non-negative integer exponent".into() })
    }

    fn ident(&mut self) -> &str {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn atom(&mut self) -> Result<G> {
        let first = self.peek();
        let start = self.pos;
        match first {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let x = self.number()?;
                // `2i` is an imaginary literal
                if self.src.get(self.pos) == Some(&b'i')
                    && !self.src.get(self.pos + 1).is_some_and(|c| c.is_ascii_alphanumeric())
                {
                    self.pos += 1;
                    return Ok(G::constant(Complex::new(0.0, x)));
                }
                Ok(G::constant(Complex::new(x, 0.0)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let id = self.ident().to_string();
                let v = |v| Ok(MixedPoly::var(v).into());
                match id.as_str() {
                    "z1" => v(Var::Z1),
                    "z2" => v(Var::Z2),
                    "zb1" => v(Var::Zb1),
                    "zb2" => v(Var::Zb2),
                    "i" => Ok(G::constant(Complex::new(0.0, 1.0))),
                    "exp" => {
                        if !self.eat(b'(') {
                            return Err(self.err("expected '(' after exp"));
                        }
                        let inner_pos = self.pos;
                        let e = self.expr()?;
                        if !self.eat(b')') {
                            return Err(self.err("expected ')'"));
                        }
                        match e.as_poly() {
                            Some(p) => Ok(ExpWrapped::new(p.clone()).into()),
                            None => Err(Error::Parse {
                                pos: inner_pos,
                                msg: "nested exponentials are not supported".into(),
                            }),
                        }
                    }
                    _ => Err(Error::Parse { pos: start, msg: format!("unknown identifier '{id}'") }),
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<f64> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < s.len() && s[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let mut p = self.pos + 1;
            if p < s.len() && (s[p] == b'+' || s[p] == b'-') {
                p += 1;
            }
            if p < s.len() && s[p].is_ascii_digit() {
                digits(&mut p);
                self.pos = p;
            }
        }
        std::str::from_utf8(&s[start..self.pos])
            .ok()
            .and_then(|t| t.parse().ok())
            .ok_or(Error::Parse { pos: start, msg: "malformed number".into() })
    }
}

fn add(a: G, b: G) -> G {
    let mut exps = a.exps;
    exps.extend(b.exps);
    Generator { poly: &a.poly + &b.poly, exps }
}

fn const_value(p: &MixedPoly<f64>) -> Option<Complex<f64>> {
    if p.is_zero() {
        return Some(Complex::new(0.0, 0.0));
    }
    if p.is_constant() {
        return p.terms().next().map(|(_, c)| *c);
    }
    None
}

fn mul(a: G, b: G) -> Option<G> {
    match (a.exps.is_empty(), b.exps.is_empty()) {
        (true, true) => Some((&a.poly * &b.poly).into()),
        (true, false) => Some(b.scale(const_value(&a.poly)?)),
        (false, true) => Some(a.scale(const_value(&b.poly)?)),
        (false, false) => {
            if !a.poly.is_zero() || !b.poly.is_zero() || a.exps.len() != 1 || b.exps.len() != 1 {
                return None;
            }
            let (x, y) = (&a.exps[0], &b.exps[0]);
            Some(ExpWrapped { scale: x.scale * y.scale, base: &x.base + &y.base }.into())
        }
    }
}
