//! Text grammar for coefficients.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? int)?
//! atom  := int | 'z' int | 'sqrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! `z<n>` is ζ_n. Square roots are taken in the field generated by everything
//! parsed so far, left to right, so printed elements re-parse to equal values.

use num_bigint::BigInt;

use super::rational::Rational;
use super::tower::{Coeff, Field};
use crate::error::{Error, Result};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: i64 = 4096;
const MAX_ORDER: u32 = 1024;

pub(crate) struct CoeffParser<'a> {
    s: &'a [u8],
    pub(crate) pos: usize,
    pub(crate) ctx: Field,
    depth: usize,
}

impl<'a> CoeffParser<'a> {
    pub(crate) fn new(s: &'a str, ctx: Field) -> Self {
        CoeffParser { s: s.as_bytes(), pos: 0, ctx, depth: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(Error::parse(format!("expected `{}` at offset {}", c as char, self.pos)))
        }
    }

    fn note(&mut self, v: &Coeff) -> Result<()> {
        self.ctx = self.ctx.join(v.field())?;
        Ok(())
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(format!("expected digits at offset {start}")));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(text.parse().unwrap())
    }

    fn small_int(&mut self) -> Result<i64> {
        let v = self.int()?;
        i64::try_from(v).map_err(|_| Error::parse("integer too large"))
    }

    pub(crate) fn expr(&mut self) -> Result<Coeff> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::parse("expression nested too deeply"));
        }
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = acc.add(&t)?;
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = acc.sub(&t)?;
            } else {
                break;
            }
        }
        self.note(&acc)?;
        self.depth -= 1;
        Ok(acc)
    }

    pub(crate) fn term(&mut self) -> Result<Coeff> {
        let mut acc = self.unary()?;
        loop {
            self.skip_ws();
            // `*t` belongs to the enclosing series term.
            if self.s.get(self.pos) == Some(&b'*') {
                let mut j = self.pos + 1;
                while j < self.s.len() && self.s[j].is_ascii_whitespace() {
                    j += 1;
                }
                if self.s.get(j) == Some(&b't') {
                    break;
                }
            }
            if self.eat(b'*') {
                let f = self.unary()?;
                acc = acc.mul(&f)?;
            } else if self.eat(b'/') {
                let f = self.unary()?;
                acc = acc.div(&f)?;
            } else {
                break;
            }
        }
        self.note(&acc)?;
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Coeff> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::parse("expression nested too deeply"));
        }
        let v = if self.eat(b'-') { self.unary()?.neg() } else { self.power()? };
        self.depth -= 1;
        Ok(v)
    }

    fn power(&mut self) -> Result<Coeff> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            let e = self.small_int()?;
            if e > MAX_EXPONENT {
                return Err(Error::parse("exponent too large"));
            }
            let p = base.pow(e as u32)?;
            let v = if neg { p.inv()? } else { p };
            self.note(&v)?;
            return Ok(v);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Coeff> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                Ok(Coeff::from_rational(Rational::from_integer(n)))
            }
            Some(b'z') => {
                self.pos += 1;
                let n = self.small_int()?;
                if n < 1 || n as u32 > MAX_ORDER {
                    return Err(Error::parse(format!("unsupported root-of-unity order {n}")));
                }
                let v = Coeff::zeta(n as u32, 1);
                self.note(&v)?;
                Ok(v)
            }
            Some(b's') => {
                if !self.s[self.pos..].starts_with(b"sqrt") {
                    return Err(Error::parse(format!("unexpected input at offset {}", self.pos)));
                }
                self.pos += 4;
                self.expect(b'(')?;
                let inner = self.expr()?;
                self.expect(b')')?;
                let v = inner.sqrt_in(self.ctx)?;
                self.note(&v)?;
                Ok(v)
            }
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(b')')?;
                Ok(v)
            }
            _ => Err(Error::parse(format!("unexpected input at offset {}", self.pos))),
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }
}

/// Parses a coefficient expression.
pub fn parse_coeff(s: &str) -> Result<Coeff> {
    parse_coeff_in(s, Field::RATIONALS)
}

/// Parses a coefficient, taking square roots inside `ctx`.
pub fn parse_coeff_in(s: &str, ctx: Field) -> Result<Coeff> {
    let mut p = CoeffParser::new(s, ctx);
    let v = p.expr()?;
    if !p.at_end() {
        return Err(Error::parse(format!("trailing input at offset {}", p.pos)));
    }
    Ok(v)
}
