//! Text and JSON forms of series.
//!
//! ```text
//! series := ['-'] item (('+' | '-') item)*
//! item   := coeff ['*' mono] | mono | 'O(' mono ')'
//! mono   := 't' ['^' exp]
//! exp    := ['-'] int | '(' ['-'] int ['/' int] ')'
//! ```
//!
//! Coefficients use the coefficient grammar at product level, so sums must be
//! parenthesized: `(1 + z4)*t^(1/2)`. `O(..)` must come last.

use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

use super::series::{Precision, PuiseuxSeries};
use crate::coeff::parse::CoeffParser;
use crate::coeff::rational::{fmt_rational, parse_rational};
use crate::coeff::{parse_coeff_in, Coeff, Field, Rational};
use crate::error::{Error, Result};

const MAX_TERMS: usize = 100_000;

struct Scanner<'a> {
    s: &'a str,
    pos: usize,
    ctx: Field,
}

impl<'a> Scanner<'a> {
    fn bytes(&self) -> &'a [u8] {
        self.s.as_bytes()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes().get(self.pos).copied()
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

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.bytes()[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(format!("expected digits at offset {start}")));
        }
        Ok(&self.s[start..self.pos])
    }

    fn exponent(&mut self) -> Result<Rational> {
        if self.eat(b'(') {
            let neg = self.eat(b'-');
            let n = self.digits()?;
            let mut text = String::from(n);
            if self.eat(b'/') {
                text.push('/');
                text.push_str(self.digits()?);
            }
            self.expect(b')')?;
            let r = parse_rational(&text)?;
            Ok(if neg { -r } else { r })
        } else {
            let neg = self.eat(b'-');
            let r = parse_rational(self.digits()?)?;
            Ok(if neg { -r } else { r })
        }
    }

    /// `t` with optional exponent; the `t` must be next.
    fn mono(&mut self) -> Result<Rational> {
        self.expect(b't')?;
        if self.eat(b'^') {
            self.exponent()
        } else {
            Ok(Rational::one())
        }
    }

    fn coeff(&mut self) -> Result<Coeff> {
        let mut p = CoeffParser::new(&self.s[self.pos..], self.ctx);
        let c = p.term()?;
        self.pos += p.pos;
        self.ctx = p.ctx;
        Ok(c)
    }
}

/// Parses the series text form.
pub fn parse_series(s: &str) -> Result<PuiseuxSeries> {
    parse_series_in(s, Field::RATIONALS)
}

/// Parses a series, taking coefficient square roots inside `ctx`.
pub fn parse_series_in(s: &str, ctx: Field) -> Result<PuiseuxSeries> {
    let mut sc = Scanner { s, pos: 0, ctx };
    let mut terms = Vec::new();
    let mut prec = Precision::Exact;
    let mut neg = sc.eat(b'-');
    loop {
        if terms.len() > MAX_TERMS {
            return Err(Error::parse("too many terms"));
        }
        match sc.peek() {
            Some(b'O') => {
                sc.pos += 1;
                sc.expect(b'(')?;
                let p = sc.mono()?;
                sc.expect(b')')?;
                if neg {
                    return Err(Error::parse("`- O(..)` is not allowed"));
                }
                prec = Precision::Finite(p);
                if sc.peek().is_some() {
                    return Err(Error::parse(format!("input after O-term at offset {}", sc.pos)));
                }
                break;
            }
            Some(b't') => {
                let e = sc.mono()?;
                let c = if neg { Coeff::from_i64(-1) } else { Coeff::one() };
                terms.push((e, c));
            }
            Some(_) => {
                let mut c = sc.coeff()?;
                if neg {
                    c = c.neg();
                }
                let e = if sc.eat(b'*') { sc.mono()? } else { Rational::zero() };
                terms.push((e, c));
            }
            None => return Err(Error::parse("unexpected end of series")),
        }
        if sc.eat(b'+') {
            neg = false;
        } else if sc.eat(b'-') {
            neg = true;
        } else if sc.peek().is_none() {
            break;
        } else {
            return Err(Error::parse(format!("unexpected input at offset {}", sc.pos)));
        }
    }
    if let Precision::Finite(p) = &prec {
        if let Some((e, _)) = terms.iter().find(|(e, _)| e >= p) {
            return Err(Error::parse(format!("term t^({e}) is not below the precision O(t^({p}))")));
        }
    }
    PuiseuxSeries::from_terms(terms, prec)
}

fn fmt_mono(e: &Rational) -> String {
    if e.is_one() {
        "t".to_string()
    } else if e.is_integer() && *e > Rational::zero() {
        format!("t^{}", e)
    } else {
        format!("t^({})", fmt_rational(e))
    }
}

/// Coefficient text, parenthesized when it is a sum.
fn fmt_coeff(c: &Coeff) -> String {
    let s = c.to_string();
    let body = s.strip_prefix('-').unwrap_or(&s);
    if body.contains(" + ") || body.contains(" - ") {
        format!("({s})")
    } else {
        s
    }
}

fn fmt_term(e: &Rational, c: &Coeff) -> String {
    if e.is_zero() {
        return fmt_coeff(c);
    }
    if c.is_one() {
        return fmt_mono(e);
    }
    if c.neg().is_one() {
        return format!("-{}", fmt_mono(e));
    }
    format!("{}*{}", fmt_coeff(c), fmt_mono(e))
}

impl fmt::Display for PuiseuxSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.terms().iter().map(|(e, c)| fmt_term(e, c)).collect();
        if let Precision::Finite(p) = self.precision() {
            parts.push(format!("O({})", fmt_mono(p)));
        }
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts[0])?;
        for p in &parts[1..] {
            match p.strip_prefix('-') {
                Some(rest) => write!(f, " - {rest}")?,
                None => write!(f, " + {p}")?,
            }
        }
        Ok(())
    }
}

/// `{"m", "terms": [{"exp", "coeff"}], "precision"}`.
pub fn series_to_json(s: &PuiseuxSeries) -> Value {
    let terms: Vec<Value> = s
        .terms()
        .iter()
        .map(|(e, c)| json!({"exp": fmt_rational(e), "coeff": c.to_string()}))
        .collect();
    let precision = match s.precision() {
        Precision::Exact => "exact".to_string(),
        Precision::Finite(p) => fmt_rational(p),
    };
    json!({"m": s.ramification(), "terms": terms, "precision": precision})
}

pub fn series_from_json(v: &Value) -> Result<PuiseuxSeries> {
    let obj = v.as_object().ok_or_else(|| Error::parse("series must be a JSON object"))?;
    let m = obj
        .get("m")
        .and_then(Value::as_u64)
        .filter(|&m| m >= 1)
        .ok_or_else(|| Error::parse("`m` must be a positive integer"))?;
    let prec = match obj.get("precision").and_then(Value::as_str) {
        Some("exact") => Precision::Exact,
        Some(p) => Precision::Finite(parse_rational(p)?),
        None => return Err(Error::parse("`precision` must be a string")),
    };
    let items = obj
        .get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::parse("`terms` must be an array"))?;
    if items.len() > MAX_TERMS {
        return Err(Error::parse("too many terms"));
    }
    let mut ctx = Field::RATIONALS;
    let mut terms: Vec<(Rational, Coeff)> = Vec::with_capacity(items.len());
    for it in items {
        let e = it
            .get("exp")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("term `exp` must be a string"))?;
        let e = parse_rational(e)?;
        let c = it
            .get("coeff")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("term `coeff` must be a string"))?;
        let c = parse_coeff_in(c, ctx)?;
        ctx = ctx.join(c.field())?;
        let d = e.denom();
        if (num_bigint::BigInt::from(m) % d) != num_bigint::BigInt::zero() {
            return Err(Error::parse(format!("exponent {e} has a denominator not dividing m = {m}")));
        }
        if !prec.covers(&e) {
            return Err(Error::parse(format!("exponent {e} is not below the precision")));
        }
        if terms.iter().any(|(x, _)| x == &e) {
            return Err(Error::parse(format!("duplicate exponent {e}")));
        }
        terms.push((e, c));
    }
    PuiseuxSeries::from_terms(terms, prec)
}
