//! Truncated Puiseux series Σ a_λ t^λ with rational exponents.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::{Coeff, Field, Rational};
use crate::error::{Error, Result};

/// Exponent cutoff: every stored exponent is below a finite precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Precision {
    Exact,
    Finite(Rational),
}

impl Precision {
    pub fn min(&self, other: &Precision) -> Precision {
        match (self, other) {
            (Precision::Exact, p) | (p, Precision::Exact) => p.clone(),
            (Precision::Finite(a), Precision::Finite(b)) => Precision::Finite(a.min(b).clone()),
        }
    }

    pub fn shift(&self, by: &Rational) -> Precision {
        match self {
            Precision::Exact => Precision::Exact,
            Precision::Finite(p) => Precision::Finite(p + by),
        }
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Precision::Exact => None,
            Precision::Finite(p) => Some(p),
        }
    }

    /// Whether an exponent is known (below the cutoff).
    pub fn covers(&self, e: &Rational) -> bool {
        match self {
            Precision::Exact => true,
            Precision::Finite(p) => e < p,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(Rational),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::PlusInfinity, Valuation::PlusInfinity) => Ordering::Equal,
            (Valuation::PlusInfinity, _) => Ordering::Greater,
            (_, Valuation::PlusInfinity) => Ordering::Less,
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
        }
    }
}

/// A Puiseux series with finitely many stored terms, sorted by exponent, no
/// zero coefficients, all exponents below the precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PuiseuxSeries {
    terms: Vec<(Rational, Coeff)>,
    prec: Precision,
}

impl PuiseuxSeries {
    pub fn zero() -> Self {
        PuiseuxSeries { terms: Vec::new(), prec: Precision::Exact }
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::monomial(c, Rational::zero())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::constant(Coeff::from_i64(n))
    }

    pub fn monomial(c: Coeff, e: Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        PuiseuxSeries { terms: vec![(e, c)], prec: Precision::Exact }
    }

    /// t^e.
    pub fn t_pow(e: Rational) -> Self {
        Self::monomial(Coeff::one(), e)
    }

    /// Zero known only up to O(t^p).
    pub fn big_o(p: Rational) -> Self {
        PuiseuxSeries { terms: Vec::new(), prec: Precision::Finite(p) }
    }

    /// Builds a series from arbitrary terms, merging duplicates and dropping
    /// zeros and terms at or above the precision.
    pub fn from_terms(terms: Vec<(Rational, Coeff)>, prec: Precision) -> Result<Self> {
        let mut map: HashMap<Rational, Coeff> = HashMap::new();
        for (e, c) in terms {
            if !prec.covers(&e) || c.is_zero() {
                continue;
            }
            match map.get_mut(&e) {
                Some(acc) => *acc = acc.add(&c)?,
                None => {
                    map.insert(e, c);
                }
            }
        }
        let mut terms: Vec<(Rational, Coeff)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(PuiseuxSeries { terms, prec })
    }

    fn from_sorted(terms: Vec<(Rational, Coeff)>, prec: Precision) -> Self {
        PuiseuxSeries { terms, prec }
    }

    pub fn terms(&self) -> &[(Rational, Coeff)] {
        &self.terms
    }

    pub fn precision(&self) -> &Precision {
        &self.prec
    }

    pub fn is_exact(&self) -> bool {
        self.prec == Precision::Exact
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.is_exact()
    }

    /// Coefficient of t^e, or None when e is beyond the precision.
    pub fn coeff(&self, e: &Rational) -> Option<Coeff> {
        if !self.prec.covers(e) {
            return None;
        }
        Some(
            self.terms
                .iter()
                .find(|(x, _)| x == e)
                .map(|(_, c)| c.clone())
                .unwrap_or_else(Coeff::zero),
        )
    }

    /// Least common denominator of the stored exponents.
    pub fn ramification(&self) -> u64 {
        self.terms
            .iter()
            .fold(1u64, |m, (e, _)| m.lcm(&e.denom().to_u64().unwrap_or(1)))
    }

    pub fn valuation(&self) -> Result<Valuation> {
        match self.terms.first() {
            Some((e, _)) => Ok(Valuation::Finite(e.clone())),
            None => match &self.prec {
                Precision::Exact => Ok(Valuation::PlusInfinity),
                Precision::Finite(p) => Err(Error::indeterminate(format!("series is O(t^({p}))"))),
            },
        }
    }

    /// Finite valuation, failing on zero or undetermined series.
    pub fn val(&self) -> Result<Rational> {
        match self.valuation()? {
            Valuation::Finite(v) => Ok(v),
            Valuation::PlusInfinity => Err(Error::indeterminate("series is exactly zero")),
        }
    }

    /// A lower bound for the valuation: the leading exponent, the precision for
    /// an unresolved zero, or None for exact zero.
    pub fn val_lower(&self) -> Option<Rational> {
        match self.terms.first() {
            Some((e, _)) => Some(e.clone()),
            None => self.prec.finite().cloned(),
        }
    }

    pub fn leading(&self) -> Option<(&Rational, &Coeff)> {
        self.terms.first().map(|(e, c)| (e, c))
    }

    pub fn field(&self) -> Result<Field> {
        let mut f = Field::RATIONALS;
        for (_, c) in &self.terms {
            f = f.join(c.field())?;
        }
        Ok(f)
    }

    /// Drops every term at or above `p` and lowers the precision to `p`.
    pub fn truncate(&self, p: &Rational) -> Self {
        let prec = self.prec.min(&Precision::Finite(p.clone()));
        let terms = self.terms.iter().filter(|(e, _)| prec.covers(e)).cloned().collect();
        Self::from_sorted(terms, prec)
    }

    /// Drops terms at or above `p` but keeps the series marked exact; used for
    /// ball centers, which only matter up to the ball radius.
    pub fn drop_from(&self, p: &Rational) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e < p).cloned().collect();
        Self::from_sorted(terms, self.prec.clone())
    }

    pub fn with_precision(mut self, prec: Precision) -> Self {
        self.prec = self.prec.min(&prec);
        let p = self.prec.clone();
        self.terms.retain(|(e, _)| p.covers(e));
        self
    }

    /// Marks the series as exact (exact finite sum).
    pub fn exactify(mut self) -> Self {
        self.prec = Precision::Exact;
        self
    }

    pub fn neg(&self) -> Self {
        Self::from_sorted(self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(), self.prec.clone())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let prec = self.prec.min(&o.prec);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < o.terms.len() {
            let take = match (self.terms.get(i), o.terms.get(j)) {
                (Some(a), Some(b)) => a.0.cmp(&b.0),
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            let (e, c) = match take {
                Ordering::Less => {
                    i += 1;
                    self.terms[i - 1].clone()
                }
                Ordering::Greater => {
                    j += 1;
                    o.terms[j - 1].clone()
                }
                Ordering::Equal => {
                    i += 1;
                    j += 1;
                    let c = self.terms[i - 1].1.add(&o.terms[j - 1].1)?;
                    (self.terms[i - 1].0.clone(), c)
                }
            };
            if !c.is_zero() && prec.covers(&e) {
                out.push((e, c));
            }
        }
        Ok(Self::from_sorted(out, prec))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn scalar_mul(&self, c: &Coeff) -> Result<Self> {
        if c.is_zero() {
            return Ok(Self::zero());
        }
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, x) in &self.terms {
            out.push((e.clone(), x.mul(c)?));
        }
        Ok(Self::from_sorted(out, self.prec.clone()))
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self::from_sorted(self.terms.iter().map(|(e, c)| (e.clone(), c.scale(r))).collect(), self.prec.clone())
    }

    /// Multiplies by t^e.
    pub fn shift(&self, e: &Rational) -> Self {
        Self::from_sorted(
            self.terms.iter().map(|(x, c)| (x + e, c.clone())).collect(),
            self.prec.shift(e),
        )
    }

    fn product_precision(&self, o: &Self) -> Precision {
        // P_out = min(P_a + o(b), P_b + o(a)).
        if self.is_exact_zero() || o.is_exact_zero() {
            return Precision::Exact;
        }
        let a = match (&self.prec, o.val_lower()) {
            (Precision::Finite(p), Some(v)) => Precision::Finite(p + v),
            _ => Precision::Exact,
        };
        let b = match (&o.prec, self.val_lower()) {
            (Precision::Finite(p), Some(v)) => Precision::Finite(p + v),
            _ => Precision::Exact,
        };
        a.min(&b)
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.mul_capped(o, None)
    }

    /// Product with all exponents at or above `cap` discarded (the precision is
    /// lowered accordingly).
    pub fn mul_capped(&self, o: &Self, cap: Option<&Rational>) -> Result<Self> {
        let mut prec = self.product_precision(o);
        if self.is_exact_zero() || o.is_exact_zero() {
            return Ok(Self::zero());
        }
        if let Some(c) = cap {
            prec = prec.min(&Precision::Finite(c.clone()));
        }
        if self.terms.len() == 1 && o.terms.len() == 1 {
            let e = &self.terms[0].0 + &o.terms[0].0;
            let c = self.terms[0].1.mul(&o.terms[0].1)?;
            let terms = if prec.covers(&e) { vec![(e, c)] } else { vec![] };
            return Ok(Self::from_sorted(terms, prec));
        }
        let mut map: HashMap<Rational, Coeff> = HashMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = ea + eb;
                if !prec.covers(&e) {
                    // Exponents of `o` are sorted, so the rest are larger too.
                    break;
                }
                let c = ca.mul(cb)?;
                match map.get_mut(&e) {
                    Some(acc) => *acc = acc.add(&c)?,
                    None => {
                        map.insert(e, c);
                    }
                }
            }
        }
        let mut terms: Vec<(Rational, Coeff)> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(Self::from_sorted(terms, prec))
    }

    pub fn pow(&self, k: u32, cap: Option<&Rational>) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul_capped(self, cap)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse. The precision follows P_out = P_u − 2·o(u); for an
    /// exact non-monomial input the expansion is cut at `cap`.
    pub fn invert(&self, cap: Option<&Rational>) -> Result<Self> {
        let Some((v, lead)) = self.terms.first().map(|(e, c)| (e.clone(), c.clone())) else {
            return match &self.prec {
                Precision::Exact => Err(Error::DivisionByZero),
                Precision::Finite(p) => Err(Error::indeterminate(format!("cannot invert O(t^({p}))"))),
            };
        };
        let lead_inv = lead.inv()?;
        let mut prec = self.prec.shift(&(-Rational::from_integer(2.into()) * &v));
        if let Some(c) = cap {
            prec = prec.min(&Precision::Finite(c.clone()));
        }
        if self.terms.len() == 1 {
            let e = -v.clone();
            let terms = if prec.covers(&e) { vec![(e, lead_inv)] } else { vec![] };
            return Ok(Self::from_sorted(terms, prec));
        }
        let Precision::Finite(out_p) = prec.clone() else {
            return Err(Error::PrecisionInsufficient(
                "inverse of an exact non-monomial series needs a cutoff".into(),
            ));
        };
        // u = lead·t^v·(1 + w); invert 1 + w by Newton iteration r ← r(2 − (1+w)r)
        // up to relative exponent out_p + v.
        let rel = &out_p + &v;
        let unit = self.shift(&-v.clone()).scalar_mul(&lead_inv)?;
        if rel <= Rational::zero() {
            return Ok(Self::big_o(out_p));
        }
        let mut r = Self::one();
        let mut gained = unit.terms.get(1).map(|(e, _)| e.clone()).unwrap_or_else(|| rel.clone());
        let unit = unit.exactify();
        let two = Self::from_i64(2);
        loop {
            let target = (&gained * Rational::from_integer(2.into())).min(rel.clone());
            let ur = unit.mul_capped(&r, Some(&target))?;
            r = r.mul_capped(&two.sub(&ur)?, Some(&target))?.exactify();
            gained = target;
            if gained >= rel {
                break;
            }
        }
        let r = r.truncate(&rel).exactify().with_precision(unit.prec.clone().min(&Precision::Finite(rel.clone())));
        let out = r.shift(&-v).scalar_mul(&lead_inv)?;
        Ok(out.with_precision(prec))
    }

    pub fn div(&self, o: &Self, cap: Option<&Rational>) -> Result<Self> {
        if self.is_exact_zero() {
            return Ok(Self::zero());
        }
        let inv_cap = match (cap, self.val_lower()) {
            (Some(c), Some(v)) => Some(c - &v),
            _ => None,
        };
        let inv = o.invert(inv_cap.as_ref())?;
        self.mul_capped(&inv, cap)
    }

    /// σ^k: the coefficient of t^λ is multiplied by e^{2πiλk}.
    pub fn sigma(&self, k: i64) -> Result<Self> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let d = e.denom().to_u32().ok_or_else(|| Error::unsupported("exponent denominator too large"))?;
            let n = e.numer().to_i64().ok_or_else(|| Error::unsupported("exponent numerator too large"))?;
            let j = (n.rem_euclid(d as i64) * k.rem_euclid(d as i64)).rem_euclid(d as i64);
            let c = if j == 0 { c.clone() } else { c.mul_zeta(d, j)? };
            out.push((e.clone(), c));
        }
        Ok(Self::from_sorted(out, self.prec.clone()))
    }

    /// Whether `o(self − other) ≥ p` is certain.
    pub fn agrees_to(&self, other: &Self, p: &Rational) -> Result<bool> {
        let d = self.sub(other)?;
        match d.terms.first() {
            Some((e, _)) if e < p => Ok(false),
            _ => match d.prec.finite() {
                Some(q) if q < p => Err(Error::PrecisionInsufficient(format!(
                    "comparison to t^({p}) with series known only to t^({q})"
                ))),
                _ => Ok(true),
            },
        }
    }

    /// Largest exponent magnitude, used to bound evaluation tails.
    pub fn max_abs_exponent(&self) -> Rational {
        self.terms.iter().map(|(e, _)| e.abs()).max().unwrap_or_else(Rational::zero)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_zero() && self.terms[0].1.is_one()
    }

    pub fn lex_key(&self) -> Vec<Rational> {
        self.terms.iter().map(|(e, _)| e.clone()).collect()
    }

    pub fn constant_one_exponent() -> Rational {
        Rational::one()
    }
}

impl From<Coeff> for PuiseuxSeries {
    fn from(c: Coeff) -> Self {
        PuiseuxSeries::constant(c)
    }
}
