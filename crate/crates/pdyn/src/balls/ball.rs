//! Balls, annuli and affine-partition classes.

use serde_json::{json, Value};

use crate::coeff::rational::{fmt_rational, parse_rational};
use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};
use crate::puiseux::{series_from_json, series_to_json, Precision, PuiseuxSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BallKind {
    Closed,
    Open,
}

/// {ζ : o(ζ − c) ≥ ρ} (closed) or {ζ : o(ζ − c) > ρ} (open).
///
/// The center is stored with every term that does not affect membership
/// removed, so equality of balls is structural equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UltrametricBall {
    center: PuiseuxSeries,
    rho: Rational,
    kind: BallKind,
}

impl UltrametricBall {
    pub fn new(center: PuiseuxSeries, rho: Rational, kind: BallKind) -> Result<Self> {
        let known = match center.precision() {
            Precision::Exact => true,
            Precision::Finite(p) => match kind {
                BallKind::Closed => p >= &rho,
                BallKind::Open => p > &rho,
            },
        };
        if !known {
            return Err(Error::indeterminate(format!(
                "center {center} is not known to the ball radius t^({rho})"
            )));
        }
        let terms: Vec<_> = center
            .terms()
            .iter()
            .filter(|(e, _)| match kind {
                BallKind::Closed => e < &rho,
                BallKind::Open => e <= &rho,
            })
            .cloned()
            .collect();
        let center = PuiseuxSeries::from_terms(terms, Precision::Exact)?;
        Ok(UltrametricBall { center: center.exactify(), rho, kind })
    }

    pub fn closed(center: PuiseuxSeries, rho: Rational) -> Result<Self> {
        Self::new(center, rho, BallKind::Closed)
    }

    pub fn open(center: PuiseuxSeries, rho: Rational) -> Result<Self> {
        Self::new(center, rho, BallKind::Open)
    }

    pub fn center(&self) -> &PuiseuxSeries {
        &self.center
    }

    pub fn log_radius(&self) -> &Rational {
        &self.rho
    }

    pub fn kind(&self) -> BallKind {
        self.kind
    }

    pub fn is_closed(&self) -> bool {
        self.kind == BallKind::Closed
    }

    pub fn contains(&self, z: &PuiseuxSeries) -> Result<bool> {
        let d = z.sub(&self.center)?;
        let outside = |e: &Rational| match self.kind {
            BallKind::Closed => e < &self.rho,
            BallKind::Open => e <= &self.rho,
        };
        if d.terms().first().is_some_and(|(e, _)| outside(e)) {
            return Ok(false);
        }
        match d.precision() {
            Precision::Exact => Ok(true),
            Precision::Finite(p) if !outside(p) => Ok(true),
            Precision::Finite(p) => Err(Error::indeterminate(format!("point known only to O(t^({p}))"))),
        }
    }

    /// Whether `other` ⊆ `self`.
    pub fn contains_ball(&self, other: &UltrametricBall) -> Result<bool> {
        let radius_ok = match (self.kind, other.kind) {
            (BallKind::Closed, BallKind::Open) | (BallKind::Closed, BallKind::Closed) | (BallKind::Open, BallKind::Open) => {
                other.rho >= self.rho
            }
            (BallKind::Open, BallKind::Closed) => other.rho > self.rho,
        };
        Ok(radius_ok && self.contains(&other.center)?)
    }

    pub fn disjoint(&self, other: &UltrametricBall) -> Result<bool> {
        Ok(!self.contains_ball(other)? && !other.contains_ball(self)?)
    }

    /// Same ball with a different member as center.
    pub fn recenter(&self, z: &PuiseuxSeries) -> Result<Self> {
        if !self.contains(z)? {
            return Err(Error::indeterminate("new center is not a member of the ball"));
        }
        Self::new(z.clone(), self.rho.clone(), self.kind)
    }

    /// diam = e^{−ρ}; kept as ρ.
    pub fn log_diameter(&self) -> Rational {
        -self.rho.clone()
    }

    /// Partition class (open ball of the same radius) containing z. The label
    /// is the coefficient of t^ρ in z − c.
    pub fn class_of(&self, z: &PuiseuxSeries) -> Result<PartitionClass> {
        if self.kind != BallKind::Closed {
            return Err(Error::indeterminate("partition classes are defined for closed balls"));
        }
        if !self.contains(z)? {
            return Err(Error::indeterminate("point is not in the ball"));
        }
        let d = z.sub(&self.center)?;
        let label = d
            .coeff(&self.rho)
            .ok_or_else(|| Error::indeterminate("point not known to the ball radius"))?;
        PartitionClass::new(self.clone(), label)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "center": series_to_json(&self.center),
            "log_radius": fmt_rational(&self.rho),
            "kind": match self.kind { BallKind::Closed => "closed", BallKind::Open => "open" },
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::parse("ball must be a JSON object"))?;
        let center = series_from_json(obj.get("center").ok_or_else(|| Error::parse("ball needs `center`"))?)?;
        let rho = obj
            .get("log_radius")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse("`log_radius` must be a rational string"))?;
        let rho = parse_rational(rho)?;
        let kind = match obj.get("kind").and_then(Value::as_str) {
            Some("closed") => BallKind::Closed,
            Some("open") => BallKind::Open,
            _ => return Err(Error::parse("`kind` must be \"closed\" or \"open\"")),
        };
        Self::new(center, rho, kind)
    }
}

impl std::fmt::Display for UltrametricBall {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let k = match self.kind {
            BallKind::Closed => "closed",
            BallKind::Open => "open",
        };
        write!(f, "{k}({}, {})", self.center, fmt_rational(&self.rho))
    }
}

/// {ζ : ρ_out < o(ζ − c) < ρ_in}, each bound included when its flag is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UltrametricAnnulus {
    pub center: PuiseuxSeries,
    pub rho_out: Rational,
    pub rho_in: Rational,
    pub outer_closed: bool,
    pub inner_closed: bool,
}

impl UltrametricAnnulus {
    pub fn new(center: PuiseuxSeries, rho_out: Rational, rho_in: Rational) -> Result<Self> {
        if rho_out >= rho_in {
            return Err(Error::indeterminate("annulus needs rho_out < rho_in"));
        }
        Ok(UltrametricAnnulus { center, rho_out, rho_in, outer_closed: false, inner_closed: false })
    }

    /// Annulus between a closed outer ball and a closed inner ball inside it.
    pub fn between(outer: &UltrametricBall, inner: &UltrametricBall) -> Result<Self> {
        if !outer.contains_ball(inner)? || outer == inner {
            return Err(Error::indeterminate("inner ball must lie strictly inside the outer ball"));
        }
        let mut a = Self::new(inner.center().clone(), outer.log_radius().clone(), inner.log_radius().clone())?;
        a.outer_closed = true;
        Ok(a)
    }

    pub fn modulus(&self) -> Rational {
        &self.rho_in - &self.rho_out
    }

    pub fn contains(&self, z: &PuiseuxSeries) -> Result<bool> {
        let v = z.sub(&self.center)?;
        let Some(o) = v.terms().first().map(|(e, _)| e.clone()) else {
            return match v.precision() {
                Precision::Exact => Ok(false),
                Precision::Finite(p) if p > &self.rho_in || (p == &self.rho_in && !self.inner_closed) => Ok(false),
                Precision::Finite(p) => Err(Error::indeterminate(format!("point known only to O(t^({p}))"))),
            };
        };
        let lo = if self.outer_closed { o >= self.rho_out } else { o > self.rho_out };
        let hi = if self.inner_closed { o <= self.rho_in } else { o < self.rho_in };
        Ok(lo && hi)
    }
}

/// Open ball of radius ρ inside a closed ball of radius ρ, labelled by the
/// residue of (ζ − c)/t^ρ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionClass {
    pub parent: UltrametricBall,
    pub label: Coeff,
}

impl PartitionClass {
    pub fn new(parent: UltrametricBall, label: Coeff) -> Result<Self> {
        if parent.kind() != BallKind::Closed {
            return Err(Error::indeterminate("partition classes are defined for closed balls"));
        }
        Ok(PartitionClass { parent, label })
    }

    pub fn ball(&self) -> Result<UltrametricBall> {
        let rho = self.parent.log_radius().clone();
        let c = self.parent.center().add(&PuiseuxSeries::monomial(self.label.clone(), rho.clone()))?;
        UltrametricBall::open(c, rho)
    }
}
