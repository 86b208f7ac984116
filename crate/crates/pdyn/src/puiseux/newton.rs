//! Newton polygons and Hensel lifting.

use num_traits::Zero;

use super::poly::SeriesPoly;
use super::series::{Precision, PuiseuxSeries};
use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};

/// One edge of the lower hull, from index `from` to index `to`. Its slope μ
/// gives `to − from` roots of valuation `−μ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonSegment {
    pub root_valuation: Rational,
    pub count: usize,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Edges left to right, i.e. by decreasing root valuation.
    pub segments: Vec<NewtonSegment>,
    /// Multiplicity of the root ζ = 0.
    pub zero_roots: usize,
}

impl NewtonPolygon {
    /// (root valuation, count) pairs.
    pub fn roots(&self) -> Vec<(Rational, usize)> {
        self.segments.iter().map(|s| (s.root_valuation.clone(), s.count)).collect()
    }

    /// Number of nonzero roots with valuation ≥ ρ (or > ρ when `strict`).
    pub fn count_at_least(&self, rho: &Rational, strict: bool) -> usize {
        self.segments
            .iter()
            .filter(|s| if strict { &s.root_valuation > rho } else { &s.root_valuation >= rho })
            .map(|s| s.count)
            .sum()
    }
}

/// Lower convex hull of {(i, o(c_i))}. Coefficients known only as O(t^P)
/// are accepted when (i, P) lies on or above the hull.
pub fn newton_polygon(f: &SeriesPoly) -> Result<NewtonPolygon> {
    let d = f.degree();
    let mut pts: Vec<(usize, Rational)> = Vec::new();
    let mut unknown: Vec<(usize, Rational)> = Vec::new();
    for (i, c) in f.coeffs().iter().enumerate() {
        match c.terms().first() {
            Some((e, _)) => pts.push((i, e.clone())),
            None => {
                if let Precision::Finite(p) = c.precision() {
                    unknown.push((i, p.clone()));
                }
            }
        }
    }
    match pts.last() {
        Some((i, _)) if *i == d => {}
        _ => return Err(Error::indeterminate("leading coefficient is undetermined")),
    }
    let zero_roots = pts[0].0;
    if unknown.iter().any(|(i, _)| *i < zero_roots) {
        return Err(Error::indeterminate("lowest coefficient is undetermined at working precision"));
    }
    let mut hull: Vec<(usize, Rational)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (i1, y1) = &hull[hull.len() - 2];
            let (i2, y2) = &hull[hull.len() - 1];
            // Drop the middle point when it is on or above the chord.
            let lhs = (y2 - y1) * Rational::from_integer(((p.0 - i1) as i64).into());
            let rhs = (&p.1 - y1) * Rational::from_integer(((i2 - i1) as i64).into());
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut segments = Vec::new();
    for w in hull.windows(2) {
        let (i1, y1) = &w[0];
        let (i2, y2) = &w[1];
        let slope = (y2 - y1) / Rational::from_integer(((i2 - i1) as i64).into());
        segments.push(NewtonSegment { root_valuation: -slope, count: i2 - i1, from: *i1, to: *i2 });
    }
    for (i, p) in &unknown {
        if *i > zero_roots {
            let h = hull_height(&hull, *i);
            if p < &h {
                return Err(Error::indeterminate(format!(
                    "coefficient {i} is O(t^({p})) below the Newton polygon"
                )));
            }
        }
    }
    Ok(NewtonPolygon { segments, zero_roots })
}

fn hull_height(hull: &[(usize, Rational)], i: usize) -> Rational {
    for w in hull.windows(2) {
        let (i1, y1) = &w[0];
        let (i2, y2) = &w[1];
        if *i1 <= i && i <= *i2 {
            let s = (y2 - y1) / Rational::from_integer(((i2 - i1) as i64).into());
            return y1 + s * Rational::from_integer(((i - i1) as i64).into());
        }
    }
    hull.last().map(|p| p.1.clone()).unwrap_or_else(Rational::zero)
}

/// Residue polynomial of an edge: Σ lc(c_i)·X^{i−from} over the indices on
/// the edge. Its nonzero roots are the leading coefficients a of the roots
/// a·t^{v} + … with v the edge's root valuation.
pub fn segment_residue(f: &SeriesPoly, seg: &NewtonSegment) -> Vec<Coeff> {
    let v = &seg.root_valuation;
    let base = f.coeff(seg.from).val_lower().unwrap_or_else(Rational::zero)
        + v * Rational::from_integer((seg.from as i64).into());
    let mut out = vec![Coeff::zero(); seg.count + 1];
    for i in seg.from..=seg.to {
        let c = f.coeff(i);
        if let Some((e, a)) = c.leading() {
            if e + v * Rational::from_integer((i as i64).into()) == base {
                out[i - seg.from] = a.clone();
            }
        }
    }
    out
}

/// Newton iteration from `x0` to a root of `f`.
///
/// The result agrees with the root to O(t^P) and satisfies o(f(x*)) ≥ P, where
/// P = max(target, target − o(f′(x0))). Requires o(f(x0)) > 2·o(f′(x0)).
pub fn hensel_lift(f: &SeriesPoly, x0: &PuiseuxSeries, target: &Rational) -> Result<PuiseuxSeries> {
    let df = f.derivative();
    let fx0 = f.eval(x0)?;
    if fx0.is_exact_zero() {
        return Ok(x0.clone());
    }
    let dfx0 = df.eval(x0)?;
    let v1 = dfx0
        .val()
        .map_err(|_| Error::NoConvergence("derivative vanishes at the starting point".into()))?;
    let c0 = fx0.val_lower().unwrap();
    if c0 <= &v1 * Rational::from_integer(2.into()) {
        return Err(Error::NoConvergence(format!(
            "o(f(x0)) = {c0} is not above 2·o(f'(x0)) = {}",
            &v1 * Rational::from_integer(2.into())
        )));
    }
    let out_p = if v1 < Rational::zero() { target - &v1 } else { target.clone() };
    let need_f = (&out_p + &v1).max(target.clone());
    let mut x = x0.drop_from(&out_p).exactify();
    for _ in 0..256 {
        let fx = f.eval_capped(&x, Some(&need_f))?;
        if fx.is_exact_zero() {
            return Ok(x);
        }
        let c = match fx.terms().first() {
            Some((e, _)) => e.clone(),
            None => {
                if let Precision::Finite(p) = fx.precision() {
                    if p < &need_f {
                        return Err(Error::PrecisionInsufficient(format!(
                            "f is known only to O(t^({p})) near the root"
                        )));
                    }
                }
                return Ok(x.with_precision(Precision::Finite(out_p)));
            }
        };
        let cap_d = &out_p - &c + &v1 * Rational::from_integer(2.into()) + Rational::from_integer(1.into());
        let dfx = df.eval_capped(&x, Some(&cap_d))?;
        let delta = fx.div(&dfx, Some(&out_p))?;
        x = x.sub(&delta.clone().exactify())?.drop_from(&out_p).exactify();
        if delta.terms().is_empty() {
            return Ok(x.with_precision(Precision::Finite(out_p)));
        }
    }
    Err(Error::NoConvergence("Newton iteration did not stabilize".into()))
}
