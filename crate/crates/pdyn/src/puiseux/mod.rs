//! Truncated Puiseux series over the coefficient tower: arithmetic with
//! precision tracking, valuation, the Galois action σ, Newton polygons and
//! Hensel lifting.

pub mod newton;
pub mod poly;
pub mod series;
pub mod text;

pub use newton::{hensel_lift, newton_polygon, segment_residue, NewtonPolygon, NewtonSegment};
pub use poly::SeriesPoly;
pub use series::{Precision, PuiseuxSeries, Valuation};
pub use text::{parse_series, parse_series_in, series_from_json, series_to_json};

use crate::coeff::Rational;
use crate::error::Result;

/// Default exponent cutoff for computations that need one.
pub const DEFAULT_PRECISION: i64 = 24;

pub fn default_precision() -> Rational {
    Rational::from_integer(DEFAULT_PRECISION.into())
}

pub fn valuation(s: &PuiseuxSeries) -> Result<Valuation> {
    s.valuation()
}

/// σ^k.
pub fn sigma_action(s: &PuiseuxSeries, k: i64) -> Result<PuiseuxSeries> {
    s.sigma(k)
}

/// Series operations by name.
#[derive(Clone, Debug)]
pub enum SeriesOp<'a> {
    Add(&'a PuiseuxSeries, &'a PuiseuxSeries),
    Sub(&'a PuiseuxSeries, &'a PuiseuxSeries),
    Mul(&'a PuiseuxSeries, &'a PuiseuxSeries),
    ScalarMul(&'a crate::coeff::Coeff, &'a PuiseuxSeries),
    /// Inverse, cut at the given precision when the input is exact.
    Invert(&'a PuiseuxSeries, Option<Rational>),
    ComposePoly(&'a SeriesPoly, &'a PuiseuxSeries),
}

pub fn series_arith(op: SeriesOp<'_>) -> Result<PuiseuxSeries> {
    match op {
        SeriesOp::Add(a, b) => a.add(b),
        SeriesOp::Sub(a, b) => a.sub(b),
        SeriesOp::Mul(a, b) => a.mul(b),
        SeriesOp::ScalarMul(c, a) => a.scalar_mul(c),
        SeriesOp::Invert(a, cap) => a.invert(cap.as_ref()),
        SeriesOp::ComposePoly(f, s) => f.eval(s),
    }
}
