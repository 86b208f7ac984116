//! Critical nests and marked grids computed from orbits.
//!
//! The level-m ball around a level-m point z is the component of
//! f⁻¹(D_{m−1}(f z)) containing z. With b_i the Taylor coefficients of f at
//! z, its valuation radius is max_{i≥1} (ρ_{m−1}(f z) − o(b_i))/i, so a whole
//! nest follows from the orbit alone.

use super::grid::MarkedGrid;
use super::map::{capture_radius, CubicMap};
use crate::balls::UltrametricBall;
use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;

fn ri(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

/// Valuation radius of the component of f⁻¹(B(f z, ρ′)) that contains z.
pub fn pullback_radius(f: &CubicMap, z: &PuiseuxSeries, rho_image: &Rational) -> Result<Rational> {
    let b = f.poly().taylor_shift(z, None)?;
    let mut best: Option<Rational> = None;
    let mut bounds: Vec<Rational> = Vec::new();
    for (i, c) in b.coeffs().iter().enumerate().skip(1) {
        if let Some((e, _)) = c.terms().first() {
            let v = (rho_image - e) / ri(i);
            if best.as_ref().is_none_or(|m| &v > m) {
                best = Some(v);
            }
        } else if let Some(p) = c.precision().finite() {
            bounds.push((rho_image - p) / ri(i));
        }
    }
    let best = best.ok_or_else(|| Error::PrecisionInsufficient("map is constant at working precision".into()))?;
    if bounds.iter().any(|u| u > &best) {
        return Err(Error::PrecisionInsufficient(format!("Taylor coefficients at {z} are not known far enough")));
    }
    Ok(best)
}

/// z, f(z), …, f^n(z).
pub fn orbit(f: &CubicMap, z: &PuiseuxSeries, n: usize) -> Result<Vec<PuiseuxSeries>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(z.clone());
    for _ in 0..n {
        let w = f.eval(out.last().unwrap())?;
        out.push(w);
    }
    Ok(out)
}

fn in_d0(z: &PuiseuxSeries, rho0: &Rational) -> Result<bool> {
    UltrametricBall::closed(PuiseuxSeries::zero(), rho0.clone())?
        .contains(z)
        .map_err(|_| Error::PrecisionInsufficient(format!("cannot decide whether {z} lies in D0")))
}

/// z, f(z), …, f^n(z), stopping with NotALevelNPoint at the first iterate
/// outside D₀ (escaping iterates grow quickly, so none are computed past it).
pub fn level_orbit(f: &CubicMap, z: &PuiseuxSeries, n: usize) -> Result<Vec<PuiseuxSeries>> {
    let rho0 = -capture_radius(f)?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(z.clone());
    for j in 0..=n {
        if !in_d0(&out[j], &rho0)? {
            return Err(Error::NotALevelNPoint { level: n, detail: format!("iterate {j} has left D0") });
        }
        if j < n {
            let w = f.eval(&out[j])?;
            out.push(w);
        }
    }
    Ok(out)
}

/// Number of consecutive iterates f^j(z), j = 0, 1, …, that lie in D₀, up
/// to `max + 1` (so z is a level-(result − 1) point).
pub fn escape_depth(f: &CubicMap, z: &PuiseuxSeries, max: usize) -> Result<usize> {
    let rho0 = -capture_radius(f)?;
    let mut w = z.clone();
    for j in 0..=max {
        if !in_d0(&w, &rho0)? {
            return Ok(j);
        }
        if j < max {
            w = f.eval(&w)?;
        }
    }
    Ok(max + 1)
}

/// Valuation radii ρ_m(orbit[0]) for m = 0..=M, where orbit[j] = f^j(z) and
/// orbit[M] ∈ D₀.
pub fn nest_radii(f: &CubicMap, orb: &[PuiseuxSeries]) -> Result<Vec<Rational>> {
    let rho0 = -capture_radius(f)?;
    let depth = orb.len() - 1;
    for (j, w) in orb.iter().enumerate() {
        if !in_d0(w, &rho0)? {
            return Err(Error::NotALevelNPoint { level: depth, detail: format!("iterate {j} has left D0") });
        }
    }
    let mut out = Vec::with_capacity(depth + 1);
    for m in 0..=depth {
        // ρ_m(orb[0]) from ρ_0(orb[m]) = ρ₀ backwards along the orbit.
        let mut rho = rho0.clone();
        for j in (0..m).rev() {
            rho = pullback_radius(f, &orb[j], &rho)?;
        }
        out.push(rho);
    }
    Ok(out)
}

/// The level-m balls D_m(ω⁺), m = 0..=n.
pub fn critical_nest(f: &CubicMap, n: usize) -> Result<Vec<UltrametricBall>> {
    let orb = level_orbit(f, &f.omega_plus(), n)?;
    let radii = nest_radii(f, &orb)?;
    radii.into_iter().map(|r| UltrametricBall::closed(f.omega_plus(), r)).collect()
}

fn mark(nest: &[UltrametricBall], z: &PuiseuxSeries, l: usize) -> Result<bool> {
    nest[l]
        .contains(z)
        .map_err(|_| Error::PrecisionInsufficient(format!("cannot decide whether {z} lies in the level-{l} critical ball")))
}

/// Level-n critical marked grid: M_{ℓ,k} = 1 iff f^k(ω⁺) ∈ D_ℓ(ω⁺).
pub fn critical_grid(f: &CubicMap, n: usize) -> Result<MarkedGrid> {
    let w = f.omega_plus();
    let radii = level_orbit(f, &w, n).and_then(|orb| Ok((nest_radii(f, &orb)?, orb)));
    let (radii, orb) = radii.map_err(|e| match e {
        Error::NotALevelNPoint { detail, .. } => Error::NotALevelNPoint { level: n, detail: format!("critical orbit: {detail}") },
        e => e,
    })?;
    let nest: Vec<UltrametricBall> = radii.into_iter().map(|r| UltrametricBall::closed(w.clone(), r)).collect::<Result<_>>()?;
    let mut marks = Vec::new();
    for l in 0..=n {
        for k in 0..=n - l {
            if mark(&nest, &orb[k], l)? {
                marks.push((l, k));
            }
        }
    }
    let mut g = MarkedGrid::from_marks(n, marks)?;
    let period = (1..=n).find(|&p| orb[p].is_exact() && w.is_exact() && orb[p] == w);
    if let Some(p) = period {
        g.set_period(Some(p))?;
    }
    Ok(g)
}

/// Level-n marked grid of a point z relative to ω⁺; requires ω⁺ to be a
/// level-n point as well.
pub fn point_grid(f: &CubicMap, z: &PuiseuxSeries, n: usize) -> Result<MarkedGrid> {
    let nest = critical_nest(f, n)?;
    let orb = level_orbit(f, z, n).map_err(|e| match e {
        Error::NotALevelNPoint { level, detail } => Error::NotALevelNPoint { level, detail: format!("{detail} (orbit of {z})") },
        e => e,
    })?;
    let mut marks = Vec::new();
    for l in 0..=n {
        for k in 0..=n - l {
            if mark(&nest, &orb[k], l)? {
                marks.push((l, k));
            }
        }
    }
    MarkedGrid::from_marks(n, marks)
}
