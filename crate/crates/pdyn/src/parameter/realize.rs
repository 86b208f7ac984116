//! Parameters realizing a prescribed admissible critical grid.
//!
//! Level by level: with ν a center whose grid agrees with the target one
//! level down, a level-(n+1) ball B ⊂ D_n(ν) is chosen whose first p − 1
//! images avoid ω⁺ and whose (p − 1)-st image contains it, p the period the
//! target grid asks for. The Thurston iteration started in B gives the next
//! center.

use crate::balls::{preimage_balls, UltrametricBall};
use crate::coeff::Rational;
use crate::dynamics::{check_admissible, critical_grid, critical_nest, nest_radii, orbit, CubicMap, MarkedGrid};
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;

use super::{center_period, find_center_in};

/// A parameter ν whose level-N critical grid is `g`, N = depth of g. The
/// returned center is known to O(t^P), P ≥ `precision`.
pub fn realize_grid(g: &MarkedGrid, precision: &Rational) -> Result<PuiseuxSeries> {
    check_admissible(g)?;
    if !g.is_critical() {
        return Err(Error::Violation { rule: crate::error::Rule::Ma, row: 0, col: 0 });
    }
    let mut nu = PuiseuxSeries::one();
    for big_n in 2..=g.depth() {
        let n = big_n - 2;
        let target = g.truncate(big_n)?;
        let p = center_period(&target, big_n - 1);
        let f = CubicMap::psi_standard(nu.clone())?;
        let work = precision.clone().max(level_precision(&f, n)?);
        let b = choose_ball(&f, n, p).map_err(|e| at_level(e, big_n))?;
        nu = find_center_in(&f, &b.center().clone().exactify(), n, &work).map_err(|e| at_level(e, big_n))?.center;
    }
    let got = critical_grid(&CubicMap::psi_standard(nu.clone())?, g.depth())?;
    if !got.same_marks(g) {
        return Err(Error::NoConvergence("realized parameter has a different grid".into()));
    }
    Ok(nu)
}

fn at_level(e: Error, level: usize) -> Error {
    match e {
        Error::UnsupportedExtension(s) => Error::UnsupportedExtension(format!("level {level}: {s}")),
        Error::NoConvergence(s) => Error::NoConvergence(format!("level {level}: {s}")),
        e => e,
    }
}

/// Enough precision for the centers at the next level to be separated.
fn level_precision(f: &CubicMap, n: usize) -> Result<Rational> {
    let nest = critical_nest(f, n + 1)?;
    Ok(nest[n + 1].log_radius() * Rational::from_integer(2.into()) + Rational::from_integer(8.into()))
}

/// B with ψ^j(B) ∌ ω⁺ for j < p − 1 and ψ^{p−1}(B) ∋ ω⁺, built backwards
/// from D_{n+2−p}(ω⁺). Where two preimages qualify, the one whose center has
/// the lexicographically smaller exponent support is tried first.
fn choose_ball(f: &CubicMap, n: usize, p: usize) -> Result<UltrametricBall> {
    let w = f.omega_plus();
    let nest = critical_nest(f, n + 1)?;
    if p == 1 {
        return Ok(nest[n + 1].clone());
    }
    let nu = f.eval(&w)?;
    let orb = orbit(f, &nu, n)?;
    // windows[j] = D_{n−j}(ψ^{j+1}(ω⁺)) ⊇ ψ^j(B).
    let windows: Vec<UltrametricBall> = (0..p - 1)
        .map(|j| {
            let r = nest_radii(f, &orb[j..])?;
            UltrametricBall::closed(orb[j].clone(), r[n - j].clone())
        })
        .collect::<Result<_>>()?;
    descend(f, &windows, nest[n + 2 - p].clone(), p - 2, &w)?
        .ok_or_else(|| Error::NoConvergence(format!("no level-{} ball reaches the critical point after {} steps", n + 1, p - 1)))
}

fn descend(
    f: &CubicMap,
    windows: &[UltrametricBall],
    tgt: UltrametricBall,
    j: usize,
    w: &PuiseuxSeries,
) -> Result<Option<UltrametricBall>> {
    let mut comps = preimage_balls(f.poly(), &tgt, &windows[j])?;
    comps.sort_by_cached_key(|(b, _)| (b.center().lex_key(), b.center().to_string()));
    for (b, _) in comps {
        if b.contains(w)? {
            continue;
        }
        if j == 0 {
            return Ok(Some(b));
        }
        if let Some(found) = descend(f, windows, b, j - 1, w)? {
            return Ok(Some(found));
        }
    }
    Ok(None)
}
