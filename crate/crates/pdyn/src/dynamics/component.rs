//! The Fatou component of K(f) containing ω⁺.

use serde_json::{json, Value};

use super::critical::{critical_grid, orbit};
use super::grid::{grid_moduli_at, periodic_modulus_sum, MarkedGrid};
use super::map::{capture_radius, level_zero_ball, CubicForm, CubicMap};
use crate::balls::image_ball;
use crate::coeff::rational::fmt_rational;
use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::parameter::find_center_in;
use crate::puiseux::{default_precision, PuiseuxSeries};

/// Singleton evidence needs the level-n radius at or below e^{−8}.
pub const SINGLETON_LOG_RADIUS: i64 = -8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentVerdict {
    /// Aperiodic grid with log r_depth(ω⁺) at or below the threshold.
    Singleton { depth: usize, log_radius: Rational },
    PeriodicBall { period: usize, log_radius: Rational },
    Unresolved(usize),
}

impl ComponentVerdict {
    pub fn to_json(&self) -> Value {
        match self {
            ComponentVerdict::Singleton { depth, log_radius } => {
                json!({"verdict": "Singleton", "depth": depth, "log_radius": fmt_rational(log_radius)})
            }
            ComponentVerdict::PeriodicBall { period, log_radius } => {
                json!({"verdict": "PeriodicBall", "period": period, "log_radius": fmt_rational(log_radius)})
            }
            ComponentVerdict::Unresolved(d) => json!({"verdict": "Unresolved", "depth": d}),
        }
    }
}

/// Deepest critical grid up to `budget` that the precision of f supports.
fn deepest_grid(f: &CubicMap, budget: usize) -> Result<MarkedGrid> {
    let mut d = budget;
    loop {
        match critical_grid(f, d) {
            Ok(g) => return Ok(g),
            Err(Error::PrecisionInsufficient(_) | Error::IndeterminateValuation(_)) if d > 0 => d -= 1,
            Err(e) => return Err(e),
        }
    }
}

pub fn component_of_critical(f: &CubicMap, budget: usize) -> Result<ComponentVerdict> {
    let psi = f.to_psi(Some(&default_precision()))?;
    let w = psi.omega_plus();
    let log_capture = capture_radius(&psi)?;
    let (img, _) = image_ball(psi.poly(), &level_zero_ball(&psi)?)?;
    let mod_a0 = -img.log_radius().clone() - &log_capture;
    let log_rhat = &log_capture + &mod_a0;

    let g = deepest_grid(&psi, budget)?;
    let d = g.depth();
    let orb = orbit(&psi, &w, d)?;
    let exact = (1..=d).find(|&p| orb[p].is_exact() && orb[p] == w);
    let closed_form = |p: usize| -> Result<Option<Rational>> {
        match periodic_modulus_sum(&g, p, &mod_a0) {
            Ok(sum) => Ok(Some(&log_rhat - sum)),
            Err(Error::DepthBudgetExceeded(_)) => Ok(None),
            Err(e) => Err(e),
        }
    };
    if let Some(p) = exact {
        return Ok(match closed_form(p)? {
            Some(log_radius) => ComponentVerdict::PeriodicBall { period: p, log_radius },
            None => ComponentVerdict::Unresolved(d),
        });
    }
    // A full column counts as a visible period only when it repeats once
    // inside the grid.
    if let Some(p) = g.full_column().filter(|&p| 2 * p <= d) {
        if confirm_period(&psi, &orb[1], d, p)? {
            if let Some(log_radius) = closed_form(p)? {
                return Ok(ComponentVerdict::PeriodicBall { period: p, log_radius });
            }
        }
        return Ok(ComponentVerdict::Unresolved(d));
    }
    let log_r = grid_moduli_at(&g, &mod_a0, &log_capture).log_radii[d].clone();
    if log_r <= Rational::from_integer(SINGLETON_LOG_RADIUS.into()) {
        return Ok(ComponentVerdict::Singleton { depth: d, log_radius: log_r });
    }
    Ok(ComponentVerdict::Unresolved(d))
}

/// The Thurston iteration in the level-(d−1) parameter ball of ν reaches a
/// center of period p.
fn confirm_period(psi: &CubicMap, nu: &PuiseuxSeries, d: usize, p: usize) -> Result<bool> {
    if !matches!(psi.form(), CubicForm::Psi { .. }) || d == 0 {
        return Ok(false);
    }
    match find_center_in(psi, nu, d - 1, &default_precision()) {
        Ok(c) => Ok(c.period == p),
        Err(Error::NoConvergence(_) | Error::PrecisionInsufficient(_) | Error::UnsupportedExtension(_)) => Ok(false),
        Err(e) => Err(e),
    }
}
