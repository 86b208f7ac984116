//! Parameter space of the slice α = t^{−1}: parameter balls, their centers,
//! realization of admissible grids and the algebraic degree of balls.

pub mod degree;
pub mod realize;
pub mod thurston;

pub use degree::{algebraic_degree, algebraic_degree_in, center_history, degree_from_grid, AlgebraicDegree};
pub use realize::realize_grid;
pub use thurston::{find_center, find_center_from, find_center_in, find_center_search, thurston_step, CenterSearch, ThurstonState};

use serde_json::{json, Value};

use crate::balls::UltrametricBall;
use crate::coeff::rational::fmt_rational;
use crate::coeff::Rational;
use crate::dynamics::{check_admissible, critical_grid, level_orbit, nest_radii, CubicMap, MarkedGrid};
use crate::error::Result;
use crate::puiseux::{default_precision, series_to_json, PuiseuxSeries};

/// The level-n parameter ball P_n(ν) with its grid and center.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterBall {
    pub level: usize,
    pub ball: UltrametricBall,
    /// Level-(n+1) critical grid, shared by every parameter in the ball.
    pub grid: MarkedGrid,
    pub center: Option<PuiseuxSeries>,
    /// Period of the center: min{k ≥ 1 : M_{n+1−k,k} = 1}.
    pub center_period: usize,
    /// Algebraic degree δ(P_n).
    pub delta: u64,
}

impl ParameterBall {
    /// log r_n.
    pub fn log_radius(&self) -> Rational {
        -self.ball.log_radius().clone()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "level": self.level,
            "grid": self.grid.to_json(),
            "center": self.center.as_ref().map(series_to_json),
            "log_radius": fmt_rational(&self.log_radius()),
            "period": self.center_period,
            "delta": self.delta,
        })
    }
}

/// Valuation radii ρ_m(ν) of the nest of ψ_ν around its critical value,
/// m = 0..=n. These are the radii of the parameter balls P_m(ν).
pub fn parameter_radii(nu: &PuiseuxSeries, n: usize) -> Result<Vec<Rational>> {
    let f = CubicMap::psi_standard(nu.clone())?;
    let orb = level_orbit(&f, nu, n)?;
    nest_radii(&f, &orb)
}

pub fn center_period(grid: &MarkedGrid, n: usize) -> usize {
    (1..=n + 1).find(|&k| grid.get(n + 1 - k, k)).unwrap_or(n + 1)
}

/// P_n(ν) for a parameter with ν ∈ E_n. The center is computed to the
/// default precision and omitted if that fails.
pub fn parameter_ball(nu: &PuiseuxSeries, n: usize) -> Result<ParameterBall> {
    let f = CubicMap::psi_standard(nu.clone())?;
    let grid = critical_grid(&f, n + 1)?;
    check_admissible(&grid)?;
    let radii = parameter_radii(nu, n)?;
    let ball = UltrametricBall::closed(nu.clone(), radii[n].clone())?;
    let target = default_precision().max(radii[n].clone() + Rational::from_integer(4.into()));
    let center = find_center(nu, n, &target).ok();
    let delta = degree_from_grid(&grid, &radii)?;
    Ok(ParameterBall { level: n, ball, center_period: center_period(&grid, n), grid, center, delta })
}
