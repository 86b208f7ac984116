//! Algebraic degree of parameter balls.
//!
//! δ(P₀) = δ(α), and δ(P_{n+1}) = max{s_n, δ(P_n)} when the centers of P_n
//! and P_{n+1} differ, δ(P_n) otherwise; s_n is the least s with
//! s·|log r_n| ∈ ℕ.

use num_traits::Signed;

use crate::coeff::rational::denom_u64;
use crate::coeff::Rational;
use crate::dynamics::MarkedGrid;
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;

use super::{center_period, find_center, parameter_radii};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgebraicDegree {
    /// The last two centers agree, so δ of the deepest ball is the answer.
    Degree(u64),
    /// Centers were still moving at the deepest level; the value is δ of the
    /// deepest ball, a lower bound.
    UnboundedToDepth { depth: usize, lower_bound: u64 },
}

impl AlgebraicDegree {
    pub fn value(&self) -> u64 {
        match self {
            AlgebraicDegree::Degree(d) => *d,
            AlgebraicDegree::UnboundedToDepth { lower_bound, .. } => *lower_bound,
        }
    }
}

fn s_of(log_r: &Rational) -> u64 {
    denom_u64(log_r)
}

fn same_center(a: &PuiseuxSeries, b: &PuiseuxSeries, log_r_next: &Rational) -> Result<bool> {
    let p = log_r_next.abs() + Rational::from_integer(1.into());
    a.agrees_to(b, &p).map_err(|_| {
        Error::PrecisionInsufficient(format!("centers are not known to t^({p}), needed to compare them"))
    })
}

/// δ along a history of (center ν_n, log r_n), n = 0..=N, on the standard
/// slice (δ(α) = 1).
pub fn algebraic_degree(history: &[(PuiseuxSeries, Rational)]) -> Result<AlgebraicDegree> {
    algebraic_degree_in(1, history)
}

pub fn algebraic_degree_in(delta_alpha: u64, history: &[(PuiseuxSeries, Rational)]) -> Result<AlgebraicDegree> {
    if history.is_empty() {
        return Err(Error::parse("degree history is empty"));
    }
    let mut delta = delta_alpha;
    let mut moved_last = false;
    for n in 0..history.len() - 1 {
        let (c, lr) = &history[n];
        let (c_next, lr_next) = &history[n + 1];
        moved_last = !same_center(c, c_next, lr_next)?;
        if moved_last {
            delta = delta.max(s_of(lr));
        }
    }
    if moved_last {
        Ok(AlgebraicDegree::UnboundedToDepth { depth: history.len() - 1, lower_bound: delta })
    } else {
        Ok(AlgebraicDegree::Degree(delta))
    }
}

/// History of ν: centers of P_0(ν), …, P_N(ν) with their log-radii.
pub fn center_history(nu: &PuiseuxSeries, depth: usize, precision: &Rational) -> Result<Vec<(PuiseuxSeries, Rational)>> {
    let radii = parameter_radii(nu, depth)?;
    let mut out = Vec::with_capacity(depth + 1);
    for n in 0..=depth {
        let need = radii[(n + 1).min(depth)].clone() + Rational::from_integer(2.into());
        let target = precision.clone().max(need);
        out.push((find_center(nu, n, &target)?, -radii[n].clone()));
    }
    Ok(out)
}

/// δ(P_N) from the level-(N+1) grid and the radii ρ_0..ρ_N: the center of
/// P_n stays in P_{n+1} exactly when the center periods agree.
pub fn degree_from_grid(grid: &MarkedGrid, radii: &[Rational]) -> Result<u64> {
    let n_max = radii.len() - 1;
    if grid.depth() < n_max + 1 {
        return Err(Error::DepthBudgetExceeded(grid.depth()));
    }
    let mut delta = 1u64;
    for n in 0..n_max {
        let g = grid.truncate(n + 2)?;
        let g0 = grid.truncate(n + 1)?;
        if center_period(&g0, n) != center_period(&g, n + 1) {
            delta = delta.max(s_of(&radii[n]));
        }
    }
    Ok(delta)
}
