//! Centers of parameter balls as fixed points of the Thurston map.
//!
//! Slots ζ_1, …, ζ_p̂ = ω⁺ are anchored at ζ̂_k = ψ_ν̂^{k−1}(ζ̂_1); slot k lives
//! in the open ball of valuation radius ρ_k = ρ_{n+1−k}(ζ̂_k) around ζ̂_k, where
//! ψ is injective. One step replaces ζ_k by the preimage of ζ_{k+1} under
//! ψ_{ζ_1} in that ball.

use crate::balls::UltrametricBall;
use crate::coeff::Rational;
use crate::dynamics::{capture_radius, nest_radii, orbit, CubicMap};
use crate::error::{Error, Result};
use crate::puiseux::{hensel_lift, PuiseuxSeries, SeriesPoly};

/// Extra precision carried through the iteration beyond the target.
const WORK_MARGIN: i64 = 4;

#[derive(Clone, Debug, PartialEq)]
pub struct ThurstonState {
    /// (ζ_1, …, ζ_p̂); the last entry is ω⁺.
    pub points: Vec<PuiseuxSeries>,
    /// Valuation radii ρ_k of the slot balls, k = 1..p̂−1.
    pub log_radii: Vec<Rational>,
    /// Precision each lift is carried to.
    pub precision: Rational,
}

/// Outcome of a converged iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct CenterSearch {
    pub center: PuiseuxSeries,
    pub period: usize,
    pub iterations: usize,
    pub state: ThurstonState,
}

fn ri(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn contains(b: &UltrametricBall, z: &PuiseuxSeries, what: &str) -> Result<bool> {
    b.contains(z).map_err(|_| Error::PrecisionInsufficient(format!("cannot decide whether {what} lies in {b}")))
}

/// Center of the level-n parameter ball containing ν̂, to O(t^target).
///
/// For n ≥ 1 this runs the iteration one level up with ζ̂_1 = ν̂, which lands
/// on the unique level-n center in the ball.
pub fn find_center(seed: &PuiseuxSeries, n: usize, target: &Rational) -> Result<PuiseuxSeries> {
    Ok(find_center_search(seed, n, target)?.center)
}

pub fn find_center_search(seed: &PuiseuxSeries, n: usize, target: &Rational) -> Result<CenterSearch> {
    if n == 0 {
        let f = CubicMap::psi_standard(seed.clone())?;
        if !contains(&crate::dynamics::level_zero_ball(&f)?, seed, "the seed")? {
            return Err(Error::NoConvergence("seed lies outside the level-0 parameter ball".into()));
        }
        return Ok(trivial_center(target));
    }
    find_center_from(seed, seed, n - 1, target)
}

fn trivial_center(target: &Rational) -> CenterSearch {
    CenterSearch {
        center: PuiseuxSeries::one(),
        period: 1,
        iterations: 0,
        state: ThurstonState { points: vec![PuiseuxSeries::one()], log_radii: vec![], precision: target.clone() },
    }
}

/// The ν′ with ψ_{ν′}^p̂(ω⁺) = ω⁺ and |ν′ − ζ̂_1| < r_n(ν̂), for ν̂ ∈ E_n and a
/// level-(n+1) point ζ̂_1 in D_n(ν̂).
pub fn find_center_from(
    seed: &PuiseuxSeries,
    zeta1: &PuiseuxSeries,
    n: usize,
    target: &Rational,
) -> Result<CenterSearch> {
    let f = CubicMap::psi_standard(seed.clone())?;
    find_center_in(&f, zeta1, n, target)
}

/// As [`find_center_from`] for an arbitrary ψ_{α,ν̂}.
pub fn find_center_in(f: &CubicMap, zeta1: &PuiseuxSeries, n: usize, target: &Rational) -> Result<CenterSearch> {
    let alpha = f.alpha().clone();
    let w = f.omega_plus();
    let nu_hat = f.eval(&w)?;
    let rho0 = -capture_radius(f)?;
    let d0 = UltrametricBall::closed(PuiseuxSeries::zero(), rho0)?;

    // ν̂ ∈ E_n and the level-n ball around it.
    let orb_nu = orbit(f, &nu_hat, n)?;
    for z in &orb_nu {
        if !contains(&d0, z, "an iterate of the critical value")? {
            return Err(Error::NoConvergence(format!("the seed is not in E_{n}: its critical orbit leaves D0")));
        }
    }
    let rho_nu = nest_radii(f, &orb_nu)?;
    let ball_nu = UltrametricBall::closed(nu_hat.clone(), rho_nu[n].clone())?;
    if !contains(&ball_nu, zeta1, "the branch point")? {
        return Err(Error::NoConvergence(format!("{zeta1} is not in the level-{n} ball of the critical value")));
    }

    // Orbit ζ̂_1, …, ζ̂_{n+2} and the nests along it.
    let orb = orbit(f, zeta1, n + 1)?;
    for z in &orb {
        if !contains(&d0, z, "an iterate of the branch point")? {
            return Err(Error::NotALevelNPoint { level: n + 1, detail: format!("{zeta1} leaves D0") });
        }
    }
    let nests: Vec<Vec<Rational>> = (0..=n + 1).map(|j| nest_radii(f, &orb[j..])).collect::<Result<_>>()?;
    // nests[k−1][ℓ] = ρ_ℓ(ζ̂_k), ℓ ≤ n + 2 − k.
    let mut p_hat = None;
    for k in 1..=n + 2 {
        let b = UltrametricBall::closed(orb[k - 1].clone(), nests[k - 1][n + 2 - k].clone())?;
        if contains(&b, &w, "the critical point")? {
            p_hat = Some(k);
            break;
        }
    }
    let p_hat = p_hat.expect("the level-0 ball contains the critical point");
    if p_hat == 1 {
        if !contains(&UltrametricBall::open(nu_hat, rho_nu[n].clone())?, &w, "the critical point")? {
            return Err(Error::NoConvergence("the period-1 center is not in the required ball".into()));
        }
        return Ok(trivial_center(target));
    }

    let slots: Vec<UltrametricBall> = (1..p_hat)
        .map(|k| UltrametricBall::open(orb[k - 1].clone(), nests[k - 1][n + 1 - k].clone()))
        .collect::<Result<_>>()?;
    let dpsi = f.poly().derivative();
    let mut gain: Option<Rational> = None;
    for k in 1..p_hat {
        let g = -dpsi.eval(&orb[k - 1])?.val()?;
        if g <= Rational::from_integer(0.into()) {
            return Err(Error::NoConvergence(format!("ψ does not expand at slot {k}")));
        }
        gain = Some(gain.map_or(g.clone(), |m: Rational| m.min(g)));
    }
    let gain = gain.unwrap();

    let work = target + ri(WORK_MARGIN);
    // Anchors are only approximate points of their slots; start exactly.
    let mut points: Vec<PuiseuxSeries> = orb[..p_hat - 1].iter().map(|z| z.drop_from(&work).exactify()).collect();
    points.push(w.clone());
    let log_radii: Vec<Rational> = slots.iter().map(|b| b.log_radius().clone()).collect();
    let mut state = ThurstonState { points, log_radii, precision: work.clone() };
    let stop = target + ri(1);

    let mut bound: Option<usize> = None;
    let mut it = 0usize;
    loop {
        it += 1;
        let next = thurston_step(&alpha, &state, &slots)?;
        // Smallest exponent by which any coordinate moved.
        let mut moved = stop.clone();
        for (a, b) in next.points.iter().zip(&state.points) {
            if let Some((e, _)) = a.sub(b)?.terms().first() {
                moved = moved.min(e.clone());
            }
        }
        if it == 1 {
            // Every coordinate moves by at least `gain` more per step.
            let steps = ((&stop - &moved) / &gain).ceil().to_integer();
            let steps: usize = steps.try_into().unwrap_or(usize::MAX / 2);
            bound = Some(steps + p_hat + 2);
        }
        state = next;
        if moved >= stop {
            break;
        }
        if it > bound.unwrap() {
            return Err(Error::NoConvergence(format!("Thurston iteration exceeded its a priori bound of {} steps", bound.unwrap())));
        }
    }
    let center = state.points[0].truncate(target);
    Ok(CenterSearch { center, period: p_hat, iterations: it, state })
}

/// One application of the Thurston map.
pub fn thurston_step(alpha: &PuiseuxSeries, s: &ThurstonState, slots: &[UltrametricBall]) -> Result<ThurstonState> {
    let p = s.points.len();
    let g = CubicMap::psi(alpha.clone(), s.points[0].clone())?;
    let mut out = Vec::with_capacity(p);
    for k in 0..p - 1 {
        let c = g.poly().coeffs();
        let shifted = SeriesPoly::new(vec![c[0].sub(&s.points[k + 1])?, c[1].clone(), c[2].clone(), c[3].clone()]);
        let z = hensel_lift(&shifted, &s.points[k], &s.precision)?;
        if !contains(&slots[k], &z, "a lifted point")? {
            return Err(Error::NoConvergence(format!("lift {} left its slot {}", k + 1, slots[k])));
        }
        out.push(z);
    }
    out.push(s.points[p - 1].clone());
    Ok(ThurstonState { points: out, log_radii: s.log_radii.clone(), precision: s.precision.clone() })
}
