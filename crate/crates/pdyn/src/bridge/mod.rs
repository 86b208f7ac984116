//! Floating-point bridge to the complex family f_{a,v}(z) = z³ − 3a²z + 2a³ + v.
//!
//! A series ν is evaluated at t = e^{2πiT}; the end it describes is
//! (a, v) = (e^{−2πiT}, e^{−2πiT}·ν(e^{2πiT})).

pub mod big;
pub mod boettcher;
pub mod green;
pub mod grid;

pub use big::{BigComplex, BigParam, BIG_FLOAT_THRESHOLD};
pub use boettcher::{boettcher, boettcher_cocritical, BoettcherValue};
pub use green::{green_function, GreenValue};
pub use grid::{complex_critical_grid, ComplexGrid};

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::coeff::rational::rational_to_f64;
use crate::coeff::Rational;
use crate::error::{Error, Result};
use crate::puiseux::PuiseuxSeries;

/// Bridge settings. ε is empirical: no value of it follows from theory.
#[derive(Clone, Debug, PartialEq)]
pub struct BridgeConfig {
    /// Evaluation requires |e^{2πiT}| < ε.
    pub epsilon: f64,
    /// Iteration budget for Green function evaluation.
    pub max_iterations: usize,
    /// Pixels per side of the first flood-fill pass.
    pub resolution: usize,
    /// Bits used to embed tower coefficients, and the working precision of
    /// the big-float path.
    pub embed_bits: u32,
    /// Carry parameters with |a| above 10⁸ in big floats.
    pub big_float: bool,
}

impl Default for BridgeConfig {
    fn default() -> Self {
        BridgeConfig { epsilon: (-2.0 * PI * 1.2).exp(), max_iterations: 200, resolution: 96, embed_bits: 96, big_float: false }
    }
}

impl BridgeConfig {
    /// Smallest admissible Im T.
    pub fn min_im_t(&self) -> f64 {
        -self.epsilon.ln() / (2.0 * PI)
    }
}

/// A point (a, v) of the complex family with the T it came from.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexParam {
    pub t: Option<Complex64>,
    pub a: Complex64,
    pub v: Complex64,
    /// Bound on |v − v_exact| from the discarded tail of the series.
    pub tail_bound: f64,
    /// The same (a, v) in big floats, when the big-float path is on.
    pub big: Option<BigParam>,
}

impl ComplexParam {
    pub fn new(a: Complex64, v: Complex64) -> Self {
        ComplexParam { t: None, a, v, tail_bound: 0.0, big: None }
    }

    /// f(z) = (z − a)²(z + 2a) + v, which stays accurate near both ±a and
    /// the cocritical point −2a.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let d = z - self.a;
        d * d * (z + 2.0 * self.a) + self.v
    }

    /// f′(z) = 3(z − a)(z + a).
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        3.0 * (z - self.a) * (z + self.a)
    }

    /// The three solutions of f(z) = w, by Durand–Kerner on z = a·u and
    /// Newton polishing.
    pub fn preimages(&self, w: Complex64) -> [Complex64; 3] {
        let c = 2.0 + (self.v - w) / (self.a * self.a * self.a);
        let g = |u: Complex64| u * u * u - 3.0 * u + c;
        let mut u = [Complex64::new(0.4, 0.9), Complex64::new(0.4, 0.9).powi(2), Complex64::new(0.4, 0.9).powi(3)];
        for _ in 0..200 {
            let prev = u;
            for i in 0..3 {
                let den = (0..3).filter(|&j| j != i).fold(Complex64::new(1.0, 0.0), |acc, j| acc * (u[i] - u[j]));
                u[i] -= g(u[i]) / den;
            }
            if (0..3).all(|i| (u[i] - prev[i]).norm() <= 1e-15 * u[i].norm().max(1.0)) {
                break;
            }
        }
        u.map(|u| {
            let mut z = self.a * u;
            for _ in 0..3 {
                let d = self.derivative(z);
                if d.norm() == 0.0 {
                    break;
                }
                z -= (self.eval(z) - w) / d;
            }
            z
        })
    }

    pub fn iterate(&self, z: Complex64, k: usize) -> Complex64 {
        (0..k).fold(z, |w, _| self.eval(w))
    }

    pub fn to_json(&self) -> Value {
        let c = |z: Complex64| json!([z.re, z.im]);
        json!({
            "T": self.t.map(c),
            "a": c(self.a),
            "v": c(self.v),
            "tail_bound": self.tail_bound,
            "big_float_bits": self.big.as_ref().map(|b| b.precision()),
        })
    }
}

/// e^{2πiTλ}.
fn q_pow(t: Complex64, lambda: f64) -> Complex64 {
    (Complex64::new(0.0, 2.0 * PI) * t * lambda).exp()
}

/// Σ_{λ < trunc} c_λ e^{2πiTλ} together with an estimate of the discarded
/// tail. The tail uses the largest |c_λ|·ε^λ over the kept terms as a
/// Cauchy constant: Σ_{λ ≥ P} C·(|q|/ε)^λ over the exponent lattice.
pub fn evaluate_series(s: &PuiseuxSeries, t: Complex64, trunc: &Rational, cfg: &BridgeConfig) -> Result<(Complex64, f64)> {
    if t.im <= cfg.min_im_t() {
        return Err(Error::OutsideStrip(t.im));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut cauchy = 0.0f64;
    let mut denom = 1u64;
    for (e, c) in s.terms() {
        if e >= trunc {
            break;
        }
        let b = c.embed(cfg.embed_bits);
        let cz = Complex64::new(b.re_f64(), b.im_f64());
        let lam = rational_to_f64(e);
        sum += cz * q_pow(t, lam);
        cauchy = cauchy.max(cz.norm() * cfg.epsilon.powf(lam));
        denom = denom.max(e.denom().try_into().unwrap_or(u64::MAX));
    }
    let known_to = match s.precision().finite() {
        Some(p) => p.clone().min(trunc.clone()),
        None => trunc.clone(),
    };
    let exhausted = s.is_exact() && s.terms().iter().all(|(e, _)| e < trunc);
    let tail = if exhausted {
        0.0
    } else {
        let ratio = (-2.0 * PI * t.im).exp() / cfg.epsilon;
        let step = ratio.powf(1.0 / denom as f64);
        cauchy.max(f64::MIN_POSITIVE) * ratio.powf(rational_to_f64(&known_to)) / (1.0 - step)
    };
    Ok((sum, tail))
}

/// (a, v) = (e^{−2πiT}, e^{−2πiT}·Σ a_λ e^{2πiTλ}), ν truncated below `trunc`.
#[allow(non_snake_case)]
pub fn evaluate_at_T(nu: &PuiseuxSeries, t: Complex64, trunc: &Rational, cfg: &BridgeConfig) -> Result<ComplexParam> {
    let (nbar, tail) = evaluate_series(nu, t, trunc, cfg)?;
    let a = (Complex64::new(0.0, -2.0 * PI) * t).exp();
    let mut p = ComplexParam { t: Some(t), a, v: a * nbar, tail_bound: a.norm() * tail, big: None };
    if cfg.big_float && a.norm() > BIG_FLOAT_THRESHOLD {
        let b = evaluate_big(nu, t, trunc, cfg)?;
        p.a = b.a.to_c64();
        p.v = b.v.to_c64();
        p.big = Some(b);
    }
    Ok(p)
}

/// a = e^{−2πiT} and v = a·Σ_{λ < trunc} c_λ e^{2πiTλ} at `embed_bits` of
/// precision.
fn evaluate_big(nu: &PuiseuxSeries, t: Complex64, trunc: &Rational, cfg: &BridgeConfig) -> Result<BigParam> {
    let bits = cfg.embed_bits as usize;
    let mut cc = big::consts()?;
    let w = BigComplex::from_c64(t, bits).times_two_pi_i(&mut cc);
    let a = w.scale(-1.0).exp(&mut cc);
    let mut sum = BigComplex::from_c64(Complex64::new(0.0, 0.0), bits);
    for (e, c) in nu.terms() {
        if e >= trunc {
            break;
        }
        let (re, im) = c.embed(cfg.embed_bits).midpoint();
        let c = BigComplex::from_rationals(&re, &im, bits, &mut cc);
        sum = sum.add(&c.mul(&w.scale_rational(e, &mut cc).exp(&mut cc)));
    }
    Ok(BigParam { v: a.mul(&sum), a })
}
