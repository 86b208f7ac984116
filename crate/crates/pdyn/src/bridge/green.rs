//! Green function of f_{a,v} with a tail bound.
//!
//! With z_n = f^n(z) and η_n ≥ |f(z_n)/z_n³ − 1|, G(z) = log|z_N|/3^N up to
//! Σ_{k≥N} 3^{−k−1}|log|f(z_k)/z_k³||, which is at most −log(1 − η_N)/(2·3^N)
//! once η_N < 1/2, because the η_k only decrease from there.

use num_complex::Complex64;
use serde_json::{json, Value};

use super::ComplexParam;
use crate::error::{Error, Result};

/// Stop refining once the bound is this small relative to the value.
const RELATIVE_TOLERANCE: f64 = 1e-13;
/// |z| beyond which cubing is no longer attempted.
const OVERFLOW_GUARD: f64 = 1e90;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GreenValue {
    pub value: f64,
    pub error_bound: f64,
    pub iterations: usize,
}

impl GreenValue {
    pub fn to_json(&self) -> Value {
        json!({"value": self.value, "error_bound": self.error_bound, "iterations": self.iterations})
    }
}

fn eta(p: &ComplexParam, z: Complex64) -> f64 {
    let r = z.norm();
    let a = p.a.norm();
    let c0 = (2.0 * p.a * p.a * p.a + p.v).norm();
    3.0 * a * a / (r * r) + c0 / (r * r * r)
}

pub fn green_function(p: &ComplexParam, z: Complex64, max_iterations: usize) -> Result<GreenValue> {
    let mut w = z;
    let mut scale = 1.0f64;
    for n in 0..=max_iterations {
        let r = w.norm();
        if !r.is_finite() {
            return Err(Error::MaxIterationsWithoutEscape(n));
        }
        let e = eta(p, w);
        if r > 2.0 && e < 0.5 {
            let value = r.ln() * scale;
            let bound = -(1.0 - e).ln() * scale / 2.0;
            if bound <= RELATIVE_TOLERANCE * value.abs().max(1e-300) || r > OVERFLOW_GUARD {
                return Ok(GreenValue { value, error_bound: bound, iterations: n });
            }
        }
        if n == max_iterations {
            break;
        }
        w = p.eval(w);
        scale /= 3.0;
    }
    Err(Error::MaxIterationsWithoutEscape(max_iterations))
}

/// G(z), or 0 when z does not escape within the budget.
pub(crate) fn green_or_zero(p: &ComplexParam, z: Complex64, max_iterations: usize) -> f64 {
    green_function(p, z, max_iterations).map_or(0.0, |g| g.value)
}
