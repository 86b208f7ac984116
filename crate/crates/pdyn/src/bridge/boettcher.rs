//! Böttcher coordinate by the telescoping product
//! φ(z) = z·Π_{i≥1} (z_i / z_{i−1}³)^{1/3^i}, z_i = f^i(z).

use num_complex::Complex64;

use super::ComplexParam;
use crate::error::{Error, Result};

const MAX_FACTORS: usize = 64;
const TOLERANCE: f64 = 1e-15;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoettcherValue {
    pub value: Complex64,
    /// Bound on |log φ − log φ_computed|.
    pub log_error: f64,
    pub factors: usize,
}

/// φ_f(z) for z in the basin where the product converges.
pub fn boettcher(p: &ComplexParam, z: Complex64) -> Result<BoettcherValue> {
    let mut prev = z;
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut scale = 1.0f64;
    for i in 1..=MAX_FACTORS {
        let next = p.eval(prev);
        scale /= 3.0;
        let ratio = next / (prev * prev * prev);
        if !ratio.is_finite() || ratio.norm() == 0.0 {
            return Err(Error::ProductDiverged(format!("factor {i} is not finite")));
        }
        log_sum += ratio.ln() * scale;
        // |log ratio_k| ≤ −log(1 − η) for every later factor.
        let r = next.norm();
        let a = p.a.norm();
        let eta = 3.0 * a * a / (r * r) + (2.0 * p.a * p.a * p.a + p.v).norm() / (r * r * r);
        if eta < 0.5 {
            let tail = -(1.0 - eta).ln() * scale / 2.0;
            if tail < TOLERANCE || r > 1e90 {
                return Ok(BoettcherValue { value: z * log_sum.exp(), log_error: tail, factors: i });
            }
        } else if i > 8 {
            return Err(Error::ProductDiverged(format!("orbit of {z} is not escaping")));
        }
        prev = next;
    }
    Err(Error::ProductDiverged(format!("no convergence after {MAX_FACTORS} factors")))
}

/// φ_{f_{(a, qa)}}(2a), the Böttcher coordinate of the cocritical point.
pub fn boettcher_cocritical(a: Complex64, q: i32) -> Result<Complex64> {
    if a.norm() <= 2.0 {
        return Err(Error::ProductDiverged(format!("|a| = {} is not above 2", a.norm())));
    }
    let p = ComplexParam::new(a, a * q as f64);
    Ok(boettcher(&p, 2.0 * a)?.value)
}
