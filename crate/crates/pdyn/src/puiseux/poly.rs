//! Polynomials with Puiseux-series coefficients.

use num_traits::Zero;

use super::series::{Precision, PuiseuxSeries};
use crate::coeff::{Coeff, Rational};
use crate::error::{Error, Result};

/// c_0 + c_1 ζ + … + c_d ζ^d.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeriesPoly {
    coeffs: Vec<PuiseuxSeries>,
}

impl SeriesPoly {
    /// Trailing exact zeros are dropped.
    pub fn new(mut coeffs: Vec<PuiseuxSeries>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(PuiseuxSeries::zero());
        }
        SeriesPoly { coeffs }
    }

    /// ζ ↦ ζ.
    pub fn identity() -> Self {
        Self::new(vec![PuiseuxSeries::zero(), PuiseuxSeries::one()])
    }

    pub fn constant(c: PuiseuxSeries) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[PuiseuxSeries] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> PuiseuxSeries {
        self.coeffs.get(i).cloned().unwrap_or_else(PuiseuxSeries::zero)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&o.coeff(i))?);
        }
        Ok(Self::new(out))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub(&o.coeff(i))?);
        }
        Ok(Self::new(out))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let mut out = vec![PuiseuxSeries::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b)?)?;
            }
        }
        Ok(Self::new(out))
    }

    pub fn scale(&self, s: &PuiseuxSeries) -> Result<Self> {
        Ok(Self::new(self.coeffs.iter().map(|c| c.mul(s)).collect::<Result<_>>()?))
    }

    /// Polynomial with roots r_1..r_k times a leading series.
    pub fn from_roots(lead: PuiseuxSeries, roots: &[PuiseuxSeries]) -> Result<Self> {
        let mut p = Self::constant(lead);
        for r in roots {
            p = p.mul(&Self::new(vec![r.neg(), PuiseuxSeries::one()]))?;
        }
        Ok(p)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::constant(PuiseuxSeries::zero());
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Rational::from_integer(((i + 1) as i64).into())))
                .collect(),
        )
    }

    /// Horner evaluation with terms at or above `cap` discarded. The partial
    /// sum that is still to be multiplied by x^i is cut at cap − i·min(0, o(x)).
    pub fn eval_capped(&self, x: &PuiseuxSeries, cap: Option<&Rational>) -> Result<PuiseuxSeries> {
        let v = x.val_lower().map_or_else(Rational::zero, |v| v.min(Rational::zero()));
        let mut acc = self.coeffs.last().unwrap().clone();
        for (i, c) in self.coeffs.iter().enumerate().rev().skip(1) {
            let ci = cap.map(|p| p - &v * Rational::from_integer((i as i64).into()));
            acc = acc.mul_capped(x, ci.as_ref())?.add(c)?;
            if let Some(p) = &ci {
                acc = acc.truncate(p);
            }
        }
        Ok(acc)
    }

    pub fn eval(&self, x: &PuiseuxSeries) -> Result<PuiseuxSeries> {
        self.eval_capped(x, None)
    }

    /// Composition f(g).
    pub fn compose(&self, g: &SeriesPoly) -> Result<Self> {
        let mut acc = Self::constant(self.coeffs.last().unwrap().clone());
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(g)?.add(&Self::constant(c.clone()))?;
        }
        Ok(acc)
    }

    /// Coefficients of f(x + u) as a polynomial in u.
    pub fn taylor_shift(&self, x: &PuiseuxSeries, cap: Option<&Rational>) -> Result<Self> {
        let mut b: Vec<PuiseuxSeries> = self.coeffs.clone();
        let d = b.len();
        // Repeated synthetic division by (u − x).
        for k in 0..d {
            for j in (k..d - 1).rev() {
                let t = b[j + 1].mul_capped(x, cap)?;
                b[j] = b[j].add(&t)?;
                if let Some(p) = cap {
                    b[j] = b[j].truncate(p);
                }
            }
        }
        Ok(Self::new(b))
    }

    /// Lowest precision among the coefficients.
    pub fn precision(&self) -> Precision {
        self.coeffs.iter().fold(Precision::Exact, |p, c| p.min(c.precision()))
    }

    pub fn map_coeffs<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&PuiseuxSeries) -> Result<PuiseuxSeries>,
    {
        Ok(Self::new(self.coeffs.iter().map(f).collect::<Result<_>>()?))
    }

    /// Leading coefficient, which must be nonzero.
    pub fn leading(&self) -> Result<&PuiseuxSeries> {
        let c = self.coeffs.last().unwrap();
        if c.is_exact_zero() {
            return Err(Error::indeterminate("polynomial is zero"));
        }
        Ok(c)
    }

    /// Residue polynomial: the coefficient of t^0 of each coefficient.
    pub fn constant_terms(&self) -> Vec<Coeff> {
        self.coeffs
            .iter()
            .map(|c| c.coeff(&Rational::zero()).unwrap_or_else(Coeff::zero))
            .collect()
    }
}
