//! Multi-precision path of the bridge. Above |a| = 10⁸ doubles cannot
//! resolve the level disks next to ±a, so the parameter, the critical orbit
//! and the flood-fill pixels are carried in big floats until they escape.

use astro_float::{BigFloat, Consts, Radix, RoundingMode, Sign};
use num_complex::Complex64;

use crate::coeff::Rational;
use crate::error::{Error, Result};

const RM: RoundingMode = RoundingMode::ToEven;

/// |a| above which the big-float path is required.
pub const BIG_FLOAT_THRESHOLD: f64 = 1e8;

fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    match x.as_raw_parts() {
        Some((m, _, s, e, _)) => {
            let top = *m.last().unwrap_or(&0) as f64;
            let v = top * 2f64.powi(e - 64);
            if s == Sign::Neg {
                -v
            } else {
                v
            }
        }
        None => f64::NAN,
    }
}

fn from_rational(r: &Rational, p: usize, cc: &mut Consts) -> BigFloat {
    let n = BigFloat::parse(&r.numer().to_string(), Radix::Dec, p + 64, RM, cc);
    let d = BigFloat::parse(&r.denom().to_string(), Radix::Dec, p + 64, RM, cc);
    n.div(&d, p, RM)
}

pub(crate) fn consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::PrecisionInsufficient(format!("big-float constants: {e:?}")))
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    re: BigFloat,
    im: BigFloat,
    p: usize,
}

impl BigComplex {
    pub fn from_c64(z: Complex64, p: usize) -> Self {
        BigComplex { re: BigFloat::from_f64(z.re, p), im: BigFloat::from_f64(z.im, p), p }
    }

    pub fn from_rationals(re: &Rational, im: &Rational, p: usize, cc: &mut Consts) -> Self {
        BigComplex { re: from_rational(re, p, cc), im: from_rational(im, p, cc), p }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(to_f64(&self.re), to_f64(&self.im))
    }

    pub fn add(&self, o: &Self) -> Self {
        BigComplex { re: self.re.add(&o.re, self.p, RM), im: self.im.add(&o.im, self.p, RM), p: self.p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        BigComplex { re: self.re.sub(&o.re, self.p, RM), im: self.im.sub(&o.im, self.p, RM), p: self.p }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.p;
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        BigComplex { re, im, p }
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.p;
        let n = o.re.mul(&o.re, p, RM).add(&o.im.mul(&o.im, p, RM), p, RM);
        let re = self.re.mul(&o.re, p, RM).add(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.im.mul(&o.re, p, RM).sub(&self.re.mul(&o.im, p, RM), p, RM);
        BigComplex { re: re.div(&n, p, RM), im: im.div(&n, p, RM), p }
    }

    pub fn scale(&self, x: f64) -> Self {
        let x = BigFloat::from_f64(x, self.p);
        BigComplex { re: self.re.mul(&x, self.p, RM), im: self.im.mul(&x, self.p, RM), p: self.p }
    }

    pub fn scale_rational(&self, r: &Rational, cc: &mut Consts) -> Self {
        let x = from_rational(r, self.p, cc);
        BigComplex { re: self.re.mul(&x, self.p, RM), im: self.im.mul(&x, self.p, RM), p: self.p }
    }

    /// self + d for a small double offset d.
    pub fn shift(&self, d: Complex64) -> Self {
        self.add(&BigComplex::from_c64(d, self.p))
    }

    pub fn exp(&self, cc: &mut Consts) -> Self {
        let p = self.p;
        let m = self.re.exp(p, RM, cc);
        let re = m.mul(&self.im.cos(p, RM, cc), p, RM);
        let im = m.mul(&self.im.sin(p, RM, cc), p, RM);
        BigComplex { re, im, p }
    }

    /// 2πi·self.
    pub fn times_two_pi_i(&self, cc: &mut Consts) -> Self {
        let two_pi = cc.pi(self.p, RM).mul(&BigFloat::from_f64(2.0, self.p), self.p, RM);
        BigComplex { re: self.im.mul(&two_pi, self.p, RM).neg(), im: self.re.mul(&two_pi, self.p, RM), p: self.p }
    }
}

/// (a, v) carried in big floats.
#[derive(Clone, Debug, PartialEq)]
pub struct BigParam {
    pub a: BigComplex,
    pub v: BigComplex,
}

impl BigParam {
    pub fn precision(&self) -> usize {
        self.a.p
    }

    /// (z − a)²(z + 2a) + v.
    pub fn eval(&self, z: &BigComplex) -> BigComplex {
        let d = z.sub(&self.a);
        let w = z.add(&self.a.scale(2.0));
        d.mul(&d).mul(&w).add(&self.v)
    }

    /// f′(z) = 3(z − a)(z + a).
    pub fn derivative(&self, z: &BigComplex) -> BigComplex {
        z.sub(&self.a).mul(&z.add(&self.a)).scale(3.0)
    }
}
