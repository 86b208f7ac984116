//! Fixed-point complex balls used for rigorous complex embeddings.
//!
//! A ball is `(re + i·im)·2^{-bits}` together with an upper bound `rad·2^{-bits}`
//! on the modulus of the error.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexBall {
    re: BigInt,
    im: BigInt,
    rad: BigInt,
    bits: u32,
}

fn shr_round(x: &BigInt, bits: u32) -> BigInt {
    if bits == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (bits - 1);
    (x + half) >> bits
}

fn shr_ceil(x: &BigInt, bits: u32) -> BigInt {
    let one = BigInt::one() << bits;
    (x + &one - BigInt::one()) >> bits
}

fn big_to_f64(x: &BigInt, bits: u32) -> f64 {
    let len = x.bits() as i64;
    let shift = (len - 62).max(0) as u32;
    let m = (x >> shift).to_f64().unwrap_or(0.0);
    m * 2f64.powi(shift as i32 - bits as i32)
}

fn pi_fixed(bits: u32) -> BigInt {
    // π = 16·atan(1/5) − 4·atan(1/239); each series contributes a small
    // number of rounding units which the guard bits absorb.
    let guard = 16;
    let b = bits + guard;
    let atan_inv = |x: u64| -> BigInt {
        let x = BigInt::from(x);
        let x2 = &x * &x;
        let mut term = (BigInt::one() << b) / &x;
        let mut sum = BigInt::zero();
        let mut k: u64 = 0;
        while !term.is_zero() {
            let t = &term / BigInt::from(2 * k + 1);
            if k.is_multiple_of(2) {
                sum += t;
            } else {
                sum -= t;
            }
            term /= &x2;
            k += 1;
        }
        sum
    };
    let pi = atan_inv(5) * 16 - atan_inv(239) * 4;
    shr_round(&pi, guard)
}

impl ComplexBall {
    pub fn exact_int(n: i64, bits: u32) -> Self {
        ComplexBall { re: BigInt::from(n) << bits, im: BigInt::zero(), rad: BigInt::zero(), bits }
    }

    pub fn zero(bits: u32) -> Self {
        Self::exact_int(0, bits)
    }

    pub fn from_rational(r: &Rational, bits: u32) -> Self {
        let num = r.numer() << bits;
        let (q, rem) = num.div_mod_floor(r.denom());
        let rad = if rem.is_zero() { BigInt::zero() } else { BigInt::one() };
        ComplexBall { re: q, im: BigInt::zero(), rad, bits }
    }

    /// e^{2πi·k/n}.
    pub fn root_of_unity(n: u32, k: i64, bits: u32) -> Self {
        let k = k.rem_euclid(n as i64);
        if let Some(0) = (4 * k).checked_rem(n as i64) {
            let quarter = 4 * k / n as i64;
            let (re, im) = [(1, 0), (0, 1), (-1, 0), (0, -1)][quarter as usize];
            return ComplexBall {
                re: BigInt::from(re) << bits,
                im: BigInt::from(im) << bits,
                rad: BigInt::zero(),
                bits,
            };
        }
        let guard = 24;
        let b = bits + guard;
        let pi = pi_fixed(b);
        // θ = 2πk/n reduced to (−π, π].
        let mut num = 2 * k;
        if num > n as i64 {
            num -= 2 * n as i64;
        }
        let theta = (&pi * BigInt::from(num)) / BigInt::from(n);
        let one = BigInt::one() << b;
        let mut term = one.clone();
        let mut cos = BigInt::zero();
        let mut sin = BigInt::zero();
        let mut k: u64 = 0;
        let mut steps: u64 = 0;
        while !term.is_zero() {
            match k % 4 {
                0 => cos += &term,
                1 => sin += &term,
                2 => cos -= &term,
                _ => sin -= &term,
            }
            k += 1;
            term = ((&term * &theta) >> b) / BigInt::from(k);
            steps += 1;
        }
        // Each step rounds by at most one unit; the tail is below one unit.
        let err_units = BigInt::from(2 * steps + 4);
        ComplexBall {
            re: shr_round(&cos, guard),
            im: shr_round(&sin, guard),
            rad: shr_ceil(&err_units, guard) + BigInt::one(),
            bits,
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn mag_units(&self) -> BigInt {
        self.re.abs() + self.im.abs()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.bits, o.bits);
        ComplexBall { re: &self.re + &o.re, im: &self.im + &o.im, rad: &self.rad + &o.rad, bits: self.bits }
    }

    pub fn neg(&self) -> Self {
        ComplexBall { re: -&self.re, im: -&self.im, rad: self.rad.clone(), bits: self.bits }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let b = self.bits;
        let re = shr_round(&(&self.re * &o.re - &self.im * &o.im), b);
        let im = shr_round(&(&self.re * &o.im + &self.im * &o.re), b);
        let cross = self.mag_units() * &o.rad + o.mag_units() * &self.rad + &self.rad * &o.rad;
        let rad = shr_ceil(&cross, b) + BigInt::from(2);
        ComplexBall { re, im, rad, bits: b }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let n = r.numer();
        let d = r.denom();
        let (re, r1) = (&self.re * n).div_mod_floor(d);
        let (im, r2) = (&self.im * n).div_mod_floor(d);
        let mut rad = (&self.rad * n.abs() + d - BigInt::one()) / d;
        if !r1.is_zero() || !r2.is_zero() {
            rad += BigInt::from(2);
        }
        ComplexBall { re, im, rad, bits: self.bits }
    }

    /// Principal square root. The radius bound assumes the error disk does
    /// not reach the origin, which holds for the nonzero radicands of the tower
    /// at working precision.
    pub fn sqrt(&self) -> Self {
        let b = self.bits;
        let norm2 = &self.re * &self.re + &self.im * &self.im;
        let modulus = norm2.sqrt();
        let sre = (((&modulus + &self.re) << b) / BigInt::from(2)).max(BigInt::zero()).sqrt();
        let mut sim = (((&modulus - &self.re) << b) / BigInt::from(2)).max(BigInt::zero()).sqrt();
        if self.im.sign() == Sign::Minus {
            sim = -sim;
        }
        // |√z − √w| ≤ |z − w| / √(|w| − r) on a common branch.
        let lower = (&modulus - &self.rad - BigInt::from(2)).max(BigInt::one());
        let root_lower = (lower << b).sqrt().max(BigInt::one());
        let rad = ((&self.rad + BigInt::from(2)) << b) / &root_lower + BigInt::from(4);
        ComplexBall { re: sre, im: sim, rad, bits: b }
    }

    pub fn re_f64(&self) -> f64 {
        big_to_f64(&self.re, self.bits)
    }

    pub fn im_f64(&self) -> f64 {
        big_to_f64(&self.im, self.bits)
    }

    /// Upper bound on the error radius, rounded up to an f64.
    pub fn radius_f64(&self) -> f64 {
        let r = big_to_f64(&self.rad, self.bits);
        r * (1.0 + 1e-12) + f64::MIN_POSITIVE
    }

    /// Real and imaginary parts of the midpoint as exact rationals.
    pub fn midpoint(&self) -> (Rational, Rational) {
        let d = BigInt::one() << self.bits;
        (Rational::new(self.re.clone(), d.clone()), Rational::new(self.im.clone(), d))
    }

    pub fn radius(&self) -> Rational {
        Rational::new(self.rad.clone(), BigInt::one() << self.bits)
    }

    /// Whether the exact point `re + i·im` lies in the ball.
    pub fn contains(&self, re: &Rational, im: &Rational) -> bool {
        let (mr, mi) = self.midpoint();
        let dr = &mr - re;
        let di = &mi - im;
        let r = self.radius();
        &dr * &dr + &di * &di <= &r * &r
    }

    /// Sign of the real or imaginary part when it is certified away from zero.
    pub fn certified_sign(&self, imaginary: bool) -> Option<i8> {
        let v = if imaginary { &self.im } else { &self.re };
        if v.abs() > self.rad {
            Some(if v.is_negative() { -1 } else { 1 })
        } else {
            None
        }
    }

    pub fn re_abs_units(&self) -> BigInt {
        self.re.abs()
    }

    pub fn im_abs_units(&self) -> BigInt {
        self.im.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::rational::q;

    #[test]
    fn pi_digits() {
        let p = pi_fixed(64);
        let approx = big_to_f64(&p, 64);
        assert!((approx - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn cube_root_of_unity() {
        let z = ComplexBall::root_of_unity(3, 1, 64);
        assert!(z.radius_f64() <= 2f64.powi(-60));
        // Oracle: Re = −1/2 exactly; Im² = 3/4.
        let (re, im) = z.midpoint();
        let r = z.radius();
        assert!((&re - q(-1, 2)).abs() <= r);
        assert!((&im * &im - q(3, 4)).abs() <= r.clone() * q(4, 1));
    }

    #[test]
    fn sqrt_of_minus_four() {
        let z = ComplexBall::from_rational(&q(-4, 1), 80);
        let s = z.sqrt();
        assert!(s.contains(&q(0, 1), &q(2, 1)));
    }
}
