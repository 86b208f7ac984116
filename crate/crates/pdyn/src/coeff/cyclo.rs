//! Cyclotomic fields Q(ζ_n) in the power basis modulo Φ_n.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rational::{fmt_rational, rational_sqrt, Rational};
use crate::error::{Error, Result};

/// An element of Q(ζ_order), stored in canonical form: `order` is the least
/// n with the element in Q(ζ_n), and `coords` has exactly φ(order) entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo {
    order: u32,
    coords: Vec<Rational>,
}

fn phi_cache() -> &'static Mutex<HashMap<u32, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_poly(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    if let Some(p) = phi_cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = poly_div_exact(&num, &den);
        }
    }
    phi_cache().lock().unwrap().insert(n, num.clone());
    num
}

fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    let mut quo = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd].clone();
        if c.is_zero() {
            continue;
        }
        quo[i] = c.clone();
        for j in 0..=dd {
            rem[i + j] -= &c * &den[j];
        }
    }
    quo
}

/// Euler's totient.
pub fn totient(n: u32) -> usize {
    let mut m = n;
    let mut result = n as u64;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p as u64;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m as u64;
    }
    result as usize
}

/// Reduces a polynomial in ζ_n modulo Φ_n.
fn reduce(mut poly: Vec<Rational>, n: u32) -> Vec<Rational> {
    let phi = cyclotomic_poly(n);
    let deg = phi.len() - 1;
    if poly.len() > deg {
        for i in (deg..poly.len()).rev() {
            let c = std::mem::replace(&mut poly[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..deg {
                if !phi[j].is_zero() {
                    let t = &c * Rational::from_integer(phi[j].clone());
                    poly[i - deg + j] -= t;
                }
            }
        }
    }
    poly.resize(deg, Rational::zero());
    poly
}

/// Solves A y = b over Q; A is given column-wise. Returns None when inconsistent.
fn solve_columns(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = b.len();
    let ncols = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[r].clone()).collect();
            row.push(b[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..=ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if m[r..].iter().any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut y = vec![Rational::zero(); ncols];
    for (i, &c) in pivots.iter().enumerate() {
        y[c] = m[i][ncols].clone();
    }
    Some(y)
}

impl Cyclo {
    pub fn zero() -> Self {
        Cyclo { order: 1, coords: vec![Rational::zero()] }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        Cyclo { order: 1, coords: vec![r] }
    }

    /// ζ_n^k.
    pub fn zeta(n: u32, k: i64) -> Self {
        assert!(n >= 1);
        let e = k.rem_euclid(n as i64) as usize;
        let mut poly = vec![Rational::zero(); e + 1];
        poly[e] = Rational::one();
        Self::from_poly(poly, n)
    }

    pub fn from_poly(poly: Vec<Rational>, n: u32) -> Self {
        let coords = reduce(poly, n);
        Cyclo { order: n, coords }.canonical()
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.order == 1 && self.coords[0].is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.order == 1 && self.coords[0].is_one()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.order == 1 {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    /// Coordinates in Q(ζ_m) for a multiple m of the order.
    pub fn lift(&self, m: u32) -> Vec<Rational> {
        assert!(m.is_multiple_of(self.order), "order {} does not divide {}", self.order, m);
        if m == self.order {
            return self.coords.clone();
        }
        let step = (m / self.order) as usize;
        let mut poly = vec![Rational::zero(); step * self.coords.len().max(1)];
        for (j, c) in self.coords.iter().enumerate() {
            poly[j * step] = c.clone();
        }
        reduce(poly, m)
    }

    fn canonical(mut self) -> Self {
        if self.order <= 2 {
            self.order = 1;
            self.coords.truncate(1);
            return self;
        }
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            return Cyclo { order: 1, coords: vec![self.coords[0].clone()] };
        }
        let n = self.order;
        let phin = self.coords.len();
        for d in 3..n {
            if !n.is_multiple_of(d) || totient(d) > phin {
                continue;
            }
            let step = (n / d) as usize;
            let cols: Vec<Vec<Rational>> = (0..totient(d))
                .map(|j| {
                    let mut poly = vec![Rational::zero(); j * step + 1];
                    poly[j * step] = Rational::one();
                    reduce(poly, n)
                })
                .collect();
            if let Some(y) = solve_columns(&cols, &self.coords) {
                return Cyclo { order: d, coords: y }.canonical();
            }
        }
        self
    }

    fn common(&self, other: &Self) -> (u32, Vec<Rational>, Vec<Rational>) {
        let m = (self.order as u64).lcm(&(other.order as u64)) as u32;
        (m, self.lift(m), other.lift(m))
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::from_rational(&self.coords[0] + &other.coords[0]);
        }
        let (m, a, b) = self.common(other);
        let coords = a.iter().zip(b.iter()).map(|(x, y)| x + y).collect();
        Cyclo { order: m, coords }.canonical()
    }

    pub fn neg(&self) -> Self {
        Cyclo { order: self.order, coords: self.coords.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Self::from_rational(&self.coords[0] * &other.coords[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coords[0]);
        }
        if self.order == 1 {
            return other.scale(&self.coords[0]);
        }
        let (m, a, b) = self.common(other);
        let mut poly = vec![Rational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    poly[i + j] += x * y;
                }
            }
        }
        Self::from_poly(poly, m)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Cyclo { order: self.order, coords: self.coords.iter().map(|c| c * r).collect() }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.order == 1 {
            return Ok(Self::from_rational(self.coords[0].recip()));
        }
        let n = self.order;
        let d = self.coords.len();
        // Columns of the multiplication-by-self matrix.
        let cols: Vec<Vec<Rational>> = (0..d)
            .map(|j| {
                let mut poly = vec![Rational::zero(); j + d];
                for (i, c) in self.coords.iter().enumerate() {
                    poly[i + j] = c.clone();
                }
                reduce(poly, n)
            })
            .collect();
        let mut e = vec![Rational::zero(); d];
        e[0] = Rational::one();
        // Φ_n is irreducible, so the system always has a solution for a nonzero element.
        let y = solve_columns(&cols, &e).ok_or(Error::DivisionByZero)?;
        Ok(Cyclo { order: n, coords: y }.canonical())
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.inv()?))
    }

    /// Square root inside Q(ζ_n) for a multiple n of the order. `Ok(None)`
    /// means the element is not a square there.
    pub fn sqrt_in(&self, n: u32) -> Result<Option<Self>> {
        let n = if n <= 2 { 1 } else { n };
        if self.is_zero() {
            return Ok(Some(Self::zero()));
        }
        if n == 1 {
            return Ok(self.as_rational().and_then(rational_sqrt).map(Self::from_rational));
        }
        if n % self.order != 0 {
            return Err(Error::unsupported(format!(
                "element of order {} is not in Q(z{})",
                self.order, n
            )));
        }
        if n.is_power_of_two() {
            return self.sqrt_two_power(n);
        }
        if n == 3 || n == 6 {
            return self.sqrt_order_three();
        }
        Err(Error::unsupported(format!("square roots in Q(z{n}) are not supported")))
    }

    /// Q(ζ_n) = Q(ζ_{n/2})(ζ_n) with ζ_n² = ζ_{n/2}, for n a power of two.
    fn sqrt_two_power(&self, n: u32) -> Result<Option<Self>> {
        let h = n / 2;
        let c = self.lift(n);
        let even: Vec<Rational> = c.iter().step_by(2).cloned().collect();
        let odd: Vec<Rational> = c.iter().skip(1).step_by(2).cloned().collect();
        let a = Self::from_poly(even, h);
        let b = Self::from_poly(odd, h);
        let r = Self::zeta(h, 1);
        let gen = Self::zeta(n, 1);
        quadratic_sqrt(&a, &b, &r, &gen, h)
    }

    /// Q(ζ_3) = Q(√−3) with √−3 = 2ζ_3 + 1.
    fn sqrt_order_three(&self) -> Result<Option<Self>> {
        let c = self.lift(3);
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let a = Self::from_rational(&c[0] - &c[1] * &half);
        let b = Self::from_rational(&c[1] * &half);
        let r = Self::from_rational(Rational::from_integer(BigInt::from(-3)));
        let gen = Self::zeta(3, 1).scale(&Rational::from_integer(BigInt::from(2))).add(&Self::one());
        quadratic_sqrt(&a, &b, &r, &gen, 1)
    }
}

/// Square root of a + b·g in K(g), g² = r, with a, b, r in the subfield K = Q(ζ_sub).
fn quadratic_sqrt(a: &Cyclo, b: &Cyclo, r: &Cyclo, g: &Cyclo, sub: u32) -> Result<Option<Cyclo>> {
    if b.is_zero() {
        if let Some(p) = a.sqrt_in(sub)? {
            return Ok(Some(p));
        }
        if let Some(p) = a.div(r)?.sqrt_in(sub)? {
            return Ok(Some(p.mul(g)));
        }
        return Ok(None);
    }
    let norm = a.mul(a).sub(&b.mul(b).mul(r));
    let Some(s) = norm.sqrt_in(sub)? else {
        return Ok(None);
    };
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    for sign in [1, -1] {
        let s = if sign == 1 { s.clone() } else { s.neg() };
        let h = a.add(&s).scale(&half);
        if let Some(p) = h.sqrt_in(sub)? {
            if p.is_zero() {
                continue;
            }
            let q = b.div(&p.scale(&Rational::from_integer(BigInt::from(2))))?;
            return Ok(Some(p.add(&q.mul(g))));
        }
    }
    Ok(None)
}

impl std::fmt::Display for Cyclo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.order == 1 {
            return f.write_str(&fmt_rational(&self.coords[0]));
        }
        let mut first = true;
        for (j, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if j == 0 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "z{}^{}", self.order, j)?;
            } else {
                write!(f, "{}*z{}^{}", fmt_rational(&mag), self.order, j)?;
            }
        }
        Ok(())
    }
}
