//! Roots of small residue polynomials over the coefficient tower.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::coeff::{Coeff, Field, Rational};
use crate::error::{Error, Result};

fn trim(p: &mut Vec<Coeff>) {
    while p.len() > 1 && p.last().is_some_and(Coeff::is_zero) {
        p.pop();
    }
}

fn degree(p: &[Coeff]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn derivative(p: &[Coeff]) -> Vec<Coeff> {
    let mut d: Vec<Coeff> = p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&Rational::from_integer((i as i64).into()))).collect();
    if d.is_empty() {
        d.push(Coeff::zero());
    }
    d
}

fn rem(a: &[Coeff], b: &[Coeff]) -> Result<Vec<Coeff>> {
    let mut r = a.to_vec();
    let db = degree(b);
    let lb = b[db].clone();
    while degree(&r) >= db && !r.iter().all(Coeff::is_zero) {
        let dr = degree(&r);
        let f = r[dr].div(&lb)?;
        for i in 0..=db {
            r[dr - db + i] = r[dr - db + i].sub(&b[i].mul(&f)?)?;
        }
        r[dr] = Coeff::zero();
        if dr == 0 {
            break;
        }
    }
    trim(&mut r);
    Ok(r)
}

fn gcd(a: &[Coeff], b: &[Coeff]) -> Result<Vec<Coeff>> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.iter().all(Coeff::is_zero) {
        let r = rem(&x, &y)?;
        x = y;
        y = r;
    }
    let l = x[degree(&x)].clone();
    x.iter().map(|c| c.div(&l)).collect()
}

fn eval(p: &[Coeff], x: &Coeff) -> Result<Coeff> {
    let mut acc = Coeff::zero();
    for c in p.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

/// Divides by (X − r).
fn deflate(p: &[Coeff], r: &Coeff) -> Result<Vec<Coeff>> {
    let d = degree(p);
    let mut q = vec![Coeff::zero(); d];
    let mut carry = Coeff::zero();
    for i in (1..=d).rev() {
        carry = carry.mul(r)?.add(&p[i])?;
        q[i - 1] = carry.clone();
    }
    Ok(q)
}

fn divisors(n: &num_bigint::BigInt) -> Option<Vec<num_bigint::BigInt>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000 {
        return None;
    }
    Some((1..=n).filter(|d| n % d == 0).map(Into::into).collect())
}

/// Rational roots of a polynomial with rational coefficients.
fn rational_root(p: &[Coeff]) -> Option<Coeff> {
    let rs: Option<Vec<Rational>> = p.iter().map(|c| c.as_rational().cloned()).collect();
    let rs = rs?;
    let den = rs.iter().fold(num_bigint::BigInt::one(), |l, r| num_integer::Integer::lcm(&l, r.denom()));
    let ints: Vec<num_bigint::BigInt> = rs.iter().map(|r| (r * Rational::from_integer(den.clone())).to_integer()).collect();
    let lo = ints.iter().position(|c| !c.is_zero())?;
    if lo > 0 {
        return Some(Coeff::zero());
    }
    let hi = ints.iter().rposition(|c| !c.is_zero())?;
    for pn in divisors(&ints[0])? {
        for qd in divisors(&ints[hi])? {
            for sign in [1i64, -1] {
                let cand = Rational::new(&pn * sign, qd.clone());
                let c = Coeff::from_rational(cand);
                if eval(p, &c).ok()?.is_zero() {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// All roots (with multiplicity) of p, whose coefficients lie in `ctx`.
/// Square roots are taken inside `ctx`; anything beyond quadratic radicals
/// raises UnsupportedExtension.
pub fn residue_roots(p: &[Coeff], ctx: Field) -> Result<Vec<(Coeff, usize)>> {
    let mut p = p.to_vec();
    trim(&mut p);
    let d = degree(&p);
    match d {
        0 => Ok(vec![]),
        1 => Ok(vec![(p[0].neg().div(&p[1])?, 1)]),
        2 => {
            let (c, b, a) = (&p[0], &p[1], &p[2]);
            let disc = b.mul(b)?.sub(&a.mul(c)?.scale(&Rational::from_integer(4.into())))?;
            let two_a = a.scale(&Rational::from_integer(2.into()));
            if disc.is_zero() {
                return Ok(vec![(b.neg().div(&two_a)?, 2)]);
            }
            let s = disc.sqrt_in(ctx)?;
            let r1 = b.neg().add(&s)?.div(&two_a)?;
            let r2 = b.neg().sub(&s)?.div(&two_a)?;
            Ok(vec![(r1, 1), (r2, 1)])
        }
        _ => {
            if p[0].is_zero() {
                let mut rest = residue_roots(&p[1..], ctx)?;
                push_root(&mut rest, Coeff::zero(), 1);
                return Ok(rest);
            }
            let g = gcd(&p, &derivative(&p))?;
            if degree(&g) > 0 {
                // Repeated factor: roots of g carry the extra multiplicity.
                let mut out = Vec::new();
                let mut rest = p.clone();
                for (r, _) in residue_roots(&g, ctx)? {
                    let mut m = 0;
                    while degree(&rest) > 0 && eval(&rest, &r)?.is_zero() {
                        rest = deflate(&rest, &r)?;
                        m += 1;
                    }
                    if m > 0 {
                        push_root(&mut out, r, m);
                    }
                }
                for (r, m) in residue_roots(&rest, ctx)? {
                    push_root(&mut out, r, m);
                }
                return Ok(out);
            }
            if let Some(r) = rational_root(&p) {
                let q = deflate(&p, &r)?;
                let mut out = residue_roots(&q, ctx)?;
                push_root(&mut out, r, 1);
                return Ok(out);
            }
            if d == 3 && p[1].is_zero() && p[2].is_zero() {
                // X³ = c: needs a cube root.
                return Err(Error::unsupported("residue equation X^3 = c needs a cube root"));
            }
            Err(Error::unsupported(format!("residue polynomial of degree {d} has no root in the coefficient tower")))
        }
    }
}

fn push_root(out: &mut Vec<(Coeff, usize)>, r: Coeff, m: usize) {
    if let Some(e) = out.iter_mut().find(|(x, _)| x == &r) {
        e.1 += m;
    } else {
        out.push((r, m));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Coeff {
        Coeff::from_i64(n)
    }

    #[test]
    fn double_root_cubic() {
        // (X − 1)²(X + 2) = X³ − 3X + 2.
        let r = residue_roots(&[c(2), c(-3), c(0), c(1)], Field::RATIONALS).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.contains(&(c(1), 2)));
        assert!(r.contains(&(c(-2), 1)));
    }

    #[test]
    fn quadratic_with_radical() {
        let r = residue_roots(&[c(-3), c(0), c(1)], Field::RATIONALS).unwrap();
        for (x, m) in r {
            assert_eq!(m, 1);
            assert_eq!(x.mul(&x).unwrap(), c(3));
        }
    }

    #[test]
    fn irreducible_cubic_is_unsupported() {
        assert!(matches!(residue_roots(&[c(-2), c(0), c(0), c(1)], Field::RATIONALS), Err(Error::UnsupportedExtension(_))));
    }

    #[test]
    fn rational_root_then_quadratic() {
        // (X − 2)(X² + 1).
        let r = residue_roots(&[c(-2), c(1), c(-2), c(1)], Field::RATIONALS).unwrap();
        assert_eq!(r.len(), 3);
        for (x, _) in r {
            assert!(eval(&[c(-2), c(1), c(-2), c(1)], &x).unwrap().is_zero());
        }
    }
}
