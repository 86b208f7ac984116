//! Action of a polynomial on balls.

use num_traits::Signed;

use super::ball::{BallKind, UltrametricBall};
use super::roots::residue_roots;
use crate::coeff::{Coeff, Field, Rational};
use crate::error::{Error, Result};
use crate::puiseux::{newton_polygon, segment_residue, PuiseuxSeries, SeriesPoly};

fn ri(n: usize) -> Rational {
    Rational::from_integer((n as i64).into())
}

/// Taylor coefficients of f at c, with exponents far above anything the
/// ball computations can see dropped.
fn taylor(f: &SeriesPoly, c: &PuiseuxSeries, rho: &Rational) -> Result<SeriesPoly> {
    let d = f.degree();
    let lead = f.leading()?.val()?;
    let top = lead + ri(d) * rho;
    let cap = top + Rational::from_integer(2.into()) + ri(d) * rho.abs();
    f.taylor_shift(c, Some(&cap))
}

/// min_{i≥1} o(b_i) + i·s and the index attaining it (largest for closed
/// balls, smallest for open ones).
fn weierstrass(b: &SeriesPoly, s: &Rational, kind: BallKind) -> Result<(Rational, usize)> {
    weierstrass_from(b, s, kind, 1)
}

fn weierstrass_from(b: &SeriesPoly, s: &Rational, kind: BallKind, start: usize) -> Result<(Rational, usize)> {
    let mut best: Option<(Rational, usize)> = None;
    let mut unknown: Vec<Rational> = Vec::new();
    for (i, c) in b.coeffs().iter().enumerate().skip(start) {
        let v = match c.terms().first() {
            Some((e, _)) => e + ri(i) * s,
            None => {
                if let Some(p) = c.precision().finite() {
                    unknown.push(p + ri(i) * s);
                }
                continue;
            }
        };
        best = match best {
            None => Some((v, i)),
            Some((m, j)) => {
                if v < m || (v == m && kind == BallKind::Closed) {
                    Some((v, i))
                } else {
                    Some((m, j))
                }
            }
        };
    }
    let (m, i) = best.ok_or_else(|| Error::indeterminate("polynomial is constant on the ball"))?;
    if unknown.iter().any(|u| u <= &m) {
        return Err(Error::indeterminate("a Taylor coefficient is undetermined at working precision"));
    }
    Ok((m, i))
}

/// Image of a ball and the degree of f on it.
pub fn image_ball(f: &SeriesPoly, b: &UltrametricBall) -> Result<(UltrametricBall, usize)> {
    let t = taylor(f, b.center(), b.log_radius())?;
    let (m, d) = weierstrass(&t, b.log_radius(), b.kind())?;
    let img = UltrametricBall::new(t.coeff(0), m, b.kind())?;
    Ok((img, d))
}

/// Number of roots of p in the ball, with multiplicity.
pub fn roots_in_ball(p: &SeriesPoly, b: &UltrametricBall) -> Result<usize> {
    if p.degree() == 0 {
        return if p.coeff(0).is_exact_zero() {
            Err(Error::indeterminate("zero polynomial"))
        } else {
            Ok(0)
        };
    }
    // Roots with valuation ≥ ρ (> ρ): the last (first) index attaining
    // min_i o(b_i) + i·ρ.
    let t = taylor(p, b.center(), b.log_radius())?;
    Ok(weierstrass_from(&t, b.log_radius(), b.kind(), 0)?.1)
}

/// 1 + number of critical points in the ball.
pub fn degree_on_ball(f: &SeriesPoly, b: &UltrametricBall) -> Result<usize> {
    let df = f.derivative();
    if df.degree() == 0 {
        return Ok(1);
    }
    Ok(1 + roots_in_ball(&df, b)?)
}

struct Node {
    x: PuiseuxSeries,
    bound: Rational,
    strict: bool,
    k: usize,
}

fn field_of(p: &SeriesPoly) -> Result<Field> {
    let mut f = Field::RATIONALS;
    for c in p.coeffs() {
        f = f.join(c.field()?)?;
    }
    Ok(f)
}

/// Components of f⁻¹(target) inside `within`, each with the degree of f on it.
///
/// The search follows the Newton polygon of f(x + u) − c′ one edge at a time,
/// refining approximate preimages of the target center until they land in the
/// target; each landing point determines its component.
pub fn preimage_balls(
    f: &SeriesPoly,
    target: &UltrametricBall,
    within: &UltrametricBall,
) -> Result<Vec<(UltrametricBall, usize)>> {
    let (img, deg) = image_ball(f, within)?;
    if !img.contains_ball(target)? {
        if target.contains_ball(&img)? {
            return Ok(vec![(within.clone(), deg)]);
        }
        return Ok(vec![]);
    }
    let cprime = target.center();
    let rho_t = target.log_radius();
    let mut out: Vec<(UltrametricBall, usize)> = Vec::new();
    let mut stack = vec![Node {
        x: within.center().clone(),
        bound: within.log_radius().clone(),
        strict: within.kind() == BallKind::Open,
        k: deg,
    }];
    let mut steps = 0usize;
    while let Some(node) = stack.pop() {
        steps += 1;
        if steps > 100_000 {
            return Err(Error::NoConvergence("preimage search did not terminate".into()));
        }
        let mut g = f.taylor_shift(&node.x, None)?;
        let mut cs = g.coeffs().to_vec();
        cs[0] = cs[0].sub(cprime)?;
        g = SeriesPoly::new(cs);
        if target.contains(&g.coeff(0).add(cprime)?)? {
            // s* = max_{i≥1} (ρ′ − o(b_i))/i.
            let mut s: Option<Rational> = None;
            for (i, c) in g.coeffs().iter().enumerate().skip(1) {
                if let Some((e, _)) = c.terms().first() {
                    let v = (rho_t - e) / ri(i);
                    s = Some(match s {
                        Some(m) if m >= v => m,
                        _ => v,
                    });
                } else if !c.is_exact_zero() {
                    return Err(Error::indeterminate("a Taylor coefficient is undetermined at working precision"));
                }
            }
            let s = s.ok_or_else(|| Error::indeterminate("polynomial is constant"))?;
            let (_, d) = weierstrass(&g, &s, target.kind())?;
            let comp = UltrametricBall::new(node.x.clone(), s.clone(), target.kind())?;
            let covers_region = match (target.kind(), node.strict) {
                (BallKind::Closed, _) => s <= node.bound,
                (BallKind::Open, false) => s < node.bound,
                (BallKind::Open, true) => s <= node.bound,
            };
            if !out.iter().any(|(b, _)| b == &comp) {
                out.push((comp, d));
            }
            if covers_region || d >= node.k {
                continue;
            }
        }
        let np = newton_polygon(&g)?;
        let ctx = field_of(&g)?;
        for seg in &np.segments {
            let mu = &seg.root_valuation;
            let inside = if node.strict { mu > &node.bound } else { mu >= &node.bound };
            if !inside {
                continue;
            }
            let res = segment_residue(&g, seg);
            for (a, m) in residue_roots(&res, ctx)? {
                let x = node.x.add(&PuiseuxSeries::monomial(a, mu.clone()))?;
                stack.push(Node { x, bound: mu.clone(), strict: true, k: m });
            }
        }
    }
    Ok(out)
}

/// Residue map of f: B0 → B1 in the coordinates ζ = c0 + X·t^{ρ0},
/// f(ζ) = c1 + Y·t^{ρ1}. Returns the coefficients of Y = P(X).
pub fn reduce_map(f: &SeriesPoly, b0: &UltrametricBall, b1: &UltrametricBall) -> Result<Vec<Coeff>> {
    if !b0.is_closed() || !b1.is_closed() {
        return Err(Error::indeterminate("residue maps are defined between closed balls"));
    }
    let (img, _) = image_ball(f, b0)?;
    if &img != b1 {
        return Err(Error::indeterminate(format!("f maps {b0} onto {img}, not {b1}")));
    }
    let t = taylor(f, b0.center(), b0.log_radius())?;
    let mut out = Vec::with_capacity(t.degree() + 1);
    for (i, c) in t.coeffs().iter().enumerate() {
        let c = if i == 0 { c.sub(b1.center())? } else { c.clone() };
        let e = b1.log_radius() - ri(i) * b0.log_radius();
        out.push(c.coeff(&e).ok_or_else(|| Error::indeterminate("Taylor coefficient not known to the residue exponent"))?);
    }
    while out.len() > 1 && out.last().is_some_and(Coeff::is_zero) {
        out.pop();
    }
    Ok(out)
}
