//! Critical marked grid of f_{a,v} from equipotential disks.
//!
//! The level-ℓ disk of z is the component of {G < 3^{1−ℓ}·G(−a)} that
//! contains z. Whether two points share one is decided by flood fill over a
//! pixel grid on a box around both, and the answer must survive doubling
//! the resolution.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::big::{BigComplex, BigParam, BIG_FLOAT_THRESHOLD};
use super::green::{green_function, green_or_zero};
use super::{BridgeConfig, ComplexParam};
use crate::dynamics::MarkedGrid;
use crate::error::{Error, Result};

/// Box half-width in units of the distance between the two points.
const BOX_FACTOR: f64 = 1.5;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexGrid {
    pub grid: MarkedGrid,
    /// Pixels per side of the first pass; the certificate pass used twice
    /// as many.
    pub resolution: usize,
    pub g_minus: f64,
    pub g_plus: f64,
}

impl ComplexGrid {
    pub fn to_json(&self) -> Value {
        json!({
            "grid": self.grid.to_json(),
            "resolution": self.resolution,
            "certified_resolution": 2 * self.resolution,
            "G_minus": self.g_minus,
            "G_plus": self.g_plus,
        })
    }
}

/// Points of the dynamical plane in some number format.
trait Plane {
    type Z: Clone;
    fn critical(&self) -> Self::Z;
    fn eval(&self, z: &Self::Z) -> Self::Z;
    /// z − w rounded to a double.
    fn diff(&self, z: &Self::Z, w: &Self::Z) -> Complex64;
    fn shift(&self, z: &Self::Z, d: Complex64) -> Self::Z;
    /// G(z), or 0 when z does not escape within the budget.
    fn green(&self, z: &Self::Z) -> f64;
    /// Solutions of f(z) = w.
    fn preimages(&self, w: &Self::Z) -> Vec<Self::Z>;
}

struct Doubles<'a>(&'a ComplexParam, usize);

impl Plane for Doubles<'_> {
    type Z = Complex64;
    fn critical(&self) -> Complex64 {
        self.0.a
    }
    fn eval(&self, z: &Complex64) -> Complex64 {
        self.0.eval(*z)
    }
    fn diff(&self, z: &Complex64, w: &Complex64) -> Complex64 {
        z - w
    }
    fn shift(&self, z: &Complex64, d: Complex64) -> Complex64 {
        z + d
    }
    fn green(&self, z: &Complex64) -> f64 {
        green_or_zero(self.0, *z, self.1)
    }
    fn preimages(&self, w: &Complex64) -> Vec<Complex64> {
        self.0.preimages(*w).to_vec()
    }
}

/// Big floats until the orbit reaches the escape region, doubles after.
struct BigFloats<'a>(&'a ComplexParam, &'a BigParam, usize);

impl Plane for BigFloats<'_> {
    type Z = BigComplex;
    fn critical(&self) -> BigComplex {
        self.1.a.clone()
    }
    fn eval(&self, z: &BigComplex) -> BigComplex {
        self.1.eval(z)
    }
    fn diff(&self, z: &BigComplex, w: &BigComplex) -> Complex64 {
        z.sub(w).to_c64()
    }
    fn shift(&self, z: &BigComplex, d: Complex64) -> BigComplex {
        z.shift(d)
    }
    fn green(&self, z: &BigComplex) -> f64 {
        let a = self.0.a.norm();
        let c0 = (2.0 * self.0.a * self.0.a * self.0.a + self.0.v).norm();
        let mut w = z.clone();
        let mut scale = 1.0;
        for n in 0..self.2 {
            let x = w.to_c64();
            let r = x.norm();
            if r > 2.0 && 3.0 * a * a / (r * r) + c0 / (r * r * r) < 0.5 {
                return scale * green_or_zero(self.0, x, self.2 - n);
            }
            w = self.1.eval(&w);
            scale /= 3.0;
        }
        0.0
    }
    fn preimages(&self, w: &BigComplex) -> Vec<BigComplex> {
        let steps = (self.1.precision() as f64 / 40.0).log2().ceil().max(0.0) as usize + 3;
        let target = w.clone();
        self.0
            .preimages(w.to_c64())
            .iter()
            .map(|&z0| {
                let mut z = BigComplex::from_c64(z0, self.1.precision());
                for _ in 0..steps {
                    let d = self.1.derivative(&z);
                    if d.to_c64().norm() == 0.0 {
                        break;
                    }
                    z = z.sub(&self.1.eval(&z).sub(&target).div(&d));
                }
                z
            })
            .collect()
    }
}

/// Whether z and w lie in one component of {G < thr}. Pixels within two
/// pixel widths of a pinch point of the level set are excluded, since the
/// pixel grid could otherwise step across the pinch between two lobes.
fn same_disk<P: Plane>(p: &P, z: &P::Z, w: &P::Z, thr: f64, n: usize, pinches: &[P::Z]) -> Result<bool> {
    let zw = p.diff(z, w);
    let d = zw.norm();
    if d == 0.0 {
        return Ok(true);
    }
    let mid = p.shift(w, zw / 2.0);
    let h = BOX_FACTOR * d;
    let pixel = |x: &P::Z| -> (usize, usize) {
        let u = (p.diff(x, &mid) / h + Complex64::new(1.0, 1.0)) * (n as f64 / 2.0);
        ((u.re.floor() as usize).min(n - 1), (u.im.floor() as usize).min(n - 1))
    };
    let center = |i: usize, j: usize| {
        p.shift(&mid, Complex64::new((2 * i + 1) as f64 / n as f64 - 1.0, (2 * j + 1) as f64 / n as f64 - 1.0) * h)
    };
    let mut inside: Vec<Option<bool>> = vec![None; n * n];
    for s in pinches {
        let u = (p.diff(s, &mid) / h + Complex64::new(1.0, 1.0)) * (n as f64 / 2.0);
        let reach = -3.0..n as f64 + 3.0;
        if !reach.contains(&u.re) || !reach.contains(&u.im) {
            continue;
        }
        let (i0, j0) = ((u.re - 2.5).floor().max(0.0) as usize, (u.im - 2.5).floor().max(0.0) as usize);
        for i in i0..n.min(i0 + 6) {
            for j in j0..n.min(j0 + 6) {
                if (Complex64::new(i as f64 + 0.5, j as f64 + 0.5) - u).norm() < 2.0 {
                    inside[j * n + i] = Some(false);
                }
            }
        }
    }
    let mut seen = vec![false; n * n];
    let start = pixel(z);
    let goal = pixel(w);
    if inside[start.1 * n + start.0] == Some(false) || inside[goal.1 * n + goal.0] == Some(false) {
        return Err(Error::ResolutionInsufficient(format!("a point lies within two pixels of a pinch at {n} pixels")));
    }
    let mut queue = VecDeque::from([start]);
    seen[start.1 * n + start.0] = true;
    while let Some((i, j)) = queue.pop_front() {
        if (i, j) == goal {
            return Ok(true);
        }
        let nbrs = [(i.wrapping_sub(1), j), (i + 1, j), (i, j.wrapping_sub(1)), (i, j + 1)];
        for (a, b) in nbrs {
            if a >= n || b >= n || seen[b * n + a] {
                continue;
            }
            seen[b * n + a] = true;
            let cell = &mut inside[b * n + a];
            let ok = *cell.get_or_insert_with(|| (a, b) == goal || p.green(&center(a, b)) < thr);
            if ok {
                queue.push_back((a, b));
            }
        }
    }
    Ok(false)
}

/// Level-`depth` critical marked grid of f at +a. Parameters with |a|
/// above 10⁸ need the big-float path.
pub fn complex_critical_grid(p: &ComplexParam, depth: usize, cfg: &BridgeConfig) -> Result<ComplexGrid> {
    match &p.big {
        Some(b) => grid_in(&BigFloats(p, b, cfg.max_iterations), p, depth, cfg),
        None if p.a.norm() > BIG_FLOAT_THRESHOLD => Err(Error::PrecisionInsufficient(format!(
            "|a| = {:e} needs the big-float path (big_float = true)",
            p.a.norm()
        ))),
        None => grid_in(&Doubles(p, cfg.max_iterations), p, depth, cfg),
    }
}

fn grid_in<P: Plane>(plane: &P, p: &ComplexParam, depth: usize, cfg: &BridgeConfig) -> Result<ComplexGrid> {
    let g0 = green_function(p, -p.a, cfg.max_iterations)?.value;
    if g0 <= 0.0 {
        return Err(Error::MaxIterationsWithoutEscape(cfg.max_iterations));
    }
    let crit = plane.critical();
    let g_plus = plane.green(&crit);
    if depth > 0 && g_plus >= 3f64.powi(1 - depth as i32) * g0 {
        return Err(Error::NotALevelNPoint { level: depth, detail: format!("G(+a) = {g_plus} is too large") });
    }
    let mut orbit = vec![crit];
    for k in 0..depth {
        let next = plane.eval(&orbit[k]);
        orbit.push(next);
    }
    // Pinch points of {G < 3^{1−ℓ}G(−a)} are the points f^{ℓ−1} sends to −a.
    let mut pinches = vec![plane.shift(&orbit[0], -2.0 * p.a)];
    let mut marks = Vec::new();
    for l in 0..=depth {
        if l >= 2 {
            pinches = pinches.iter().flat_map(|w| plane.preimages(w)).collect();
        }
        let thr = 3f64.powi(1 - l as i32) * g0;
        for k in 0..=depth - l {
            let marked = if l == 0 || k == 0 {
                true
            } else if !marks.contains(&(l - 1, k)) {
                // D_ℓ(a) ⊂ D_{ℓ−1}(a).
                false
            } else {
                let coarse = same_disk(plane, &orbit[0], &orbit[k], thr, cfg.resolution, &pinches)?;
                let fine = same_disk(plane, &orbit[0], &orbit[k], thr, 2 * cfg.resolution, &pinches)?;
                if coarse != fine {
                    return Err(Error::ResolutionInsufficient(format!(
                        "entry ({l}, {k}) changes between {} and {} pixels",
                        cfg.resolution,
                        2 * cfg.resolution
                    )));
                }
                coarse
            };
            if marked {
                marks.push((l, k));
            }
        }
    }
    Ok(ComplexGrid { grid: MarkedGrid::from_marks(depth, marks)?, resolution: cfg.resolution, g_minus: g0, g_plus })
}
