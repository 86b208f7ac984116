//! Acceptance criteria 1 to 12, one report line each. Runs without the test
//! harness so the lines are always shown.
//!
//! Criterion 10 checks the Green-function upper bound log|a| + ½log(3/2) at
//! −a as stated. That bound does not hold (G(−a) is near log|a| + ⅓log 4 on
//! v = a), so the criterion is expected to fail; every other criterion must
//! pass.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use pdyn::bridge::*;
use pdyn::coeff::{q, Rational};
use pdyn::dynamics::*;
use pdyn::parameter::{find_center, parameter_radii, realize_grid};
use pdyn::puiseux::{hensel_lift, parse_series, sigma_action, PuiseuxSeries, SeriesPoly};
use pdyn::{Error, Rule};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

/// Criteria whose statement is known not to hold.
const EXPECTED_FAILURES: &[usize] = &[10];

fn s(x: &str) -> PuiseuxSeries {
    parse_series(x).unwrap()
}

fn psi(nu: &PuiseuxSeries) -> CubicMap {
    CubicMap::psi_standard(nu.clone()).unwrap()
}

fn center2(prec: i64) -> PuiseuxSeries {
    let p = SeriesPoly::new(vec![s("-2 + t^2"), s("1"), s("1")]);
    hensel_lift(&p, &s("-2"), &q(prec, 1)).unwrap()
}

/// ν = (−1 − √(9 − 4t²))/2 through t^{2m}.
fn closed_form(m: usize) -> PuiseuxSeries {
    let mut coef = q(1, 1);
    let mut terms = Vec::new();
    for k in 0..=m {
        if k > 0 {
            coef = coef * (q(3, 2) - q(k as i64, 1)) / q(k as i64, 1) * q(-4, 9);
        }
        let c = if k == 0 { q(-2, 1) } else { -q(3, 2) * &coef };
        terms.push(format!("({c})*t^{}", 2 * k));
    }
    s(&format!("{} + O(t^{})", terms.join(" + "), 2 * m + 2))
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn ball_count() -> Check {
    let want = [1usize, 2, 5, 14, 41, 122, 365];
    let mut slowest = Duration::ZERO;
    for nu in [PuiseuxSeries::one(), center2(40)] {
        let start = Instant::now();
        let ls = level_structure(&psi(&nu), 6).map_err(err)?;
        let counts: Vec<usize> = (0..=6).map(|n| ls.count(n)).collect();
        ensure(counts == want, format!("{nu}: counts {counts:?}"))?;
        let dt = start.elapsed();
        ensure(dt < Duration::from_secs(60), format!("{nu}: {dt:?}"))?;
        slowest = slowest.max(dt);
    }
    Ok(format!("counts 1 2 5 14 41 122 365 for both parameters, slowest {:.1?}", slowest))
}

fn random_nu(rng: &mut ChaCha8Rng) -> PuiseuxSeries {
    let mut nu = if rng.gen_bool(0.5) { PuiseuxSeries::one() } else { center2(30) };
    let d = rng.gen_range(1..=8i64);
    for _ in 0..rng.gen_range(1..=4) {
        let e = q(rng.gen_range(d..4 * d), d);
        let c = q(rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
        nu = nu.add(&PuiseuxSeries::t_pow(e).scale(&c)).unwrap();
    }
    nu.truncate(&q(30, 1))
}

fn rule_engine() -> Check {
    let remark = MarkedGrid::from_marks(10, (0..=10).map(|k| (0, k)).chain((0..=10).map(|l| (l, 0))).chain([(3, 5)])).unwrap();
    match check_admissible(&remark) {
        Err(Error::Violation { rule: Rule::Md, .. }) => {}
        other => return Err(format!("remark grid gave {other:?}")),
    }
    // Perturb realized parameters of every depth-4 grid inside their level-4 balls.
    let mut bases = Vec::new();
    for g in admissible_grids(4) {
        let nu = realize_grid(&g, &q(24, 1)).map_err(err)?;
        let rho = parameter_radii(&nu, 4).map_err(err)?.pop().unwrap();
        bases.push((nu, rho));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut ok, mut tried) = (0, 0);
    let mut distinct = Vec::new();
    while ok < 50 {
        tried += 1;
        ensure(tried < 2000, "too few random parameters stay in D0 to depth 10")?;
        let (base, rho) = &bases[rng.gen_range(0..bases.len())];
        let d = rng.gen_range(1..=4i64);
        let e = rho.clone() + q(rng.gen_range(0..4 * d), d);
        let c = q(rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..=3));
        let nu = base.add(&PuiseuxSeries::t_pow(e).scale(&c)).unwrap().truncate(&q(24, 1));
        let g = match critical_grid(&psi(&nu), 10) {
            Ok(g) => g,
            Err(Error::NotALevelNPoint { .. }) => continue,
            Err(e) => return Err(format!("{nu}: {e}")),
        };
        check_admissible(&g).map_err(|e| format!("{nu}: {e}"))?;
        if !distinct.contains(&g) {
            distinct.push(g);
        }
        ok += 1;
    }
    Ok(format!("remark grid: Violation(Md); 50/50 random grids admissible ({} distinct, {tried} drawn)", distinct.len()))
}

fn level_one_radii() -> Check {
    let ls = level_structure(&psi(&PuiseuxSeries::one()), 1).map_err(err)?;
    let at = |z: &str| -> Result<Rational, String> {
        let i = ls.locate(1, &s(z)).map_err(err)?.ok_or(format!("no level-1 ball at {z}"))?;
        Ok(ls.levels[1][i].ball.log_radius().clone())
    };
    let (r1, r2) = (at("1")?, at("-2")?);
    ensure(r1 == q(1, 1) && r2 == q(2, 1), format!("radii {r1}, {r2}"))?;
    Ok("D1(1) and D1(-2) have valuation radii 1 and 2".into())
}

fn thurston_center() -> Check {
    let c = find_center(&s("-2"), 1, &q(14, 1)).map_err(err)?;
    let oracle = closed_form(6);
    ensure(c.agrees_to(&oracle, &q(13, 1)).map_err(err)?, format!("center {c}"))?;
    let orb = orbit(&psi(&c), &PuiseuxSeries::one(), 2).map_err(err)?;
    ensure(orb[2].agrees_to(&PuiseuxSeries::one(), &q(12, 1)).map_err(err)?, format!("psi^2(1) = {}", orb[2]))?;
    for seed in ["-2 + t^3", "-2 + 1/3*t^2 + 5*t^(5/2)", "-2 + 7*t^4 + t^(9/2)", "-2 - t^2"] {
        let other = find_center(&s(seed), 1, &q(14, 1)).map_err(err)?;
        ensure(other.agrees_to(&c, &q(13, 1)).map_err(err)?, format!("seed {seed} gave {other}"))?;
    }
    Ok("matches the closed form through t^12, psi^2(1) = 1 + O(t^12), 4 other seeds agree".into())
}

fn modulus_transport() -> Check {
    let mut annuli = 0;
    for nu in [PuiseuxSeries::one(), center2(40)] {
        let f = psi(&nu);
        let ls = level_structure(&f, 6).map_err(err)?;
        for n in 1..=6 {
            for b in &ls.levels[n] {
                let img = &ls.levels[n - 1][b.image.unwrap()];
                let lhs = Rational::from_integer((b.annulus.degree as i64).into()) * &b.annulus.modulus;
                ensure(lhs == img.annulus.modulus, format!("{nu}, level {n}: {lhs} vs {}", img.annulus.modulus))?;
                annuli += 1;
            }
        }
        let nest = critical_nest(&f, 6).map_err(err)?;
        let m = grid_moduli(&critical_grid(&f, 6).map_err(err)?, &q(2, 1));
        for l in 0..=6 {
            ensure(nest[l].log_radius() == &-m.log_radii[l].clone(), format!("{nu}: nest level {l}"))?;
        }
    }
    Ok(format!("{annuli} annuli transport exactly; nest radii equal grid moduli predictions"))
}

fn component_radii() -> Check {
    let a = component_of_critical(&psi(&PuiseuxSeries::one()), 12).map_err(err)?;
    let b = component_of_critical(&psi(&center2(40)), 12).map_err(err)?;
    ensure(a == ComponentVerdict::PeriodicBall { period: 1, log_radius: q(-2, 1) }, format!("nu = 1: {a:?}"))?;
    ensure(b == ComponentVerdict::PeriodicBall { period: 2, log_radius: q(-4, 1) }, format!("period 2: {b:?}"))?;
    Ok("log-radii -2 and -4".into())
}

fn admissible_grids(depth: usize) -> Vec<MarkedGrid> {
    let mut out = Vec::new();
    let mut heights = vec![0usize; depth + 1];
    loop {
        let marks = (0..=depth).map(|l| (l, 0)).chain((1..=depth).flat_map(|k| (0..=heights[k]).map(move |l| (l, k))));
        let g = MarkedGrid::from_marks(depth, marks.collect::<Vec<_>>()).unwrap();
        if check_admissible(&g).is_ok() {
            out.push(g);
        }
        let mut k = 1;
        loop {
            if k > depth {
                return out;
            }
            if heights[k] < depth - k {
                heights[k] += 1;
                break;
            }
            heights[k] = 0;
            k += 1;
        }
    }
}

fn realization() -> Check {
    let (mut realized, mut unsupported) = (0, 0);
    for depth in 1..=4 {
        for g in admissible_grids(depth) {
            match realize_grid(&g, &q(16, 1)) {
                Ok(nu) => {
                    let got = critical_grid(&psi(&nu), depth).map_err(err)?;
                    ensure(got.same_marks(&g), format!("{:?} realized as {:?}", g.rows(), got.rows()))?;
                    realized += 1;
                }
                Err(Error::UnsupportedExtension(_)) => unsupported += 1,
                Err(e) => return Err(format!("{:?}: {e}", g.rows())),
            }
        }
    }
    Ok(format!("{realized} grids round-trip, {unsupported} outside the tower"))
}

fn sigma_equivariance() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut ok, mut tried) = (0, 0);
    while ok < 20 {
        tried += 1;
        ensure(tried < 500, "too few level points")?;
        let nu = random_nu(&mut rng);
        let k = rng.gen_range(1..24);
        let g = match critical_grid(&psi(&nu), 6) {
            Ok(g) => g,
            Err(Error::NotALevelNPoint { .. }) => continue,
            Err(e) => return Err(format!("{nu}: {e}")),
        };
        let h = critical_grid(&psi(&sigma_action(&nu, k).map_err(err)?), 6).map_err(err)?;
        ensure(g == h, format!("{nu}, k = {k}"))?;
        ok += 1;
    }
    Ok("20/20 grids unchanged by sigma^k".into())
}

fn boettcher_limit() -> Check {
    let target = 2f64.powf(2.0 / 3.0);
    let mut worst = 0.0f64;
    for qq in [1, -2] {
        let phi = boettcher_cocritical(Complex64::new(1000.0, 0.0), qq).map_err(err)?;
        let d = (phi / 1000.0 - target).norm();
        ensure(d < 1e-2, format!("q = {qq}: {phi}"))?;
        worst = worst.max(d);
    }
    Ok(format!("max |phi(2a)/a - 2^(2/3)| = {worst:.2e}"))
}

fn green_bounds() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut below, mut above) = (0, 0);
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..100 {
        let r = 10f64.powf(rng.gen_range(1.0..3.0));
        let a = Complex64::from_polar(r, rng.gen_range(0.0..2.0 * PI));
        let v = a + Complex64::from_polar(r * rng.gen_range(0.0..0.999), rng.gen_range(0.0..2.0 * PI));
        let g = green_function(&ComplexParam::new(a, v), -a, 200).map_err(err)?;
        let la = r.ln();
        if la - 2f64.ln() / 6.0 > g.value + g.error_bound {
            below += 1;
        }
        let excess = g.value - g.error_bound - (la + 0.5 * 1.5f64.ln());
        worst_excess = worst_excess.max(excess);
        if excess > 0.0 {
            above += 1;
        }
    }
    ensure(
        below == 0 && above == 0,
        format!("lower bound violated {below}/100, upper bound violated {above}/100 (by up to {worst_excess:.3})"),
    )?;
    Ok("both bounds hold on 100 samples".into())
}

fn grid_correspondence() -> Check {
    let cfg = BridgeConfig::default();
    let start = Instant::now();
    let centers = [
        PuiseuxSeries::one(),
        center2(16),
        find_center(&s("-2"), 2, &q(14, 1)).map_err(err)?,
        find_center(&s("1 + z4*t"), 3, &q(14, 1)).map_err(err)?,
        find_center(&s("-2 + 1/3*t^2 + 1/9*t^3"), 3, &q(14, 1)).map_err(err)?,
    ];
    let mut checked = 0;
    for nu in &centers {
        for t in [Complex64::new(0.5, 1.5), Complex64::new(0.3, 1.5), Complex64::new(0.0, 2.0)] {
            let p = evaluate_at_T(nu, t, &q(12, 1), &cfg).map_err(err)?;
            for depth in 1..=3 {
                let g = complex_critical_grid(&p, depth, &cfg).map_err(err)?;
                let want = critical_grid(&psi(nu), depth).map_err(err)?;
                ensure(g.grid.same_marks(&want), format!("{nu} at T = {t}: {:?} vs {:?}", g.grid.rows(), want.rows()))?;
                checked += 1;
            }
        }
    }
    let dt = start.elapsed();
    ensure(dt < Duration::from_secs(300), format!("{dt:?}"))?;
    Ok(format!("{checked} grids of 5 centers (periods 1 to 3) agree at 96 and 192 pixels in {dt:.1?}"))
}

fn deck_identity() -> Check {
    let cfg = BridgeConfig::default();
    let t = Complex64::new(0.5, 1.5);
    let mut worst = 0.0f64;
    for nu in [PuiseuxSeries::one(), center2(14)] {
        let lhs = evaluate_at_T(&nu, t + 1.0, &q(10, 1), &cfg).map_err(err)?;
        let rhs = evaluate_at_T(&sigma_action(&nu, 1).map_err(err)?, t, &q(10, 1), &cfg).map_err(err)?;
        let d = (lhs.a - rhs.a).norm() + (lhs.v - rhs.v).norm();
        ensure(d < 1e-8 + lhs.tail_bound + rhs.tail_bound, format!("{nu}: difference {d:e}"))?;
        worst = worst.max(d);
    }
    Ok(format!("largest difference {worst:.2e}"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("level-n ball count", ball_count),
        ("rule engine", rule_engine),
        ("level-1 radii", level_one_radii),
        ("period-2 Thurston center", thurston_center),
        ("modulus transport and grid moduli", modulus_transport),
        ("component radii", component_radii),
        ("realization round trip", realization),
        ("sigma equivariance", sigma_equivariance),
        ("Boettcher limit", boettcher_limit),
        ("Green bounds at -a", green_bounds),
        ("grid correspondence", grid_correspondence),
        ("deck identity", deck_identity),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                let note = if EXPECTED_FAILURES.contains(&n) { " (expected)" } else { "" };
                println!("criterion {n:>2} FAIL{note}  {name}: {detail} [{secs:.1}s]");
                failed.push(n);
            }
        }
    }
    if failed != EXPECTED_FAILURES {
        println!("failing criteria {failed:?}, expected {EXPECTED_FAILURES:?}");
        std::process::exit(1);
    }
}
