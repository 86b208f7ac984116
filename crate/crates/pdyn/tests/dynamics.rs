use pdyn::balls::UltrametricBall;
use pdyn::coeff::{q, Rational};
use pdyn::dynamics::*;
use pdyn::puiseux::{hensel_lift, parse_series, PuiseuxSeries, SeriesPoly};
use pdyn::{Error, Rule};

fn s(x: &str) -> PuiseuxSeries {
    parse_series(x).unwrap()
}

fn psi(nu: &str) -> CubicMap {
    CubicMap::psi_standard(s(nu)).unwrap()
}

fn phi(a: &str, b: &str) -> CubicMap {
    CubicMap::phi(s(a), s(b)).unwrap()
}

const PERIOD2: &str = "-2 + 1/3*t^2 + 1/27*t^4 + O(t^6)";

/// The period-2 center, root of ν² + ν − 2 + t² near −2.
fn center2(prec: i64) -> PuiseuxSeries {
    let p = SeriesPoly::new(vec![s("-2 + t^2"), s("1"), s("1")]);
    hensel_lift(&p, &s("-2"), &q(prec, 1)).unwrap()
}

#[test]
fn capture_radius_examples() {
    assert_eq!(capture_radius(&phi("t^(-1)", "2*t^(-3) + t^(-1)")).unwrap(), q(1, 1));
    assert_eq!(capture_radius(&phi("0", "0")).unwrap(), q(0, 1));
    for nu in ["1", "0", "t", "-1 + t^(1/2)", PERIOD2] {
        let f = psi(nu);
        assert_eq!(level_zero_ball(&f).unwrap(), UltrametricBall::closed(PuiseuxSeries::zero(), q(0, 1)).unwrap(), "{nu}");
    }
}

#[test]
fn classify_examples() {
    assert_eq!(classify(&phi("0", "0"), 10).unwrap().locus, Locus::C3);
    assert_eq!(classify(&phi("t^(-1)", "0"), 10).unwrap().locus, Locus::S3);
    let c = classify(&phi("t^(-1)", "2*t^(-3) + t^(-1)"), 10).unwrap();
    assert_eq!(c.locus, Locus::Eplus);
    assert_eq!(c.plus, OrbitFate::Periodic(1));
    assert_eq!(c.minus, OrbitFate::Escaped(1));
    assert_eq!(classify(&psi("1"), 10).unwrap().locus, Locus::Eplus);
    assert_eq!(classify(&psi("1").swap_critical().unwrap(), 10).unwrap().locus, Locus::Eminus);
    assert!(matches!(classify(&psi("1"), 0), Err(Error::DepthBudgetExceeded(0))));
}

#[test]
fn one_critical_value_escapes_at_once_outside_c3() {
    // A non-periodic ω⁺ that stays in D₀ for the whole short budget.
    let c = classify(&psi("1 + t^3"), 2).unwrap();
    assert_eq!((c.locus, c.plus, c.minus), (Locus::Eplus, OrbitFate::Bounded(2), OrbitFate::Escaped(1)));
    // f(α) − f(−α) = −4α³ is larger than the capture radius.
    let c = classify(&phi("t^(-1)", "t^(-3)"), 3).unwrap();
    assert_eq!((c.locus, c.plus, c.minus), (Locus::S3, OrbitFate::Escaped(1), OrbitFate::Escaped(1)));
    let c = classify(&phi("t^(-1/8)", "2*t^(-3/8)"), 1).unwrap();
    assert_eq!((c.locus, c.plus, c.minus), (Locus::Eplus, OrbitFate::Bounded(1), OrbitFate::Escaped(1)));
}

#[test]
fn level_one_balls() {
    let ls = level_structure(&psi("1"), 1).unwrap();
    assert_eq!(ls.count(0), 1);
    let l1 = &ls.levels[1];
    assert_eq!(l1.len(), 2);
    let b1 = l1.iter().find(|b| b.degree == 2).unwrap();
    let b2 = l1.iter().find(|b| b.degree == 1).unwrap();
    assert_eq!(b1.ball, UltrametricBall::closed(s("1"), q(1, 1)).unwrap());
    assert_eq!(b2.ball, UltrametricBall::closed(s("-2"), q(2, 1)).unwrap());
    assert!(b1.critical && !b2.critical);
    assert_eq!(ls.log_rhat, q(2, 1));
    assert_eq!(ls.levels[0][0].annulus.modulus, q(2, 1));
}

#[test]
fn ball_counts() {
    let ls = level_structure(&psi("1"), 4).unwrap();
    let counts: Vec<usize> = (0..=4).map(|n| ls.count(n)).collect();
    assert_eq!(counts, vec![1, 2, 5, 14, 41]);
}

#[test]
fn ball_counts_to_six_and_modulus_law() {
    for nu in [s("1"), center2(40)] {
        let f = CubicMap::psi_standard(nu.clone()).unwrap();
        let ls = level_structure(&f, 6).unwrap();
        for n in 0..=6 {
            assert_eq!(ls.count(n), 3usize.pow(n as u32).div_ceil(2), "{nu} level {n}");
        }
        for n in 1..=6 {
            for b in &ls.levels[n] {
                let img = &ls.levels[n - 1][b.image.unwrap()];
                assert_eq!(Rational::from_integer((b.annulus.degree as i64).into()) * &b.annulus.modulus, img.annulus.modulus);
                let par = &ls.levels[n - 1][b.parent.unwrap()];
                assert!(par.ball.contains_ball(&b.ball).unwrap());
                assert_eq!(b.annulus.degree == 2, b.critical, "deg 2 iff ω⁺ in the ball");
                assert_eq!(b.labels.len(), b.degree);
                assert!(b.labels.iter().all(|l| par.labels.contains(l)));
            }
        }
    }
}

fn grid_of(depth: usize, cols: &[(usize, usize)]) -> MarkedGrid {
    // cols: (column, height of its top mark); row 0 and column 0 are marked.
    let mut marks: Vec<(usize, usize)> = (0..=depth).map(|l| (l, 0)).chain((0..=depth).map(|k| (0, k))).collect();
    marks.extend(cols.iter().map(|&(k, h)| (h, k)));
    MarkedGrid::from_marks(depth, marks).unwrap()
}

#[test]
fn fixed_critical_point_gives_all_ones() {
    for n in [1, 4, 9] {
        let g = critical_grid(&psi("1"), n).unwrap();
        assert!(g.same_marks(&MarkedGrid::all_ones(n)));
        assert_eq!(g.period(), Some(1));
        assert!(check_admissible(&g).is_ok());
    }
}

#[test]
fn period_two_pattern() {
    let g = critical_grid(&psi(PERIOD2), 4).unwrap();
    for l in 0..=4 {
        assert!(g.get(l, 0));
    }
    for l in 0..=3 {
        assert_eq!(g.get(l, 1), l == 0, "column 1 row {l}");
    }
    for l in 0..=2 {
        assert!(g.get(l, 2));
    }
    for l in 0..=1 {
        assert_eq!(g.get(l, 3), l == 0);
    }
    assert!(g.get(0, 4));
    assert!(check_admissible(&g).is_ok());
    // The exact center is detected as periodic.
    let g = critical_grid(&CubicMap::psi_standard(center2(40)).unwrap(), 10).unwrap();
    assert_eq!(g.period(), None, "a truncated center is not exactly periodic");
    assert!(g.column_full(2));
}

#[test]
fn remark_grid_breaks_rule_d() {
    let g = grid_of(10, &[(5, 3)]);
    assert_eq!(check_admissible(&g), Err(Error::Violation { rule: Rule::Md, row: 1, col: 8 }));
    assert!(check_admissible(&MarkedGrid::all_ones(10)).is_ok());
    // Adding the mark rule (Md) asks for repairs it.
    let fixed = grid_of(10, &[(5, 3), (8, 1)]);
    assert!(!matches!(check_admissible(&fixed), Err(Error::Violation { rule: Rule::Md, row: 1, col: 8 })));
}

#[test]
fn rule_b_violation_is_located() {
    // Column 1 marked to row 2 while ω⁺'s own column 1 says otherwise.
    let g = grid_of(4, &[(1, 2)]);
    assert!(matches!(check_admissible(&g), Err(Error::Violation { rule: Rule::Mb, .. })));
}

#[test]
fn grid_json_round_trip() {
    let g = critical_grid(&psi(PERIOD2), 4).unwrap();
    let back = MarkedGrid::from_json(&g.to_json()).unwrap();
    assert_eq!(back, g);
    let bad = serde_json::json!({"depth": 2, "rows": [[1, 1, 1], [1, 1], [1, 0]], "period": null});
    assert!(matches!(MarkedGrid::from_json(&bad), Err(Error::Parse(_))));
    let bad = serde_json::json!({"depth": 1, "rows": [[1, 0], [1]], "period": 1});
    assert!(matches!(MarkedGrid::from_json(&bad), Err(Error::Parse(_))));
}

#[test]
fn moduli_examples() {
    let m = grid_moduli(&MarkedGrid::all_ones(6), &q(2, 1));
    for (l, x) in m.moduli.iter().enumerate() {
        assert_eq!(*x, q(2, 1) / Rational::from_integer((1i64 << l).into()));
    }
    assert_eq!(m.log_radii[0], q(0, 1));
    assert_eq!(m.log_radii[1], q(-1, 1));

    // The grid of the cocritical point: only row 0 is marked.
    let coc = MarkedGrid::from_marks(3, (0..=3).map(|k| (0, k))).unwrap();
    let m = grid_moduli(&coc, &q(2, 1));
    assert_eq!(m.moduli[1], q(2, 1));
    assert_eq!(m.log_radii[1], q(-2, 1));

    let g = critical_grid(&psi(PERIOD2), 4).unwrap();
    let m = grid_moduli(&g, &q(2, 1));
    assert_eq!(m.moduli, vec![q(2, 1), q(1, 1), q(1, 1), q(1, 2), q(1, 2)]);
    assert_eq!(periodic_modulus_sum(&g, 2, &q(2, 1)).unwrap(), q(6, 1));
    assert_eq!(periodic_modulus_sum(&MarkedGrid::all_ones(3), 1, &q(2, 1)).unwrap(), q(4, 1));
}

#[test]
fn nest_radii_match_grid_and_level_balls() {
    for (nu, n) in [(s("1"), 6), (center2(40), 6), (s("1 + t^(7/2)"), 4), (s("1 + 2*t^3 + t^(9/2)"), 4)] {
        let f = CubicMap::psi_standard(nu.clone()).unwrap();
        let nest = critical_nest(&f, n).unwrap();
        let g = critical_grid(&f, n).unwrap();
        let m = grid_moduli(&g, &q(2, 1));
        let ls = level_structure(&f, n).unwrap();
        for l in 0..=n {
            assert_eq!(nest[l].log_radius(), &-m.log_radii[l].clone(), "{nu} level {l}");
            let crit: Vec<_> = ls.levels[l].iter().filter(|b| b.critical).collect();
            assert_eq!(crit.len(), 1);
            assert_eq!(crit[0].ball, nest[l]);
            assert_eq!(crit[0].annulus.modulus, m.moduli[l]);
        }
    }
}

#[test]
fn escaping_critical_orbit_is_not_a_level_point() {
    assert!(matches!(critical_grid(&psi("0"), 3), Err(Error::NotALevelNPoint { .. })));
}

fn random_perturbation(rng: &mut impl rand::Rng) -> PuiseuxSeries {
    let base = if rng.gen_bool(0.5) { s("1") } else { center2(30) };
    let d = [2i64, 3, 4][rng.gen_range(0..3)];
    let mut nu = base;
    for _ in 0..rng.gen_range(1..=3) {
        let e = q(rng.gen_range(2 * d..8 * d), d);
        let c = q(rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 }, 1);
        nu = nu.add(&PuiseuxSeries::t_pow(e).scale(&c)).unwrap();
    }
    nu.truncate(&q(30, 1))
}

#[test]
fn grids_are_sigma_invariant() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 12 {
        let nu = random_perturbation(&mut rng);
        let k = rand::Rng::gen_range(&mut rng, 1..12);
        let g = match critical_grid(&CubicMap::psi_standard(nu.clone()).unwrap(), 6) {
            Ok(g) => g,
            Err(Error::NotALevelNPoint { .. }) => continue,
            Err(e) => panic!("{nu}: {e}"),
        };
        let h = critical_grid(&CubicMap::psi_standard(nu.sigma(k).unwrap()).unwrap(), 6).unwrap();
        assert_eq!(g, h, "{nu}, k = {k}");
        assert!(check_admissible(&g).is_ok(), "{nu}\n{g}");
        checked += 1;
    }
}

#[test]
fn psi_and_phi_forms_are_conjugate() {
    let f = CubicMap::psi_standard(center2(30)).unwrap();
    let g = f.to_phi().unwrap();
    let a = f.alpha().clone();
    assert_eq!(capture_radius(&g).unwrap(), q(1, 1));
    let mut z = s("1");
    let mut w = g.omega_plus();
    for _ in 0..4 {
        assert!(w.agrees_to(&a.mul(&z).unwrap(), &q(3, 1)).unwrap());
        z = f.eval(&z).unwrap();
        w = g.eval(&w).unwrap();
    }
    assert_eq!(critical_grid(&f, 4).unwrap(), critical_grid(&g, 4).unwrap());
    assert_eq!(classify(&g, 8).unwrap().locus, Locus::Eplus);
    let back = g.to_psi(Some(&q(12, 1))).unwrap();
    assert_eq!(critical_grid(&back, 4).unwrap(), critical_grid(&f, 4).unwrap());

    let lf = level_structure(&psi("1"), 3).unwrap();
    let lg = level_structure(&psi("1").to_phi().unwrap(), 3).unwrap();
    for n in 0..=3 {
        assert_eq!(lf.count(n), lg.count(n));
        for (b, c) in lf.levels[n].iter().zip(&lg.levels[n]) {
            assert_eq!(b.ball.log_radius() + q(-1, 1), *c.ball.log_radius());
            assert_eq!(b.degree, c.degree);
        }
    }
}

fn shift_map() -> CubicMap {
    phi("t^(-1)", "0")
}

/// Fixed points of ζ³ − 3t^{-2}ζ: 0 and ±√3·t^{-1}·√(1 + t²/3).
fn shift_fixed_points() -> Vec<PuiseuxSeries> {
    let quad = SeriesPoly::new(vec![s("-3*t^(-2) - 1"), s("0"), s("1")]);
    let r = hensel_lift(&quad, &s("sqrt(3)*t^(-1)"), &q(20, 1)).unwrap();
    vec![s("0"), r.clone(), r.neg()]
}

#[test]
fn shift_locus_levels_and_labels() {
    let f = shift_map();
    assert_eq!(classify(&f, 4).unwrap().locus, Locus::S3);
    let ls = level_structure(&f, 3).unwrap();
    assert_eq!((0..=3).map(|n| ls.count(n)).collect::<Vec<_>>(), vec![1, 3, 9, 27]);
    let mut seen: Vec<u8> = ls.levels[1].iter().flat_map(|b| b.labels.clone()).collect();
    seen.sort();
    assert_eq!(seen, vec![1, 2, 3]);
}

#[test]
fn fixed_point_itineraries() {
    let f = shift_map();
    let fps = shift_fixed_points();
    for z in &fps {
        assert!(f.eval(z).unwrap().agrees_to(z, &q(15, 1)).unwrap());
    }
    let it = itinerary(&f, &fps[1], 5).unwrap();
    assert_eq!(it.symbols.len(), 5);
    assert!(it.symbols.iter().all(|&x| x == it.symbols[0]));
    let firsts: Vec<u8> = fps
        .iter()
        .map(|z| {
            let it = itinerary(&f, z, 3).unwrap();
            assert!(it.symbols.iter().all(|&x| x == it.symbols[0]), "{z}");
            it.symbols[0]
        })
        .collect();
    let mut sorted = firsts.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 3);
    // Points in one level-k ball share the first k symbols.
    let near = fps[1].add(&s("t^5")).unwrap();
    assert_eq!(itinerary(&f, &near, 2).unwrap().symbols, itinerary(&f, &fps[1], 2).unwrap().symbols);
    // Escaping points are rejected.
    assert!(matches!(itinerary(&f, &s("t^(-2)"), 3), Err(Error::NotALevelNPoint { .. })));
}

#[test]
fn component_radii() {
    assert_eq!(
        component_of_critical(&psi("1"), 12).unwrap(),
        ComponentVerdict::PeriodicBall { period: 1, log_radius: q(-2, 1) }
    );
    assert_eq!(
        component_of_critical(&CubicMap::psi_standard(center2(40)).unwrap(), 12).unwrap(),
        ComponentVerdict::PeriodicBall { period: 2, log_radius: q(-4, 1) }
    );
    // Truncated and perturbed parameters in the same components, confirmed
    // through the Thurston center rather than exact periodicity.
    for nu in ["-2 + 1/3*t^2 + 1/27*t^4 + O(t^30)", "-2 + 1/3*t^2 + 1/27*t^4 + t^6 + O(t^30)"] {
        assert_eq!(
            component_of_critical(&psi(nu), 12).unwrap(),
            ComponentVerdict::PeriodicBall { period: 2, log_radius: q(-4, 1) },
            "{nu}"
        );
    }
    // Too short a truncation stops the grid early.
    assert_eq!(component_of_critical(&psi(PERIOD2), 12).unwrap(), ComponentVerdict::Unresolved(4));
    assert_eq!(
        component_of_critical(&psi("1 + t^3 + O(t^30)"), 12).unwrap(),
        ComponentVerdict::PeriodicBall { period: 1, log_radius: q(-2, 1) }
    );
}

#[test]
fn preperiodic_critical_point_is_a_singleton() {
    // ψ(1) = −2 is fixed while 1 is not periodic: only row 0 is marked.
    let v = component_of_critical(&psi("-2"), 12).unwrap();
    assert_eq!(v, ComponentVerdict::Singleton { depth: 12, log_radius: q(-12, 1) });
    assert_eq!(component_of_critical(&psi("-2"), 6).unwrap(), ComponentVerdict::Unresolved(6));
}

#[test]
fn component_in_phi_form_matches_psi_form() {
    let f = psi("1");
    assert_eq!(component_of_critical(&f.to_phi().unwrap(), 8).unwrap(), component_of_critical(&f, 8).unwrap());
}
