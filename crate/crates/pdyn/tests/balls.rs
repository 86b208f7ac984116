use pdyn::balls::*;
use pdyn::coeff::{q, Coeff, Rational};
use pdyn::puiseux::{parse_series, PuiseuxSeries, SeriesPoly};
use proptest::prelude::*;

fn s(x: &str) -> PuiseuxSeries {
    parse_series(x).unwrap()
}

fn closed(c: &str, rho: Rational) -> UltrametricBall {
    UltrametricBall::closed(s(c), rho).unwrap()
}

fn poly(cs: &[&str]) -> SeriesPoly {
    SeriesPoly::new(cs.iter().map(|c| s(c)).collect())
}

/// ψ(ζ) = t^{-2}(ζ − 1)²(ζ + 2) + ν = t^{-2}(ζ³ − 3ζ + 2) + ν.
fn psi(nu: &str) -> SeriesPoly {
    let c0 = s("2*t^(-2)").add(&s(nu)).unwrap();
    SeriesPoly::new(vec![c0, s("-3*t^(-2)"), PuiseuxSeries::zero(), s("t^(-2)")])
}

#[test]
fn image_examples() {
    let cube = poly(&["0", "0", "0", "1"]);
    assert_eq!(image_ball(&cube, &closed("0", q(0, 1))).unwrap(), (closed("0", q(0, 1)), 3));

    for nu in ["1", "0", "-2 + 1/3*t^2", "z4 + t^(1/2)"] {
        let (img, d) = image_ball(&psi(nu), &closed("0", q(0, 1))).unwrap();
        assert_eq!(img, closed("0", q(-2, 1)), "nu = {nu}");
        assert_eq!(d, 3);
    }

    let sq = poly(&["0", "0", "1"]);
    assert_eq!(image_ball(&sq, &closed("1", q(2, 1))).unwrap(), (closed("1", q(2, 1)), 1));
}

#[test]
fn degree_examples() {
    // Critical points ±t^{-1}.
    let f = poly(&["0", "-3*t^(-2)", "0", "1"]);
    assert_eq!(degree_on_ball(&f, &closed("t^(-1)", q(0, 1))).unwrap(), 2);
    assert_eq!(degree_on_ball(&f, &closed("5", q(0, 1))).unwrap(), 1);
    assert_eq!(degree_on_ball(&f, &closed("0", q(-1, 1))).unwrap(), 3);
    // The Weierstrass degree from image_ball agrees.
    for b in [closed("t^(-1)", q(0, 1)), closed("5", q(0, 1)), closed("0", q(-1, 1))] {
        assert_eq!(image_ball(&f, &b).unwrap().1, degree_on_ball(&f, &b).unwrap());
    }
}

#[test]
fn preimage_examples() {
    // ζ² on B(1, 0): the unit ball around 1 also contains −1, so the fiber has
    // two components of degree one each.
    let sq = poly(&["0", "0", "1"]);
    let pre = preimage_balls(&sq, &closed("1", q(2, 1)), &closed("1", q(0, 1))).unwrap();
    assert!(pre.contains(&(closed("1", q(2, 1)), 1)));
    assert!(pre.contains(&(closed("-1", q(2, 1)), 1)));
    assert_eq!(pre.len(), 2);
    // Restricted to the open unit ball around 1 only the local inverse remains.
    let near = UltrametricBall::open(s("1"), q(0, 1)).unwrap();
    let pre = preimage_balls(&sq, &closed("1", q(2, 1)), &near).unwrap();
    assert_eq!(pre, vec![(closed("1", q(2, 1)), 1)]);

    for nu in ["1", "0", "-2 + 1/3*t^2 + 1/27*t^4"] {
        let d0 = closed("0", q(0, 1));
        let mut pre = preimage_balls(&psi(nu), &d0, &d0).unwrap();
        pre.sort_by_key(|(_, d)| std::cmp::Reverse(*d));
        assert_eq!(pre, vec![(closed("1", q(1, 1)), 2), (closed("-2", q(2, 1)), 1)], "nu = {nu}");
    }

    let cube = poly(&["0", "0", "0", "1"]);
    let pre = preimage_balls(&cube, &closed("0", q(3, 1)), &closed("0", q(0, 1))).unwrap();
    assert_eq!(pre, vec![(closed("0", q(1, 1)), 3)]);
}

#[test]
fn reduce_examples() {
    let cube = poly(&["0", "0", "0", "1"]);
    let u = closed("0", q(0, 1));
    let r = reduce_map(&cube, &u, &u).unwrap();
    assert_eq!(r, vec![Coeff::zero(), Coeff::zero(), Coeff::zero(), Coeff::one()]);

    let f = psi("1");
    let b0 = closed("1", q(1, 1));
    let (b1, d) = image_ball(&f, &b0).unwrap();
    let r = reduce_map(&f, &b0, &b1).unwrap();
    assert_eq!(r.len() - 1, 2);
    assert_eq!(d, 2);

    let aff = poly(&["3", "t^(-1)"]);
    let b0 = closed("0", q(-1, 1));
    let (b1, _) = image_ball(&aff, &b0).unwrap();
    assert_eq!(b1, closed("0", q(-2, 1)));
    assert_eq!(reduce_map(&aff, &b0, &b1).unwrap().len() - 1, 1);
}

#[test]
fn partition_classes() {
    let b = closed("0", q(0, 1));
    let c1 = b.class_of(&s("2 + t")).unwrap();
    let c2 = b.class_of(&s("2 - t^3")).unwrap();
    let c3 = b.class_of(&s("3")).unwrap();
    assert_eq!(c1, c2);
    assert_ne!(c1, c3);
    assert!(c1.ball().unwrap().disjoint(&c3.ball().unwrap()).unwrap());
}

#[test]
fn annulus_modulus() {
    let outer = closed("0", q(0, 1));
    let inner = closed("t", q(3, 1));
    let a = UltrametricAnnulus::between(&outer, &inner).unwrap();
    assert_eq!(a.modulus(), q(3, 1));
    assert!(!a.contains(&s("t")).unwrap());
    assert!(a.contains(&s("t + t^2")).unwrap());
    assert!(a.contains(&s("2")).unwrap());
}

#[test]
fn json_roundtrip() {
    let b = closed("t^(-1) + z3*t^(1/2)", q(3, 2));
    assert_eq!(UltrametricBall::from_json(&b.to_json()).unwrap(), b);
    let bad = serde_json::json!({"center": {"m": 1, "terms": [], "precision": "exact"}, "log_radius": "x", "kind": "closed"});
    assert!(UltrametricBall::from_json(&bad).is_err());
}

fn mono(c: i64, n: i64, d: i64) -> PuiseuxSeries {
    PuiseuxSeries::monomial(Coeff::from_i64(c), q(n, d))
}

fn arb_point() -> impl Strategy<Value = PuiseuxSeries> {
    prop::collection::vec((-3i64..4, -2i64..7, prop::sample::select(vec![1i64, 2])), 1..4).prop_map(|ts| {
        let mut acc = PuiseuxSeries::zero();
        for (c, n, d) in ts {
            acc = acc.add(&mono(c, n, d)).unwrap();
        }
        acc
    })
}

fn arb_cubic() -> impl Strategy<Value = SeriesPoly> {
    (arb_point(), arb_point(), arb_point(), -2i64..3).prop_map(|(a, b, c, e)| {
        let lead = mono(1, e, 1);
        SeriesPoly::new(vec![a, b, c, lead])
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recentering(c in arb_point(), rho in -2i64..5, z in arb_point()) {
        let b = UltrametricBall::closed(c.clone(), q(rho, 1)).unwrap();
        // A random member: the center plus something of valuation ≥ ρ.
        let m = c.add(&z.shift(&q(rho + 3, 1))).unwrap();
        if b.contains(&m).unwrap() {
            prop_assert_eq!(b.recenter(&m).unwrap(), b);
        }
    }

    #[test]
    fn degree_additivity(r in prop::collection::vec((-3i64..4, -2i64..4), 3), cshift in -1i64..3, rho_t in 0i64..9) {
        // f = (ζ − r1)(ζ − r2)(ζ − r3) + c′ with the target centered at c′.
        let roots: Vec<PuiseuxSeries> = r.iter().map(|(c, e)| mono(if *c == 0 { 1 } else { *c }, *e, 1)).collect();
        let cprime = mono(1, cshift, 1);
        let mut f = SeriesPoly::from_roots(PuiseuxSeries::one(), &roots).unwrap();
        let mut cs = f.coeffs().to_vec();
        cs[0] = cs[0].add(&cprime).unwrap();
        f = SeriesPoly::new(cs);
        let target = UltrametricBall::closed(cprime, q(rho_t, 1)).unwrap();
        let min_o = r.iter().map(|(_, e)| *e).min().unwrap();
        let rho_w = min_o.min(rho_t.div_euclid(3) - 1);
        let within = UltrametricBall::closed(PuiseuxSeries::zero(), q(rho_w, 1)).unwrap();
        let pre = preimage_balls(&f, &target, &within).unwrap();
        let total: usize = pre.iter().map(|(_, d)| d).sum();
        prop_assert_eq!(total, 3);
        for (i, (a, da)) in pre.iter().enumerate() {
            let inside = roots.iter().filter(|x| a.contains(x).unwrap()).count();
            prop_assert_eq!(inside, *da);
            prop_assert_eq!(degree_on_ball(&f, a).unwrap(), *da);
            for (b, _) in &pre[i + 1..] {
                prop_assert!(a.disjoint(b).unwrap());
            }
        }
    }

    #[test]
    fn schwarz_bound(f in arb_cubic(), c in arb_point(), rho in -1i64..4, z1 in arb_point(), z2 in arb_point()) {
        let b0 = UltrametricBall::closed(c.clone(), q(rho, 1)).unwrap();
        let (b1, _) = image_ball(&f, &b0).unwrap();
        let p1 = c.add(&z1.shift(&q(rho + 2, 1))).unwrap();
        let p2 = c.add(&z2.shift(&q(rho + 2, 1))).unwrap();
        let d = p1.sub(&p2).unwrap();
        if !d.is_exact_zero() {
            let fd = f.eval(&p1).unwrap().sub(&f.eval(&p2).unwrap()).unwrap();
            // o(f(z1) − f(z2)) ≥ (ρ1 − ρ0) + o(z1 − z2).
            let lhs = fd.val_lower();
            let rhs = b1.log_radius() - b0.log_radius() + d.val().unwrap();
            prop_assert!(lhs.is_none_or(|v| v >= rhs));
        }
    }

    #[test]
    fn fixed_point_count(f in arb_cubic(), c in arb_point(), rho in -2i64..3) {
        let b = UltrametricBall::closed(c, q(rho, 1)).unwrap();
        let (img, d) = image_ball(&f, &b).unwrap();
        if img.contains_ball(&b).unwrap() && (d > 1 || img != b) {
            let g = f.sub(&SeriesPoly::identity()).unwrap();
            prop_assert_eq!(roots_in_ball(&g, &b).unwrap(), d);
        }
    }
}
