//! Property tests over randomized inputs: homogeneity, angle additivity, and
//! the normal-solve postconditions across the metric families.

use finsler::indicatrix::{ccw_delta, landsberg_angle, solve_normal, Side};
use finsler::metric::{eval_norm, norm_and_g, pt, tg, MetricSpec};
use proptest::prelude::*;

fn arb_spec() -> impl Strategy<Value = MetricSpec> {
    prop_oneof![
        Just(MetricSpec::euclidean()),
        Just(MetricSpec::sphere(1.0)),
        (-0.5f64..0.5, -0.5f64..0.5)
            .prop_filter("convexity", |(a, b)| a * a + b * b < 0.64)
            .prop_map(|(a, b)| MetricSpec::randers(a, b)),
        (2.5f64..6.0).prop_map(MetricSpec::pnorm),
    ]
}

fn arb_point() -> impl Strategy<Value = (f64, f64)> {
    (-0.9f64..0.9, -0.9f64..0.9)
}

// generic fiber direction, kept off the axes where p-norm members degenerate
fn arb_angle() -> impl Strategy<Value = f64> {
    (0usize..1000).prop_map(|k| (k as f64 + 0.5) * std::f64::consts::TAU / 1000.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_is_positively_homogeneous(
        spec in arb_spec(),
        (x1, x2) in arb_point(),
        a in arb_angle(),
        lambda in 0.1f64..10.0,
    ) {
        let x = pt(x1, x2);
        let y = tg(a.cos(), a.sin());
        let f = eval_norm(&spec, x, y).unwrap();
        let fl = eval_norm(&spec, x, tg(lambda * y.y1, lambda * y.y2)).unwrap();
        prop_assert!(((fl - lambda * f) / (lambda * f)).abs() < 1e-12);
    }

    #[test]
    fn fundamental_tensor_is_zero_homogeneous(
        spec in arb_spec(),
        (x1, x2) in arb_point(),
        a in arb_angle(),
        lambda in 0.2f64..5.0,
    ) {
        let x = pt(x1, x2);
        let y = tg(a.cos(), a.sin());
        let (_, g1) = norm_and_g(&spec, x, y).unwrap();
        let (_, g2) = norm_and_g(&spec, x, tg(lambda * y.y1, lambda * y.y2)).unwrap();
        prop_assert!((g1.a11 - g2.a11).abs() < 1e-10);
        prop_assert!((g1.a12 - g2.a12).abs() < 1e-10);
        prop_assert!((g1.a22 - g2.a22).abs() < 1e-10);
    }

    #[test]
    fn angles_add_along_concatenated_arcs(
        spec in arb_spec(),
        (x1, x2) in arb_point(),
        a in arb_angle(),
        d1 in 0.05f64..2.0,
        d2 in 0.05f64..2.0,
    ) {
        let x = pt(x1, x2);
        let v = |t: f64| tg(t.cos(), t.sin());
        let b = a + d1;
        let c = a + d1 + d2;
        if ccw_delta(a, c) < ccw_delta(a, b) {
            // concatenation wrapped past the start; skip the degenerate case
            return Ok(());
        }
        let whole = landsberg_angle(&spec, x, v(a), v(c), 1e-11).unwrap().value;
        let p1 = landsberg_angle(&spec, x, v(a), v(b), 1e-11).unwrap().value;
        let p2 = landsberg_angle(&spec, x, v(b), v(c), 1e-11).unwrap().value;
        prop_assert!((whole - p1 - p2).abs() < 1e-9, "{} vs {} + {}", whole, p1, p2);
    }

    #[test]
    fn normal_solve_postconditions(
        spec in arb_spec(),
        (x1, x2) in arb_point(),
        a in arb_angle(),
    ) {
        let x = pt(x1, x2);
        let t0 = tg(a.cos(), a.sin());
        let f = eval_norm(&spec, x, t0).unwrap();
        let t = tg(t0.y1 / f, t0.y2 / f);
        let sol = solve_normal(&spec, x, t, Side::Left, None).unwrap();
        let fnorm = eval_norm(&spec, x, sol.normal).unwrap();
        prop_assert!((fnorm - 1.0).abs() < 1e-10);
        let (_, g) = norm_and_g(&spec, x, sol.normal).unwrap();
        prop_assert!(g.inner(sol.normal.arr(), t.arr()).abs() < 1e-10);
        // the normal lies on the left: positive chart orientation
        prop_assert!(t.y1 * sol.normal.y2 - t.y2 * sol.normal.y1 > 0.0);
    }

    #[test]
    fn reversible_normals_are_odd(
        (x1, x2) in arb_point(),
        a in arb_angle(),
        p in 2.5f64..6.0,
    ) {
        let spec = MetricSpec::pnorm(p);
        let x = pt(x1, x2);
        let t0 = tg(a.cos(), a.sin());
        let f = eval_norm(&spec, x, t0).unwrap();
        let t = tg(t0.y1 / f, t0.y2 / f);
        let n1 = solve_normal(&spec, x, t, Side::Left, None).unwrap().normal;
        let n2 = solve_normal(&spec, x, tg(-t.y1, -t.y2), Side::Left, None)
            .unwrap()
            .normal;
        prop_assert!((n1.y1 + n2.y1).abs() < 1e-10);
        prop_assert!((n1.y2 + n2.y2).abs() < 1e-10);
    }
}
