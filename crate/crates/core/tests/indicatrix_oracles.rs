//! Indicatrix quadrature against brute-force oracles: the frozen
//! high-resolution trapezoid value for the Randers length, the closed-form
//! elliptic integrand route, the pushforward route over the indicatrix
//! polyline, and the dense-scan oracle for the normal solve.

mod common;

use common::sample_states;
use finsler::indicatrix::{
    dtheta_integrand, indicatrix_length, landsberg_angle, sample_indicatrix, solve_normal, Side,
};
use finsler::metric::{eval_norm, norm_and_g, pt, tg, MetricSpec, Tangent2};

/// L for Randers b = (0.2, 0), frozen from a 2^20-panel trapezoid rule over
/// the library integrand; the closed-form integrand (1 + b cos phi)^(-1/2)
/// reproduces it to 3e-15.
const RANDERS_02_LENGTH: f64 = 6.33136927263222038;

#[test]
fn randers_length_matches_frozen_oracle_value() {
    let spec = MetricSpec::randers(0.2, 0.0);
    let l = indicatrix_length(&spec, pt(0.3, -0.8), 1e-11).unwrap();
    assert!(
        (l - RANDERS_02_LENGTH).abs() < 1e-9,
        "L = {l}, golden {RANDERS_02_LENGTH}"
    );
}

#[test]
fn randers_integrand_matches_closed_form() {
    // sqrt(g)/F^2 on the unit circle reduces to (1 + b cos phi)^(-1/2)
    let spec = MetricSpec::randers(0.2, 0.0);
    for k in 0..64 {
        let phi = (k as f64 + 0.3) / 64.0 * std::f64::consts::TAU;
        let v = dtheta_integrand(&spec, pt(0.0, 0.0), phi).unwrap();
        let closed = (1.0 + 0.2 * phi.cos()).powf(-0.5);
        assert!((v - closed).abs() < 1e-12);
    }
}

#[test]
fn length_equals_pushforward_polyline_route() {
    // the angle form is closed: integrating over the unit circle and over
    // the indicatrix polyline pushforward give the same length
    for spec in [
        MetricSpec::randers(0.2, -0.1),
        MetricSpec::pnorm(4.0),
        MetricSpec::sphere(1.0),
    ] {
        let x = pt(0.2, 0.4);
        let l = indicatrix_length(&spec, x, 1e-11).unwrap();
        let n = 1 << 14;
        let s = sample_indicatrix(&spec, x, n).unwrap();
        // midpoint rule for (sqrt g / F^2)(y^1 dy^2 - y^2 dy^1) along the
        // sampled indicatrix polyline
        let mut total = 0.0;
        for k in 0..n {
            let a = s.ys[k];
            let b = s.ys[(k + 1) % n];
            let mid = tg(0.5 * (a.y1 + b.y1), 0.5 * (a.y2 + b.y2));
            let (f, g) = norm_and_g(&spec, x, mid).unwrap();
            let coeff = g.det().sqrt() / (f * f);
            total += coeff * (mid.y1 * (b.y2 - a.y2) - mid.y2 * (b.y1 - a.y1));
        }
        assert!(
            (total - l).abs() < 1e-6,
            "{spec:?}: pushforward {total} vs L {l}"
        );
    }
}

#[test]
fn quadrant_angle_sum_and_lemma_bound() {
    for spec in [
        MetricSpec::randers(0.2, 0.0),
        MetricSpec::pnorm(4.0),
        MetricSpec::sphere(1.0),
    ] {
        let x = pt(0.1, -0.2);
        let l = indicatrix_length(&spec, x, 1e-11).unwrap();
        let axes = [tg(1.0, 0.0), tg(0.0, 1.0), tg(-1.0, 0.0), tg(0.0, -1.0)];
        let mut sum = 0.0;
        for k in 0..4 {
            let a = landsberg_angle(&spec, x, axes[k], axes[(k + 1) % 4], 1e-11)
                .unwrap()
                .value;
            assert!(a / l < 1.0);
            sum += a;
        }
        assert!((sum - l).abs() < 1e-9);
    }
}

/// Dense-scan oracle: bracket the root of phi -> g_{y(phi)}(y(phi), T) on the
/// indicatrix sample and refine by bisection, independent of the Newton
/// solve.
fn normal_scan_oracle(spec: &MetricSpec, x: finsler::Point2, t: Tangent2, side: Side) -> Tangent2 {
    let target = |phi: f64| -> f64 {
        let ray = tg(phi.cos(), phi.sin());
        let f = eval_norm(spec, x, ray).unwrap();
        let y = tg(ray.y1 / f, ray.y2 / f);
        let (_, g) = norm_and_g(spec, x, y).unwrap();
        g.inner(y.arr(), t.arr())
    };
    // the correct branch also satisfies sign(det[T, N]) = side
    let orient = |phi: f64| -> f64 {
        let s = match side {
            Side::Left => 1.0,
            Side::Right => -1.0,
        };
        s * (t.y1 * phi.sin() - t.y2 * phi.cos())
    };
    // half-step offset keeps the scan off the p-norm axis degeneracies
    let n = 4096;
    let mut best: Option<(f64, f64)> = None;
    for k in 0..n {
        let a = (k as f64 + 0.5) / n as f64 * std::f64::consts::TAU;
        let b = (k as f64 + 1.5) / n as f64 * std::f64::consts::TAU;
        let (fa, fb) = (target(a), target(b));
        if fa == 0.0 && orient(a) > 0.0 {
            best = Some((a, a));
            break;
        }
        if fa * fb < 0.0 && orient(0.5 * (a + b)) > 0.0 {
            best = Some((a, b));
            break;
        }
    }
    let (mut a, mut b) = best.expect("bracketing interval");
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if target(a) * target(m) <= 0.0 {
            b = m;
        } else {
            a = m;
        }
    }
    let phi = 0.5 * (a + b);
    let ray = tg(phi.cos(), phi.sin());
    let f = eval_norm(spec, x, ray).unwrap();
    tg(ray.y1 / f, ray.y2 / f)
}

#[test]
fn normal_solve_matches_dense_scan_oracle() {
    let specs = [
        MetricSpec::randers(0.2, 0.0),
        MetricSpec::pnorm(4.0),
        MetricSpec::sphere(1.0),
    ];
    for spec in &specs {
        for (x, y) in sample_states(8, 59) {
            let xp = pt(x[0], x[1]);
            let f = eval_norm(spec, xp, tg(y[0], y[1])).unwrap();
            let t = tg(y[0] / f, y[1] / f);
            let sol = solve_normal(spec, xp, t, Side::Left, None).unwrap();
            let oracle = normal_scan_oracle(spec, xp, t, Side::Left);
            assert!(
                (sol.normal.y1 - oracle.y1).abs() < 1e-6
                    && (sol.normal.y2 - oracle.y2).abs() < 1e-6,
                "{spec:?}: newton {:?} vs scan {:?}",
                sol.normal,
                oracle
            );
        }
    }
    // the Randers case quoted in the solver contract
    let spec = MetricSpec::randers(0.2, 0.0);
    let t = tg(0.0, 1.0);
    let sol = solve_normal(&spec, pt(0.0, 0.0), t, Side::Left, None).unwrap();
    let oracle = normal_scan_oracle(&spec, pt(0.0, 0.0), t, Side::Left);
    assert!((sol.normal.y1 - oracle.y1).abs() < 1e-6);
    assert!((sol.normal.y2 - oracle.y2).abs() < 1e-6);
}

#[test]
fn conformal_normal_equals_classical_unit_normal() {
    // for a Riemannian metric the Shen normal is the classical unit normal:
    // rotate T by +90 degrees and normalize in the metric
    let spec = MetricSpec::sphere(1.0);
    for (x, y) in sample_states(12, 61) {
        let xp = pt(x[0], x[1]);
        let f = eval_norm(&spec, xp, tg(y[0], y[1])).unwrap();
        let t = tg(y[0] / f, y[1] / f);
        let n = solve_normal(&spec, xp, t, Side::Left, None).unwrap().normal;
        let rot = tg(-t.y2, t.y1);
        let fr = eval_norm(&spec, xp, rot).unwrap();
        let expected = tg(rot.y1 / fr, rot.y2 / fr);
        assert!((n.y1 - expected.y1).abs() < 1e-10);
        assert!((n.y2 - expected.y2).abs() < 1e-10);
    }
}
