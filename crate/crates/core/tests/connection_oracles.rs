//! Connection-level cross-checks: Chern coefficients against the classical
//! Christoffel symbols of the conformal family, the Gauss curvature against
//! the classical conformal formula, the Landsberg invariant against a
//! horizontal finite-difference oracle, and the structure-equation residual
//! over random unit-bundle points.

mod common;

use common::{sample_states, ConformalOracle};
use finsler::connection::{
    connection_jet, gauss_curvature, invariant_i, invariant_j, structure_equation_residual,
};
use finsler::metric::{pt, tg, unit_vector, ConformalFactor, MetricSpec};

#[test]
fn chern_gamma_reduces_to_christoffel_for_conformal() {
    let phis = [
        ConformalFactor::Sphere { radius: 1.0 },
        ConformalFactor::Hyperbolic { radius: 2.0 },
        ConformalFactor::Poly {
            c0: 0.0,
            cx1: 0.3,
            cx2: -0.2,
            cx1x1: 0.1,
            cx1x2: 0.05,
            cx2x2: -0.04,
        },
    ];
    for phi in phis {
        let spec = MetricSpec::RiemannianConformal { phi };
        let oracle = ConformalOracle { phi };
        for (x, y) in sample_states(8, 31) {
            if let ConformalFactor::Hyperbolic { radius } = phi {
                if x[0] * x[0] + x[1] * x[1] >= 0.8 * radius * radius {
                    continue;
                }
            }
            let conn = connection_jet(&spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
            let gamma = oracle.christoffel(x);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        let got = conn.gamma[i].get(j, k);
                        assert!(
                            (got - gamma[i][j][k]).abs() < 1e-8,
                            "gamma[{i}][{j}{k}] {} vs {} at {x:?}, y={y:?}",
                            got,
                            gamma[i][j][k]
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn gauss_curvature_matches_conformal_formula() {
    let phis = [
        ConformalFactor::Sphere { radius: 1.0 },
        ConformalFactor::Sphere { radius: 2.0 },
        ConformalFactor::Hyperbolic { radius: 1.5 },
        ConformalFactor::Poly {
            c0: 0.0,
            cx1: 0.0,
            cx2: 0.0,
            cx1x1: 0.25,
            cx1x2: 0.0,
            cx2x2: 0.25,
        },
    ];
    for phi in phis {
        let spec = MetricSpec::RiemannianConformal { phi };
        let oracle = ConformalOracle { phi };
        for (x, y) in sample_states(8, 37) {
            if let ConformalFactor::Hyperbolic { radius } = phi {
                if x[0] * x[0] + x[1] * x[1] >= 0.5 * radius * radius {
                    continue;
                }
            }
            let k = gauss_curvature(&spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
            let k_ref = oracle.gauss_curvature(x);
            assert!(
                (k - k_ref).abs() < 1e-6 * (1.0 + k_ref.abs()),
                "K {} vs {} for {phi:?}",
                k,
                k_ref
            );
        }
    }
}

/// Horizontal finite-difference oracle for J: central differences of the
/// exact I evaluator along the horizontal curves of the nonlinear
/// connection, with plain steps (no extrapolation), entirely outside the
/// library's J path.
fn j_fd_oracle(spec: &MetricSpec, x: [f64; 2], y: [f64; 2]) -> f64 {
    let yu = unit_vector(spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
    let jet = finsler::metric::metric_jet(spec, pt(x[0], x[1]), yu).unwrap();
    let n = finsler::connection::nonlinear_from_jet(&jet);
    let h = 1e-5;
    let mut total = 0.0;
    for i in 0..2 {
        let probe = |s: f64| -> f64 {
            let xs = if i == 0 {
                pt(x[0] + s, x[1])
            } else {
                pt(x[0], x[1] + s)
            };
            let ys = tg(yu.y1 - s * n[0][i], yu.y2 - s * n[1][i]);
            invariant_i(spec, xs, ys).unwrap()
        };
        let d = (probe(h) - probe(-h)) / (2.0 * h);
        total += [yu.y1, yu.y2][i] * d;
    }
    total
}

#[test]
fn invariant_j_matches_horizontal_fd_oracle() {
    let specs = [
        MetricSpec::randers(0.2, 0.0),
        MetricSpec::pnorm(4.0),
        MetricSpec::sphere(1.0),
    ];
    for spec in &specs {
        for (x, y) in sample_states(6, 41) {
            let j = invariant_j(spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
            let j_ref = j_fd_oracle(spec, x, y);
            assert!((j - j_ref).abs() < 1e-7, "{spec:?}: J {} vs {}", j, j_ref);
        }
    }
}

#[test]
fn landsberg_certification_over_random_unit_bundle_points() {
    // J = 0 to 1e-7 on the conformal and p-norm families at 50 random points.
    let specs = [MetricSpec::sphere(1.0), MetricSpec::pnorm(4.0)];
    for spec in &specs {
        for (x, y) in sample_states(25, 43) {
            let j = invariant_j(spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
            assert!(j.abs() < 1e-7, "{spec:?}: J = {j}");
        }
    }
}

#[test]
fn structure_equation_residual_at_random_points() {
    let specs = [
        MetricSpec::euclidean(),
        MetricSpec::sphere(1.0),
        MetricSpec::pnorm(4.0),
        MetricSpec::randers(0.2, 0.0),
    ];
    for spec in &specs {
        for (x, y) in sample_states(5, 47) {
            let r = structure_equation_residual(spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
            assert!(r < 1e-4, "{spec:?}: residual {r} at {x:?} {y:?}");
        }
    }
}

#[test]
fn riemannian_flag_curvature_is_direction_independent() {
    let spec = MetricSpec::sphere(1.3);
    for (x, _) in sample_states(4, 53) {
        let mut ks = Vec::new();
        for d in 0..8 {
            let a = d as f64 * std::f64::consts::PI / 4.0 + 0.2;
            ks.push(gauss_curvature(&spec, pt(x[0], x[1]), tg(a.cos(), a.sin())).unwrap());
        }
        for k in &ks {
            assert!((k - ks[0]).abs() < 1e-6);
        }
    }
}
