//! Every derivative field of the metric jet against an independent
//! high-order central finite-difference oracle built on the norm evaluator
//! alone.

mod common;

use common::{f2_of, fd1, fd2, fd3r, sample_states};
use finsler::metric::{
    berwald_frame, eval_norm, main_scalar, metric_jet, pt, tg, ConformalFactor, MetricSpec,
};

fn families() -> Vec<MetricSpec> {
    vec![
        MetricSpec::euclidean(),
        MetricSpec::sphere(1.0),
        MetricSpec::RiemannianConformal {
            phi: ConformalFactor::Poly {
                c0: 0.1,
                cx1: 0.2,
                cx2: -0.15,
                cx1x1: 0.05,
                cx1x2: 0.1,
                cx2x2: -0.08,
            },
        },
        MetricSpec::randers(0.2, 0.0),
        MetricSpec::randers(0.15, -0.25),
        MetricSpec::pnorm(4.0),
    ]
}

#[test]
fn jet_derivative_fields_match_fd_oracle() {
    // unit-scale fiber directions: every derivative field is homogeneous, so
    // this loses no generality and keeps the FD truncation at the 1e-6 scale
    let h = 1e-2;
    let h1 = 4e-3;
    for spec in families() {
        let f2 = |q: [f64; 4]| f2_of(&spec, q);
        for (x, y0) in sample_states(6, 11) {
            // fold the direction 0.25 rad away from the axes: near the p-norm
            // degeneracy the high-order derivatives entering the FD
            // truncation blow up and the oracle itself loses accuracy
            let quarter = std::f64::consts::FRAC_PI_2;
            let a0 = y0[1].atan2(y0[0]).rem_euclid(std::f64::consts::TAU);
            let quad = (a0 / quarter).floor();
            let frac = a0 / quarter - quad;
            let a = quad * quarter + 0.25 + frac * (quarter - 0.5);
            let y = [a.cos(), a.sin()];
            let q = [x[0], x[1], y[0], y[1]];
            let jet = metric_jet(&spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();

            // g_ij = (1/2) d2 F2 / dy_i dy_j   (y slots are 2, 3)
            for i in 0..2 {
                for j in i..2 {
                    let fd = 0.5 * fd2(&f2, q, 2 + i, 2 + j, h);
                    assert!(
                        (jet.g.get(i, j) - fd).abs() < 1e-6,
                        "{spec:?} g[{i}{j}]: jet {} fd {}",
                        jet.g.get(i, j),
                        fd
                    );
                }
            }
            // Cartan A_ijk = (F/4) d3 F2 / dy dy dy
            for i in 0..2 {
                for j in i..2 {
                    for k in j..2 {
                        let fd = 0.25 * jet.f * fd3r(&f2, q, 2 + i, 2 + j, 2 + k, h);
                        assert!(
                            (jet.cartan.get(i, j, k) - fd).abs() < 1e-6,
                            "{spec:?} A[{i}{j}{k}]: jet {} fd {}",
                            jet.cartan.get(i, j, k),
                            fd
                        );
                    }
                }
            }
            // dF2/dx
            for a in 0..2 {
                let fd = fd1(&f2, q, a, h1);
                assert!(
                    (jet.df2_dx[a] - fd).abs() < 1e-6,
                    "{spec:?} df2_dx[{a}]: jet {} fd {}",
                    jet.df2_dx[a],
                    fd
                );
            }
            // mixed d2F2/dx dy
            for a in 0..2 {
                for l in 0..2 {
                    let fd = fd2(&f2, q, a, 2 + l, h1);
                    assert!((jet.d2f2_dxdy[a][l] - fd).abs() < 1e-6);
                }
            }
            // dg_ij/dx^k = (1/2) d3F2/dx^k dy_i dy_j
            for k in 0..2 {
                for i in 0..2 {
                    for j in i..2 {
                        let fd = 0.5 * fd3r(&f2, q, k, 2 + i, 2 + j, h);
                        assert!(
                            (jet.dg_dx[k].get(i, j) - fd).abs() < 1e-6,
                            "{spec:?} dg[{k}][{i}{j}]"
                        );
                    }
                }
            }
            // gradient of F itself
            let fval = |q: [f64; 4]| f2_of(&spec, q).sqrt();
            for i in 0..2 {
                let fd = fd1(&fval, q, 2 + i, h1);
                assert!((jet.grad_f_y[i] - fd).abs() < 1e-7);
            }
        }
    }
}

#[test]
fn riemannian_members_have_vanishing_cartan_everywhere() {
    let spec = MetricSpec::RiemannianConformal {
        phi: ConformalFactor::Poly {
            c0: 0.3,
            cx1: -0.2,
            cx2: 0.4,
            cx1x1: 0.12,
            cx1x2: -0.05,
            cx2x2: 0.07,
        },
    };
    for (x, y) in sample_states(100, 17) {
        let jet = metric_jet(&spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
        let fr = berwald_frame(&jet);
        let i = main_scalar(&jet, &fr);
        assert!(i.abs() < 1e-10, "I = {i}");
        for v in [
            jet.cartan.a111,
            jet.cartan.a112,
            jet.cartan.a122,
            jet.cartan.a222,
        ] {
            assert!(v.abs() < 1e-10);
        }
    }
}

#[test]
fn randers_determinant_identity() {
    // det g = (F/alpha)^3 for a Randers metric on a Euclidean background;
    // an algebraic route independent of the Hessian pipeline.
    let spec = MetricSpec::randers(0.2, -0.1);
    for (x, y) in sample_states(25, 23) {
        let jet = metric_jet(&spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
        let alpha = (y[0] * y[0] + y[1] * y[1]).sqrt();
        let expected = (jet.f / alpha).powi(3);
        assert!(
            (jet.g.det() - expected).abs() < 1e-10 * expected,
            "det {} vs {}",
            jet.g.det(),
            expected
        );
    }
}

#[test]
fn homogeneity_scaling_sweep() {
    for spec in families() {
        for (x, y) in sample_states(10, 29) {
            let f1 = eval_norm(&spec, pt(x[0], x[1]), tg(y[0], y[1])).unwrap();
            for lambda in [0.5, 2.0, 10.0] {
                let fl =
                    eval_norm(&spec, pt(x[0], x[1]), tg(lambda * y[0], lambda * y[1])).unwrap();
                assert!(((fl - lambda * f1) / (lambda * f1)).abs() < 1e-12);
            }
        }
    }
}
