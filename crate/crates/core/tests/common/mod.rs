//! Shared test oracles, independent of the library's derivative pipeline:
//! high-order central finite differences of F^2 through the norm evaluator
//! only, and classical closed-form Riemannian formulas for the conformal
//! family.

#![allow(dead_code)]

use finsler::metric::{eval_norm, pt, tg, ConformalFactor, MetricSpec};

/// F^2 as a plain function of stacked coordinates q = (x1, x2, y1, y2),
/// evaluated through the public norm only.
pub fn f2_of(spec: &MetricSpec, q: [f64; 4]) -> f64 {
    let f = eval_norm(spec, pt(q[0], q[1]), tg(q[2], q[3])).expect("norm eval in FD oracle");
    f * f
}

/// Fourth-order central first difference in coordinate i.
pub fn fd1(f: &dyn Fn([f64; 4]) -> f64, q: [f64; 4], i: usize, h: f64) -> f64 {
    let shift = |s: f64| {
        let mut qq = q;
        qq[i] += s;
        f(qq)
    };
    (-shift(2.0 * h) + 8.0 * shift(h) - 8.0 * shift(-h) + shift(-2.0 * h)) / (12.0 * h)
}

/// Nested second difference d^2/dq_i dq_j.
pub fn fd2(f: &dyn Fn([f64; 4]) -> f64, q: [f64; 4], i: usize, j: usize, h: f64) -> f64 {
    let inner = |qq: [f64; 4]| fd1(f, qq, j, h);
    fd1(&inner, q, i, h)
}

/// Nested third difference d^3/dq_i dq_j dq_k.
pub fn fd3(
    f: &dyn Fn([f64; 4]) -> f64,
    q: [f64; 4],
    i: usize,
    j: usize,
    k: usize,
    h: f64,
) -> f64 {
    let inner = |qq: [f64; 4]| fd2(f, qq, j, k, h);
    fd1(&inner, q, i, h)
}

/// Richardson-extrapolated third difference: the nested stencils are
/// fourth-order, so (16 D(h/2) - D(h)) / 15 removes the leading term.
pub fn fd3r(
    f: &dyn Fn([f64; 4]) -> f64,
    q: [f64; 4],
    i: usize,
    j: usize,
    k: usize,
    h: f64,
) -> f64 {
    (16.0 * fd3(f, q, i, j, k, h / 2.0) - fd3(f, q, i, j, k, h)) / 15.0
}

/// Classical formulas on the conformal metric g = Omega^2 * delta.
pub struct ConformalOracle {
    pub phi: ConformalFactor,
}

impl ConformalOracle {
    pub fn omega(&self, x: [f64; 2]) -> f64 {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match self.phi {
            ConformalFactor::Poly {
                c0,
                cx1,
                cx2,
                cx1x1,
                cx1x2,
                cx2x2,
            } => (c0 + cx1 * x[0]
                + cx2 * x[1]
                + cx1x1 * x[0] * x[0]
                + cx1x2 * x[0] * x[1]
                + cx2x2 * x[1] * x[1])
                .exp(),
            ConformalFactor::Sphere { radius } => {
                2.0 * radius * radius / (radius * radius + r2)
            }
            ConformalFactor::Hyperbolic { radius } => {
                2.0 * radius * radius / (radius * radius - r2)
            }
        }
    }

    /// Gradient of log Omega.
    pub fn grad_ln_omega(&self, x: [f64; 2]) -> [f64; 2] {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match self.phi {
            ConformalFactor::Poly {
                cx1,
                cx2,
                cx1x1,
                cx1x2,
                cx2x2,
                ..
            } => [
                cx1 + 2.0 * cx1x1 * x[0] + cx1x2 * x[1],
                cx2 + cx1x2 * x[0] + 2.0 * cx2x2 * x[1],
            ],
            ConformalFactor::Sphere { radius } => {
                let d = radius * radius + r2;
                [-2.0 * x[0] / d, -2.0 * x[1] / d]
            }
            ConformalFactor::Hyperbolic { radius } => {
                let d = radius * radius - r2;
                [2.0 * x[0] / d, 2.0 * x[1] / d]
            }
        }
    }

    pub fn laplacian_ln_omega(&self, x: [f64; 2]) -> f64 {
        let r2 = x[0] * x[0] + x[1] * x[1];
        match self.phi {
            ConformalFactor::Poly { cx1x1, cx2x2, .. } => 2.0 * cx1x1 + 2.0 * cx2x2,
            ConformalFactor::Sphere { radius } => {
                let d = radius * radius + r2;
                -4.0 * radius * radius / (d * d)
            }
            ConformalFactor::Hyperbolic { radius } => {
                let d = radius * radius - r2;
                4.0 * radius * radius / (d * d)
            }
        }
    }

    /// Classical Gauss curvature K = -Laplacian(log Omega) / Omega^2.
    pub fn gauss_curvature(&self, x: [f64; 2]) -> f64 {
        let om = self.omega(x);
        -self.laplacian_ln_omega(x) / (om * om)
    }

    /// Christoffel symbols of the second kind: gamma[i] is the symmetric
    /// matrix gamma^i_jk.
    pub fn christoffel(&self, x: [f64; 2]) -> [[[f64; 2]; 2]; 2] {
        let p = self.grad_ln_omega(x);
        [
            [[p[0], p[1]], [p[1], -p[0]]],
            [[-p[1], p[0]], [p[0], p[1]]],
        ]
    }

    /// Fixed-step RK4 integration of the classical geodesic equation
    /// xdd^i + gamma^i_jk xd^j xd^k = 0.
    pub fn geodesic_rk4(
        &self,
        x0: [f64; 2],
        v0: [f64; 2],
        t_end: f64,
        steps: usize,
    ) -> Vec<(f64, [f64; 2], [f64; 2])> {
        let rhs = |s: [f64; 4]| -> [f64; 4] {
            let g = self.christoffel([s[0], s[1]]);
            let v = [s[2], s[3]];
            let mut a = [0.0; 2];
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        a[i] -= g[i][j][k] * v[j] * v[k];
                    }
                }
            }
            [v[0], v[1], a[0], a[1]]
        };
        let h = t_end / steps as f64;
        let mut s = [x0[0], x0[1], v0[0], v0[1]];
        let mut out = vec![(0.0, x0, v0)];
        for n in 0..steps {
            let k1 = rhs(s);
            let k2 = rhs(add(s, scale(k1, h / 2.0)));
            let k3 = rhs(add(s, scale(k2, h / 2.0)));
            let k4 = rhs(add(s, scale(k3, h)));
            for i in 0..4 {
                s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
            }
            out.push(((n + 1) as f64 * h, [s[0], s[1]], [s[2], s[3]]));
        }
        out
    }

    /// Geodesic curvature of the circle of Euclidean radius rho around c,
    /// traversed counterclockwise, at angle a (classical conformal formula
    /// k_g = (dphi/dn + 1/rho) / Omega with n the outward Euclidean normal).
    pub fn circle_geodesic_curvature(&self, center: [f64; 2], rho: f64, a: f64) -> f64 {
        let x = [center[0] + rho * a.cos(), center[1] + rho * a.sin()];
        let grad = self.grad_ln_omega(x);
        let n_out = [a.cos(), a.sin()];
        (1.0 / rho + grad[0] * n_out[0] + grad[1] * n_out[1]) / self.omega(x)
    }
}

fn add(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]
}

fn scale(a: [f64; 4], s: f64) -> [f64; 4] {
    [a[0] * s, a[1] * s, a[2] * s, a[3] * s]
}

/// Deterministic low-discrepancy-ish sample points for oracle sweeps.
pub fn sample_states(n: usize, seed: u64) -> Vec<([f64; 2], [f64; 2])> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = [rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8)];
            let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r: f64 = rng.gen_range(0.5..2.0);
            (x, [r * a.cos(), r * a.sin()])
        })
        .collect()
}
