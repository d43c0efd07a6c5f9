//! Indicatrix sampling, indicatrix length, Landsberg angles, and the normal
//! solve.
//!
//! Everything here lives on one fiber. The Landsberg angle form pulled back
//! to the standard unit circle reads (sqrt g / F^2) d(phi) in the Euclidean
//! angle phi, so lengths and angles are one-dimensional quadratures of a
//! smooth positive integrand.

use crate::error::{FinslerError, Result};
use crate::metric::{eval_norm, norm_and_g, tg, MetricSpec, Point2, Sym2, Tangent2};
use crate::quadrature::{adaptive_gl8, composite_gl8};

pub const TAU: f64 = 2.0 * std::f64::consts::PI;

/// Which side of T the normal lies on, measured in the chart orientation.
/// `Left` is the convention for boundaries traversed with the domain on the
/// left (inward normal); a config switch can flip it globally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn sign(self) -> f64 {
        match self {
            Side::Left => 1.0,
            Side::Right => -1.0,
        }
    }

    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Discrete sample of one indicatrix.
#[derive(Clone, Debug)]
pub struct IndicatrixSample {
    /// Euclidean angles of the sample rays.
    pub phis: Vec<f64>,
    /// Unit-F vectors along those rays.
    pub ys: Vec<Tangent2>,
    /// Quadrature weights for the angle form: (sqrt g / F^2)(phi_k) * dphi.
    pub dtheta_weights: Vec<f64>,
}

/// A Landsberg angle: nonnegative, at most the indicatrix length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LandsbergAngle {
    pub value: f64,
}

/// The integrand of the angle form on the standard unit circle:
/// (sqrt g / F^2) at (x, (cos phi, sin phi)).
pub fn dtheta_integrand(spec: &MetricSpec, x: Point2, phi: f64) -> Result<f64> {
    let y = tg(phi.cos(), phi.sin());
    let (f, g) = norm_and_g(spec, x, y)?;
    Ok(g.det().sqrt() / (f * f))
}

/// Radially project n uniform rays onto the indicatrix at x.
pub fn sample_indicatrix(spec: &MetricSpec, x: Point2, n: usize) -> Result<IndicatrixSample> {
    if n < 16 {
        return Err(FinslerError::InvalidParams(format!(
            "indicatrix sample count must be >= 16, got {n}"
        )));
    }
    let mut phis = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    // midpoint offset keeps the rays off the coordinate axes, where p-norm
    // fibers degenerate
    let dphi = TAU / n as f64;
    for k in 0..n {
        let phi = (k as f64 + 0.5) * dphi;
        let ray = tg(phi.cos(), phi.sin());
        let f = eval_norm(spec, x, ray)?;
        phis.push(phi);
        ys.push(tg(ray.y1 / f, ray.y2 / f));
        weights.push(dtheta_integrand(spec, x, phi)? * dphi);
    }
    Ok(IndicatrixSample {
        phis,
        ys,
        dtheta_weights: weights,
    })
}

/// Riemannian length of the indicatrix at x, by adaptive quadrature of the
/// angle form over the standard unit circle.
pub fn indicatrix_length(spec: &MetricSpec, x: Point2, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(FinslerError::InvalidParams(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    let mut f = |phi: f64| dtheta_integrand(spec, x, phi);
    adaptive_gl8(&mut f, 0.0, TAU, tol)
}

/// Indicatrix length with nodes fixed by the panel count; evaluated at
/// neighboring x with identical nodes this differentiates smoothly, which is
/// what the d(log L) finite differences need.
pub fn indicatrix_length_fixed(spec: &MetricSpec, x: Point2, panels: usize) -> Result<f64> {
    let mut f = |phi: f64| dtheta_integrand(spec, x, phi);
    composite_gl8(&mut f, 0.0, TAU, panels)
}

/// Euclidean angle of a vector.
pub fn euclid_angle(v: Tangent2) -> f64 {
    v.y2.atan2(v.y1)
}

/// Counterclockwise angular distance from a to b in [0, tau).
pub fn ccw_delta(a: f64, b: f64) -> f64 {
    let mut d = (b - a) % TAU;
    if d < 0.0 {
        d += TAU;
    }
    d
}

/// Landsberg angle between unit vectors X and Y at x: the integral of the
/// angle form over the positively oriented arc from X to Y. Inputs are
/// renormalized to the indicatrix first. The zero-arc pair X = Y gives 0.
pub fn landsberg_angle(
    spec: &MetricSpec,
    x: Point2,
    from: Tangent2,
    to: Tangent2,
    tol: f64,
) -> Result<LandsbergAngle> {
    let fa = eval_norm(spec, x, from)?;
    let fb = eval_norm(spec, x, to)?;
    let a = euclid_angle(tg(from.y1 / fa, from.y2 / fa));
    let b = euclid_angle(tg(to.y1 / fb, to.y2 / fb));
    let delta = ccw_delta(a, b);
    if delta == 0.0 {
        return Ok(LandsbergAngle { value: 0.0 });
    }
    let mut f = |phi: f64| dtheta_integrand(spec, x, phi);
    let value = adaptive_gl8(&mut f, a, a + delta, tol)?;
    Ok(LandsbergAngle { value })
}

/// Output of the normal solve.
#[derive(Clone, Copy, Debug)]
pub struct NormalSolve {
    /// Unit normal N.
    pub normal: Tangent2,
    /// The unnormalized solution p of the linear-in-rotation system; the
    /// natural warm start for a nearby solve.
    pub p: [f64; 2],
    /// Residual norm of the defining equations at the solution.
    pub residual: f64,
    pub iterations: usize,
}

fn rotate_to_side(t: [f64; 2], side: Side) -> [f64; 2] {
    let s = side.sign();
    [-s * t[1], s * t[0]]
}

/// Solve for the Shen normal: find N with F(x,N) = 1 and g_N(N,T) = 0 on the
/// requested side of T.
///
/// The system solved is (1/2) grad_y F^2 (x, p) = w with w the quarter-turn
/// of T toward `side`; its Jacobian is exactly the fundamental tensor at
/// (x, p), so damped Newton converges fast and each iteration reuses the
/// g-evaluation. `warm` seeds the iteration from a previous nearby solution.
pub fn solve_normal(
    spec: &MetricSpec,
    x: Point2,
    t: Tangent2,
    side: Side,
    warm: Option<[f64; 2]>,
) -> Result<NormalSolve> {
    let ft = eval_norm(spec, x, t)?;
    let tu = [t.y1 / ft, t.y2 / ft];
    let w = rotate_to_side(tu, side);

    let mut p = warm.unwrap_or(w);
    if p[0] == 0.0 && p[1] == 0.0 {
        p = w;
    }

    let eval = |p: [f64; 2]| -> Result<([f64; 2], Sym2, f64)> {
        let (_, g) = norm_and_g(spec, x, tg(p[0], p[1]))?;
        let gp = g.mul(p);
        let res = [gp[0] - w[0], gp[1] - w[1]];
        let rn = (res[0] * res[0] + res[1] * res[1]).sqrt();
        Ok((res, g, rn))
    };

    let tol = 1e-12;
    let max_iter = 50;
    let (mut res, mut g, mut rn) = eval(p)?;
    for iter in 0..max_iter {
        if rn <= tol {
            let f = eval_norm(spec, x, tg(p[0], p[1]))?;
            return Ok(NormalSolve {
                normal: tg(p[0] / f, p[1] / f),
                p,
                residual: rn,
                iterations: iter,
            });
        }
        let step = g.solve(res);
        let mut damping = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let cand = [p[0] - damping * step[0], p[1] - damping * step[1]];
            match eval(cand) {
                Ok((r2, g2, rn2)) if rn2 < rn => {
                    p = cand;
                    res = r2;
                    g = g2;
                    rn = rn2;
                    accepted = true;
                    break;
                }
                _ => damping *= 0.5,
            }
        }
        if !accepted {
            return Err(FinslerError::NewtonNoConvergence {
                iterations: iter,
                residual: rn,
            });
        }
    }
    if rn <= tol {
        let f = eval_norm(spec, x, tg(p[0], p[1]))?;
        return Ok(NormalSolve {
            normal: tg(p[0] / f, p[1] / f),
            p,
            residual: rn,
            iterations: max_iter,
        });
    }
    Err(FinslerError::NewtonNoConvergence {
        iterations: max_iter,
        residual: rn,
    })
}

/// Time derivative of the unit normal along a curve, by implicit
/// differentiation of the solved system against the same Jacobian:
/// g(x,p) dp = (rotation of dT) - (mixed x-derivative block) dx.
///
/// `dt_du` are the derivatives of the *unit* tangent, `dx_du` of the base
/// point, both with respect to any curve parameter u; the result is dN/du.
pub fn normal_derivative(
    spec: &MetricSpec,
    x: Point2,
    solve: &NormalSolve,
    dx_du: [f64; 2],
    dt_du: [f64; 2],
    side: Side,
) -> Result<[f64; 2]> {
    let p = solve.p;
    let jet = crate::metric::metric_jet(spec, x, tg(p[0], p[1]))?;
    let dw = rotate_to_side(dt_du, side);
    // rhs_j = dw_j - (1/2) d2F2/dx^m dy^j * dx^m
    let rhs = [
        dw[0] - 0.5 * (jet.d2f2_dxdy[0][0] * dx_du[0] + jet.d2f2_dxdy[1][0] * dx_du[1]),
        dw[1] - 0.5 * (jet.d2f2_dxdy[0][1] * dx_du[0] + jet.d2f2_dxdy[1][1] * dx_du[1]),
    ];
    let dp = jet.g.solve(rhs);
    // N = p / F(x, p): dN = dp/F - p dF/F^2,
    // dF = (dF/dx^m) dx^m + (dF/dy^k) dp^k at (x, p)
    let f = jet.f;
    let df_dx = [jet.df2_dx[0] / (2.0 * f), jet.df2_dx[1] / (2.0 * f)];
    let df = df_dx[0] * dx_du[0] + df_dx[1] * dx_du[1]
        + jet.grad_f_y[0] * dp[0]
        + jet.grad_f_y[1] * dp[1];
    Ok([
        dp[0] / f - p[0] * df / (f * f),
        dp[1] / f - p[1] * df / (f * f),
    ])
}
