//! Curves on the surface: Finslerian geodesics, N-parallels, explicit curves,
//! their normals, curvatures, and covariant derivatives with reference
//! vectors.
//!
//! N-parallels are integrated as the first-order system in (x, T) with the
//! connection coefficients evaluated at the normal N(x, T) and the tangential
//! multiplier chosen so that F(x, T) stays exactly 1 along the flow; the
//! parameterization freedom of the second-order form is purely tangential, so
//! this pins the natural parameterization. N itself is recomputed pointwise
//! by warm-started Newton; its time derivative comes from implicit
//! differentiation of the normal system, never from finite differences.

use crate::connection::{chern_gamma_from_jet, connection_jet_with, nonlinear_from_jet};
use crate::error::{FinslerError, Result};
use crate::geometry::polyline_self_intersections;
use crate::indicatrix::{normal_derivative, solve_normal, Side};
use crate::metric::{
    eval_norm, f_grad_x, metric_jet, norm_and_g, pt, tg, MetricSpec, Point2, Tangent2,
};
use crate::ode::{integrate, Dopri5Options};
use std::sync::Arc;

/// Parameterization callback for explicit curves: u -> (c, c', c'').
pub type CurveFn = Arc<dyn Fn(f64) -> ([f64; 2], [f64; 2], [f64; 2]) + Send + Sync>;

#[derive(Clone)]
pub enum CurveKind {
    Geodesic,
    NParallel,
    Explicit(CurveFn),
}

impl std::fmt::Debug for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveKind::Geodesic => write!(f, "Geodesic"),
            CurveKind::NParallel => write!(f, "NParallel"),
            CurveKind::Explicit(_) => write!(f, "Explicit(..)"),
        }
    }
}

/// What to integrate and how to sample it.
#[derive(Clone, Debug)]
pub struct CurveSpec {
    pub kind: CurveKind,
    pub x0: Point2,
    /// Initial direction; renormalized to F = 1 before integration.
    pub t0: Tangent2,
    pub t_span: (f64, f64),
    pub samples: usize,
    pub side: Side,
    pub rtol: f64,
}

impl CurveSpec {
    pub fn geodesic(x0: Point2, t0: Tangent2, len: f64) -> Self {
        CurveSpec {
            kind: CurveKind::Geodesic,
            x0,
            t0,
            t_span: (0.0, len),
            samples: 200,
            side: Side::Left,
            rtol: 1e-9,
        }
    }

    pub fn n_parallel(x0: Point2, t0: Tangent2, len: f64) -> Self {
        CurveSpec {
            kind: CurveKind::NParallel,
            x0,
            t0,
            t_span: (0.0, len),
            samples: 200,
            side: Side::Left,
            rtol: 1e-9,
        }
    }

    /// Coordinate circle traversed counterclockwise, as an explicit curve in
    /// the Euclidean angle parameter.
    pub fn circle(center: Point2, radius: f64, len: f64) -> Self {
        let c = center;
        let f: CurveFn = Arc::new(move |u: f64| {
            (
                [c.x1 + radius * u.cos(), c.x2 + radius * u.sin()],
                [-radius * u.sin(), radius * u.cos()],
                [-radius * u.cos(), -radius * u.sin()],
            )
        });
        CurveSpec {
            kind: CurveKind::Explicit(f),
            x0: pt(c.x1 + radius, c.x2),
            t0: tg(0.0, 1.0),
            t_span: (0.0, len),
            samples: 200,
            side: Side::Left,
            rtol: 1e-9,
        }
    }
}

/// Everything measured at one curve sample.
#[derive(Clone, Copy, Debug)]
pub struct CurvePointData {
    pub x: Point2,
    /// Unit tangent.
    pub t: Tangent2,
    /// Shen normal on the configured side.
    pub n: Tangent2,
    /// sigma = g_N-area of (T, N); positive on the standard side.
    pub sigma: f64,
    /// N-parallel curvature k_T^(N).
    pub k_t_n: f64,
    /// mu^2 = g_T(V, V) for the F-unit g_T-normal V.
    pub mu: f64,
    /// Signed curvature over T.
    pub k_v_t: f64,
    /// g_N-norm of D_T^(N) N; zero exactly on N-parallels.
    pub n_parallel_residual: f64,
    /// dN/dt (unit-speed parameter), from implicit differentiation.
    pub dn_dt: [f64; 2],
    /// D_T^(N) N components.
    pub dtn_n: [f64; 2],
    /// D_T^(T) T components.
    pub dtt_t: [f64; 2],
}

/// Covariant derivative along a curve with a reference vector:
/// (D U)^i = dU^i/dt + T^j U^k Gamma^i_jk(x, ref).
pub fn ref_cov_deriv(
    spec: &MetricSpec,
    x: Point2,
    t_unit: Tangent2,
    u: [f64; 2],
    du_dt: [f64; 2],
    reference: Tangent2,
) -> Result<[f64; 2]> {
    let jet = metric_jet(spec, x, reference)?;
    let nnl = nonlinear_from_jet(&jet);
    let gamma = chern_gamma_from_jet(&jet, &nnl);
    let ta = t_unit.arr();
    Ok([
        du_dt[0] + gamma[0].inner(ta, u),
        du_dt[1] + gamma[1].inner(ta, u),
    ])
}

/// Pointwise frame data along a curve from (x, unit T, dT/dt).
///
/// `warm` carries the previous Newton solution for the normal.
pub fn curve_point_data(
    spec: &MetricSpec,
    x: Point2,
    t_unit: Tangent2,
    dt_dt: [f64; 2],
    side: Side,
    warm: &mut Option<[f64; 2]>,
) -> Result<CurvePointData> {
    let sol = solve_normal(spec, x, t_unit, side, *warm)?;
    *warm = Some(sol.p);
    let n = sol.normal;

    // jet and connection at the reference direction N
    let jet_n = metric_jet(spec, x, n)?;
    let nnl_n = nonlinear_from_jet(&jet_n);
    let gamma_n = chern_gamma_from_jet(&jet_n, &nnl_n);

    let ta = t_unit.arr();
    let na = n.arr();

    let sigma = jet_n.sqrt_g * (na[1] * ta[0] - na[0] * ta[1]);

    let dn_dt = normal_derivative(spec, x, &sol, ta, dt_dt, side)?;
    let dtn_n = [
        dn_dt[0] + gamma_n[0].inner(ta, na),
        dn_dt[1] + gamma_n[1].inner(ta, na),
    ];
    let k_t_n = -jet_n.g.inner(dtn_n, ta);
    let n_parallel_residual = jet_n.g.inner(dtn_n, dtn_n).max(0.0).sqrt();

    // signed curvature over T: reference direction T
    let jet_t = metric_jet(spec, x, t_unit)?;
    let nnl_t = nonlinear_from_jet(&jet_t);
    let gamma_t = chern_gamma_from_jet(&jet_t, &nnl_t);
    let dtt_t = [
        dt_dt[0] + gamma_t[0].inner(ta, ta),
        dt_dt[1] + gamma_t[1].inner(ta, ta),
    ];
    // V: F-unit, g_T-orthogonal to T, on the same side
    let w = jet_t.g.mul(ta);
    let mut v_raw = [-w[1], w[0]];
    if side == Side::Right {
        v_raw = [-v_raw[0], -v_raw[1]];
    }
    let fv = eval_norm(spec, x, tg(v_raw[0], v_raw[1]))?;
    let v = [v_raw[0] / fv, v_raw[1] / fv];
    let mu2 = jet_t.g.inner(v, v);
    let k_v_t = jet_t.g.inner(dtt_t, v) / mu2;

    Ok(CurvePointData {
        x,
        t: t_unit,
        n,
        sigma,
        k_t_n,
        mu: mu2.sqrt(),
        k_v_t,
        n_parallel_residual,
        dn_dt,
        dtn_n,
        dtt_t,
    })
}

/// Sampled curve with per-sample geometric data.
#[derive(Clone, Debug)]
pub struct CurveTrace {
    pub ts: Vec<f64>,
    pub xs: Vec<Point2>,
    pub tangents: Vec<Tangent2>,
    pub normals: Vec<Tangent2>,
    pub sigmas: Vec<f64>,
    pub k_t_n: Vec<f64>,
    pub mus: Vec<f64>,
    pub k_v_t: Vec<f64>,
    pub n_parallel_residuals: Vec<f64>,
    /// max |F(x,T) - 1| over the samples.
    pub max_f_drift: f64,
}

impl CurveTrace {
    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        self.xs.iter().map(|p| p.arr()).collect()
    }

    /// CSV with the trace schema: t, x1, x2, T1, T2, N1, N2, sigma, k_T_N.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,x1,x2,T1,T2,N1,N2,sigma,k_T_N\n");
        for i in 0..self.len() {
            out.push_str(&format!(
                "{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                self.ts[i],
                self.xs[i].x1,
                self.xs[i].x2,
                self.tangents[i].y1,
                self.tangents[i].y2,
                self.normals[i].y1,
                self.normals[i].y2,
                self.sigmas[i],
                self.k_t_n[i],
            ));
        }
        out
    }
}

fn geodesic_rhs(spec: &MetricSpec) -> impl FnMut(f64, &[f64; 4]) -> Result<[f64; 4]> + '_ {
    move |_t, s| {
        let x = pt(s[0], s[1]);
        let y = tg(s[2], s[3]);
        let jet = metric_jet(spec, x, y)?;
        let g = crate::connection::spray_from_jet(&jet);
        Ok([s[2], s[3], -2.0 * g[0], -2.0 * g[1]])
    }
}

fn n_parallel_rhs<'a>(
    spec: &'a MetricSpec,
    side: Side,
    warm: &'a mut Option<[f64; 2]>,
) -> impl FnMut(f64, &[f64; 4]) -> Result<[f64; 4]> + 'a {
    move |_t, s| {
        let x = pt(s[0], s[1]);
        let t = tg(s[2], s[3]);
        let sol = solve_normal(spec, x, t, side, *warm)?;
        *warm = Some(sol.p);
        let jet_n = metric_jet(spec, x, sol.normal)?;
        let nnl = nonlinear_from_jet(&jet_n);
        let gamma = chern_gamma_from_jet(&jet_n, &nnl);
        let ta = t.arr();
        let gtt = [gamma[0].inner(ta, ta), gamma[1].inner(ta, ta)];

        // tangential multiplier keeping F(x, T) constant
        let (f_t, g_t) = norm_and_g(spec, x, t)?;
        let gy = g_t.mul(ta);
        let grad_f_y = [gy[0] / f_t, gy[1] / f_t];
        let fx = f_grad_x(spec, x, t)?;
        let lambda =
            (grad_f_y[0] * gtt[0] + grad_f_y[1] * gtt[1] - fx[0] * ta[0] - fx[1] * ta[1]) / f_t;

        Ok([
            ta[0],
            ta[1],
            -gtt[0] + lambda * ta[0],
            -gtt[1] + lambda * ta[1],
        ])
    }
}

/// Integrate a Finslerian geodesic: xdd + 2G(x, xd) = 0, unit speed.
pub fn integrate_geodesic(spec: &MetricSpec, curve: &CurveSpec) -> Result<CurveTrace> {
    integrate_curve(spec, curve, false)
}

/// Integrate an N-parallel from (x0, T0); the initial normal is the side
/// normal of T0.
pub fn integrate_n_parallel(spec: &MetricSpec, curve: &CurveSpec) -> Result<CurveTrace> {
    integrate_curve(spec, curve, true)
}

fn integrate_curve(spec: &MetricSpec, curve: &CurveSpec, n_parallel: bool) -> Result<CurveTrace> {
    spec.validate()?;
    if let CurveKind::Explicit(_) = curve.kind {
        return trace_explicit(spec, curve);
    }
    let f0 = eval_norm(spec, curve.x0, curve.t0)?;
    let t0u = tg(curve.t0.y1 / f0, curve.t0.y2 / f0);
    let state0 = [curve.x0.x1, curve.x0.x2, t0u.y1, t0u.y2];
    let opts = Dopri5Options {
        rtol: curve.rtol,
        atol: curve.rtol * 1e-3,
        ..Default::default()
    };

    let sol = if n_parallel {
        let mut warm = None;
        let mut rhs = n_parallel_rhs(spec, curve.side, &mut warm);
        integrate(&mut rhs, curve.t_span.0, state0, curve.t_span.1, &opts)?
    } else {
        let mut rhs = geodesic_rhs(spec);
        integrate(&mut rhs, curve.t_span.0, state0, curve.t_span.1, &opts)?
    };

    // uniform resample through the dense output
    let n = curve.samples.max(2);
    let mut ts = Vec::with_capacity(n);
    let mut states = Vec::with_capacity(n);
    for i in 0..n {
        let t = curve.t_span.0
            + (curve.t_span.1 - curve.t_span.0) * i as f64 / (n - 1) as f64;
        let s = if i == n - 1 { sol.y_end } else { sol.sample(t) };
        ts.push(t);
        states.push(s);
    }

    // per-sample frame data; tangent derivative from the RHS at the sample
    let mut xs = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n);
    let mut warm = None;
    let mut max_f_drift: f64 = 0.0;
    for (i, s) in states.iter().enumerate() {
        let x = pt(s[0], s[1]);
        let t_vec = tg(s[2], s[3]);
        let f = eval_norm(spec, x, t_vec)?;
        max_f_drift = max_f_drift.max((f - 1.0).abs());
        let dstate = if n_parallel {
            let mut w2 = warm;
            let mut rhs = n_parallel_rhs(spec, curve.side, &mut w2);
            rhs(ts[i], s)?
        } else {
            let mut rhs = geodesic_rhs(spec);
            rhs(ts[i], s)?
        };
        let d = curve_point_data(spec, x, t_vec, [dstate[2], dstate[3]], curve.side, &mut warm)?;
        if d.sigma.abs() < 1e-8 {
            return Err(FinslerError::DegenerateSigma {
                sigma: d.sigma,
                t: ts[i],
            });
        }
        xs.push(x);
        tangents.push(t_vec);
        data.push(d);
    }

    Ok(assemble_trace(ts, xs, tangents, data, max_f_drift))
}

fn trace_explicit(spec: &MetricSpec, curve: &CurveSpec) -> Result<CurveTrace> {
    let f = match &curve.kind {
        CurveKind::Explicit(f) => f.clone(),
        _ => unreachable!(),
    };
    let n = curve.samples.max(2);
    let mut ts = Vec::with_capacity(n);
    let mut xs = Vec::with_capacity(n);
    let mut tangents = Vec::with_capacity(n);
    let mut data = Vec::with_capacity(n);
    let mut warm = None;
    let mut max_f_drift: f64 = 0.0;
    for i in 0..n {
        let u = curve.t_span.0
            + (curve.t_span.1 - curve.t_span.0) * i as f64 / (n - 1) as f64;
        let (c, c1, c2) = f(u);
        let x = pt(c[0], c[1]);
        let fu = eval_norm(spec, x, tg(c1[0], c1[1]))?;
        let t_unit = tg(c1[0] / fu, c1[1] / fu);
        // dT/dt in the unit-speed parameter via the chain rule
        let fx = f_grad_x(spec, x, tg(c1[0], c1[1]))?;
        let (_, g) = norm_and_g(spec, x, tg(c1[0], c1[1]))?;
        let gy = g.mul(c1);
        let grad_f_y = [gy[0] / fu, gy[1] / fu];
        let df_du = fx[0] * c1[0] + fx[1] * c1[1] + grad_f_y[0] * c2[0] + grad_f_y[1] * c2[1];
        let dt_du = [
            c2[0] / fu - c1[0] * df_du / (fu * fu),
            c2[1] / fu - c1[1] * df_du / (fu * fu),
        ];
        let dt_dt = [dt_du[0] / fu, dt_du[1] / fu];

        let d = curve_point_data(spec, x, t_unit, dt_dt, curve.side, &mut warm)?;
        max_f_drift = max_f_drift.max((eval_norm(spec, x, t_unit)? - 1.0).abs());
        ts.push(u);
        xs.push(x);
        tangents.push(t_unit);
        data.push(d);
    }
    Ok(assemble_trace(ts, xs, tangents, data, max_f_drift))
}

fn assemble_trace(
    ts: Vec<f64>,
    xs: Vec<Point2>,
    tangents: Vec<Tangent2>,
    data: Vec<CurvePointData>,
    max_f_drift: f64,
) -> CurveTrace {
    CurveTrace {
        ts,
        xs,
        tangents,
        normals: data.iter().map(|d| d.n).collect(),
        sigmas: data.iter().map(|d| d.sigma).collect(),
        k_t_n: data.iter().map(|d| d.k_t_n).collect(),
        mus: data.iter().map(|d| d.mu).collect(),
        k_v_t: data.iter().map(|d| d.k_v_t).collect(),
        n_parallel_residuals: data.iter().map(|d| d.n_parallel_residual).collect(),
        max_f_drift,
    }
}

/// All transverse self-crossings of a trace's base polyline, with crossing
/// parameters interpolated from the sample times.
pub fn self_intersections(trace: &CurveTrace) -> Vec<(f64, f64, Point2)> {
    let pts = trace.points();
    if pts.len() < 4 {
        return Vec::new();
    }
    polyline_self_intersections(&pts, false, 2)
        .into_iter()
        .map(|(i, j, p)| (trace.ts[i], trace.ts[j], pt(p[0], p[1])))
        .collect()
}

/// Pullback of the coframe through the normal lift at a curve point:
/// (w1, w2, w3) evaluated on the lift velocity (T, dN/dt).
pub fn normal_lift_pullback(
    spec: &MetricSpec,
    d: &CurvePointData,
) -> Result<[f64; 3]> {
    let jet = metric_jet(spec, d.x, d.n)?;
    let nnl = nonlinear_from_jet(&jet);
    let fr = crate::metric::berwald_frame(&jet);
    let ta = d.t.arr();
    let w1 = fr.omega1[0] * ta[0] + fr.omega1[1] * ta[1];
    let w2 = fr.omega2[0] * ta[0] + fr.omega2[1] * ta[1];
    let w3 = crate::connection::rotation_form(&jet, &nnl, ta, d.dn_dt);
    Ok([w1, w2, w3])
}

/// Pullback of the coframe through the canonical (tangential) lift:
/// (w1, w2, w3) on the velocity (T, dT/dt).
pub fn canonical_lift_pullback(
    spec: &MetricSpec,
    x: Point2,
    t_unit: Tangent2,
    dt_dt: [f64; 2],
) -> Result<[f64; 3]> {
    let jet = metric_jet(spec, x, t_unit)?;
    let nnl = nonlinear_from_jet(&jet);
    let fr = crate::metric::berwald_frame(&jet);
    let ta = t_unit.arr();
    let w1 = fr.omega1[0] * ta[0] + fr.omega1[1] * ta[1];
    let w2 = fr.omega2[0] * ta[0] + fr.omega2[1] * ta[1];
    let w3 = crate::connection::rotation_form(&jet, &nnl, ta, dt_dt);
    Ok([w1, w2, w3])
}

/// Gauss curvature along a trace point, for K-sign diagnostics in reports.
pub fn curvature_at(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<f64> {
    let jet = metric_jet(spec, x, y)?;
    let conn = connection_jet_with(spec, &jet)?;
    Ok(crate::connection::gauss_curvature_with(&conn, &jet))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euclidean_geodesic_is_a_straight_segment() {
        let spec = MetricSpec::euclidean();
        let c = CurveSpec::geodesic(pt(0.0, 0.0), tg(1.0, 0.0), 1.0);
        let tr = integrate_geodesic(&spec, &c).unwrap();
        let end = tr.xs.last().unwrap();
        assert!((end.x1 - 1.0).abs() < 1e-10 && end.x2.abs() < 1e-12);
        assert!(tr.max_f_drift < 1e-10);
    }

    #[test]
    fn pnorm_geodesics_are_coordinate_lines() {
        let spec = MetricSpec::pnorm(4.0);
        let c = CurveSpec::geodesic(pt(0.3, -0.2), tg(1.0, 0.7), 2.0);
        let tr = integrate_geodesic(&spec, &c).unwrap();
        // straight in coordinates: collinear samples
        let a = tr.xs[0];
        let b = *tr.xs.last().unwrap();
        for p in &tr.xs {
            let cross = (b.x1 - a.x1) * (p.x2 - a.x2) - (b.x2 - a.x2) * (p.x1 - a.x1);
            assert!(cross.abs() < 1e-9);
        }
    }

    #[test]
    fn euclidean_n_parallel_is_straight() {
        let spec = MetricSpec::euclidean();
        let c = CurveSpec::n_parallel(pt(0.0, 0.0), tg(0.6, 0.8), 1.0);
        let tr = integrate_n_parallel(&spec, &c).unwrap();
        let end = tr.xs.last().unwrap();
        assert!((end.x1 - 0.6).abs() < 1e-9 && (end.x2 - 0.8).abs() < 1e-9);
        for r in &tr.n_parallel_residuals {
            assert!(*r < 1e-8);
        }
    }

    #[test]
    fn randers_n_parallel_keeps_normal_parallel() {
        let spec = MetricSpec::randers(0.2, 0.0);
        let c = CurveSpec::n_parallel(pt(0.1, -0.3), tg(0.3, 1.0), 1.5);
        let tr = integrate_n_parallel(&spec, &c).unwrap();
        assert!(tr.max_f_drift < 1e-8, "drift {}", tr.max_f_drift);
        for r in &tr.n_parallel_residuals {
            assert!(*r < 1e-6, "residual {r}");
        }
    }

    #[test]
    fn euclidean_circle_curvatures_are_one_over_r() {
        let spec = MetricSpec::euclidean();
        for r in [0.5, 1.0, 2.0] {
            let c = CurveSpec::circle(pt(0.0, 0.0), r, std::f64::consts::TAU);
            let tr = trace_explicit(&spec, &c).unwrap();
            for i in 0..tr.len() {
                assert!((tr.k_t_n[i] - 1.0 / r).abs() < 1e-8, "k {}", tr.k_t_n[i]);
                assert!((tr.k_v_t[i] - 1.0 / r).abs() < 1e-8);
                assert!((tr.sigmas[i] - 1.0).abs() < 1e-10);
                assert!((tr.mus[i] - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn geodesic_signed_curvature_vanishes() {
        let spec = MetricSpec::sphere(1.0);
        let c = CurveSpec::geodesic(pt(0.2, 0.1), tg(1.0, -0.4), 1.0);
        let tr = integrate_geodesic(&spec, &c).unwrap();
        for v in &tr.k_v_t {
            assert!(v.abs() < 1e-7, "k_v_t {v}");
        }
    }

    #[test]
    fn constant_field_has_zero_euclidean_cov_derivative() {
        let spec = MetricSpec::euclidean();
        let d = ref_cov_deriv(
            &spec,
            pt(0.3, 0.4),
            tg(1.0, 0.0),
            [0.7, -0.3],
            [0.0, 0.0],
            tg(0.5, 0.5),
        )
        .unwrap();
        assert!(d[0].abs() < 1e-14 && d[1].abs() < 1e-14);
    }

    #[test]
    fn sigma_squared_matches_gn_tt() {
        let spec = MetricSpec::randers(0.2, -0.1);
        let c = CurveSpec::circle(pt(0.0, 0.0), 1.0, std::f64::consts::TAU);
        let tr = trace_explicit(&spec, &c).unwrap();
        for i in 0..tr.len() {
            let (_, g) = norm_and_g(&spec, tr.xs[i], tr.normals[i]).unwrap();
            let s2 = g.inner(tr.tangents[i].arr(), tr.tangents[i].arr());
            assert!((tr.sigmas[i] * tr.sigmas[i] - s2).abs() < 1e-10);
            assert!(tr.sigmas[i] > 0.0);
        }
    }
}
