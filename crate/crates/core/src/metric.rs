//! Finsler norm families and pointwise metric data.
//!
//! A metric spec picks one of three built-in norm families. Every tensor the
//! rest of the crate consumes (fundamental tensor, Cartan tensor, x-derivatives,
//! mixed block) is produced here by exact nested-dual differentiation of F^2;
//! no finite differences enter the jet.

use crate::dual::{Dual, Real};
use crate::error::{FinslerError, Result};

/// Chart point. Plain coordinates on the single chart the crate works in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point2 {
    pub x1: f64,
    pub x2: f64,
}

/// Fiber (tangent) vector at a chart point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tangent2 {
    pub y1: f64,
    pub y2: f64,
}

pub fn pt(x1: f64, x2: f64) -> Point2 {
    Point2 { x1, x2 }
}

pub fn tg(y1: f64, y2: f64) -> Tangent2 {
    Tangent2 { y1, y2 }
}

impl Point2 {
    pub fn arr(self) -> [f64; 2] {
        [self.x1, self.x2]
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(a: [f64; 2]) -> Self {
        pt(a[0], a[1])
    }
}

impl Tangent2 {
    pub fn arr(self) -> [f64; 2] {
        [self.y1, self.y2]
    }

    pub fn is_zero(self) -> bool {
        self.y1 == 0.0 && self.y2 == 0.0
    }
}

impl From<[f64; 2]> for Tangent2 {
    fn from(a: [f64; 2]) -> Self {
        tg(a[0], a[1])
    }
}

/// Conformal factor e^phi for the Riemannian family, as the factor Omega = e^phi.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ConformalFactor {
    /// phi(x) = c0 + cx1*x1 + cx2*x2 + cx1x1*x1^2 + cx1x2*x1*x2 + cx2x2*x2^2.
    Poly {
        c0: f64,
        cx1: f64,
        cx2: f64,
        cx1x1: f64,
        cx1x2: f64,
        cx2x2: f64,
    },
    /// Omega = 2R^2/(R^2 + |x|^2): stereographic chart of the round sphere,
    /// Gauss curvature +1/R^2, defined on the whole plane.
    Sphere { radius: f64 },
    /// Omega = 2R^2/(R^2 - |x|^2): disk chart with Gauss curvature -1/R^2,
    /// defined for |x| < R.
    Hyperbolic { radius: f64 },
}

impl ConformalFactor {
    pub const EUCLIDEAN: ConformalFactor = ConformalFactor::Poly {
        c0: 0.0,
        cx1: 0.0,
        cx2: 0.0,
        cx1x1: 0.0,
        cx1x2: 0.0,
        cx2x2: 0.0,
    };
}

/// One of the three built-in norm families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricSpec {
    /// F = e^{phi(x)} |y|.
    RiemannianConformal { phi: ConformalFactor },
    /// F = |y| + b.y with constant drift b, |b| < 1.
    Randers { b1: f64, b2: f64 },
    /// F = ((y1^2)^{p/2} + (y2^2)^{p/2})^{1/p}, p > 1.
    MinkowskiPNorm { p: f64 },
}

impl MetricSpec {
    pub fn euclidean() -> Self {
        MetricSpec::RiemannianConformal {
            phi: ConformalFactor::EUCLIDEAN,
        }
    }

    pub fn sphere(radius: f64) -> Self {
        MetricSpec::RiemannianConformal {
            phi: ConformalFactor::Sphere { radius },
        }
    }

    pub fn randers(b1: f64, b2: f64) -> Self {
        MetricSpec::Randers { b1, b2 }
    }

    pub fn pnorm(p: f64) -> Self {
        MetricSpec::MinkowskiPNorm { p }
    }

    /// Family-specific strong-convexity bounds on the parameters.
    pub fn validate(&self) -> Result<()> {
        match *self {
            MetricSpec::RiemannianConformal { phi } => match phi {
                ConformalFactor::Poly { .. } => Ok(()),
                ConformalFactor::Sphere { radius } | ConformalFactor::Hyperbolic { radius } => {
                    if radius.is_finite() && radius > 0.0 {
                        Ok(())
                    } else {
                        Err(FinslerError::InvalidParams(format!(
                            "conformal radius must be positive and finite, got {radius}"
                        )))
                    }
                }
            },
            MetricSpec::Randers { b1, b2 } => {
                let bb = b1 * b1 + b2 * b2;
                if bb.is_finite() && bb < 1.0 {
                    Ok(())
                } else {
                    Err(FinslerError::InvalidParams(format!(
                        "convexity bound: Randers drift needs b1^2 + b2^2 < 1, got {bb}"
                    )))
                }
            }
            MetricSpec::MinkowskiPNorm { p } => {
                if p.is_finite() && p > 1.0 && p <= 16.0 {
                    Ok(())
                } else {
                    Err(FinslerError::InvalidParams(format!(
                        "p-norm exponent must satisfy 1 < p <= 16, got {p}"
                    )))
                }
            }
        }
    }

    /// True when F(x,-y) = F(x,y) for the whole family.
    pub fn is_reversible(&self) -> bool {
        match *self {
            MetricSpec::RiemannianConformal { .. } => true,
            MetricSpec::Randers { b1, b2 } => b1 == 0.0 && b2 == 0.0,
            MetricSpec::MinkowskiPNorm { .. } => true,
        }
    }

    /// Chart-domain check (only the hyperbolic factor restricts the chart).
    pub fn check_chart(&self, x: Point2) -> Result<()> {
        if !(x.x1.is_finite() && x.x2.is_finite()) {
            return Err(FinslerError::NonFinite("chart point"));
        }
        if let MetricSpec::RiemannianConformal {
            phi: ConformalFactor::Hyperbolic { radius },
        } = *self
        {
            let r2 = x.x1 * x.x1 + x.x2 * x.x2;
            if r2 >= radius * radius {
                return Err(FinslerError::OutsideChart {
                    x1: x.x1,
                    x2: x.x2,
                    reason: format!("hyperbolic chart requires |x| < {radius}"),
                });
            }
        }
        Ok(())
    }
}

fn conformal_omega<S: Real>(phi: &ConformalFactor, x: [S; 2]) -> S {
    match *phi {
        ConformalFactor::Poly {
            c0,
            cx1,
            cx2,
            cx1x1,
            cx1x2,
            cx2x2,
        } => {
            let p = S::from_f64(c0)
                + S::from_f64(cx1) * x[0]
                + S::from_f64(cx2) * x[1]
                + S::from_f64(cx1x1) * x[0] * x[0]
                + S::from_f64(cx1x2) * x[0] * x[1]
                + S::from_f64(cx2x2) * x[1] * x[1];
            p.exp()
        }
        ConformalFactor::Sphere { radius } => {
            let r2 = S::from_f64(radius * radius);
            let two_r2 = S::from_f64(2.0 * radius * radius);
            two_r2 / (r2 + x[0] * x[0] + x[1] * x[1])
        }
        ConformalFactor::Hyperbolic { radius } => {
            let r2 = S::from_f64(radius * radius);
            let two_r2 = S::from_f64(2.0 * radius * radius);
            two_r2 / (r2 - x[0] * x[0] - x[1] * x[1])
        }
    }
}

/// F^2 as a generic scalar expression; the single source every derivative
/// in the crate is taken from.
pub(crate) fn norm_sq<S: Real>(spec: &MetricSpec, x: [S; 2], y: [S; 2]) -> S {
    match spec {
        MetricSpec::RiemannianConformal { phi } => {
            let omega = conformal_omega(phi, x);
            omega * omega * (y[0] * y[0] + y[1] * y[1])
        }
        MetricSpec::Randers { b1, b2 } => {
            let alpha = (y[0] * y[0] + y[1] * y[1]).sqrt();
            let beta = S::from_f64(*b1) * y[0] + S::from_f64(*b2) * y[1];
            let f = alpha + beta;
            f * f
        }
        MetricSpec::MinkowskiPNorm { p } => {
            let u = (y[0] * y[0]).powf_const(p / 2.0) + (y[1] * y[1]).powf_const(p / 2.0);
            u.powf_const(2.0 / p)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Var {
    X(usize),
    Y(usize),
}

fn sel(v: Var, w: Var) -> f64 {
    if v == w {
        1.0
    } else {
        0.0
    }
}

type D1 = Dual<f64>;
type D2 = Dual<Dual<f64>>;
type D3 = Dual<Dual<Dual<f64>>>;

fn seed1(v: f64, sa: f64) -> D1 {
    Dual::new(v, sa)
}

fn seed2(v: f64, sa: f64, sb: f64) -> D2 {
    Dual::new(Dual::new(v, sa), Dual::new(sb, 0.0))
}

fn seed3(v: f64, sa: f64, sb: f64, sc: f64) -> D3 {
    Dual::new(
        Dual::new(Dual::new(v, sa), Dual::new(sb, 0.0)),
        Dual::new(Dual::new(sc, 0.0), Dual::new(0.0, 0.0)),
    )
}

/// First partial of F^2 at (x, y).
pub(crate) fn f2_d1(spec: &MetricSpec, x: [f64; 2], y: [f64; 2], a: Var) -> f64 {
    let xs = [
        seed1(x[0], sel(a, Var::X(0))),
        seed1(x[1], sel(a, Var::X(1))),
    ];
    let ys = [
        seed1(y[0], sel(a, Var::Y(0))),
        seed1(y[1], sel(a, Var::Y(1))),
    ];
    norm_sq(spec, xs, ys).eps
}

/// Second mixed partial of F^2.
pub(crate) fn f2_d2(spec: &MetricSpec, x: [f64; 2], y: [f64; 2], a: Var, b: Var) -> f64 {
    let sx = |i| seed2(x[i], sel(a, Var::X(i)), sel(b, Var::X(i)));
    let sy = |i| seed2(y[i], sel(a, Var::Y(i)), sel(b, Var::Y(i)));
    norm_sq(spec, [sx(0), sx(1)], [sy(0), sy(1)]).eps.eps
}

/// Third mixed partial of F^2.
pub(crate) fn f2_d3(spec: &MetricSpec, x: [f64; 2], y: [f64; 2], a: Var, b: Var, c: Var) -> f64 {
    let sx = |i| {
        seed3(
            x[i],
            sel(a, Var::X(i)),
            sel(b, Var::X(i)),
            sel(c, Var::X(i)),
        )
    };
    let sy = |i| {
        seed3(
            y[i],
            sel(a, Var::Y(i)),
            sel(b, Var::Y(i)),
            sel(c, Var::Y(i)),
        )
    };
    norm_sq(spec, [sx(0), sx(1)], [sy(0), sy(1)]).eps.eps.eps
}

/// Symmetric 2x2 matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sym2 {
    pub a11: f64,
    pub a12: f64,
    pub a22: f64,
}

impl Sym2 {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i + j {
            0 => self.a11,
            1 => self.a12,
            2 => self.a22,
            _ => unreachable!(),
        }
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a12
    }

    pub fn mul(&self, v: [f64; 2]) -> [f64; 2] {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a12 * v[0] + self.a22 * v[1],
        ]
    }

    /// Bilinear form u^T (self) v.
    pub fn inner(&self, u: [f64; 2], v: [f64; 2]) -> f64 {
        u[0] * (self.a11 * v[0] + self.a12 * v[1]) + u[1] * (self.a12 * v[0] + self.a22 * v[1])
    }

    pub fn inverse(&self) -> Sym2 {
        let d = self.det();
        Sym2 {
            a11: self.a22 / d,
            a12: -self.a12 / d,
            a22: self.a11 / d,
        }
    }

    /// Solve (self) u = rhs.
    pub fn solve(&self, rhs: [f64; 2]) -> [f64; 2] {
        let d = self.det();
        [
            (self.a22 * rhs[0] - self.a12 * rhs[1]) / d,
            (self.a11 * rhs[1] - self.a12 * rhs[0]) / d,
        ]
    }
}

/// Fully symmetric 3-index array (four independent components).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sym3 {
    pub a111: f64,
    pub a112: f64,
    pub a122: f64,
    pub a222: f64,
}

impl Sym3 {
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        match i + j + k {
            0 => self.a111,
            1 => self.a112,
            2 => self.a122,
            3 => self.a222,
            _ => unreachable!(),
        }
    }

    /// Full contraction A(u, v, w).
    pub fn contract(&self, u: [f64; 2], v: [f64; 2], w: [f64; 2]) -> f64 {
        let mut s = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    s += self.get(i, j, k) * u[i] * v[j] * w[k];
                }
            }
        }
        s
    }

    /// Contraction in the last slot: B_ij = A_ijk w^k.
    pub fn contract_last(&self, w: [f64; 2]) -> Sym2 {
        Sym2 {
            a11: self.get(0, 0, 0) * w[0] + self.get(0, 0, 1) * w[1],
            a12: self.get(0, 1, 0) * w[0] + self.get(0, 1, 1) * w[1],
            a22: self.get(1, 1, 0) * w[0] + self.get(1, 1, 1) * w[1],
        }
    }
}

/// Everything pointwise the downstream modules need at one (x, y).
///
/// All derivative fields are exact (nested duals applied to F^2).
#[derive(Clone, Copy, Debug)]
pub struct MetricJet {
    pub x: Point2,
    pub y: Tangent2,
    /// F(x, y) > 0.
    pub f: f64,
    /// dF/dy^i.
    pub grad_f_y: [f64; 2],
    /// Fundamental tensor g_ij = (1/2) d^2 F^2 / dy^i dy^j.
    pub g: Sym2,
    pub g_inv: Sym2,
    /// sqrt(det g).
    pub sqrt_g: f64,
    /// Cartan tensor A_ijk = (F/4) d^3 F^2 / dy^i dy^j dy^k.
    pub cartan: Sym3,
    /// dg_ij/dx^k, indexed [k].
    pub dg_dx: [Sym2; 2],
    /// dF^2/dx^i.
    pub df2_dx: [f64; 2],
    /// d^2 F^2 / dx^k dy^l, indexed [k][l].
    pub d2f2_dxdy: [[f64; 2]; 2],
}

impl MetricJet {
    /// dg_ij/dy^k = 2 A_ijk / F.
    pub fn dg_dy(&self, k: usize) -> Sym2 {
        let s = 2.0 / self.f;
        Sym2 {
            a11: s * self.cartan.get(0, 0, k),
            a12: s * self.cartan.get(0, 1, k),
            a22: s * self.cartan.get(1, 1, k),
        }
    }
}

fn check_direction(y: Tangent2) -> Result<()> {
    if !(y.y1.is_finite() && y.y2.is_finite()) {
        return Err(FinslerError::NonFinite("direction"));
    }
    if y.is_zero() {
        return Err(FinslerError::ZeroDirection);
    }
    Ok(())
}

/// F(x, y). Positively 1-homogeneous in y.
pub fn eval_norm(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<f64> {
    spec.validate()?;
    spec.check_chart(x)?;
    check_direction(y)?;
    let f2 = norm_sq(spec, x.arr(), y.arr());
    if !(f2.is_finite() && f2 > 0.0) {
        return Err(FinslerError::NonFinite("norm"));
    }
    Ok(f2.sqrt())
}

/// Full pointwise jet at (x, y). Errors if g fails the strict leading-minor
/// positivity check; degeneracy is never clamped.
pub fn metric_jet(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<MetricJet> {
    spec.validate()?;
    spec.check_chart(x)?;
    check_direction(y)?;
    let xa = x.arr();
    let ya = y.arr();

    let f2 = norm_sq(spec, xa, ya);
    if !(f2.is_finite() && f2 > 0.0) {
        return Err(FinslerError::NonFinite("norm"));
    }
    let f = f2.sqrt();

    let (y0, y1) = (Var::Y(0), Var::Y(1));
    let (x0, x1) = (Var::X(0), Var::X(1));

    let g = Sym2 {
        a11: 0.5 * f2_d2(spec, xa, ya, y0, y0),
        a12: 0.5 * f2_d2(spec, xa, ya, y0, y1),
        a22: 0.5 * f2_d2(spec, xa, ya, y1, y1),
    };
    let det = g.det();
    if !(g.a11.is_finite() && g.a12.is_finite() && g.a22.is_finite()) {
        return Err(FinslerError::NonFinite("fundamental tensor"));
    }
    if g.a11 <= 0.0 || det <= 0.0 {
        return Err(FinslerError::NotConvex {
            x1: x.x1,
            x2: x.x2,
            y1: y.y1,
            y2: y.y2,
            g11: g.a11,
            det,
        });
    }

    let quarter_f = 0.25 * f;
    let cartan = Sym3 {
        a111: quarter_f * f2_d3(spec, xa, ya, y0, y0, y0),
        a112: quarter_f * f2_d3(spec, xa, ya, y0, y0, y1),
        a122: quarter_f * f2_d3(spec, xa, ya, y0, y1, y1),
        a222: quarter_f * f2_d3(spec, xa, ya, y1, y1, y1),
    };

    let dg = |k: Var| Sym2 {
        a11: 0.5 * f2_d3(spec, xa, ya, k, y0, y0),
        a12: 0.5 * f2_d3(spec, xa, ya, k, y0, y1),
        a22: 0.5 * f2_d3(spec, xa, ya, k, y1, y1),
    };
    let dg_dx = [dg(x0), dg(x1)];

    let df2_dx = [f2_d1(spec, xa, ya, x0), f2_d1(spec, xa, ya, x1)];

    let d2f2_dxdy = [
        [f2_d2(spec, xa, ya, x0, y0), f2_d2(spec, xa, ya, x0, y1)],
        [f2_d2(spec, xa, ya, x1, y0), f2_d2(spec, xa, ya, x1, y1)],
    ];

    // Euler identity: dF/dy^i = g_ij y^j / F, exact for 1-homogeneous F.
    let gy = g.mul(ya);
    let grad_f_y = [gy[0] / f, gy[1] / f];

    let jet = MetricJet {
        x,
        y,
        f,
        grad_f_y,
        g,
        g_inv: g.inverse(),
        sqrt_g: det.sqrt(),
        cartan,
        dg_dx,
        df2_dx,
        d2f2_dxdy,
    };
    for v in [jet.cartan.a111, jet.dg_dx[0].a11, jet.df2_dx[0], jet.d2f2_dxdy[0][0]] {
        if !v.is_finite() {
            return Err(FinslerError::NonFinite("metric jet"));
        }
    }
    Ok(jet)
}

/// Light path used in quadrature and Newton inner loops: F and g only.
pub fn norm_and_g(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<(f64, Sym2)> {
    spec.check_chart(x)?;
    check_direction(y)?;
    let xa = x.arr();
    let ya = y.arr();
    let f2 = norm_sq(spec, xa, ya);
    if !(f2.is_finite() && f2 > 0.0) {
        return Err(FinslerError::NonFinite("norm"));
    }
    let (y0, y1) = (Var::Y(0), Var::Y(1));
    let g = Sym2 {
        a11: 0.5 * f2_d2(spec, xa, ya, y0, y0),
        a12: 0.5 * f2_d2(spec, xa, ya, y0, y1),
        a22: 0.5 * f2_d2(spec, xa, ya, y1, y1),
    };
    let det = g.det();
    if !(det > 0.0 && g.a11 > 0.0) {
        return Err(FinslerError::NotConvex {
            x1: x.x1,
            x2: x.x2,
            y1: y.y1,
            y2: y.y2,
            g11: g.a11,
            det,
        });
    }
    Ok((f2.sqrt(), g))
}

/// dF/dx^m at (x, y), exact.
pub fn f_grad_x(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<[f64; 2]> {
    spec.check_chart(x)?;
    check_direction(y)?;
    let f = eval_norm(spec, x, y)?;
    let xa = x.arr();
    let ya = y.arr();
    Ok([
        f2_d1(spec, xa, ya, Var::X(0)) / (2.0 * f),
        f2_d1(spec, xa, ya, Var::X(1)) / (2.0 * f),
    ])
}

/// Rescale y to unit norm: y / F(x,y).
pub fn unit_vector(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<Tangent2> {
    let f = eval_norm(spec, x, y)?;
    Ok(tg(y.y1 / f, y.y2 / f))
}

/// The positively oriented g-orthonormal frame with e2 = y/F.
#[derive(Clone, Copy, Debug)]
pub struct BerwaldFrame {
    /// e1 = (1/sqrt(g)) (dF/dy^2, -dF/dy^1); transverse leg.
    pub e1: [f64; 2],
    /// e2 = y / F; the flag pole.
    pub e2: [f64; 2],
    /// Covector of e1: (sqrt(g)/F)(y^2, -y^1).
    pub omega1: [f64; 2],
    /// Covector of e2: (dF/dy^1, dF/dy^2).
    pub omega2: [f64; 2],
}

pub fn berwald_frame(jet: &MetricJet) -> BerwaldFrame {
    let f = jet.f;
    let sg = jet.sqrt_g;
    BerwaldFrame {
        e1: [jet.grad_f_y[1] / sg, -jet.grad_f_y[0] / sg],
        e2: [jet.y.y1 / f, jet.y.y2 / f],
        omega1: [sg * jet.y.y2 / f, -sg * jet.y.y1 / f],
        omega2: jet.grad_f_y,
    }
}

/// Cartan scalar I = A(e1, e1, e1). Vanishes exactly for Riemannian metrics.
pub fn main_scalar(jet: &MetricJet, frame: &BerwaldFrame) -> f64 {
    jet.cartan.contract(frame.e1, frame.e1, frame.e1)
}

/// Convenience: I at (x, y) directly.
pub fn main_scalar_at(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<f64> {
    let jet = metric_jet(spec, x, y)?;
    let frame = berwald_frame(&jet);
    Ok(main_scalar(&jet, &frame))
}
