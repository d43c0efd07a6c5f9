//! Geodesic spray, nonlinear connection, Chern connection coefficients, and
//! the invariants J and K, plus a finite-difference cross-check of the third
//! structure equation.
//!
//! Sign conventions used throughout the crate (fixed once, verified by the
//! structure-equation test and the Gauss-Bonnet assembly):
//!   - spray: geodesics solve xdd^i + 2 G^i(x, xd) = 0,
//!     G^i = (1/4) g^{il} (y^k d^2F^2/dy^l dx^k - dF^2/dx^l);
//!   - rotation form w3 := (sqrt g / F^2)(y^1 dy^2 - y^2 dy^1 + (y^1 N^2_j - y^2 N^1_j) dx^j),
//!     whose restriction to a fiber is the positively oriented Landsberg
//!     angle form d(theta);
//!   - with this orientation d(w3) = -K w1^w2 - J w1^w3 on the unit bundle.

use crate::dual::{Dual, Real};
use crate::error::{FinslerError, Result};
use crate::metric::{
    berwald_frame, main_scalar, metric_jet, norm_sq, unit_vector, MetricJet, MetricSpec, Point2,
    Sym2, Tangent2,
};

/// Spray, nonlinear connection, Chern coefficients, and spray curvature at one
/// (x, y).
#[derive(Clone, Copy, Debug)]
pub struct ConnectionJet {
    /// Spray coefficients G^i (positively 2-homogeneous in y).
    pub spray: [f64; 2],
    /// Nonlinear connection N^i_j = dG^i/dy^j, indexed [i][j].
    pub nonlinear: [[f64; 2]; 2],
    /// Chern connection coefficients Gamma^i_jk, symmetric in (j,k);
    /// gamma[i] holds the lower symmetric pair.
    pub gamma: [Sym2; 2],
    /// Spray curvature endomorphism R^i_k, indexed [i][k].
    pub curvature: [[f64; 2]; 2],
}

impl ConnectionJet {
    /// Gamma^i_jk T^j U^k.
    pub fn gamma_contract(&self, t: [f64; 2], u: [f64; 2]) -> [f64; 2] {
        [self.gamma[0].inner(t, u), self.gamma[1].inner(t, u)]
    }
}

/// Invariants of the structure at a point of the unit bundle.
#[derive(Clone, Copy, Debug)]
pub struct InvariantsIJK {
    pub i: f64,
    pub j: f64,
    pub k: f64,
}

/// Spray coefficients as a generic scalar expression, differentiable by
/// nesting duals. Computes g and the x-derivative blocks of F^2 internally at
/// scalar type S.
fn spray_generic<S: Real>(spec: &MetricSpec, x: [S; 2], y: [S; 2]) -> [S; 2] {
    let half = S::from_f64(0.5);
    let one = S::from_f64(1.0);

    // g_ij = (1/2) d^2 F^2/dy^i dy^j via one more nesting level
    let g2 = |i: usize, j: usize| -> S {
        let sx = [Dual::constant(Dual::constant(x[0])), Dual::constant(Dual::constant(x[1]))];
        let seed = |k: usize| {
            Dual::new(
                Dual::new(y[k], if i == k { one } else { S::from_f64(0.0) }),
                Dual::new(
                    if j == k { one } else { S::from_f64(0.0) },
                    S::from_f64(0.0),
                ),
            )
        };
        half * norm_sq(spec, sx, [seed(0), seed(1)]).eps.eps
    };
    let g11 = g2(0, 0);
    let g12 = g2(0, 1);
    let g22 = g2(1, 1);
    let det = g11 * g22 - g12 * g12;

    // dF^2/dx^l and d^2F^2/dx^k dy^l
    let dx1 = |l: usize| -> S {
        let seed_x = |k: usize| Dual::new(x[k], if l == k { one } else { S::from_f64(0.0) });
        let sy = [Dual::constant(y[0]), Dual::constant(y[1])];
        norm_sq(spec, [seed_x(0), seed_x(1)], sy).eps
    };
    let dxy = |k: usize, l: usize| -> S {
        let zero = S::from_f64(0.0);
        let sx = |m: usize| {
            Dual::new(
                Dual::new(x[m], if k == m { one } else { zero }),
                Dual::constant(zero),
            )
        };
        let sy = |m: usize| {
            Dual::new(
                Dual::constant(y[m]),
                Dual::new(if l == m { one } else { zero }, zero),
            )
        };
        norm_sq(spec, [sx(0), sx(1)], [sy(0), sy(1)]).eps.eps
    };

    // V_l = y^k d^2F^2/dx^k dy^l - dF^2/dx^l
    let v = [
        y[0] * dxy(0, 0) + y[1] * dxy(1, 0) - dx1(0),
        y[0] * dxy(0, 1) + y[1] * dxy(1, 1) - dx1(1),
    ];

    let quarter = S::from_f64(0.25);
    [
        quarter * (g22 * v[0] - g12 * v[1]) / det,
        quarter * (g11 * v[1] - g12 * v[0]) / det,
    ]
}

/// Spray coefficients G^i at (x, y).
pub fn spray(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<[f64; 2]> {
    let jet = metric_jet(spec, x, y)?;
    Ok(spray_from_jet(&jet))
}

/// G^i assembled from jet fields alone.
pub fn spray_from_jet(jet: &MetricJet) -> [f64; 2] {
    let ya = jet.y.arr();
    let v = [
        ya[0] * jet.d2f2_dxdy[0][0] + ya[1] * jet.d2f2_dxdy[1][0] - jet.df2_dx[0],
        ya[0] * jet.d2f2_dxdy[0][1] + ya[1] * jet.d2f2_dxdy[1][1] - jet.df2_dx[1],
    ];
    let gi = jet.g_inv;
    [
        0.25 * (gi.a11 * v[0] + gi.a12 * v[1]),
        0.25 * (gi.a12 * v[0] + gi.a22 * v[1]),
    ]
}

/// Nonlinear connection N^i_j = dG^i/dy^j from jet fields alone (no extra
/// differentiation pass: the required third derivatives are in the jet).
pub fn nonlinear_from_jet(jet: &MetricJet) -> [[f64; 2]; 2] {
    let ya = jet.y.arr();
    let gi = jet.g_inv;
    let v = [
        ya[0] * jet.d2f2_dxdy[0][0] + ya[1] * jet.d2f2_dxdy[1][0] - jet.df2_dx[0],
        ya[0] * jet.d2f2_dxdy[0][1] + ya[1] * jet.d2f2_dxdy[1][1] - jet.df2_dx[1],
    ];

    // dV_l/dy^j = M_jl - M_lj + 2 y^k dg_lj/dx^k, with M_kl = d2f2_dxdy[k][l]
    let dv = |l: usize, j: usize| -> f64 {
        jet.d2f2_dxdy[j][l] - jet.d2f2_dxdy[l][j]
            + 2.0 * (ya[0] * jet.dg_dx[0].get(l, j) + ya[1] * jet.dg_dx[1].get(l, j))
    };

    // dg^{il}/dy^j = -(2/F) g^{ia} A_abj g^{bl}
    let dginv = |i: usize, l: usize, j: usize| -> f64 {
        let mut s = 0.0;
        for a in 0..2 {
            for b in 0..2 {
                s += gi.get(i, a) * jet.cartan.get(a, b, j) * gi.get(b, l);
            }
        }
        -2.0 * s / jet.f
    };

    let mut n = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let mut s = 0.0;
            for l in 0..2 {
                s += dginv(i, l, j) * v[l] + gi.get(i, l) * dv(l, j);
            }
            n[i][j] = 0.25 * s;
        }
    }
    n
}

/// Chern connection coefficients from the horizontal metric-compatibility
/// Christoffel formula in delta-derivatives:
/// Gamma^i_jk = (1/2) g^{il} (dg_lj/dx~^k + dg_lk/dx~^j - dg_jk/dx~^l),
/// where dx~ is the horizontal derivative d/dx^k - N^m_k d/dy^m.
pub fn chern_gamma_from_jet(jet: &MetricJet, nonlinear: &[[f64; 2]; 2]) -> [Sym2; 2] {
    let dgy = [jet.dg_dy(0), jet.dg_dy(1)];
    // delta g_ij / delta x^k
    let delta_g = |i: usize, j: usize, k: usize| -> f64 {
        jet.dg_dx[k].get(i, j) - nonlinear[0][k] * dgy[0].get(i, j) - nonlinear[1][k] * dgy[1].get(i, j)
    };
    let gi = jet.g_inv;
    let mut out = [Sym2 { a11: 0.0, a12: 0.0, a22: 0.0 }; 2];
    for i in 0..2 {
        let comp = |j: usize, k: usize| -> f64 {
            let mut s = 0.0;
            for l in 0..2 {
                s += gi.get(i, l) * (delta_g(l, j, k) + delta_g(l, k, j) - delta_g(j, k, l));
            }
            0.5 * s
        };
        out[i] = Sym2 {
            a11: comp(0, 0),
            a12: comp(0, 1),
            a22: comp(1, 1),
        };
    }
    out
}

/// Full connection data at (x, y), including the spray curvature, which needs
/// one more differentiation pass through the generic spray.
pub fn connection_jet(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<ConnectionJet> {
    let jet = metric_jet(spec, x, y)?;
    connection_jet_with(spec, &jet)
}

pub fn connection_jet_with(spec: &MetricSpec, jet: &MetricJet) -> Result<ConnectionJet> {
    let xa = jet.x.arr();
    let ya = jet.y.arr();
    let g = spray_from_jet(jet);
    let nonlinear = nonlinear_from_jet(jet);
    let gamma = chern_gamma_from_jet(jet, &nonlinear);

    type D1 = Dual<f64>;
    type D2 = Dual<Dual<f64>>;

    // dG^i/dx^k
    let mut dg_dx = [[0.0; 2]; 2];
    for k in 0..2 {
        let sx = |m: usize| D1::new(xa[m], if m == k { 1.0 } else { 0.0 });
        let sy = |m: usize| D1::constant(ya[m]);
        let gs = spray_generic(spec, [sx(0), sx(1)], [sy(0), sy(1)]);
        for i in 0..2 {
            dg_dx[i][k] = gs[i].eps;
        }
    }

    // d^2G^i/dy^j dy^k (symmetric in j,k)
    let mut d2g_yy = [[[0.0; 2]; 2]; 2];
    for j in 0..2 {
        for k in j..2 {
            let sy = |m: usize| {
                D2::new(
                    D1::new(ya[m], if m == j { 1.0 } else { 0.0 }),
                    D1::new(if m == k { 1.0 } else { 0.0 }, 0.0),
                )
            };
            let sx = |m: usize| D2::constant(D1::constant(xa[m]));
            let gs = spray_generic(spec, [sx(0), sx(1)], [sy(0), sy(1)]);
            for i in 0..2 {
                d2g_yy[i][j][k] = gs[i].eps.eps;
                d2g_yy[i][k][j] = gs[i].eps.eps;
            }
        }
    }

    // d^2G^i/dx^j dy^k
    let mut d2g_xy = [[[0.0; 2]; 2]; 2];
    for j in 0..2 {
        for k in 0..2 {
            let sx = |m: usize| {
                D2::new(
                    D1::new(xa[m], if m == j { 1.0 } else { 0.0 }),
                    D1::constant(0.0),
                )
            };
            let sy = |m: usize| {
                D2::new(
                    D1::constant(ya[m]),
                    D1::new(if m == k { 1.0 } else { 0.0 }, 0.0),
                )
            };
            let gs = spray_generic(spec, [sx(0), sx(1)], [sy(0), sy(1)]);
            for i in 0..2 {
                d2g_xy[i][j][k] = gs[i].eps.eps;
            }
        }
    }

    // dG^i/dy^j for the quadratic term (equals the nonlinear connection)
    let n = &nonlinear;

    let mut r = [[0.0; 2]; 2];
    for i in 0..2 {
        for k in 0..2 {
            let mut s = 2.0 * dg_dx[i][k];
            for j in 0..2 {
                s -= ya[j] * d2g_xy[i][j][k];
                s += 2.0 * g[j] * d2g_yy[i][j][k];
                s -= n[i][j] * n[j][k];
            }
            r[i][k] = s;
        }
    }

    Ok(ConnectionJet {
        spray: g,
        nonlinear,
        gamma,
        curvature: r,
    })
}

/// Gauss curvature of the surface at (x, y): the flag curvature with pole y,
/// computed from the spray curvature endomorphism. For Riemannian members it
/// is the classical Gauss curvature, independent of y.
pub fn gauss_curvature(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<f64> {
    let jet = metric_jet(spec, x, y)?;
    if jet.f < 1e-12 {
        return Err(FinslerError::DegenerateFlag { f: jet.f });
    }
    let conn = connection_jet_with(spec, &jet)?;
    Ok(gauss_curvature_with(&conn, &jet))
}

pub fn gauss_curvature_with(conn: &ConnectionJet, jet: &MetricJet) -> f64 {
    let fr = berwald_frame(jet);
    let r_e1 = [
        conn.curvature[0][0] * fr.e1[0] + conn.curvature[0][1] * fr.e1[1],
        conn.curvature[1][0] * fr.e1[0] + conn.curvature[1][1] * fr.e1[1],
    ];
    jet.g.inner(r_e1, fr.e1) / (jet.f * jet.f)
}

/// Cartan scalar I at (x, y) on the unit bundle (y renormalized first).
pub fn invariant_i(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<f64> {
    let yu = unit_vector(spec, x, y)?;
    let jet = metric_jet(spec, x, yu)?;
    let fr = berwald_frame(&jet);
    Ok(main_scalar(&jet, &fr))
}

/// Landsberg invariant J = y^i (delta I / delta x^i) / F on the unit bundle.
///
/// The horizontal derivative of I is taken by Richardson-extrapolated central
/// differences along the horizontal curves s -> (x + s e_i, y - s N^._i); one
/// more exact derivative order in x of the dual pipeline is not worth its
/// cost here.
pub fn invariant_j(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<f64> {
    let yu = unit_vector(spec, x, y)?;
    let jet = metric_jet(spec, x, yu)?;
    let n = nonlinear_from_jet(&jet);
    let h = 1e-4;

    let mut j = 0.0;
    for i in 0..2 {
        let probe = |s: f64| -> Result<f64> {
            let xs = pt_shift(x, i, s);
            let ys = Tangent2 {
                y1: yu.y1 - s * n[0][i],
                y2: yu.y2 - s * n[1][i],
            };
            invariant_i(spec, xs, ys)
        };
        let d = richardson_central(&|s| probe(s), h)?;
        j += yu.arr()[i] * d;
    }
    // F(x, yu) = 1 after renormalization
    Ok(j)
}

fn pt_shift(x: Point2, i: usize, s: f64) -> Point2 {
    match i {
        0 => Point2 { x1: x.x1 + s, x2: x.x2 },
        _ => Point2 { x1: x.x1, x2: x.x2 + s },
    }
}

/// Richardson-extrapolated central difference with steps h and h/2.
pub(crate) fn richardson_central(
    f: &dyn Fn(f64) -> Result<f64>,
    h: f64,
) -> Result<f64> {
    let d_h = (f(h)? - f(-h)?) / (2.0 * h);
    let d_h2 = (f(h / 2.0)? - f(-h / 2.0)?) / h;
    Ok((4.0 * d_h2 - d_h) / 3.0)
}

/// All three invariants at a unit-bundle point.
pub fn invariants(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<InvariantsIJK> {
    let yu = unit_vector(spec, x, y)?;
    Ok(InvariantsIJK {
        i: invariant_i(spec, x, yu)?,
        j: invariant_j(spec, x, yu)?,
        k: gauss_curvature(spec, x, yu)?,
    })
}

/// The rotation one-form w3 evaluated on a tangent vector of the slit bundle
/// given as (dx, dy) components, at the bundle point of `jet` with nonlinear
/// connection `n`:
/// w3(W) = (sqrt g / F^2) [ y^1 (dy^2 + N^2_j dx^j) - y^2 (dy^1 + N^1_j dx^j) ].
pub fn rotation_form(jet: &MetricJet, n: &[[f64; 2]; 2], dx: [f64; 2], dy: [f64; 2]) -> f64 {
    let del = |i: usize| dy[i] + n[i][0] * dx[0] + n[i][1] * dx[1];
    (jet.sqrt_g / (jet.f * jet.f)) * (jet.y.y1 * del(1) - jet.y.y2 * del(0))
}

/// Frame fields on the slit bundle as functions of (x, y), in (dx, dy)
/// components: horizontal lifts of e1, e2 and the vertical vector dual to the
/// rotation form.
fn frame_fields(spec: &MetricSpec, q: [f64; 4]) -> Result<[[f64; 4]; 3]> {
    let x = Point2 { x1: q[0], x2: q[1] };
    let y = Tangent2 { y1: q[2], y2: q[3] };
    let jet = metric_jet(spec, x, y)?;
    let n = nonlinear_from_jet(&jet);
    let fr = berwald_frame(&jet);
    let horiz = |e: [f64; 2]| -> [f64; 4] {
        [
            e[0],
            e[1],
            -(n[0][0] * e[0] + n[0][1] * e[1]),
            -(n[1][0] * e[0] + n[1][1] * e[1]),
        ]
    };
    // vertical vector with w3(e3hat) = +1: -F * (m^1, m^2) in the dy slots
    let e3 = [0.0, 0.0, -jet.f * fr.e1[0], -jet.f * fr.e1[1]];
    Ok([horiz(fr.e1), horiz(fr.e2), e3])
}

/// Numerical residual of the third structure equation at a unit-bundle point.
///
/// Computes d(w3) on the frame pairs (e1^, e2^) and (e1^, e3^) through
/// finite-difference commutators of the frame fields (Richardson steps h,
/// h/2) and returns max(|dw3(e1^,e2^) + K|, |dw3(e1^,e3^) + J|); with the
/// crate's orientation of w3 both curvature entries enter with a minus sign.
pub fn structure_equation_residual(spec: &MetricSpec, x: Point2, y: Tangent2) -> Result<f64> {
    let yu = unit_vector(spec, x, y)?;
    let q0 = [x.x1, x.x2, yu.y1, yu.y2];
    let k = gauss_curvature(spec, x, yu)?;
    let j = invariant_j(spec, x, yu)?;

    let w3_of = |q: [f64; 4], w: [f64; 4]| -> Result<f64> {
        let xq = Point2 { x1: q[0], x2: q[1] };
        let yq = Tangent2 { y1: q[2], y2: q[3] };
        let jet = metric_jet(spec, xq, yq)?;
        let n = nonlinear_from_jet(&jet);
        Ok(rotation_form(&jet, &n, [w[0], w[1]], [w[2], w[3]]))
    };

    let h = 1e-4;
    // Jacobian of the frame fields at q0 by Richardson central differences.
    let frames0 = frame_fields(spec, q0)?;
    let mut jac = [[[0.0; 4]; 4]; 3]; // [field][component][coordinate]
    for c in 0..4 {
        let probe = |s: f64| -> Result<[[f64; 4]; 3]> {
            let mut q = q0;
            q[c] += s;
            frame_fields(spec, q)
        };
        let p_h = probe(h)?;
        let m_h = probe(-h)?;
        let p_h2 = probe(h / 2.0)?;
        let m_h2 = probe(-h / 2.0)?;
        for fld in 0..3 {
            for comp in 0..4 {
                let d_h = (p_h[fld][comp] - m_h[fld][comp]) / (2.0 * h);
                let d_h2 = (p_h2[fld][comp] - m_h2[fld][comp]) / h;
                jac[fld][comp][c] = (4.0 * d_h2 - d_h) / 3.0;
            }
        }
    }

    let commutator = |a: usize, b: usize| -> [f64; 4] {
        let mut out = [0.0; 4];
        for comp in 0..4 {
            let mut s = 0.0;
            for c in 0..4 {
                s += jac[b][comp][c] * frames0[a][c] - jac[a][comp][c] * frames0[b][c];
            }
            out[comp] = s;
        }
        out
    };

    // w3 vanishes on e1^, e2^ and is constant 1 on e3^, so
    // dw3(ea, eb) = -w3([ea, eb]).
    let dw3_12 = -w3_of(q0, commutator(0, 1))?;
    let dw3_13 = -w3_of(q0, commutator(0, 2))?;

    let r1 = (dw3_12 + k).abs();
    let r2 = (dw3_13 + j).abs();
    Ok(r1.max(r2))
}
