//! One-dimensional quadrature: fixed-node composite Gauss-Legendre and an
//! adaptive bisection wrapper.

use crate::error::{FinslerError, Result};

/// 8-point Gauss-Legendre nodes on [-1, 1].
pub const GL8_NODES: [f64; 8] = [
    -0.9602898564975363,
    -0.7966664774136267,
    -0.5255324099163290,
    -0.1834346424956498,
    0.1834346424956498,
    0.5255324099163290,
    0.7966664774136267,
    0.9602898564975363,
];

pub const GL8_WEIGHTS: [f64; 8] = [
    0.10122853629037626,
    0.22238103445337448,
    0.31370664587788727,
    0.36268378337836198,
    0.36268378337836198,
    0.31370664587788727,
    0.22238103445337448,
    0.10122853629037626,
];

/// 2-point Gauss-Legendre nodes on [-1, 1].
pub const GL2_NODES: [f64; 2] = [-0.5773502691896258, 0.5773502691896258];
pub const GL2_WEIGHTS: [f64; 2] = [1.0, 1.0];

/// Single 8-point panel over [a, b].
pub fn gl8_panel<E>(f: &mut impl FnMut(f64) -> std::result::Result<f64, E>, a: f64, b: f64)
    -> std::result::Result<f64, E>
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for (x, w) in GL8_NODES.iter().zip(GL8_WEIGHTS.iter()) {
        s += w * f(c + h * x)?;
    }
    Ok(s * h)
}

/// Composite fixed-node rule: n panels of the 8-point rule over [a, b].
/// Node positions depend only on (a, b, n), which makes differences of
/// results at nearby parameters smooth.
pub fn composite_gl8<E>(
    f: &mut impl FnMut(f64) -> std::result::Result<f64, E>,
    a: f64,
    b: f64,
    panels: usize,
) -> std::result::Result<f64, E> {
    let n = panels.max(1);
    let step = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        total += gl8_panel(f, a + i as f64 * step, a + (i + 1) as f64 * step)?;
    }
    Ok(total)
}

/// Composite 2-point Gauss-Legendre: low order on purpose, for boundary
/// integrals whose truncation error should track the grid resolution.
pub fn composite_gl2<E>(
    f: &mut impl FnMut(f64) -> std::result::Result<f64, E>,
    a: f64,
    b: f64,
    panels: usize,
) -> std::result::Result<f64, E> {
    let n = panels.max(1);
    let step = (b - a) / n as f64;
    let mut total = 0.0;
    for i in 0..n {
        let lo = a + i as f64 * step;
        let c = lo + 0.5 * step;
        let h = 0.5 * step;
        for (x, w) in GL2_NODES.iter().zip(GL2_WEIGHTS.iter()) {
            total += w * f(c + h * x)? * h;
        }
    }
    Ok(total)
}

/// Adaptive Gauss-Legendre with a global error budget: the panel with the
/// worst two-half disagreement is bisected until the summed estimate meets
/// the tolerance. The global budget handles weak algebraic singularities
/// (fractional p-norm exponents) that defeat per-level tolerance halving.
pub fn adaptive_gl8(
    f: &mut impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<f64> {
    struct Panel {
        a: f64,
        b: f64,
        value: f64, // two-half refined estimate
        err: f64,
    }

    fn make<F: FnMut(f64) -> Result<f64>>(f: &mut F, a: f64, b: f64) -> Result<Panel> {
        let whole = gl8_panel(f, a, b)?;
        let m = 0.5 * (a + b);
        let left = gl8_panel(f, a, m)?;
        let right = gl8_panel(f, m, b)?;
        let value = left + right;
        Ok(Panel {
            a,
            b,
            value,
            err: (value - whole).abs(),
        })
    }

    let mut panels = vec![make(f, a, b)?];
    for _ in 0..20_000 {
        let total_err: f64 = panels.iter().map(|p| p.err).sum();
        let total_val: f64 = panels.iter().map(|p| p.value.abs()).sum();
        let floor = 1e-15 * total_val + 1e-300;
        if total_err <= abs_tol.max(floor) {
            return Ok(panels.iter().map(|p| p.value).sum());
        }
        // split the worst panel (first of equals, for determinism)
        let mut worst = 0;
        for (i, p) in panels.iter().enumerate() {
            if p.err > panels[worst].err {
                worst = i;
            }
        }
        let Panel { a, b, .. } = panels[worst];
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            // interval exhausted at machine resolution; accept its estimate
            panels[worst].err = 0.0;
            continue;
        }
        let left = make(f, a, m)?;
        let right = make(f, m, b)?;
        panels[worst] = left;
        panels.push(right);
    }
    let total_err: f64 = panels.iter().map(|p| p.err).sum();
    Err(FinslerError::QuadratureNoConvergence {
        error: total_err,
        tol: abs_tol,
    })
}
