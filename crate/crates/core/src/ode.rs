//! Embedded Dormand-Prince 5(4) integrator with dense output, over fixed-size
//! state vectors.

use crate::error::{FinslerError, Result};

/// One accepted step with its dense-output coefficients.
#[derive(Clone, Debug)]
pub struct DenseStep<const N: usize> {
    pub t0: f64,
    pub h: f64,
    cont: [[f64; N]; 5],
}

impl<const N: usize> DenseStep<N> {
    /// Evaluate the quartic interpolant at t in [t0, t0 + h].
    pub fn eval(&self, t: f64) -> [f64; N] {
        let theta = (t - self.t0) / self.h;
        let mt = 1.0 - theta;
        let mut out = [0.0; N];
        for i in 0..N {
            out[i] = self.cont[0][i]
                + theta
                    * (self.cont[1][i]
                        + mt * (self.cont[2][i]
                            + theta * (self.cont[3][i] + mt * self.cont[4][i])));
        }
        out
    }
}

/// Integration result: the final state and the dense-output skeleton.
#[derive(Clone, Debug)]
pub struct Solution<const N: usize> {
    pub t_end: f64,
    pub y_end: [f64; N],
    pub steps: Vec<DenseStep<N>>,
    pub n_accepted: usize,
    pub n_rejected: usize,
}

impl<const N: usize> Solution<N> {
    /// Sample the solution at an arbitrary time inside the integrated span.
    pub fn sample(&self, t: f64) -> [f64; N] {
        // binary search over accepted steps
        let mut lo = 0usize;
        let mut hi = self.steps.len();
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.steps[mid].t0 <= t {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.steps[lo].eval(t)
    }
}

pub struct Dopri5Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    pub h_initial: Option<f64>,
}

impl Default for Dopri5Options {
    fn default() -> Self {
        Dopri5Options {
            rtol: 1e-9,
            atol: 1e-12,
            max_steps: 2_000_000,
            h_initial: None,
        }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

/// Integrate dy/dt = f(t, y) from (t0, y0) to t_end, adaptively, collecting
/// dense output. The right-hand side may fail (chart exit, convexity loss);
/// failures abort the integration as a step failure.
pub fn integrate<const N: usize>(
    f: &mut impl FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &Dopri5Options,
) -> Result<Solution<N>> {
    let span = t_end - t0;
    if span <= 0.0 {
        return Err(FinslerError::InvalidParams(
            "integration span must be positive".into(),
        ));
    }
    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y)?;
    let mut h = opts.h_initial.unwrap_or_else(|| (span * 1e-4).min(1e-2));
    let mut steps = Vec::new();
    let mut n_accepted = 0;
    let mut n_rejected = 0;

    for _ in 0..opts.max_steps {
        if t >= t_end {
            return Ok(Solution {
                t_end: t,
                y_end: y,
                steps,
                n_accepted,
                n_rejected,
            });
        }
        if t + h > t_end {
            h = t_end - t;
        }
        if h < 1e-14 * span.max(1.0) {
            return Err(FinslerError::StepFailure {
                t,
                reason: "step size underflow".into(),
            });
        }

        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let mut failed = false;
        for s in 1..7 {
            let mut ys = y;
            for i in 0..N {
                let mut acc = 0.0;
                for (j, kj) in k.iter().enumerate().take(s) {
                    acc += A[s][j] * kj[i];
                }
                ys[i] += h * acc;
            }
            match f(t + C[s] * h, &ys) {
                Ok(v) => k[s] = v,
                Err(_) => {
                    failed = true;
                    break;
                }
            }
        }
        if failed {
            // the RHS left its domain; retry with a smaller step
            h *= 0.25;
            n_rejected += 1;
            continue;
        }

        let mut y_new = y;
        let mut err_norm: f64 = 0.0;
        for i in 0..N {
            let mut dy = 0.0;
            let mut err = 0.0;
            for s in 0..7 {
                dy += B5[s] * k[s][i];
                err += E[s] * k[s][i];
            }
            y_new[i] += h * dy;
            let scale = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            let e = h * err / scale;
            err_norm += e * e;
        }
        err_norm = (err_norm / N as f64).sqrt();

        if err_norm <= 1.0 {
            // dense output coefficients for this step
            let k7 = k[6];
            let mut cont = [[0.0; N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k[0][i] - ydiff;
                cont[0][i] = y[i];
                cont[1][i] = ydiff;
                cont[2][i] = bspl;
                cont[3][i] = ydiff - h * k7[i] - bspl;
                let mut d_acc = 0.0;
                for s in 0..7 {
                    d_acc += D[s] * k[s][i];
                }
                cont[4][i] = h * d_acc;
            }
            steps.push(DenseStep { t0: t, h, cont });
            t += h;
            y = y_new;
            k1 = match f(t, &y) {
                Ok(v) => v,
                Err(e) => return Err(e),
            };
            n_accepted += 1;
            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0);
            h *= fac;
        } else {
            n_rejected += 1;
            let fac = (0.9 * err_norm.powf(-0.2)).clamp(0.2, 1.0);
            h *= fac;
        }
    }
    Err(FinslerError::StepFailure {
        t,
        reason: format!("exceeded {} steps", opts.max_steps),
    })
}
