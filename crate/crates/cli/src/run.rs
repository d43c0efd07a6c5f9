//! Task dispatch: run one validated configuration, write artifacts, and
//! return the process exit status.

use crate::config::{
    point2, tangent2, DomainKind, GBModeConfig, RunConfig, TaskConfig, TraceKind,
};
use crate::report::{self, to_json};
use finsler::connection::{invariants, structure_equation_residual};
use finsler::curves::{
    integrate_geodesic, integrate_n_parallel, self_intersections, CurveSpec, CurveTrace,
};
use finsler::experiments::{corner_bound_scan, hadamard_scan, ExperimentConfig, RayStatus};
use finsler::gauss_bonnet::{gauss_bonnet_check, DomainSpec, GBMode, VectorFieldSpec};
use finsler::indicatrix::{indicatrix_length, landsberg_angle, sample_indicatrix};
use finsler::metric::{berwald_frame, main_scalar, metric_jet, unit_vector};
use std::path::Path;

/// Run outcome: exit code plus the one-line summary already printed.
pub struct RunOutcome {
    pub exit_code: i32,
    pub summary: String,
}

/// File artifacts produced by a run.
pub struct Artifacts {
    pub report_json: Vec<u8>,
    pub trace_csv: Option<String>,
    pub indicatrix_csv: Option<String>,
}

/// Execute the configured task and assemble artifacts. Deterministic for a
/// fixed config and seed.
pub fn execute(config: &RunConfig) -> Result<(Artifacts, String, i32), finsler::FinslerError> {
    let spec = &config.metric;
    let n = &config.numerics;
    match &config.task {
        TaskConfig::Jet { x, y } => {
            let jet = metric_jet(spec, point2(*x), tangent2(*y))?;
            let frame = berwald_frame(&jet);
            let i = main_scalar(&jet, &frame);
            let rep = report::JetReport {
                task: "jet",
                x: *x,
                y: *y,
                norm: jet.f,
                grad_f_y: jet.grad_f_y,
                g: [jet.g.a11, jet.g.a12, jet.g.a22],
                g_inv: [jet.g_inv.a11, jet.g_inv.a12, jet.g_inv.a22],
                sqrt_g: jet.sqrt_g,
                cartan: [
                    jet.cartan.a111,
                    jet.cartan.a112,
                    jet.cartan.a122,
                    jet.cartan.a222,
                ],
                dg_dx1: [jet.dg_dx[0].a11, jet.dg_dx[0].a12, jet.dg_dx[0].a22],
                dg_dx2: [jet.dg_dx[1].a11, jet.dg_dx[1].a12, jet.dg_dx[1].a22],
                df2_dx: jet.df2_dx,
                d2f2_dxdy: jet.d2f2_dxdy,
                main_scalar: i,
            };
            let summary = format!("jet F={:.6} sqrt_g={:.6} I={:.3e}", jet.f, jet.sqrt_g, i);
            Ok((
                Artifacts {
                    report_json: to_json(&rep).map_err(json_err)?,
                    trace_csv: None,
                    indicatrix_csv: None,
                },
                summary,
                0,
            ))
        }
        TaskConfig::Invariants { x, y } => {
            let xp = point2(*x);
            let yu = unit_vector(spec, xp, tangent2(*y))?;
            let inv = invariants(spec, xp, yu)?;
            let res = structure_equation_residual(spec, xp, yu)?;
            let rep = report::InvariantsReport {
                task: "invariants",
                x: *x,
                y_unit: yu.arr(),
                i: inv.i,
                j: inv.j,
                k: inv.k,
                structure_residual: res,
            };
            let summary = format!(
                "invariants I={:.6e} J={:.3e} K={:.6e} residual={:.3e}",
                inv.i, inv.j, inv.k, res
            );
            Ok((
                Artifacts {
                    report_json: to_json(&rep).map_err(json_err)?,
                    trace_csv: None,
                    indicatrix_csv: None,
                },
                summary,
                0,
            ))
        }
        TaskConfig::Indicatrix { x, samples } => {
            let xp = point2(*x);
            let l = indicatrix_length(spec, xp, n.tol)?;
            let sample = sample_indicatrix(spec, xp, *samples)?;
            let rep = report::IndicatrixReport {
                task: "indicatrix",
                x: *x,
                length: l,
                samples: *samples,
            };
            let csv = if config.output.indicatrix_csv {
                let mut s = String::from("phi,y1,y2,dtheta_weight\n");
                for k in 0..sample.phis.len() {
                    s.push_str(&format!(
                        "{:.17e},{:.17e},{:.17e},{:.17e}\n",
                        sample.phis[k],
                        sample.ys[k].y1,
                        sample.ys[k].y2,
                        sample.dtheta_weights[k]
                    ));
                }
                Some(s)
            } else {
                None
            };
            let summary = format!("indicatrix L={l:.12}");
            Ok((
                Artifacts {
                    report_json: to_json(&rep).map_err(json_err)?,
                    trace_csv: None,
                    indicatrix_csv: csv,
                },
                summary,
                0,
            ))
        }
        TaskConfig::Angle { x, from, to } => {
            let xp = point2(*x);
            let a = landsberg_angle(spec, xp, tangent2(*from), tangent2(*to), n.tol)?;
            let l = indicatrix_length(spec, xp, n.tol)?;
            let rep = report::AngleReport {
                task: "angle",
                x: *x,
                from: *from,
                to: *to,
                angle: a.value,
                indicatrix_length: l,
                normalized: a.value / l,
            };
            let summary = format!("angle value={:.12} normalized={:.12}", a.value, a.value / l);
            Ok((
                Artifacts {
                    report_json: to_json(&rep).map_err(json_err)?,
                    trace_csv: None,
                    indicatrix_csv: None,
                },
                summary,
                0,
            ))
        }
        TaskConfig::Trace(t) => {
            let (trace, kind_name): (CurveTrace, &str) = match t.kind {
                TraceKind::Geodesic => {
                    let mut c = CurveSpec::geodesic(point2(t.x), tangent2(t.dir), t.length);
                    c.samples = t.samples;
                    c.side = n.side;
                    c.rtol = n.ode_rtol;
                    (integrate_geodesic(spec, &c)?, "geodesic")
                }
                TraceKind::NParallel => {
                    let mut c = CurveSpec::n_parallel(point2(t.x), tangent2(t.dir), t.length);
                    c.samples = t.samples;
                    c.side = n.side;
                    c.rtol = n.ode_rtol;
                    (integrate_n_parallel(spec, &c)?, "n-parallel")
                }
                TraceKind::Circle { center, radius } => {
                    let mut c = CurveSpec::circle(point2(center), radius, t.length);
                    c.samples = t.samples;
                    c.side = n.side;
                    (integrate_geodesic(spec, &c)?, "circle")
                }
            };
            let crossings = self_intersections(&trace);
            let max_res = trace
                .n_parallel_residuals
                .iter()
                .cloned()
                .fold(0.0f64, f64::max);
            let sigma_min = trace.sigmas.iter().cloned().fold(f64::INFINITY, f64::min);
            let end = trace.xs.last().copied().unwrap();
            let rep = report::TraceReport {
                task: "trace",
                kind: kind_name.to_string(),
                samples: trace.len(),
                length: t.length,
                max_f_drift: trace.max_f_drift,
                max_n_parallel_residual: max_res,
                sigma_min,
                end_point: end.arr(),
                self_intersections: crossings.len(),
            };
            let summary = format!(
                "trace kind={kind_name} f_drift={:.3e} n_residual={:.3e}",
                trace.max_f_drift, max_res
            );
            let csv = if config.output.trace_csv {
                Some(trace.to_csv())
            } else {
                None
            };
            Ok((
                Artifacts {
                    report_json: to_json(&rep).map_err(json_err)?,
                    trace_csv: csv,
                    indicatrix_csv: None,
                },
                summary,
                0,
            ))
        }
        TaskConfig::GaussBonnet(d) => {
            let domain = build_domain(&d.kind, n.grid)?;
            let mode = match d.mode {
                GBModeConfig::Landsberg => GBMode::Landsberg,
                GBModeConfig::General { zero, collar } => {
                    GBMode::General(VectorFieldSpec::NormalBlendedSink { p: zero, collar })
                }
            };
            let rep = gauss_bonnet_check(spec, &domain, &mode, n.side, n.tol)?;
            let json = report::GaussBonnetReport {
                task: "gauss-bonnet",
                mode: match d.mode {
                    GBModeConfig::Landsberg => "landsberg".into(),
                    GBModeConfig::General { .. } => "general".into(),
                },
                interior: rep.interior,
                boundary: rep.boundary,
                corners: rep.corners,
                total: rep.total,
                chi_nearest: rep.chi_nearest,
                residual: rep.residual,
                per_corner: rep
                    .per_corner
                    .iter()
                    .map(|c| report::CornerJson {
                        x: c.x.arr(),
                        angle: c.angle,
                        normalized: c.normalized,
                    })
                    .collect(),
                triangles: rep.triangles,
                boundary_panels: rep.boundary_panels,
                grid: n.grid,
            };
            let summary = format!(
                "gauss-bonnet total={:.6} chi={} residual={:.3e}",
                rep.total, rep.chi_nearest, rep.residual
            );
            Ok((
                Artifacts {
                    report_json: to_json(&json).map_err(json_err)?,
                    trace_csv: None,
                    indicatrix_csv: None,
                },
                summary,
                0,
            ))
        }
        TaskConfig::Hadamard {
            count,
            horizon,
            box_halfwidth,
        } => {
            let mut c = ExperimentConfig::new(*spec);
            c.count = *count;
            c.horizon = *horizon;
            c.box_halfwidth = *box_halfwidth;
            c.seed = n.seed;
            c.side = n.side;
            let rep = hadamard_scan(&c)?;
            let json = report::HadamardReportJson {
                task: "hadamard",
                rays: *count,
                horizon: *horizon,
                seed: n.seed,
                n_clean: rep.n_clean,
                n_crossed: rep.n_crossed,
                n_inconclusive: rep.n_inconclusive,
                max_k_probe: rep.max_k_probe,
                max_abs_j: rep.max_abs_j,
                ray_reports: rep
                    .rays
                    .iter()
                    .map(|r| report::HadamardRayJson {
                        x0: r.x0.arr(),
                        angle: r.angle,
                        status: match r.status {
                            RayStatus::Clean => "clean".into(),
                            RayStatus::Crossed => "crossed".into(),
                            RayStatus::Inconclusive => "inconclusive".into(),
                        },
                        crossings: r.crossings.len(),
                        error: r.error.clone(),
                    })
                    .collect(),
            };
            let code = if rep.passed() { 0 } else { 3 };
            let summary = format!(
                "hadamard clean={} crossed={} inconclusive={}",
                rep.n_clean, rep.n_crossed, rep.n_inconclusive
            );
            Ok((
                Artifacts {
                    report_json: to_json(&json).map_err(json_err)?,
                    trace_csv: None,
                    indicatrix_csv: None,
                },
                summary,
                code,
            ))
        }
        TaskConfig::CornerBound {
            count,
            box_halfwidth,
        } => {
            let mut c = ExperimentConfig::new(*spec);
            c.count = *count;
            c.box_halfwidth = *box_halfwidth;
            c.seed = n.seed;
            c.side = n.side;
            let rep = corner_bound_scan(&c)?;
            let json = report::CornerBoundReportJson {
                task: "corner-bound",
                samples: rep.samples,
                seed: n.seed,
                max_normalized: rep.max_normalized,
                min_normalized: rep.min_normalized,
                violations: rep.violations,
            };
            let code = if rep.passed() { 0 } else { 3 };
            let summary = format!(
                "corner-bound max={:.6} violations={}",
                rep.max_normalized, rep.violations
            );
            Ok((
                Artifacts {
                    report_json: to_json(&json).map_err(json_err)?,
                    trace_csv: None,
                    indicatrix_csv: None,
                },
                summary,
                code,
            ))
        }
    }
}

fn json_err(e: std::io::Error) -> finsler::FinslerError {
    finsler::FinslerError::InvalidParams(format!("report serialization: {e}"))
}

pub fn build_domain(kind: &DomainKind, grid: usize) -> Result<DomainSpec, finsler::FinslerError> {
    match *kind {
        DomainKind::Disk { center, radius } => DomainSpec::disk(center, radius, grid),
        DomainKind::Square { center, half_width } => DomainSpec::square(center, half_width, grid),
        DomainKind::Triangle { a, b, c } => DomainSpec::triangle(a, b, c, grid),
        DomainKind::Annulus {
            center,
            inner_radius,
            radius,
        } => DomainSpec::annulus(center, inner_radius, radius, grid),
    }
}

/// Run and write artifacts under out_dir: report.json plus trace.csv or
/// indicatrix.csv when applicable. Prints the one-line summary on stdout.
pub fn run_to_dir(config: &RunConfig, out_dir: &Path) -> RunOutcome {
    match execute(config) {
        Ok((artifacts, summary, code)) => {
            if let Err(e) = std::fs::create_dir_all(out_dir) {
                return RunOutcome {
                    exit_code: 2,
                    summary: format!("cannot create output directory: {e}"),
                };
            }
            let mut failures = Vec::new();
            if let Err(e) = std::fs::write(out_dir.join("report.json"), &artifacts.report_json) {
                failures.push(format!("report.json: {e}"));
            }
            if let Some(csv) = &artifacts.trace_csv {
                if let Err(e) = std::fs::write(out_dir.join("trace.csv"), csv) {
                    failures.push(format!("trace.csv: {e}"));
                }
            }
            if let Some(csv) = &artifacts.indicatrix_csv {
                if let Err(e) = std::fs::write(out_dir.join("indicatrix.csv"), csv) {
                    failures.push(format!("indicatrix.csv: {e}"));
                }
            }
            if !failures.is_empty() {
                return RunOutcome {
                    exit_code: 2,
                    summary: format!("write failures: {}", failures.join("; ")),
                };
            }
            RunOutcome {
                exit_code: code,
                summary,
            }
        }
        Err(e) => {
            let rep = report::ErrorReport {
                error: e.to_string(),
            };
            let _ = std::fs::create_dir_all(out_dir);
            if let Ok(bytes) = to_json(&rep) {
                let _ = std::fs::write(out_dir.join("report.json"), bytes);
            }
            RunOutcome {
                exit_code: 2,
                summary: format!("error: {e}"),
            }
        }
    }
}
