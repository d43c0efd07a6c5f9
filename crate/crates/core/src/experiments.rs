//! Scripted numerical experiments: the Hadamard-type non-self-intersection
//! scan for N-parallels on Landsberg surfaces of nonpositive curvature, and
//! the corner-angle bound scan.

use crate::curves::{integrate_n_parallel, self_intersections, CurveSpec};
use crate::error::{FinslerError, Result};
use crate::gauss_bonnet::{certify_landsberg, DomainSpec, GBMode, SegmentSpec};
use crate::indicatrix::{indicatrix_length, landsberg_angle, Side};
use crate::metric::{pt, tg, MetricSpec, Point2};
use crate::parallel::map_indexed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Configuration shared by the experiment scans.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub metric: MetricSpec,
    /// Number of randomized trajectories or sample pairs.
    pub count: usize,
    /// Integration horizon for Hadamard runs.
    pub horizon: f64,
    /// Half-width of the sampling box for initial data.
    pub box_halfwidth: f64,
    pub seed: u64,
    pub side: Side,
}

impl ExperimentConfig {
    pub fn new(metric: MetricSpec) -> Self {
        ExperimentConfig {
            metric,
            count: 32,
            horizon: 100.0,
            box_halfwidth: 1.0,
            seed: 42,
            side: Side::Left,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RayStatus {
    Clean,
    Crossed,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct RayReport {
    pub x0: Point2,
    pub angle: f64,
    pub status: RayStatus,
    /// Transverse self-crossings: parameter pair and location.
    pub crossings: Vec<(f64, f64, Point2)>,
    /// For a hypothetical crossing loop, the Gauss-Bonnet total of the
    /// enclosed domain (diagnostic for the contradiction identity).
    pub loop_gb_total: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug)]
pub struct HadamardReport {
    pub rays: Vec<RayReport>,
    pub n_clean: usize,
    pub n_crossed: usize,
    pub n_inconclusive: usize,
    pub max_k_probe: f64,
    pub max_abs_j: f64,
}

impl HadamardReport {
    pub fn passed(&self) -> bool {
        self.n_crossed == 0 && self.n_inconclusive == 0
    }
}

/// Probe max K over a chart box and a direction fan.
fn probe_max_curvature(spec: &MetricSpec, halfwidth: f64) -> Result<f64> {
    let mut max_k = f64::NEG_INFINITY;
    let m = 5;
    for i in 0..m {
        for j in 0..m {
            let x = pt(
                -halfwidth + 2.0 * halfwidth * i as f64 / (m - 1) as f64,
                -halfwidth + 2.0 * halfwidth * j as f64 / (m - 1) as f64,
            );
            for d in 0..8 {
                let a = d as f64 * std::f64::consts::PI / 4.0 + 0.11;
                let k = crate::connection::gauss_curvature(spec, x, tg(a.cos(), a.sin()))?;
                max_k = max_k.max(k);
            }
        }
    }
    Ok(max_k)
}

/// Integrate a batch of N-parallels from random initial data and scan each
/// trace for self-intersections. Requires the metric to certify Landsberg
/// with K <= 0 over the probe grid; integrator failures count as
/// inconclusive, never as passes.
pub fn hadamard_scan(config: &ExperimentConfig) -> Result<HadamardReport> {
    if !(config.horizon > 0.0) {
        return Err(FinslerError::ExperimentPrecondition(
            "horizon must be positive".into(),
        ));
    }
    let spec = &config.metric;
    spec.validate()?;

    let probes: Vec<Point2> = vec![
        pt(0.0, 0.0),
        pt(config.box_halfwidth * 0.7, 0.0),
        pt(0.0, -config.box_halfwidth * 0.7),
        pt(-config.box_halfwidth * 0.5, config.box_halfwidth * 0.5),
    ];
    let cert = certify_landsberg(spec, &probes, 1e-10).map_err(|e| {
        FinslerError::ExperimentPrecondition(format!("Landsberg certification: {e}"))
    })?;
    let max_k = probe_max_curvature(spec, config.box_halfwidth)?;
    if max_k > 1e-7 {
        return Err(FinslerError::ExperimentPrecondition(format!(
            "curvature probe found K = {max_k:.3e} > 0"
        )));
    }

    // draw all initial data up front so the trajectory set is independent of
    // scheduling
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let inits: Vec<(Point2, f64)> = (0..config.count)
        .map(|_| {
            let x = pt(
                rng.gen_range(-config.box_halfwidth..config.box_halfwidth),
                rng.gen_range(-config.box_halfwidth..config.box_halfwidth),
            );
            let a = rng.gen_range(0.0..std::f64::consts::TAU);
            (x, a)
        })
        .collect();

    let samples = ((config.horizon * 20.0) as usize).clamp(200, 20_000);
    let rays = map_indexed(inits.len(), |i| {
        let (x0, a) = inits[i];
        let mut c = CurveSpec::n_parallel(x0, tg(a.cos(), a.sin()), config.horizon);
        c.samples = samples;
        c.side = config.side;
        match integrate_n_parallel(spec, &c) {
            Ok(trace) => {
                let crossings = self_intersections(&trace);
                let loop_gb_total = crossings.first().map(|&(ta, tb, x_cross)| {
                    crossing_loop_gb_total(spec, &trace, ta, tb, x_cross, config.side)
                        .unwrap_or(f64::NAN)
                });
                RayReport {
                    x0,
                    angle: a,
                    status: if crossings.is_empty() {
                        RayStatus::Clean
                    } else {
                        RayStatus::Crossed
                    },
                    crossings,
                    loop_gb_total,
                    error: None,
                }
            }
            Err(e) => RayReport {
                x0,
                angle: a,
                status: RayStatus::Inconclusive,
                crossings: Vec::new(),
                loop_gb_total: None,
                error: Some(e.to_string()),
            },
        }
    });

    let n_clean = rays.iter().filter(|r| r.status == RayStatus::Clean).count();
    let n_crossed = rays.iter().filter(|r| r.status == RayStatus::Crossed).count();
    let n_inconclusive = rays
        .iter()
        .filter(|r| r.status == RayStatus::Inconclusive)
        .count();
    Ok(HadamardReport {
        rays,
        n_clean,
        n_crossed,
        n_inconclusive,
        max_k_probe: max_k,
        max_abs_j: cert.max_abs_j,
    })
}

/// Diagnostic for a reported crossing: assemble the Gauss-Bonnet total of
/// the loop the trace encloses between the two crossing parameters, using
/// the loop polyline as a piecewise-linear domain with one corner.
fn crossing_loop_gb_total(
    spec: &MetricSpec,
    trace: &crate::curves::CurveTrace,
    ta: f64,
    tb: f64,
    x_cross: Point2,
    side: Side,
) -> Result<f64> {
    // collect samples strictly inside (ta, tb) and close the loop at the crossing
    let mut poly: Vec<[f64; 2]> = vec![x_cross.arr()];
    for i in 0..trace.len() {
        if trace.ts[i] > ta && trace.ts[i] < tb {
            poly.push(trace.xs[i].arr());
        }
    }
    if poly.len() < 8 {
        return Err(FinslerError::InsufficientSampling(
            "crossing loop has too few samples".into(),
        ));
    }
    if crate::geometry::polygon_signed_area(&poly) < 0.0 {
        poly.reverse();
    }
    let segs: Vec<SegmentSpec> = (0..poly.len())
        .map(|i| SegmentSpec::Line {
            from: poly[i],
            to: poly[(i + 1) % poly.len()],
        })
        .collect();
    let domain = DomainSpec::from_loops(vec![segs], 16)?;
    let rep = crate::gauss_bonnet::gauss_bonnet_check(
        spec,
        &domain,
        &GBMode::Landsberg,
        side,
        1e-8,
    )?;
    Ok(rep.total)
}

#[derive(Clone, Debug)]
pub struct CornerBoundReport {
    pub samples: usize,
    pub max_normalized: f64,
    pub min_normalized: f64,
    pub violations: usize,
}

impl CornerBoundReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Sample random unit-vector pairs at random points and check that the
/// normalized Landsberg angle stays strictly below 1.
pub fn corner_bound_scan(config: &ExperimentConfig) -> Result<CornerBoundReport> {
    let spec = &config.metric;
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut max_r = f64::NEG_INFINITY;
    let mut min_r = f64::INFINITY;
    let mut violations = 0;
    for _ in 0..config.count {
        let x = pt(
            rng.gen_range(-config.box_halfwidth..config.box_halfwidth),
            rng.gen_range(-config.box_halfwidth..config.box_halfwidth),
        );
        let a = rng.gen_range(0.0..std::f64::consts::TAU);
        let b = rng.gen_range(0.0..std::f64::consts::TAU);
        let angle = landsberg_angle(spec, x, tg(a.cos(), a.sin()), tg(b.cos(), b.sin()), 1e-10)?
            .value;
        let l = indicatrix_length(spec, x, 1e-10)?;
        let r = angle / l;
        max_r = max_r.max(r);
        min_r = min_r.min(r);
        if !(r < 1.0) {
            violations += 1;
        }
    }
    Ok(CornerBoundReport {
        samples: config.count,
        max_normalized: max_r,
        min_normalized: min_r,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::ConformalFactor;

    #[test]
    fn euclidean_rays_never_cross() {
        let mut config = ExperimentConfig::new(MetricSpec::euclidean());
        config.count = 6;
        config.horizon = 20.0;
        let rep = hadamard_scan(&config).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.n_clean, 6);
    }

    #[test]
    fn positive_curvature_fails_certification() {
        let config = ExperimentConfig::new(MetricSpec::sphere(1.0));
        assert!(matches!(
            hadamard_scan(&config),
            Err(FinslerError::ExperimentPrecondition(_))
        ));
    }

    #[test]
    fn corner_bound_holds_for_randers() {
        let mut config = ExperimentConfig::new(MetricSpec::randers(0.2, 0.0));
        config.count = 200;
        let rep = corner_bound_scan(&config).unwrap();
        assert!(rep.passed());
        assert!(rep.max_normalized < 1.0);
        assert!(rep.min_normalized >= 0.0);
    }

    #[test]
    fn negative_curvature_poly_factor_certifies() {
        let spec = MetricSpec::RiemannianConformal {
            phi: ConformalFactor::Poly {
                c0: 0.0,
                cx1: 0.0,
                cx2: 0.0,
                cx1x1: 0.25,
                cx1x2: 0.0,
                cx2x2: 0.25,
            },
        };
        let mut config = ExperimentConfig::new(spec);
        config.count = 3;
        config.horizon = 10.0;
        let rep = hadamard_scan(&config).unwrap();
        assert!(rep.passed(), "{:?}", rep.rays.iter().map(|r| &r.error).collect::<Vec<_>>());
    }
}
