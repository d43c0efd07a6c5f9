//! Machine-readable report output: JSON with a fixed float format (17
//! significant digits), so identical runs produce byte-identical artifacts.

use serde::Serialize;
use serde_json::ser::Formatter;
use std::io;

/// JSON formatter printing every f64 as `d.dddddddddddddddde<exp>`; the 17
/// significant digits pin the bit pattern, and printing is locale-free.
#[derive(Clone, Default)]
pub struct F17Formatter;

impl Formatter for F17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if !value.is_finite() {
            return Err(io::Error::new(
                io::ErrorKind::InvalidData,
                "non-finite float in report",
            ));
        }
        write!(writer, "{:.16e}", value)
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serialize any report to the canonical JSON byte string.
pub fn to_json<T: Serialize>(value: &T) -> io::Result<Vec<u8>> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, F17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
    out.push(b'\n');
    Ok(out)
}

#[derive(Serialize)]
pub struct JetReport {
    pub task: &'static str,
    pub x: [f64; 2],
    pub y: [f64; 2],
    pub norm: f64,
    pub grad_f_y: [f64; 2],
    pub g: [f64; 3],
    pub g_inv: [f64; 3],
    pub sqrt_g: f64,
    pub cartan: [f64; 4],
    pub dg_dx1: [f64; 3],
    pub dg_dx2: [f64; 3],
    pub df2_dx: [f64; 2],
    pub d2f2_dxdy: [[f64; 2]; 2],
    pub main_scalar: f64,
}

#[derive(Serialize)]
pub struct InvariantsReport {
    pub task: &'static str,
    pub x: [f64; 2],
    pub y_unit: [f64; 2],
    pub i: f64,
    pub j: f64,
    pub k: f64,
    pub structure_residual: f64,
}

#[derive(Serialize)]
pub struct IndicatrixReport {
    pub task: &'static str,
    pub x: [f64; 2],
    pub length: f64,
    pub samples: usize,
}

#[derive(Serialize)]
pub struct AngleReport {
    pub task: &'static str,
    pub x: [f64; 2],
    pub from: [f64; 2],
    pub to: [f64; 2],
    pub angle: f64,
    pub indicatrix_length: f64,
    pub normalized: f64,
}

#[derive(Serialize)]
pub struct TraceReport {
    pub task: &'static str,
    pub kind: String,
    pub samples: usize,
    pub length: f64,
    pub max_f_drift: f64,
    pub max_n_parallel_residual: f64,
    pub sigma_min: f64,
    pub end_point: [f64; 2],
    pub self_intersections: usize,
}

#[derive(Serialize)]
pub struct CornerJson {
    pub x: [f64; 2],
    pub angle: f64,
    pub normalized: f64,
}

#[derive(Serialize)]
pub struct GaussBonnetReport {
    pub task: &'static str,
    pub mode: String,
    pub interior: f64,
    pub boundary: f64,
    pub corners: f64,
    pub total: f64,
    pub chi_nearest: i64,
    pub residual: f64,
    pub per_corner: Vec<CornerJson>,
    pub triangles: usize,
    pub boundary_panels: usize,
    pub grid: usize,
}

#[derive(Serialize)]
pub struct HadamardRayJson {
    pub x0: [f64; 2],
    pub angle: f64,
    pub status: String,
    pub crossings: usize,
    pub error: Option<String>,
}

#[derive(Serialize)]
pub struct HadamardReportJson {
    pub task: &'static str,
    pub rays: usize,
    pub horizon: f64,
    pub seed: u64,
    pub n_clean: usize,
    pub n_crossed: usize,
    pub n_inconclusive: usize,
    pub max_k_probe: f64,
    pub max_abs_j: f64,
    pub ray_reports: Vec<HadamardRayJson>,
}

#[derive(Serialize)]
pub struct CornerBoundReportJson {
    pub task: &'static str,
    pub samples: usize,
    pub seed: u64,
    pub max_normalized: f64,
    pub min_normalized: f64,
    pub violations: usize,
}

#[derive(Serialize)]
pub struct ErrorReport {
    pub error: String,
}
