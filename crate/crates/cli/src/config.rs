//! Config parsing and validation.
//!
//! The format is sectioned key = value text:
//!
//! ```text
//! # comment
//! [metric]
//! family = randers
//! b1 = 0.2
//! b2 = 0.0
//!
//! [task]
//! name = gauss-bonnet
//!
//! [domain]
//! kind = disk
//! radius = 1.0
//! mode = general
//! ```
//!
//! Sections: `[metric]` and `[task]` are required; exactly one task-specific
//! block (`[point]`, `[indicatrix]`, `[angle]`, `[curve]`, `[domain]`,
//! `[experiment]`) is allowed, matching the task; `[numerics]` and
//! `[output]` are optional. Unknown sections or keys are rejected with their
//! line number.

use finsler::indicatrix::Side;
use finsler::metric::{ConformalFactor, MetricSpec, Point2, Tangent2};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}", self.line, self.message)
        } else {
            write!(f, "{}", self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError {
        line,
        message: message.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    pub tol: f64,
    pub grid: usize,
    pub seed: u64,
    pub side: Side,
    pub ode_rtol: f64,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            tol: 1e-10,
            grid: 160,
            seed: 42,
            side: Side::Left,
            ode_rtol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutputOpts {
    pub trace_csv: bool,
    pub indicatrix_csv: bool,
}

impl Default for OutputOpts {
    fn default() -> Self {
        OutputOpts {
            trace_csv: true,
            indicatrix_csv: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TraceKind {
    Geodesic,
    NParallel,
    Circle { center: [f64; 2], radius: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceConfig {
    pub kind: TraceKind,
    pub x: [f64; 2],
    pub dir: [f64; 2],
    pub length: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind {
    Disk {
        center: [f64; 2],
        radius: f64,
    },
    Square {
        center: [f64; 2],
        half_width: f64,
    },
    Triangle {
        a: [f64; 2],
        b: [f64; 2],
        c: [f64; 2],
    },
    Annulus {
        center: [f64; 2],
        inner_radius: f64,
        radius: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GBModeConfig {
    Landsberg,
    General { zero: [f64; 2], collar: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainConfig {
    pub kind: DomainKind,
    pub mode: GBModeConfig,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TaskConfig {
    Jet { x: [f64; 2], y: [f64; 2] },
    Invariants { x: [f64; 2], y: [f64; 2] },
    Indicatrix { x: [f64; 2], samples: usize },
    Angle { x: [f64; 2], from: [f64; 2], to: [f64; 2] },
    Trace(TraceConfig),
    GaussBonnet(DomainConfig),
    Hadamard { count: usize, horizon: f64, box_halfwidth: f64 },
    CornerBound { count: usize, box_halfwidth: f64 },
}

impl TaskConfig {
    pub fn name(&self) -> &'static str {
        match self {
            TaskConfig::Jet { .. } => "jet",
            TaskConfig::Invariants { .. } => "invariants",
            TaskConfig::Indicatrix { .. } => "indicatrix",
            TaskConfig::Angle { .. } => "angle",
            TaskConfig::Trace(_) => "trace",
            TaskConfig::GaussBonnet(_) => "gauss-bonnet",
            TaskConfig::Hadamard { .. } => "hadamard",
            TaskConfig::CornerBound { .. } => "corner-bound",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub metric: MetricSpec,
    pub task: TaskConfig,
    pub numerics: Numerics,
    pub output: OutputOpts,
}

struct Entry {
    key: String,
    value: String,
    line: usize,
    used: std::cell::Cell<bool>,
}

struct Section {
    name: String,
    line: usize,
    entries: Vec<Entry>,
}

impl Section {
    fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| {
            if e.key == key {
                e.used.set(true);
                true
            } else {
                false
            }
        })
    }

    fn f64(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(e) => e
                .value
                .parse::<f64>()
                .map_err(|_| ConfigError {
                    line: e.line,
                    message: format!("key `{key}`: expected a number, got `{}`", e.value),
                }),
        }
    }

    fn f64_required(&self, key: &str) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => err(
                self.line,
                format!("missing key `{key}` in [{}]", self.name),
            ),
            Some(e) => e.value.parse::<f64>().map_err(|_| ConfigError {
                line: e.line,
                message: format!("key `{key}`: expected a number, got `{}`", e.value),
            }),
        }
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(e) => e.value.parse::<usize>().map_err(|_| ConfigError {
                line: e.line,
                message: format!("key `{key}`: expected a nonnegative integer, got `{}`", e.value),
            }),
        }
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(e) => e.value.parse::<u64>().map_err(|_| ConfigError {
                line: e.line,
                message: format!("key `{key}`: expected an integer, got `{}`", e.value),
            }),
        }
    }

    fn bool(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(e) => match e.value.as_str() {
                "true" => Ok(true),
                "false" => Ok(false),
                v => err(e.line, format!("key `{key}`: expected true or false, got `{v}`")),
            },
        }
    }

    fn string(&self, key: &str) -> Option<(String, usize)> {
        self.get(key).map(|e| (e.value.clone(), e.line))
    }

    fn check_all_used(&self) -> Result<(), ConfigError> {
        for e in &self.entries {
            if !e.used.get() {
                return err(
                    e.line,
                    format!("unknown key `{}` in [{}]", e.key, self.name),
                );
            }
        }
        Ok(())
    }
}

fn tokenize(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = match name.strip_suffix(']') {
                Some(n) => n.trim(),
                None => return err(line_no, format!("malformed section header `{line}`")),
            };
            if sections.iter().any(|s| s.name == name) {
                return err(line_no, format!("duplicate section [{name}]"));
            }
            sections.push(Section {
                name: name.to_string(),
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let Some(eq) = line.find('=') else {
            return err(line_no, format!("expected `key = value`, got `{line}`"));
        };
        let key = line[..eq].trim().to_string();
        let value = line[eq + 1..].trim().to_string();
        if key.is_empty() || value.is_empty() {
            return err(line_no, format!("expected `key = value`, got `{line}`"));
        }
        match sections.last_mut() {
            Some(s) => s.entries.push(Entry {
                key,
                value,
                line: line_no,
                used: std::cell::Cell::new(false),
            }),
            None => return err(line_no, "key outside of any [section]".to_string()),
        }
    }
    Ok(sections)
}

fn parse_metric(s: &Section) -> Result<MetricSpec, ConfigError> {
    let (family, fline) = s
        .string("family")
        .ok_or(ConfigError {
            line: s.line,
            message: "missing key `family` in [metric]".into(),
        })?;
    let spec = match family.as_str() {
        "riemannian-conformal" => {
            let phi_kind = s.string("phi");
            let kind_name = phi_kind
                .as_ref()
                .map(|(v, _)| v.as_str())
                .unwrap_or("poly");
            let phi = match kind_name {
                "poly" => ConformalFactor::Poly {
                    c0: s.f64("c0", 0.0)?,
                    cx1: s.f64("cx1", 0.0)?,
                    cx2: s.f64("cx2", 0.0)?,
                    cx1x1: s.f64("cx1x1", 0.0)?,
                    cx1x2: s.f64("cx1x2", 0.0)?,
                    cx2x2: s.f64("cx2x2", 0.0)?,
                },
                "sphere" => ConformalFactor::Sphere {
                    radius: s.f64("radius", 1.0)?,
                },
                "hyperbolic" => ConformalFactor::Hyperbolic {
                    radius: s.f64("radius", 1.0)?,
                },
                other => {
                    let line = phi_kind.as_ref().map(|(_, l)| *l).unwrap_or(s.line);
                    return err(
                        line,
                        format!("unknown conformal factor `{other}` (poly | sphere | hyperbolic)"),
                    );
                }
            };
            MetricSpec::RiemannianConformal { phi }
        }
        "randers" => MetricSpec::Randers {
            b1: s.f64("b1", 0.0)?,
            b2: s.f64("b2", 0.0)?,
        },
        "minkowski-pnorm" => MetricSpec::MinkowskiPNorm {
            p: s.f64("p", 4.0)?,
        },
        other => {
            return err(
                fline,
                format!(
                    "unknown family `{other}` (riemannian-conformal | randers | minkowski-pnorm)"
                ),
            )
        }
    };
    s.check_all_used()?;
    if let Err(e) = spec.validate() {
        return err(s.line, format!("invalid metric parameters: {e}"));
    }
    Ok(spec)
}

fn pair(s: &Section, k1: &str, k2: &str) -> Result<[f64; 2], ConfigError> {
    Ok([s.f64_required(k1)?, s.f64_required(k2)?])
}

/// Parse config text into a validated run configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let sections = tokenize(text)?;
    let find = |name: &str| sections.iter().find(|s| s.name == name);

    let metric_s = find("metric").ok_or(ConfigError {
        line: 0,
        message: "missing [metric] section".into(),
    })?;
    let metric = parse_metric(metric_s)?;

    let task_s = find("task").ok_or(ConfigError {
        line: 0,
        message: "missing [task] section".into(),
    })?;
    let (task_name, task_line) = task_s.string("name").ok_or(ConfigError {
        line: task_s.line,
        message: "missing key `name` in [task]".into(),
    })?;
    task_s.check_all_used()?;

    let allowed_block = match task_name.as_str() {
        "jet" | "invariants" => "point",
        "indicatrix" => "indicatrix",
        "angle" => "angle",
        "trace" => "curve",
        "gauss-bonnet" => "domain",
        "hadamard" | "corner-bound" => "experiment",
        other => {
            return err(task_line, format!("unknown task `{other}`"));
        }
    };
    for s in &sections {
        let always = ["metric", "task", "numerics", "output"];
        if always.contains(&s.name.as_str()) {
            continue;
        }
        let known = ["point", "indicatrix", "angle", "curve", "domain", "experiment"];
        if !known.contains(&s.name.as_str()) {
            return err(s.line, format!("unknown section [{}]", s.name));
        }
        if s.name != allowed_block {
            return err(
                s.line,
                format!(
                    "unexpected block [{}] for task = {task_name} (expected [{allowed_block}])",
                    s.name
                ),
            );
        }
    }
    let block = find(allowed_block);

    let need_block = |what: &str| -> Result<&Section, ConfigError> {
        block.ok_or(ConfigError {
            line: task_line,
            message: format!("task = {task_name} requires a [{what}] section"),
        })
    };

    let task = match task_name.as_str() {
        "jet" | "invariants" => {
            let s = need_block("point")?;
            let x = pair(s, "x1", "x2")?;
            let y = pair(s, "y1", "y2")?;
            s.check_all_used()?;
            if task_name == "jet" {
                TaskConfig::Jet { x, y }
            } else {
                TaskConfig::Invariants { x, y }
            }
        }
        "indicatrix" => {
            let s = need_block("indicatrix")?;
            let x = pair(s, "x1", "x2")?;
            let samples = s.usize("samples", 256)?;
            s.check_all_used()?;
            if samples < 16 {
                return err(s.line, "indicatrix samples must be >= 16");
            }
            TaskConfig::Indicatrix { x, samples }
        }
        "angle" => {
            let s = need_block("angle")?;
            let x = pair(s, "x1", "x2")?;
            let from = pair(s, "from1", "from2")?;
            let to = pair(s, "to1", "to2")?;
            s.check_all_used()?;
            TaskConfig::Angle { x, from, to }
        }
        "trace" => {
            let s = need_block("curve")?;
            let (kind_str, kline) = s.string("kind").ok_or(ConfigError {
                line: s.line,
                message: "missing key `kind` in [curve]".into(),
            })?;
            let samples = s.usize("samples", 200)?;
            let length = s.f64("length", 1.0)?;
            let kind = match kind_str.as_str() {
                "geodesic" => TraceKind::Geodesic,
                "n-parallel" => TraceKind::NParallel,
                "circle" => TraceKind::Circle {
                    center: [s.f64("center1", 0.0)?, s.f64("center2", 0.0)?],
                    radius: s.f64("radius", 1.0)?,
                },
                other => {
                    return err(
                        kline,
                        format!("unknown curve kind `{other}` (geodesic | n-parallel | circle)"),
                    )
                }
            };
            let (x, dir) = if matches!(kind, TraceKind::Circle { .. }) {
                ([0.0, 0.0], [0.0, 0.0])
            } else {
                (pair(s, "x1", "x2")?, pair(s, "dir1", "dir2")?)
            };
            s.check_all_used()?;
            if length <= 0.0 {
                return err(s.line, "curve length must be positive");
            }
            TaskConfig::Trace(TraceConfig {
                kind,
                x,
                dir,
                length,
                samples,
            })
        }
        "gauss-bonnet" => {
            let s = need_block("domain")?;
            let (kind_str, kline) = s.string("kind").ok_or(ConfigError {
                line: s.line,
                message: "missing key `kind` in [domain]".into(),
            })?;
            let center = [s.f64("center1", 0.0)?, s.f64("center2", 0.0)?];
            let kind = match kind_str.as_str() {
                "disk" => DomainKind::Disk {
                    center,
                    radius: s.f64("radius", 1.0)?,
                },
                "square" => DomainKind::Square {
                    center,
                    half_width: s.f64("half_width", 1.0)?,
                },
                "triangle" => DomainKind::Triangle {
                    a: pair(s, "ax", "ay")?,
                    b: pair(s, "bx", "by")?,
                    c: pair(s, "cx", "cy")?,
                },
                "annulus" => DomainKind::Annulus {
                    center,
                    inner_radius: s.f64("inner_radius", 0.5)?,
                    radius: s.f64("radius", 1.0)?,
                },
                other => {
                    return err(
                        kline,
                        format!("unknown domain kind `{other}` (disk | square | triangle | annulus)"),
                    )
                }
            };
            let mode = match s.string("mode").map(|(v, l)| (v, l)) {
                None => GBModeConfig::Landsberg,
                Some((m, ml)) => match m.as_str() {
                    "landsberg" => GBModeConfig::Landsberg,
                    "general" => GBModeConfig::General {
                        zero: [s.f64("zero1", 0.0)?, s.f64("zero2", 0.0)?],
                        collar: s.f64("collar", 0.25)?,
                    },
                    other => {
                        return err(ml, format!("unknown mode `{other}` (landsberg | general)"))
                    }
                },
            };
            s.check_all_used()?;
            TaskConfig::GaussBonnet(DomainConfig { kind, mode })
        }
        "hadamard" => {
            let s = need_block("experiment")?;
            let count = s.usize("count", 32)?;
            let horizon = s.f64("horizon", 100.0)?;
            let box_halfwidth = s.f64("box", 1.0)?;
            s.check_all_used()?;
            if horizon <= 0.0 {
                return err(s.line, "horizon must be positive");
            }
            TaskConfig::Hadamard {
                count,
                horizon,
                box_halfwidth,
            }
        }
        "corner-bound" => {
            let s = need_block("experiment")?;
            let count = s.usize("count", 1000)?;
            let box_halfwidth = s.f64("box", 1.0)?;
            s.check_all_used()?;
            TaskConfig::CornerBound {
                count,
                box_halfwidth,
            }
        }
        _ => unreachable!(),
    };

    let numerics = match find("numerics") {
        None => Numerics::default(),
        Some(s) => {
            let d = Numerics::default();
            let side = match s.string("side") {
                None => d.side,
                Some((v, l)) => match v.as_str() {
                    "left" => Side::Left,
                    "right" => Side::Right,
                    other => return err(l, format!("unknown side `{other}` (left | right)")),
                },
            };
            let n = Numerics {
                tol: s.f64("tol", d.tol)?,
                grid: s.usize("grid", d.grid)?,
                seed: s.u64("seed", d.seed)?,
                side,
                ode_rtol: s.f64("ode_rtol", d.ode_rtol)?,
            };
            s.check_all_used()?;
            if !(n.tol > 0.0) || !(n.ode_rtol > 0.0) {
                return err(s.line, "tolerances must be positive");
            }
            if n.grid < 16 {
                return err(s.line, "grid must be at least 16");
            }
            n
        }
    };

    let output = match find("output") {
        None => OutputOpts::default(),
        Some(s) => {
            let o = OutputOpts {
                trace_csv: s.bool("trace_csv", true)?,
                indicatrix_csv: s.bool("indicatrix_csv", true)?,
            };
            s.check_all_used()?;
            o
        }
    };

    Ok(RunConfig {
        metric,
        task,
        numerics,
        output,
    })
}

/// Canonical serialization; parse(serialize(c)) == c.
pub fn serialize_config(c: &RunConfig) -> String {
    let mut out = String::new();
    out.push_str("[metric]\n");
    match c.metric {
        MetricSpec::RiemannianConformal { phi } => {
            out.push_str("family = riemannian-conformal\n");
            match phi {
                ConformalFactor::Poly {
                    c0,
                    cx1,
                    cx2,
                    cx1x1,
                    cx1x2,
                    cx2x2,
                } => {
                    out.push_str("phi = poly\n");
                    out.push_str(&format!("c0 = {c0}\ncx1 = {cx1}\ncx2 = {cx2}\n"));
                    out.push_str(&format!(
                        "cx1x1 = {cx1x1}\ncx1x2 = {cx1x2}\ncx2x2 = {cx2x2}\n"
                    ));
                }
                ConformalFactor::Sphere { radius } => {
                    out.push_str(&format!("phi = sphere\nradius = {radius}\n"));
                }
                ConformalFactor::Hyperbolic { radius } => {
                    out.push_str(&format!("phi = hyperbolic\nradius = {radius}\n"));
                }
            }
        }
        MetricSpec::Randers { b1, b2 } => {
            out.push_str(&format!("family = randers\nb1 = {b1}\nb2 = {b2}\n"));
        }
        MetricSpec::MinkowskiPNorm { p } => {
            out.push_str(&format!("family = minkowski-pnorm\np = {p}\n"));
        }
    }
    out.push_str(&format!("\n[task]\nname = {}\n", c.task.name()));
    match &c.task {
        TaskConfig::Jet { x, y } | TaskConfig::Invariants { x, y } => {
            out.push_str(&format!(
                "\n[point]\nx1 = {}\nx2 = {}\ny1 = {}\ny2 = {}\n",
                x[0], x[1], y[0], y[1]
            ));
        }
        TaskConfig::Indicatrix { x, samples } => {
            out.push_str(&format!(
                "\n[indicatrix]\nx1 = {}\nx2 = {}\nsamples = {}\n",
                x[0], x[1], samples
            ));
        }
        TaskConfig::Angle { x, from, to } => {
            out.push_str(&format!(
                "\n[angle]\nx1 = {}\nx2 = {}\nfrom1 = {}\nfrom2 = {}\nto1 = {}\nto2 = {}\n",
                x[0], x[1], from[0], from[1], to[0], to[1]
            ));
        }
        TaskConfig::Trace(t) => {
            out.push_str("\n[curve]\n");
            match t.kind {
                TraceKind::Geodesic => out.push_str("kind = geodesic\n"),
                TraceKind::NParallel => out.push_str("kind = n-parallel\n"),
                TraceKind::Circle { center, radius } => {
                    out.push_str(&format!(
                        "kind = circle\ncenter1 = {}\ncenter2 = {}\nradius = {}\n",
                        center[0], center[1], radius
                    ));
                }
            }
            if !matches!(t.kind, TraceKind::Circle { .. }) {
                out.push_str(&format!(
                    "x1 = {}\nx2 = {}\ndir1 = {}\ndir2 = {}\n",
                    t.x[0], t.x[1], t.dir[0], t.dir[1]
                ));
            }
            out.push_str(&format!("length = {}\nsamples = {}\n", t.length, t.samples));
        }
        TaskConfig::GaussBonnet(d) => {
            out.push_str("\n[domain]\n");
            match d.kind {
                DomainKind::Disk { center, radius } => {
                    out.push_str(&format!(
                        "kind = disk\ncenter1 = {}\ncenter2 = {}\nradius = {}\n",
                        center[0], center[1], radius
                    ));
                }
                DomainKind::Square { center, half_width } => {
                    out.push_str(&format!(
                        "kind = square\ncenter1 = {}\ncenter2 = {}\nhalf_width = {}\n",
                        center[0], center[1], half_width
                    ));
                }
                DomainKind::Triangle { a, b, c } => {
                    out.push_str(&format!(
                        "kind = triangle\nax = {}\nay = {}\nbx = {}\nby = {}\ncx = {}\ncy = {}\n",
                        a[0], a[1], b[0], b[1], c[0], c[1]
                    ));
                }
                DomainKind::Annulus {
                    center,
                    inner_radius,
                    radius,
                } => {
                    out.push_str(&format!(
                        "kind = annulus\ncenter1 = {}\ncenter2 = {}\ninner_radius = {}\nradius = {}\n",
                        center[0], center[1], inner_radius, radius
                    ));
                }
            }
            match d.mode {
                GBModeConfig::Landsberg => out.push_str("mode = landsberg\n"),
                GBModeConfig::General { zero, collar } => {
                    out.push_str(&format!(
                        "mode = general\nzero1 = {}\nzero2 = {}\ncollar = {}\n",
                        zero[0], zero[1], collar
                    ));
                }
            }
        }
        TaskConfig::Hadamard {
            count,
            horizon,
            box_halfwidth,
        } => {
            out.push_str(&format!(
                "\n[experiment]\ncount = {count}\nhorizon = {horizon}\nbox = {box_halfwidth}\n"
            ));
        }
        TaskConfig::CornerBound {
            count,
            box_halfwidth,
        } => {
            out.push_str(&format!(
                "\n[experiment]\ncount = {count}\nbox = {box_halfwidth}\n"
            ));
        }
    }
    let n = c.numerics;
    let side = match n.side {
        Side::Left => "left",
        Side::Right => "right",
    };
    out.push_str(&format!(
        "\n[numerics]\ntol = {}\ngrid = {}\nseed = {}\nside = {}\node_rtol = {}\n",
        n.tol, n.grid, n.seed, side, n.ode_rtol
    ));
    out.push_str(&format!(
        "\n[output]\ntrace_csv = {}\nindicatrix_csv = {}\n",
        c.output.trace_csv, c.output.indicatrix_csv
    ));
    out
}

pub fn point2(a: [f64; 2]) -> Point2 {
    Point2 { x1: a[0], x2: a[1] }
}

pub fn tangent2(a: [f64; 2]) -> Tangent2 {
    Tangent2 { y1: a[0], y2: a[1] }
}
