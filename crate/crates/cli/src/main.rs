use fsl::config::{parse_config, RunConfig};
use fsl::run::run_to_dir;
use std::path::PathBuf;
use std::process::ExitCode;

const USAGE: &str = "usage: fsl <task> --config <path> [--out <dir>] [--tol <float>] [--grid <int>] [--seed <int>] [--side <left|right>]

tasks: jet | invariants | indicatrix | angle | trace | gauss-bonnet | hadamard | corner-bound

The task name must match `name` in the config's [task] section. FSL_THREADS
caps internal parallelism.";

struct CliArgs {
    task: String,
    config: PathBuf,
    out: PathBuf,
    tol: Option<f64>,
    grid: Option<usize>,
    seed: Option<u64>,
    side: Option<String>,
}

fn parse_args(args: &[String]) -> Result<CliArgs, String> {
    if args.is_empty() {
        return Err("missing task".into());
    }
    let task = args[0].clone();
    if task == "-h" || task == "--help" {
        return Err(String::new());
    }
    let mut config = None;
    let mut out = PathBuf::from("out");
    let mut tol = None;
    let mut grid = None;
    let mut seed = None;
    let mut side = None;
    let mut i = 1;
    while i < args.len() {
        let flag = args[i].as_str();
        let value = args
            .get(i + 1)
            .ok_or_else(|| format!("flag {flag} needs a value"))?;
        match flag {
            "--config" => config = Some(PathBuf::from(value)),
            "--out" => out = PathBuf::from(value),
            "--tol" => {
                tol = Some(
                    value
                        .parse::<f64>()
                        .map_err(|_| format!("--tol: bad float `{value}`"))?,
                )
            }
            "--grid" => {
                grid = Some(
                    value
                        .parse::<usize>()
                        .map_err(|_| format!("--grid: bad integer `{value}`"))?,
                )
            }
            "--seed" => {
                seed = Some(
                    value
                        .parse::<u64>()
                        .map_err(|_| format!("--seed: bad integer `{value}`"))?,
                )
            }
            "--side" => side = Some(value.clone()),
            other => return Err(format!("unknown flag `{other}`")),
        }
        i += 2;
    }
    Ok(CliArgs {
        task,
        config: config.ok_or("missing --config <path>")?,
        out,
        tol,
        grid,
        seed,
        side,
    })
}

fn apply_overrides(config: &mut RunConfig, args: &CliArgs) -> Result<(), String> {
    if let Some(t) = args.tol {
        if !(t > 0.0) {
            return Err("--tol must be positive".into());
        }
        config.numerics.tol = t;
    }
    if let Some(g) = args.grid {
        if g < 16 {
            return Err("--grid must be at least 16".into());
        }
        config.numerics.grid = g;
    }
    if let Some(s) = args.seed {
        config.numerics.seed = s;
    }
    if let Some(side) = &args.side {
        config.numerics.side = match side.as_str() {
            "left" => finsler::indicatrix::Side::Left,
            "right" => finsler::indicatrix::Side::Right,
            other => return Err(format!("--side: expected left or right, got `{other}`")),
        };
    }
    Ok(())
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    let args = match parse_args(&raw) {
        Ok(a) => a,
        Err(msg) => {
            if msg.is_empty() {
                println!("{USAGE}");
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {msg}\n\n{USAGE}");
            return ExitCode::from(1);
        }
    };

    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    let mut config = match parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", args.config.display());
            return ExitCode::from(1);
        }
    };
    if config.task.name() != args.task {
        eprintln!(
            "error: subcommand `{}` does not match config task `{}`",
            args.task,
            config.task.name()
        );
        return ExitCode::from(1);
    }
    if let Err(msg) = apply_overrides(&mut config, &args) {
        eprintln!("error: {msg}");
        return ExitCode::from(1);
    }

    let outcome = run_to_dir(&config, &args.out);
    println!("{}", outcome.summary);
    ExitCode::from(outcome.exit_code as u8)
}
