use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subtraj_cli::{ingest, run, svg, Format, RunConfig, RunError};

/// Subtrajectory covering and coverage maximization under the Fréchet distance.
#[derive(Parser)]
#[command(name = "subtraj", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cover the whole input curve with centers of complexity ℓ at radius 4Δ.
    Cover(CoverArgs),
    /// Cover as much of the input as possible with k centers at radius (4+ε)Δ.
    Maximize(MaximizeArgs),
}

#[derive(Args)]
struct Common {
    /// Input curve: CSV or JSON lines, one vertex per line.
    #[arg(long)]
    input: PathBuf,
    /// Input format; inferred from the file extension when absent.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Distance threshold Δ.
    #[arg(long)]
    delta: f64,
    /// Maximum number of vertices per center curve.
    #[arg(long)]
    ell: usize,
    /// Recorded in the report; the solvers are deterministic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    plot: Option<PathBuf>,
    /// Include wall-clock timings (the report is then no longer reproducible).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct CoverArgs {
    #[command(flatten)]
    common: Common,
    /// Use the rank-selection cover instead of the plain greedy.
    #[arg(long)]
    fast: bool,
}

#[derive(Args)]
struct MaximizeArgs {
    #[command(flatten)]
    common: Common,
    /// Number of centers.
    #[arg(long)]
    k: usize,
    /// Approximation slack of the free space.
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
}

const EXIT_UNVERIFIED: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_SOLVER: u8 = 4;
const EXIT_OUTPUT: u8 = 5;

fn write(path: &Path, text: &str) -> Result<(), ExitCode> {
    std::fs::write(path, text).map_err(|e| {
        log::error!("cannot write {}: {e}", path.display());
        ExitCode::from(EXIT_OUTPUT)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("SUBTRAJ_LOG", "warn"))
        .format_timestamp(None)
        .init();
    match real_main(Cli::parse()) {
        Ok(code) | Err(code) => code,
    }
}

fn real_main(cli: Cli) -> Result<ExitCode, ExitCode> {
    let (common, mut cfg) = match cli.cmd {
        Cmd::Cover(a) => {
            let cfg = RunConfig::cover(a.common.delta, a.common.ell, a.fast);
            (a.common, cfg)
        }
        Cmd::Maximize(a) => {
            let cfg = RunConfig::maximize(a.common.delta, a.common.ell, a.k, a.epsilon);
            (a.common, cfg)
        }
    };
    cfg.seed = common.seed;
    cfg.timings = common.timings;
    if let Err(e) = cfg.validate() {
        log::error!("invalid configuration: {e}");
        return Err(ExitCode::from(EXIT_CONFIG));
    }
    let format = common.format.unwrap_or_else(|| Format::from_path(&common.input));
    let curve = ingest(&common.input, format).map_err(|e| {
        log::error!("{}: {e}", common.input.display());
        ExitCode::from(EXIT_INPUT)
    })?;
    log::info!("read {} vertices in dimension {}", curve.len(), curve.dim());
    let report = run(&cfg, &curve).map_err(|e| {
        log::error!("{e}");
        ExitCode::from(match e {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Solver(_) => EXIT_SOLVER,
        })
    })?;
    let json = report.to_json();
    match &common.out {
        Some(path) => write(path, &json)?,
        None => print!("{json}"),
    }
    if let Some(path) = &common.plot {
        write(path, &svg::render(&curve, &report))?;
    }
    if cfg.mode == subtraj_cli::Mode::Cover && !report.verification.verified {
        log::error!("the coverage certificate failed");
        return Err(ExitCode::from(EXIT_UNVERIFIED));
    }
    Ok(ExitCode::SUCCESS)
}
