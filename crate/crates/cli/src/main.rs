use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use sasaki_core::job::{self, JobConfig, OdeConfig, RunOptions};
use sasaki_core::selftest;
use sasaki_core::{DiffBackend, Geometry};

#[derive(Parser)]
#[command(name = "sasaki", version, about = "Harmonicity and biharmonicity of vector fields under the Sasaki metric")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Dual,
    Fd,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a job config and write a JSON report.
    Check {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        backend: Option<Backend>,
        /// Report path; stdout when absent and the config names none.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record per-check wall time (makes reports non-reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Write per-point residuals over a grid as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Points per axis, e.g. `9x9` or `9×9`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate an ODE residual or integrate the transformed equation.
    Ode {
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
        /// Trial function of `x`.
        #[arg(long, requires = "at")]
        f: Option<String>,
        /// Comma-separated points for the residual.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        at: Vec<f64>,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Initial state `v0,v1,v2,v3`.
        #[arg(long, allow_hyphen_values = true)]
        integrate: Option<String>,
        /// `t0:t1`
        #[arg(long, default_value = "0:10", allow_hyphen_values = true)]
        span: String,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// `blow-up` or `global`.
        #[arg(long)]
        expect: Option<String>,
    },
    /// Run the built-in verification suite.
    Selftest {
        /// Module name (field-ops, sasaki-oracle, models, variational) or criterion number.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn parse_grid(text: &str) -> Result<Vec<usize>> {
    text.split(['x', '×', 'X', ','])
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("bad grid `{text}`")))
        .collect()
}

fn parse_floats(text: &str, sep: char) -> Result<Vec<f64>> {
    text.split(sep)
        .map(|s| s.trim().parse::<f64>().with_context(|| format!("bad number in `{text}`")))
        .collect()
}

fn check(
    config: PathBuf,
    seed: Option<u64>,
    tol: Option<f64>,
    backend: Option<Backend>,
    out: Option<PathBuf>,
    timing: bool,
) -> Result<bool> {
    let mut cfg = JobConfig::load(&config)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(t) = tol {
        cfg.tolerance = t;
    }
    match backend {
        Some(Backend::Dual) => cfg.backend = DiffBackend::default(),
        Some(Backend::Fd) => cfg.backend = DiffBackend::finite_difference(),
        None => {}
    }
    if out.is_some() {
        cfg.output.report = out;
    }
    let report = job::run_and_write(&cfg, RunOptions { timing })?;
    if cfg.output.report.is_none() {
        print!("{}", report.to_json());
    }
    for c in &report.checks {
        eprintln!("{}: {:?}{}", c.name, c.status, c.message.as_deref().map(|m| format!(" ({m})")).unwrap_or_default());
    }
    Ok(report.all_passed())
}

fn sweep(config: PathBuf, grid: &str, out: PathBuf) -> Result<bool> {
    let cfg = JobConfig::load(&config)?;
    let chart = cfg.chart()?;
    let field = cfg.build_field(&chart)?;
    let domain = cfg.build_domain(&chart)?;
    let geo = Geometry::with_backend(chart, cfg.backend);
    job::emit_csv(&geo, &field, &domain, &parse_grid(grid)?, &out)?;
    Ok(true)
}

#[allow(clippy::too_many_arguments)]
fn ode(
    id: String,
    n: usize,
    c: f64,
    f: Option<String>,
    at: Vec<f64>,
    tol: f64,
    integrate: Option<String>,
    span: &str,
    step: f64,
    expect: Option<String>,
) -> Result<bool> {
    let integrate = match integrate {
        Some(text) => {
            let v = parse_floats(&text, ',')?;
            let init: [f64; 4] = v.try_into().map_err(|_| anyhow!("--integrate takes four values"))?;
            Some(init)
        }
        None => None,
    };
    let span = parse_floats(span, ':')?;
    let [t0, t1] = span[..] else { bail!("--span takes t0:t1") };
    let cfg = OdeConfig { id, n, c, f, points: at, integrate, span: [t0, t1], step };
    let (values, passed) = job::evaluate_ode(&cfg, tol, expect.as_deref())?;
    println!("{}", serde_json::to_string_pretty(&values)?);
    Ok(passed)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Check { config, seed, tol, backend, out, timing } => check(config, seed, tol, backend, out, timing),
        Command::Sweep { config, grid, out } => sweep(config, &grid, out),
        Command::Ode { id, n, c, f, at, tol, integrate, span, step, expect } => {
            ode(id, n, c, f, at, tol, integrate, &span, step, expect)
        }
        Command::Selftest { filter } => {
            let results = selftest::run_all(filter.as_deref());
            if results.is_empty() {
                bail!("no criterion matches the filter");
            }
            for r in &results {
                println!("{}", r.line());
            }
            Ok(results.iter().all(|r| r.passed))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
