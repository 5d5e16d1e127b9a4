//! `kgl`: runs the numerical experiments of the spectral lab and records a
//! JSON report plus CSV tables per run.

mod config;
mod experiments;
mod report;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand};
use config::FileConfig;
use kgl_core::exec::Exec;
use report::{persist, RunReport};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

#[derive(Debug, Parser)]
#[command(name = "kgl", version, about = "Gevrey smoothing experiments on soft-potential kinetic models")]
struct Cli {
    /// TOML file with one optional table per experiment.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; each experiment writes into a subdirectory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 1 forces sequential execution. Falls back to `KGL_JOBS`.
    #[arg(long, global = true, env = "KGL_JOBS")]
    jobs: Option<usize>,
    /// Run and print the checks without writing any files.
    #[arg(long, global = true)]
    check_only: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sharpness infimum sweep and Gevrey-index fit of the block law.
    Sharpness(SharpnessArgs),
    /// Evolves the toy model and compares measured blocks with the law.
    EvolveToy(EvolveArgs),
    /// Inequality witnesses on the seeded corpora.
    VerifyInequalities(InequalityArgs),
    /// Exact vector-field identities, the factorial ledger and the convolution bound.
    VectorFields(VectorFieldArgs),
    /// Picard iteration of the regularized linear problem.
    Picard(PicardArgs),
    /// Block-sum versus multiplier norm equivalence.
    Norms(NormArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Sharpness(_) => "sharpness",
            Command::EvolveToy(_) => "evolve-toy",
            Command::VerifyInequalities(_) => "verify-inequalities",
            Command::VectorFields(_) => "vector-fields",
            Command::Picard(_) => "picard",
            Command::Norms(_) => "norms",
        }
    }
}

#[derive(Debug, Args)]
struct SharpnessArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    a0: Option<f64>,
    #[arg(long)]
    j_max: Option<i32>,
    #[arg(long)]
    k_max: Option<i32>,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    a0: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    grid_l: Option<f64>,
}

#[derive(Debug, Args)]
struct InequalityArgs {
    #[arg(long)]
    corpus_size: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
}

#[derive(Debug, Args)]
struct VectorFieldArgs {
    #[arg(long)]
    corpus_size: Option<usize>,
    #[arg(long)]
    k_max: Option<u32>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    ledger_k_max: Option<u32>,
    #[arg(long)]
    convolution_k_max: Option<u32>,
}

#[derive(Debug, Args)]
struct PicardArgs {
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    a0: Option<f64>,
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    nmax: Option<usize>,
    #[arg(long)]
    grid_n: Option<usize>,
    #[arg(long)]
    grid_l: Option<f64>,
    /// `on` adds a periodic spatial axis.
    #[arg(long, value_parser = parse_switch)]
    x_axis: Option<bool>,
}

#[derive(Debug, Args)]
struct NormArgs {
    #[arg(long)]
    corpus_size: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    gamma: Option<f64>,
    #[arg(long)]
    s: Option<f64>,
}

fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" | "true" => Ok(true),
        "off" | "false" => Ok(false),
        _ => Err(format!("expected on/off, got {s:?}")),
    }
}

/// Settings shared by every experiment after resolution.
#[derive(Debug, Clone, Copy)]
pub struct Context {
    pub seed: u64,
    pub exec: Exec,
}

fn configure_threads(jobs: Option<usize>) -> Result<Exec> {
    match jobs {
        Some(0) => bail!("--jobs must be at least 1"),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Ok(Exec::Parallel)
        }
        None => Ok(Exec::Parallel),
    }
}

fn run(cli: Cli) -> Result<bool> {
    let file = match &cli.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let seed = cli.seed.or(file.seed).unwrap_or(1);
    let jobs = cli.jobs.or(file.jobs);
    let out = cli.out.clone().or(file.out.clone()).unwrap_or_else(|| PathBuf::from("runs"));
    let ctx = Context { seed, exec: configure_threads(jobs)? };
    let name = cli.command.name();

    let start = Instant::now();
    let (params, outcome) = match &cli.command {
        Command::Sharpness(a) => {
            let mut p = file.sharpness.unwrap_or_default();
            overlay!(p, a; gamma, s, a0, j_max, k_max);
            (serde_json::to_value(&p)?, experiments::sharpness::run(&p, &ctx)?)
        }
        Command::EvolveToy(a) => {
            let mut p = file.evolve_toy.unwrap_or_default();
            overlay!(p, a; gamma, s, a0, t, steps, grid_n, grid_l);
            (serde_json::to_value(&p)?, experiments::evolve::run(&p, &ctx)?)
        }
        Command::VerifyInequalities(a) => {
            let mut p = file.verify_inequalities.unwrap_or_default();
            overlay!(p, a; corpus_size, gamma, s);
            (serde_json::to_value(&p)?, experiments::inequalities::run(&p, &ctx)?)
        }
        Command::VectorFields(a) => {
            let mut p = file.vector_fields.unwrap_or_default();
            overlay!(p, a; corpus_size, k_max, rho, ledger_k_max, convolution_k_max);
            (serde_json::to_value(&p)?, experiments::vector_fields::run(&p, &ctx)?)
        }
        Command::Picard(a) => {
            let mut p = file.picard.unwrap_or_default();
            overlay!(p, a; gamma, s, eps, a0, t, steps, nmax, grid_n, grid_l, x_axis);
            (serde_json::to_value(&p)?, experiments::picard::run(&p, &ctx)?)
        }
        Command::Norms(a) => {
            let mut p = file.norms.unwrap_or_default();
            overlay!(p, a; corpus_size, gamma, s);
            (serde_json::to_value(&p)?, experiments::norms::run(&p, &ctx)?)
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    let config = serde_json::json!({
        "seed": seed,
        "jobs": jobs,
        "parallel": ctx.exec.is_parallel(),
        "params": params,
    });
    let tables = outcome.tables.clone();
    for c in &outcome.checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.id, c.detail);
    }
    let mut report = RunReport::new(name, config, outcome, elapsed);
    if !cli.check_only {
        report = persist(report, &tables, &out)?;
        println!("wrote {}", out.join(name).display());
    }
    Ok(report.passed)
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
