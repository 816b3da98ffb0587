use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use wtail::config::RunConfig;
use wtail::report::{self, AsymptoticsRequest, NumberFormat, RunOptions};
use wtail::{Error, Family};

#[derive(Parser)]
#[command(version, about = "Weibull tail coefficient estimators and Monte-Carlo reports")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean and RMSE curves, one CSV per (model, n).
    Curves(RunArgs),
    /// Mean, RMSE and optimal sample fraction at the simulated optimal level.
    Tables(RunArgs),
    /// Asymptotic bias, variance and AMSE, or the optimal p.
    Asymptotics(AsymptoticsArgs),
    /// Built-in consistency checks.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// Config file (or a manifest from an earlier run). Tables default to the full study.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replications: Option<usize>,
    #[arg(long, env = "WTAIL_WORKERS")]
    workers: Option<usize>,
    /// Fixed decimals instead of 17 significant digits.
    #[arg(long)]
    digits: Option<usize>,
}

#[derive(Args)]
struct AsymptoticsArgs {
    #[arg(long)]
    family: Family,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    theta: f64,
    #[arg(long, allow_negative_numbers = true, conflicts_with = "b0")]
    alpha: Option<f64>,
    #[arg(long)]
    b0: bool,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    optimal_p: bool,
    #[arg(long)]
    digits: Option<usize>,
}

fn load(args: &RunArgs, tables: bool) -> wtail::Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(path) => RunConfig::load(path)?,
        None if tables => RunConfig::study(),
        None => return Err(Error::Config("--config is required".into())),
    };
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(r) = args.replications {
        if r == 0 {
            return Err(Error::Config("--replications must be at least 1".into()));
        }
        cfg.replications = r;
    }
    cfg.workers = args.workers.or(cfg.workers);
    cfg.digits = args.digits.or(cfg.digits);
    Ok(cfg)
}

fn run_report(args: &RunArgs, tables: bool) -> wtail::Result<()> {
    let cfg = load(args, tables)?;
    let opts = RunOptions {
        workers: cfg.workers,
        format: NumberFormat { digits: cfg.digits },
    };
    let manifest = if tables {
        report::cmd_tables(&cfg, &args.out, opts)?
    } else {
        report::cmd_curves(&cfg, &args.out, opts)?
    };
    for file in &manifest.outputs {
        println!("{}", args.out.join(file).display());
    }
    println!("{}", args.out.join(report::MANIFEST_FILE).display());
    Ok(())
}

fn run(cli: Cli) -> wtail::Result<()> {
    match cli.command {
        Command::Curves(args) => run_report(&args, false),
        Command::Tables(args) => run_report(&args, true),
        Command::Asymptotics(a) => {
            let req = AsymptoticsRequest {
                family: a.family,
                p: a.p,
                theta: a.theta,
                alpha: a.alpha,
                b0: a.b0,
                n: a.n,
                k: a.k,
                optimal_p: a.optimal_p,
            };
            print!("{}", report::cmd_asymptotics(&req, NumberFormat { digits: a.digits })?);
            Ok(())
        }
        Command::Selftest => {
            let checks = report::selftest();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if checks.iter().all(|c| c.passed) {
                Ok(())
            } else {
                Err(Error::Capability("selftest failed".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parameter(_) | Error::Domain(_) | Error::Range { .. } => 2,
        Error::DegenerateSample { .. } | Error::EmptyCurve | Error::InsufficientCoverage { .. } => 3,
        Error::Capability(_) | Error::Io(_) => 1,
    }
}
