use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use k2lab::experiment::{self, Config, Mode, DEFAULT_BUDGET, DEFAULT_EPSILON, DEFAULT_SEED};
use k2lab::FieldSpec;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Experiment {
    AvgOdd,
    AvgEven,
    SumL,
    Identities,
    Bounds,
    /// Regenerate the pinned constants file.
    Fixtures,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Exact experiments on quadratic L-functions over F_q(T) and K2 orders.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    /// Odd prime q >= 5.
    #[arg(long, default_value_t = 5)]
    q: u64,
    /// Genus parameter: discriminants have degree 2g+2 (2g+1 for avg-odd).
    #[arg(long, default_value_t = 0)]
    g: usize,
    #[arg(long, value_enum)]
    experiment: Experiment,
    /// Generator of F_q^* used for twisting; defaults to the smallest.
    #[arg(long)]
    gamma: Option<u64>,
    /// Sample this many discriminants per degree instead of enumerating all.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Exponent slack in error envelopes q^(g(1+eps)).
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest q^deg enumerated exhaustively without --sample.
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(args: Args) -> Result<bool> {
    let mode = match args.experiment {
        Experiment::Fixtures => {
            let fixtures = experiment::generate_fixtures(args.threads)?;
            emit(&(fixtures.to_json() + "\n"), &args.out)?;
            return Ok(true);
        }
        Experiment::AvgOdd => Mode::AvgOdd,
        Experiment::AvgEven => Mode::AvgEven,
        Experiment::SumL => Mode::SumL,
        Experiment::Identities => Mode::Identities,
        Experiment::Bounds => Mode::Bounds,
    };
    let mut field = FieldSpec::new(args.q)?;
    if let Some(gamma) = args.gamma {
        field = field.with_gamma(gamma)?;
    }
    let mut config = Config::new(field, args.g, mode);
    config.sample = args.sample;
    config.seed = args.seed;
    config.epsilon = args.epsilon;
    config.threads = args.threads;
    config.budget = args.budget;
    let report = experiment::run(&config)?;
    log::info!("{} finished in {:.2}s", mode, report.runtime_seconds);
    let text = match args.format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv()?,
    };
    emit(&text, &args.out)?;
    Ok(report.identities_pass())
}

fn main() -> ExitCode {
    env_logger::init();
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("k2lab: an exact identity failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("k2lab: {e:#}");
            ExitCode::from(2)
        }
    }
}
