mod commands;
mod error;
mod matrix_io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use opangle_core::angle::OptimizerConfig;
use opangle_core::verify::SuiteConfig;
use opangle_core::ToleranceConfig;

use commands::{to_json, write_file, AnalyzeArgs};
use error::CliError;

#[derive(Parser)]
#[command(name = "opangle", version, about = "Operator angles, Drazin structure and numerical ranges of complex matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure, operator angle and numerical-range report for one matrix.
    Analyze {
        path: PathBuf,
        /// Exponent of the l^p norm.
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long, env = "OPANGLE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        starts: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        /// Write the report here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Trace the boundary of the numerical range.
    Numrange {
        path: PathBuf,
        #[arg(long, default_value_t = 720)]
        points: usize,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// CSV rows `theta,h,re,im`; printed to standard output when no file is given.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run property suites on seeded random matrices.
    Verify {
        /// `all`, or comma-separated ids among P1..P10 and CONVERSE.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, env = "OPANGLE_SEED", default_value_t = 0)]
        seed: u64,
        #[arg(long = "n-max", default_value_t = 6)]
        n_max: usize,
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include wall time per property (makes the output nondeterministic).
        #[arg(long)]
        timing: bool,
    },
    /// Gap between the column spans of two basis matrices.
    Gap { m: PathBuf, n: PathBuf },
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => write_file(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).map_err(|source| CliError::Write {
                path: PathBuf::from("<stdout>"),
                source,
            })
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analyze { path, p, seed, starts, samples, json } => {
            let doc = commands::analyze(&AnalyzeArgs { path, p, seed, starts, samples })?;
            emit(json.as_ref(), &to_json(&doc))?;
            if json.is_some() {
                println!(
                    "cos = {:.12}, angle = {:.12}, {}",
                    doc.angle.cos_estimate, doc.angle.angle, doc.angle.classification
                );
            }
            Ok(())
        }
        Command::Numrange { path, points, svg, csv } => {
            let out = commands::numrange(&path, points)?;
            if let Some(svg) = &svg {
                write_file(svg, &out.svg)?;
            }
            match &csv {
                Some(csv) => write_file(csv, &out.csv)?,
                None if svg.is_none() => emit(None, &out.csv)?,
                None => {}
            }
            if csv.is_some() || svg.is_some() {
                println!("origin {} at distance {:.12}", out.location, out.distance);
            }
            Ok(())
        }
        Command::Verify { suite, trials, seed, n_max, json, timing } => {
            let ids = commands::parse_suite(&suite)?;
            let cfg = SuiteConfig {
                trials,
                seed,
                n_max,
                tol: ToleranceConfig::default(),
                optimizer: OptimizerConfig::light(seed),
                timing,
            };
            let doc = commands::verify(&ids, &cfg)?;
            for r in &doc.reports {
                eprintln!("{}: {} passed, {} failed, {} vacuous", r.property, r.passes, r.failures, r.vacuous);
            }
            emit(json.as_ref(), &to_json(&doc))?;
            let failing: Vec<String> = doc.reports.iter().filter(|r| !r.ok()).map(|r| r.property.to_string()).collect();
            if failing.is_empty() {
                Ok(())
            } else {
                Err(CliError::PropertiesFailed(failing))
            }
        }
        Command::Gap { m, n } => {
            let g = commands::gap(&m, &n)?;
            println!("{g:.12}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("opangle: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
