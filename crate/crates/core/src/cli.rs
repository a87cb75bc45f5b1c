//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or integrity error,
//! 3 remote or transport error, 4 numerical error (rank deficiency,
//! degenerate variance). Payloads go to standard output as CSV or a single
//! JSON line; diagnostics go to standard error only.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, ErrorClass, Result};
use crate::experiment::{
    comparison_to_csv, composition_analysis, correlation_table, emit_plot_data, generate_synthetic,
    run_comparison, split, SplitPlan, SynthSpec,
};
use crate::fit::ols_fit;
use crate::ingest::{
    fetch_block_features, read_dataset, write_dataset, write_features_csv, DatasetFile, RpcEndpoint,
};
use crate::models::{ModelKind, ModelSpec};
use crate::stats::evaluate;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_REMOTE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "joist",
    version,
    about = "Model and evaluate block verification time from transaction features"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitKind {
    Joist,
    BlockSize,
}

impl From<FitKind> for ModelKind {
    fn from(k: FitKind) -> Self {
        match k {
            FitKind::Joist => ModelKind::Joist,
            FitKind::BlockSize => ModelKind::BlockSize,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fetch block features from a node (JOIST_RPC_URL, JOIST_RPC_USER, JOIST_RPC_PASS).
    /// Times are written as 0 and must be filled in before fitting.
    Fetch {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 4)]
        parallel: usize,
        #[arg(long, default_value_t = 30)]
        timeout_secs: u64,
    },
    /// Generate a synthetic dataset from a JSON spec.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit a model by OLS, on a seeded split when --seed and --n-fit are given.
    Fit {
        #[arg(long, value_enum)]
        kind: FitKind,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, requires = "n_fit")]
        seed: Option<u64>,
        #[arg(long, requires = "seed")]
        n_fit: Option<usize>,
    },
    /// Write measured and predicted times as plot data.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print the evaluation report of a model on a dataset as one JSON line.
    Evaluate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        data: PathBuf,
    },
    /// Fit and compare JOIST and the block-size model on a seeded split.
    Compare {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n_fit: usize,
        /// Also evaluate the fixed-rate baseline (0.3796 us/B).
        #[arg(long)]
        baseline_gervais: bool,
    },
    /// Print Pearson's r of every feature against verification time.
    Correlate {
        #[arg(long)]
        data: PathBuf,
    },
    /// Print per-block composition ratios and their mean.
    Composition {
        #[arg(long)]
        data: PathBuf,
    },
}

pub fn exit_code(err: &Error) -> i32 {
    match err.class() {
        ErrorClass::Usage => EXIT_USAGE,
        ErrorClass::Data => EXIT_DATA,
        ErrorClass::Remote => EXIT_REMOTE,
        ErrorClass::Numerical => EXIT_NUMERICAL,
    }
}

/// Parses `args` (program name first) and runs the subcommand.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn load(path: &PathBuf) -> Result<crate::features::Dataset> {
    read_dataset(&DatasetFile::csv(path))
}

fn emit(stdout: &mut dyn Write, text: &str) -> Result<()> {
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| Error::io("<stdout>", e))
}

pub fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let note = |stderr: &mut dyn Write, msg: String| {
        let _ = writeln!(stderr, "{msg}");
    };
    match command {
        Command::Fetch {
            from,
            to,
            out,
            parallel,
            timeout_secs,
        } => {
            if from > to {
                return Err(Error::InvalidArgument(format!(
                    "--from {from} is above --to {to}"
                )));
            }
            let endpoint = RpcEndpoint::from_env()?
                .with_max_parallel(parallel)
                .with_timeout(Duration::from_secs(timeout_secs));
            endpoint.validate()?;
            let blocks = fetch_block_features(&endpoint, from..=to)?;
            write_features_csv(&blocks, &out)?;
            note(
                stderr,
                format!(
                    "warning: wrote {} blocks to {} with verify_time_us = 0; merge measured times before fitting",
                    blocks.len(),
                    out.display()
                ),
            );
        }
        Command::Synth { spec, out } => {
            let text = fs::read_to_string(&spec).map_err(|e| Error::io(&spec, e))?;
            let ds = generate_synthetic(&SynthSpec::from_json(&text)?)?;
            write_dataset(&ds, &DatasetFile::csv(&out))?;
        }
        Command::Fit {
            kind,
            data,
            out,
            seed,
            n_fit,
        } => {
            let ds = load(&data)?;
            let train = match (seed, n_fit) {
                (Some(seed), Some(n_fit)) => {
                    split(&ds, &SplitPlan::for_dataset(seed, n_fit, &ds)?)?.0
                }
                _ => ds,
            };
            let fit = ols_fit(kind.into(), &train)?;
            if let Some(w) = &fit.condition_warning {
                note(stderr, format!("warning: {w}"));
            }
            fit.model.save(&out)?;
            note(
                stderr,
                format!(
                    "fitted {} on {} samples, RSS {}",
                    fit.model.kind(),
                    fit.n_samples,
                    fit.residual_sum_squares
                ),
            );
        }
        Command::Predict { model, data, out } => {
            let model = ModelSpec::load(&model)?;
            let line = emit_plot_data(&load(&data)?, &model, &out)?;
            note(
                stderr,
                format!(
                    "regression line: slope {} intercept {} us",
                    line.slope, line.intercept_us
                ),
            );
        }
        Command::Evaluate { model, data } => {
            let report = evaluate(&ModelSpec::load(&model)?, &load(&data)?)?;
            emit(stdout, &(report.to_json_line() + "\n"))?;
        }
        Command::Compare {
            data,
            seed,
            n_fit,
            baseline_gervais,
        } => {
            let ds = load(&data)?;
            let plan = SplitPlan::for_dataset(seed, n_fit, &ds)?;
            let baselines = if baseline_gervais {
                vec![ModelSpec::gervais()]
            } else {
                vec![]
            };
            let rows = run_comparison(
                &ds,
                &plan,
                &[ModelKind::Joist, ModelKind::BlockSize],
                &baselines,
            )?;
            emit(stdout, &comparison_to_csv(&rows))?;
        }
        Command::Correlate { data } => {
            emit(stdout, &correlation_table(&load(&data)?).to_csv())?;
        }
        Command::Composition { data } => {
            let report = composition_analysis(&load(&data)?);
            if report.n_excluded > 0 {
                note(
                    stderr,
                    format!(
                        "excluded {} block(s) without descriptions",
                        report.n_excluded
                    ),
                );
            }
            emit(stdout, &report.to_csv())?;
        }
    }
    Ok(())
}
