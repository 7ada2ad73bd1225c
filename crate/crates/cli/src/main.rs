//! `stieltjes`: command-line front end for the truncated matrix Stieltjes
//! moment problem.
//!
//! Every subcommand reads JSON files, prints one JSON document on stdout
//! and exits with 0 on success or a positive verdict, 1 on usage or parse
//! errors and 2 on a negative mathematical verdict.

mod commands;
mod io;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};
use stieltjes_core::matcore::ToleranceConfig;

#[derive(Parser)]
#[command(name = "stieltjes", version, about = "Truncated matrix Stieltjes moment problems on [alpha, inf)")]
struct Cli {
    /// Tolerance for positive semidefiniteness tests.
    #[arg(long, global = true)]
    tol_psd: Option<f64>,
    /// Relative singular-value cut-off for rank decisions.
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    /// Evaluation grid: `standard` or a comma-separated list of points.
    #[arg(long, global = true, default_value = "standard", allow_hyphen_values = true)]
    grid: String,
    /// Pretty-print the JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    /// Compact JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class membership of a moment sequence (exit 2 if not Stieltjes nonnegative).
    Check {
        /// Moment file.
        moments: PathBuf,
    },
    /// Degeneracy classification of the order-n problem.
    Classify {
        /// Moment file.
        moments: PathBuf,
        /// Order n (uses s_0, ..., s_{2n+1}).
        #[arg(long)]
        n: usize,
    },
    /// Coefficients of the resolvent matrix polynomials.
    Resolvent {
        /// Moment file.
        moments: PathBuf,
        /// Order n (uses s_0, ..., s_{2n+1}).
        #[arg(long)]
        n: usize,
    },
    /// Evaluate the solution attached to a parameter pair.
    Solve {
        /// Moment file.
        moments: PathBuf,
        /// Pair file (optional for completely degenerate problems).
        pair: Option<PathBuf>,
        /// Order n (uses s_0, ..., s_{2n+1}).
        #[arg(long)]
        n: usize,
        /// Points to evaluate at, e.g. `0+1i,2-1i`; defaults to the grid.
        #[arg(long, allow_hyphen_values = true)]
        points: Option<String>,
    },
    /// Check whether a measure solves the order-n problem (exit 2 if not).
    Verify {
        /// Moment file.
        moments: PathBuf,
        /// Measure file.
        measure: PathBuf,
        /// Order n (uses s_0, ..., s_{2n+1}).
        #[arg(long)]
        n: usize,
    },
    /// Stieltjes transform of a measure.
    Transform {
        /// Measure file.
        measure: PathBuf,
        /// Points to evaluate at, e.g. `0+1i,-1`.
        #[arg(long, allow_hyphen_values = true)]
        points: String,
    },
    /// Moments of a measure, written as a moment file.
    Moments {
        /// Measure file.
        measure: PathBuf,
        /// Highest moment index.
        #[arg(long)]
        order: usize,
    },
}

fn tolerances(cli: &Cli) -> Result<ToleranceConfig> {
    let mut tol = ToleranceConfig::default();
    if let Some(t) = cli.tol_psd {
        tol.tol_psd = t;
    }
    if let Some(t) = cli.tol_rank {
        tol.tol_rank = t;
    }
    tol.validate()?;
    Ok(tol)
}

fn run(cli: &Cli) -> Result<commands::Outcome> {
    let tol = tolerances(cli)?;
    let pretty = cli.pretty;
    match &cli.command {
        Command::Check { moments } => commands::check(moments, &tol, pretty),
        Command::Classify { moments, n } => commands::classify_cmd(moments, *n, &tol, pretty),
        Command::Resolvent { moments, n } => commands::resolvent(moments, *n, &tol, pretty),
        Command::Solve {
            moments,
            pair,
            n,
            points,
        } => {
            let alpha = commands::moment_alpha(moments)?;
            let text = points.as_deref().unwrap_or(&cli.grid);
            let points = commands::parse_points(text, alpha)?;
            commands::solve(moments, pair.as_deref(), *n, &points, &tol, pretty)
        }
        Command::Verify {
            moments,
            measure,
            n,
        } => {
            let alpha = commands::moment_alpha(moments)?;
            let grid = commands::parse_points(&cli.grid, alpha)?;
            commands::verify(moments, measure, *n, &grid, &tol, pretty)
        }
        Command::Transform { measure, points } => {
            let alpha = commands::measure_alpha(measure)?;
            let points = commands::parse_points(points, alpha)?;
            commands::transform_cmd(measure, &points, &tol, pretty)
        }
        Command::Moments { measure, order } => commands::moments_cmd(measure, *order, &tol, pretty),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if writeln!(stdout, "{}", outcome.json).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::from(outcome.code)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
