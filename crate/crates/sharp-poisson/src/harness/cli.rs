//! Command-line interface: `solve` one example, `converge` over a
//! resolution list, or `list-examples`. Exit codes: 0 success, 1
//! non-convergence or runtime failure, 2 usage error.

use super::{dump_matrix, run_convergence, solve_example, write_trace};
use crate::error::Error;
use crate::iterate::{IterationConfig, Mode, Stopping};
use crate::linsolve::SolverConfig;
use crate::problem::ExampleId;
use clap::{Parser, Subcommand};
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "sharp-poisson",
    version,
    about = "Second-order Cartesian-grid solver for elliptic problems with \
             solution and flux jumps across an embedded interface"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one catalog example at one resolution.
    Solve {
        /// Example id (see list-examples).
        #[arg(long)]
        example: String,
        /// Grid points per axis.
        #[arg(long)]
        n: usize,
        /// Stopping rule: standard | u-only | fixed:<K>.
        #[arg(long, default_value = "standard")]
        stopping: String,
        /// Outer update: picard | relaxed.
        #[arg(long, default_value = "relaxed")]
        mode: String,
        /// Relaxation contraction target in (0, 1).
        #[arg(long, default_value_t = 0.95)]
        rho: f64,
        /// Write the iteration trace as JSON lines.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
        /// Write the assembled operator as "row col value" lines.
        #[arg(long, value_name = "FILE")]
        dump_matrix: Option<PathBuf>,
        /// Write the solution and summary as JSON.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// Run a grid-refinement study and report fitted convergence orders.
    Converge {
        /// Example id (see list-examples).
        #[arg(long)]
        example: String,
        /// Comma-separated ascending resolutions, e.g. 21,41,81,161.
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        /// Stopping rule: standard | u-only | fixed:<K>.
        #[arg(long, default_value = "standard")]
        stopping: String,
        /// Outer update: picard | relaxed.
        #[arg(long, default_value = "relaxed")]
        mode: String,
        /// Relaxation contraction target in (0, 1).
        #[arg(long, default_value_t = 0.95)]
        rho: f64,
        /// Output format: csv | json.
        #[arg(long, default_value = "csv")]
        format: String,
        /// Write the report to a file instead of stdout.
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
    /// List the example catalog.
    ListExamples,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::UnknownExample(_) | Error::InvalidConfig(_) | Error::InvalidGrid(_) => 2,
        _ => 1,
    }
}

/// Parse arguments, run, and return the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn iteration_config(stopping: &str, mode: &str, rho: f64) -> crate::error::Result<IterationConfig> {
    Ok(IterationConfig {
        mode: mode.parse::<Mode>()?,
        rho,
        stopping: stopping.parse::<Stopping>()?,
        ..IterationConfig::default()
    })
}

fn write_out(path: &PathBuf, content: &str) -> std::io::Result<()> {
    let mut f = BufWriter::new(File::create(path)?);
    f.write_all(content.as_bytes())
}

fn dispatch(cli: Cli) -> crate::error::Result<()> {
    match cli.command {
        Command::Solve { example, n, stopping, mode, rho, trace, dump_matrix: dump, out } => {
            let iter_cfg = iteration_config(&stopping, &mode, rho)?;
            let outcome = solve_example(&example, n, &iter_cfg, &SolverConfig::default())?;
            println!(
                "example={} n={} h={} err_l2={} err_linf={} iters={} seconds={:.3}",
                outcome.example,
                outcome.n,
                outcome.h,
                outcome.err_l2,
                outcome.err_linf,
                outcome.iters,
                outcome.seconds,
            );
            if let Some(path) = trace {
                let mut w = BufWriter::new(File::create(path)?);
                write_trace(&outcome.iteration.trace, &mut w)?;
            }
            if let Some(path) = dump {
                let mut w = BufWriter::new(File::create(path)?);
                dump_matrix(&outcome.system.matrix, &mut w)?;
            }
            if let Some(path) = out {
                let payload = serde_json::json!({
                    "example": outcome.example,
                    "n": outcome.n,
                    "dim": outcome.system.grid().dim(),
                    "h": outcome.h,
                    "err_l2": outcome.err_l2,
                    "err_linf": outcome.err_linf,
                    "iters": outcome.iters,
                    // Full-grid values, flat order with the x index fastest.
                    "values": outcome.iteration.u_full,
                });
                let mut s = serde_json::to_string_pretty(&payload).expect("payload serializes");
                s.push('\n');
                write_out(&path, &s)?;
            }
            Ok(())
        }
        Command::Converge { example, n, stopping, mode, rho, format, out } => {
            let iter_cfg = iteration_config(&stopping, &mode, rho)?;
            let study = run_convergence(&example, &n, &iter_cfg, &SolverConfig::default())?;
            let content = match format.as_str() {
                "csv" => study.to_csv(),
                "json" => study.to_json(),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown format '{other}' (expected csv|json)"
                    )))
                }
            };
            match out {
                Some(path) => write_out(&path, &content)?,
                None => print!("{content}"),
            }
            if study.degraded {
                return Err(Error::OuterIteration {
                    max_outer: IterationConfig::default().max_outer,
                    u_diff: f64::NAN,
                    rhs_diff: f64::NAN,
                });
            }
            Ok(())
        }
        Command::ListExamples => {
            for id in ExampleId::ALL {
                println!("{:6}  {}", id.name(), id.description());
            }
            Ok(())
        }
    }
}
