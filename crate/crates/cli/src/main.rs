//! `wf-excursions`: file-emitting front end to the analytic and simulation library.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 verification failure (1 for I/O trouble).

mod commands;
mod error;
mod grid;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, CliResult};
use crate::grid::Grid;
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(name = "wf-excursions", version, about = "Excursion theory of the Wright-Fisher diffusion with regular boundaries")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Mutation parameter towards 0's type, in (0, 1).
    #[arg(long, global = true)]
    pub theta1: Option<f64>,
    /// Mutation parameter towards 1's type, in (0, 1).
    #[arg(long, global = true)]
    pub theta2: Option<f64>,
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Truncation tolerance where a command has one.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "WF_EXCURSIONS_THREADS")]
    pub threads: Option<usize>,
    /// Relative error injected into every Gamma evaluation (fault-injection hook).
    #[arg(long, global = true, hide = true)]
    pub perturb_gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    #[value(name = "0")]
    Zero,
    #[value(name = "1")]
    One,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    Path,
    Exit,
    Hitting,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TestFunction {
    One,
    Y,
    Y2,
    #[value(name = "y1my")]
    YOneMinusY,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Unkilled,
    Killed0,
    Killed1,
    Killed01,
    Killed10,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Increasing and decreasing eigenfunctions on an x-grid (three default
    /// parameter sets unless both thetas are given).
    Eigen {
        #[arg(long, default_value_t = 0.1)]
        lambda: f64,
        #[arg(long, default_value = "lin:0:1:101")]
        x_grid: Grid,
    },
    /// Entrance density in time by numerical Laplace inversion.
    Entrance {
        #[arg(long, default_value = "0.1,0.5,1,5")]
        t_grid: Grid,
        #[arg(long, default_value = "lin:0.01:0.99:99")]
        x_grid: Grid,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Zero)]
        from: BoundaryArg,
        /// Gaver-Stehfest order (even, 8..=24).
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
    /// Cross-check ledger over a theta grid; exit status 4 on any failure.
    Verify,
    /// Exact-marginal paths or Monte Carlo boundary estimates.
    Simulate {
        #[arg(long, value_enum, default_value_t = SimMode::Path)]
        mode: SimMode,
        #[arg(long, default_value_t = 0.5)]
        x0: f64,
        #[arg(long, default_value = "lin:0:1:11")]
        t_grid: Grid,
        #[arg(long, default_value_t = 1)]
        n_paths: usize,
        /// Boundary collar width (exit mode).
        #[arg(long, default_value_t = 0.02)]
        eps: f64,
        /// Target level (hitting mode).
        #[arg(long, default_value_t = 0.8)]
        y: f64,
        #[arg(long, default_value_t = 1.0)]
        lambda: f64,
        /// Uniform step; the default uses finer steps near the boundaries.
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 10_000_000)]
        max_steps: u64,
    },
    /// Slope of log φ over a λ-grid at each boundary.
    Hausdorff {
        #[arg(long, default_value = "log:10:100000:41")]
        lambda_grid: Grid,
    },
    /// Green's function in all three representations.
    Green {
        #[arg(long, default_value = "0.5,1,5")]
        lambda_grid: Grid,
        #[arg(long, default_value = "0.2,0.5,0.8")]
        x_grid: Grid,
    },
    /// Resolvent of a test function, optionally killed at the boundaries.
    Resolvent {
        #[arg(long, default_value = "1")]
        lambda_grid: Grid,
        #[arg(long, default_value = "lin:0.1:0.9:9")]
        x_grid: Grid,
        #[arg(long, value_enum, default_value_t = TestFunction::Y)]
        function: TestFunction,
        #[arg(long, value_enum, default_value_t = KindArg::Unkilled)]
        kind: KindArg,
    },
}

fn run(cli: Cli) -> CliResult<()> {
    if let Some(n) = cli.common.threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if let Some(rel) = cli.common.perturb_gamma {
        wf_excursions::hyperfun::set_gamma_perturbation(rel);
    }
    commands::dispatch(&cli.common, &cli.command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wf-excursions: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
