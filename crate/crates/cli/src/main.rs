//! `frodo` — synthesis and simulation studies for frequency-bin unitaries
//! built from cascaded acousto-optic beamsplitter layers.
//!
//! Exit codes: 0 on success, 1 on validation errors, 2 on numerical
//! non-convergence.

mod commands;
mod config_file;
mod error;
mod manifest;
mod output;
mod targets;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

use commands::{parse_dims, Ctx};
use config_file::{FileConfig, GridSpec};
use error::{CliError, Result};
use frodo_core::{CostKind, Method};

#[derive(Parser)]
#[command(
    name = "frodo",
    version,
    about = "Frequency-bin unitary synthesis with acousto-optic FRODO layers"
)]
struct Cli {
    /// Key-value config file (device constants, grid defaults)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Base RNG seed; all sampling in a run derives from it
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,

    /// Directory for CSV/JSON outputs and the run manifest
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Worker threads for parallel studies (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridArgs {
    /// Smallest interaction length in meters
    #[arg(long)]
    grid_min: Option<f64>,
    /// Largest interaction length in meters
    #[arg(long)]
    grid_max: Option<f64>,
    /// Number of log-spaced grid points
    #[arg(long)]
    grid_points: Option<usize>,
}

impl GridArgs {
    fn apply(&self, base: GridSpec) -> GridSpec {
        GridSpec {
            min_m: self.grid_min.unwrap_or(base.min_m),
            max_m: self.grid_max.unwrap_or(base.max_m),
            points: self.grid_points.unwrap_or(base.points),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CostArg {
    Fidelity,
    Uniformity,
}

impl From<CostArg> for CostKind {
    fn from(c: CostArg) -> Self {
        match c {
            CostArg::Fidelity => CostKind::Fidelity,
            CostArg::Uniformity => CostKind::Uniformity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    NelderMead,
    CoordinateDescent,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::NelderMead => Method::NelderMead,
            MethodArg::CoordinateDescent => Method::CoordinateDescent,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Factor a target unitary into a mesh plan (plan.json)
    Decompose {
        /// Target gate: dft:N, haar:N (or haar:N:SEED), identity:N, or @file.json
        #[arg(long)]
        target: String,
    },
    /// Run a plan through the physical cascade and score it
    Synthesize {
        #[arg(long)]
        target: String,
        /// Plan JSON produced by decompose/optimize; defaults to decomposing the target
        #[arg(long)]
        plan: Option<PathBuf>,
        /// Interaction length in meters (defaults to the configured length)
        #[arg(long)]
        length: Option<f64>,
    },
    /// Sweep the interaction length for one target
    Sweep {
        #[arg(long)]
        target: String,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Haar-random ensemble study over the length grid
    Ensemble {
        /// Gate dimension N
        #[arg(long)]
        dim: usize,
        /// Number of Haar samples
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// DFT threshold study across gate dimensions
    DftStudy {
        /// Dimensions, e.g. "2..10" or "4,6,8"
        #[arg(long, default_value = "2..10")]
        dims: String,
        /// Also optimize per-layer settings at every grid point
        #[arg(long)]
        optimize: bool,
        /// Threshold levels, comma separated
        #[arg(long, default_value = "0.99,0.999,0.9999")]
        levels: String,
        /// Optimizer evaluation budget per point
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Per-rung fidelity and leakage of parallel frequency Hadamards
    ParallelHadamard {
        /// Dimensionless mismatch values, comma separated
        #[arg(long, default_value = "0,0.5,1,2,5,10,20,50,100,1000")]
        kappas: String,
        /// Ladder rungs -rung-max..=rung-max
        #[arg(long, default_value_t = 10)]
        rung_max: i64,
    },
    /// Locally refine per-layer settings for one target at one length
    Optimize {
        #[arg(long)]
        target: String,
        #[arg(long)]
        length: Option<f64>,
        #[arg(long, value_enum, default_value_t = CostArg::Fidelity)]
        cost: CostArg,
        #[arg(long, default_value_t = 20_000)]
        budget: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::NelderMead)]
        method: MethodArg,
        /// Stop as soon as the cost reaches this value
        #[arg(long)]
        stop_below_cost: Option<f64>,
    },
}

fn run(cli: Cli) -> Result<()> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            return Err(CliError::Validation("workers must be positive".into()));
        }
        // Ignore the error if a pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global();
    }

    let file_config = match &cli.config {
        Some(path) => config_file::load(path)?,
        None => FileConfig::default(),
    };

    let make_ctx = |grid: GridSpec| Ctx {
        config: file_config.physical.clone(),
        grid,
        seed: cli.seed,
        out_dir: cli.out_dir.clone(),
    };

    match &cli.command {
        Command::Decompose { target } => {
            commands::plans::decompose(&make_ctx(file_config.grid), target)
        }
        Command::Synthesize { target, plan, length } => commands::plans::synthesize_cmd(
            &make_ctx(file_config.grid),
            target,
            plan.as_deref(),
            *length,
        ),
        Command::Sweep { target, grid } => {
            commands::sweep::run(&make_ctx(grid.apply(file_config.grid)), target)
        }
        Command::Ensemble { dim, samples, grid } => {
            commands::ensemble::run(&make_ctx(grid.apply(file_config.grid)), *dim, *samples)
        }
        Command::DftStudy {
            dims,
            optimize,
            levels,
            budget,
            grid,
        } => {
            let opts = commands::dft_study::StudyOptions {
                dims: parse_dims(dims)?,
                optimize: *optimize,
                levels: commands::parse_float_list(levels, "level")?,
                budget: *budget,
            };
            commands::dft_study::run(&make_ctx(grid.apply(file_config.grid)), &opts)
        }
        Command::ParallelHadamard { kappas, rung_max } => {
            commands::parallel_hadamard::run(&make_ctx(file_config.grid), kappas, *rung_max)
        }
        Command::Optimize {
            target,
            length,
            cost,
            budget,
            method,
            stop_below_cost,
        } => commands::plans::optimize_cmd(
            &make_ctx(file_config.grid),
            target,
            *length,
            (*cost).into(),
            *budget,
            (*method).into(),
            *stop_below_cost,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
