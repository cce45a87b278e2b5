//! Command-line experiment runner for the `setbm` library.

pub mod config;
mod distfn;
pub mod error;
mod ghdiff;
pub mod output;
pub mod setspec;
mod simulate;
mod verify;

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use setbm::{DirectionGrid, TimeGrid};

use config::{ConfigFile, FloatList, Settings, Uniform};
use error::{CliError, EXIT_PASS, EXIT_STAT_FAIL};

#[derive(Debug, Parser)]
#[command(name = "setbm", version, about = "Set-valued Brownian motion experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample Brownian paths and write them as CSV or JSON.
    Simulate(SimulateArgs),
    /// Run the statistical test battery and write a JSON report.
    Verify(VerifyArgs),
    /// Tabulate the exponential-pair distribution function against its closed form.
    Distfn(DistfnArgs),
    /// Generalized Hukuhara difference of two sets.
    Ghdiff(GhdiffArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Base seed; required here or in the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of simulated paths.
    #[arg(long)]
    pub n_paths: Option<usize>,
    /// Positive observation times, e.g. `1,2,3` (0 is prepended).
    #[arg(long, allow_hyphen_values = true)]
    pub times: Option<FloatList>,
    /// `n T`: n equal steps on [0, T].
    #[arg(long, num_args = 2, value_names = ["N", "T"])]
    pub uniform: Option<Vec<String>>,
    /// Dimension of the underlying space.
    #[arg(long)]
    pub dim: Option<usize>,
    /// Number of directions in the grid.
    #[arg(long)]
    pub grid_size: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub paths: PathArgs,
    /// Also write every embedded vector `W(t) e`.
    #[arg(long)]
    pub full: bool,
    /// `csv` (default) or `json`.
    #[arg(long)]
    pub format: Option<output::Format>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub paths: PathArgs,
    /// `all` or a comma list of test names.
    #[arg(long)]
    pub tests: Option<String>,
    /// Grid index of the evaluation functional.
    #[arg(long)]
    pub eval_index: Option<usize>,
    /// Moment generating function argument, one entry per positive time.
    #[arg(long, allow_hyphen_values = true)]
    pub mgf_u: Option<FloatList>,
    /// Step counts of the refining partitions for the convergence tests.
    #[arg(long)]
    pub qv_steps: Option<config::CountList>,
    /// Pass gate on |z|.
    #[arg(long)]
    pub z_gate: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DistfnArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Base seed; required here or in the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Rate of the two exponential endpoints.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Monte Carlo samples per table row.
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Upper end of the y range (default 4 / lambda).
    #[arg(long)]
    pub y_max: Option<f64>,
    /// Number of steps between 0 and y_max.
    #[arg(long)]
    pub y_steps: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GhdiffArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Minuend, e.g. `[0,2]`, `ball((0,0),1)` or `{(0,0),(1,0),(0,1)}`.
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Subtrahend, in the same syntax.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    /// Number of directions in the grid.
    #[arg(long)]
    pub grid_size: Option<usize>,
}

const PATH_KEYS: [&str; 6] = ["seed", "n_paths", "times", "uniform", "dim", "grid_size"];

fn load_settings(common: &CommonArgs, extra: &[&str]) -> Result<Settings, CliError> {
    let file = common.config.as_deref().map(ConfigFile::load).transpose()?;
    Settings::new(file, extra)
}

fn positive(name: &str, n: usize) -> Result<usize, CliError> {
    if n == 0 {
        Err(CliError::Config(format!("{name} must be at least 1")))
    } else {
        Ok(n)
    }
}

/// Resolved path-simulation settings shared by `simulate` and `verify`.
struct PathSetup {
    seed: u64,
    n_paths: usize,
    timegrid: TimeGrid,
    grid: Arc<DirectionGrid>,
}

impl PathSetup {
    fn resolve(args: &PathArgs, s: &Settings, default_n: usize, default_times: &[f64]) -> Result<Self, CliError> {
        let seed = s.require("seed", args.seed)?;
        let n_paths = positive("n_paths", s.get_or("n_paths", args.n_paths, default_n)?)?;
        let uniform_flag = args.uniform.as_ref().map(|v| v.join(" ").parse::<Uniform>()).transpose();
        let uniform = s.get("uniform", uniform_flag.map_err(CliError::Config)?)?;
        let times = s.get("times", args.times.clone())?;
        let timegrid = match (times, uniform) {
            (Some(_), Some(_)) => return Err(CliError::Config("give either times or uniform, not both".into())),
            (Some(FloatList(t)), None) => TimeGrid::from_positive(&t)?,
            (None, Some(u)) => TimeGrid::uniform(positive("uniform steps", u.steps)?, u.horizon)?,
            (None, None) => TimeGrid::from_positive(default_times)?,
        };
        let dim = s.get_or("dim", args.dim, 2)?;
        let grid = match s.get("grid_size", args.grid_size)? {
            Some(m) => DirectionGrid::with_size(dim, m)?,
            None => DirectionGrid::for_dimension(dim)?,
        };
        Ok(Self { seed, n_paths, timegrid, grid })
    }
}

/// Caps the global worker pool at `SETBM_THREADS` when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("SETBM_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| CliError::Config(format!("SETBM_THREADS = {raw:?} is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot build worker pool: {e}")))
}

/// Runs a parsed command and returns its exit status.
pub fn run(cli: Cli) -> Result<u8, CliError> {
    configure_threads()?;
    let passed = match cli.command {
        Command::Simulate(a) => simulate::run(&a)?,
        Command::Verify(a) => verify::run(&a)?,
        Command::Distfn(a) => distfn::run(&a)?,
        Command::Ghdiff(a) => ghdiff::run(&a)?,
    };
    Ok(if passed { EXIT_PASS } else { EXIT_STAT_FAIL })
}
