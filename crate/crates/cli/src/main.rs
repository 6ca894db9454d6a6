//! `asymlat`: generate, label and analyse joint-spectrum CSV files.
//!
//! Exit codes: 0 on success, 2 for bad flags, config or input files, 3 when a
//! labelling or analysis algorithm fails (the message starts with the error
//! name, e.g. `NotStriped`). `ASYMLAT_THREADS` caps the worker threads
//! (unset or 0 picks the number of cores).

mod commands;
mod config;
mod error;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{CliError, Result};

#[derive(Parser, Debug)]
#[command(name = "asymlat", version, about, args_override_self = true)]
struct Cli {
    /// key = value file supplying defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate the spectrum of a preset chart.
    Gen(GenArgs),
    /// Label a spectrum file.
    Label(LabelArgs),
    /// Quantum rotation numbers of a (labelled) spectrum.
    Rotnum(RotnumArgs),
    /// Drift estimate from two nearby values of ħ.
    Drift(DriftArgs),
    /// Product of the transitions along a chain of windows.
    Monodromy(MonodromyArgs),
    /// Affine map between two labellings of the same points.
    Compare(CompareArgs),
}

#[derive(Args, Debug, Clone, Default)]
pub struct PresetArgs {
    /// identity, linear, shear_nonlinear, semitoric, pendulum_classical,
    /// basis_flipping or two_region.
    #[arg(long)]
    pub preset: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct GenArgs {
    #[command(flatten)]
    pub preset: PresetArgs,
    /// Comma-separated, strictly decreasing ħ values.
    #[arg(long)]
    pub hbar: Option<String>,
    /// `h1,n`: the values h1/j for j = 1..n.
    #[arg(long)]
    pub schedule: Option<String>,
    /// xmin,xmax,ymin,ymax (default: the preset's window).
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Noise radius in units of ħ².
    #[arg(long, default_value_t = 0.0)]
    pub perturb: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file (default: stdout).
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Also write the generator's labels as `hbar,x,y,n,m`.
    #[arg(long)]
    pub oracle: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Fixed,
    Semitoric,
    Sequence,
    Elliptic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Min,
    Max,
}

/// How to turn a spectrum into labellings.
#[derive(Args, Debug, Clone)]
pub struct LabelOpts {
    #[arg(long, value_enum, default_value = "fixed")]
    pub mode: Mode,
    /// Snapshot window (default: bounding box padded by half the largest ħ).
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Only points inside this window are labelled (default: the window less
    /// a tenth of its smaller side on each edge).
    #[arg(long, allow_hyphen_values = true)]
    pub inner: Option<String>,
    /// x,y near which the origin is chosen (default: the window centre).
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<String>,
    #[arg(long)]
    pub tie_tolerance: Option<f64>,
    /// Strip half-width for `--mode elliptic`, as a fraction of ħ.
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Which end of each strip the elliptic boundary is on.
    #[arg(long, value_enum, default_value = "min")]
    pub boundary: Side,
}

#[derive(Args, Debug, Clone)]
pub struct LabelArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub opts: LabelOpts,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
    /// Where `--mode sequence` writes its S_j matrices (default: next to
    /// `--out` as `<stem>.sequence.csv`; none when writing to stdout).
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct RotnumArgs {
    /// Labelled (`hbar,x,y,n,m`) or plain spectrum; plain input is labelled
    /// first with the labelling flags.
    #[arg(long, short)]
    pub input: PathBuf,
    #[command(flatten)]
    pub opts: LabelOpts,
    /// `preset:NAME[,key=value...]`: add classical comparison columns.
    #[arg(long)]
    pub chart: Option<String>,
    /// With `--chart`, report the fitted convergence order at this point.
    #[arg(long, allow_hyphen_values = true)]
    pub at: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct DriftArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// x,y
    #[arg(long, allow_hyphen_values = true)]
    pub c: String,
    #[arg(long, default_value_t = 3)]
    pub order: u32,
    /// Bound on 1/ħ2 − 1/ħ1 (default: 0.1/ħ1).
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct MonodromyArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    /// Windows separated by `;`, each xmin,xmax,ymin,ymax.
    #[arg(long, allow_hyphen_values = true)]
    pub windows: String,
    /// Which ħ of a multi-ħ file to use.
    #[arg(long)]
    pub hbar: Option<f64>,
    #[arg(long, default_value_t = asymlat_core::fixed::LABEL_TIE_TOLERANCE)]
    pub tie_tolerance: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub window: Option<String>,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CompareArgs {
    /// Labelled file.
    #[arg(long)]
    pub left: PathBuf,
    /// Labelled file over the same points.
    #[arg(long)]
    pub right: PathBuf,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

fn init_threads() -> Result<()> {
    let Ok(v) = std::env::var("ASYMLAT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("ASYMLAT_THREADS must be a count, got {v:?}")))?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::input(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run() -> Result<()> {
    let args = config::expand_config(std::env::args_os().collect())?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            // Help and version go to stdout with status 0; usage errors exit 2.
            e.exit();
        }
    };
    init_threads()?;
    match cli.command {
        Command::Gen(a) => commands::gen(&a),
        Command::Label(a) => commands::label(&a),
        Command::Rotnum(a) => commands::rotnum(&a),
        Command::Drift(a) => commands::drift(&a),
        Command::Monodromy(a) => commands::monodromy(&a),
        Command::Compare(a) => commands::compare(&a),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
