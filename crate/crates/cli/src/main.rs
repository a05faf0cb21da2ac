//! `cbpsk`: capacity, mutual-information and cocktail-BPSK rate experiments.

mod commands;
mod config;
mod manifest;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cocktail_core::{AxisMode, DetectionMode, Grid, Scheme};
use thiserror::Error;

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERIC: u8 = 3;
pub const EXIT_IO: u8 = 4;

const GRID_HELP: &str = "SNR grid as start:stop:lin|log:count, e.g. 0.001:100:log:60 (linear SNR, endpoints included)";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

impl From<cocktail_core::error::Error> for CliError {
    fn from(e: cocktail_core::error::Error) -> Self {
        if e.is_usage() {
            CliError::Usage(e.to_string())
        } else {
            CliError::Numeric(e.to_string())
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cbpsk", version, about = "Rate curves for conventional alphabets and cocktail BPSK")]
#[command(after_help = "Exit codes: 0 success, 2 usage error, 3 numeric failure or failed --check, 4 I/O error.\n\
Config precedence: command-line flags > --config file > built-in defaults.")]
pub struct Cli {
    /// TOML file supplying defaults for any flag not given on the command line.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Directory for output files (default: $CBPSK_OUT_DIR, else ./out).
    #[arg(long, global = true, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Gaussian-input capacity log2(1+SNR) and its low-SNR line SNR·log2(e).
    Capacity(CapacityArgs),
    /// Mutual information of BPSK, 4ASK, QPSK and 8PSK over AWGN.
    Mi(MiArgs),
    /// Cocktail BPSK rates and their gain over capacity.
    Cocktail(CocktailArgs),
    /// Monte Carlo simulation of the two-stage cocktail BPSK link.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Linear SNR value; repeat for several rows.
    #[arg(long, value_name = "SNR", conflicts_with = "grid")]
    pub snr: Vec<f64>,

    #[arg(long, help = GRID_HELP, value_parser = parse_grid)]
    pub grid: Option<Grid>,

    /// Write CSV here (plus a manifest) instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MiArgs {
    /// Alphabets to evaluate: bpsk, 4ask, qpsk, 8psk (repeat or comma-separate).
    #[arg(long = "scheme", value_name = "NAME", value_delimiter = ',', value_parser = parse_alphabet)]
    pub schemes: Vec<Scheme>,

    #[arg(long, help = GRID_HELP, value_parser = parse_grid)]
    pub grid: Option<Grid>,

    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,

    /// Also emit the Gaussian capacity curve.
    #[arg(long)]
    pub capacity: bool,

    /// Verify QPSK(SNR) = 2·BPSK(SNR/2) on the grid; exit 3 if it fails.
    #[arg(long)]
    pub check: bool,

    /// Output CSV (default: <out-dir>/fig1.csv).
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CocktailArgs {
    /// Amplitude ratio alpha/beta (> 1); repeat for several curves.
    #[arg(long = "ratio", value_name = "R", value_delimiter = ',')]
    pub ratios: Vec<f64>,

    /// Probability of the first case (x1 = x2).
    #[arg(long)]
    pub eta: Option<f64>,

    #[arg(long, help = GRID_HELP, value_parser = parse_grid)]
    pub grid: Option<Grid>,

    #[arg(long, value_enum)]
    pub axis: Option<AxisArg>,

    /// Also render fig2.svg and fig3.svg.
    #[arg(long)]
    pub plot: bool,

    /// Print the low-SNR Eb/N0 limit and its gap to -1.59 dB instead of sweeping.
    #[arg(long)]
    pub report_limit: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Case-one amplitude.
    #[arg(long, conflicts_with_all = ["ratio", "snr"])]
    pub alpha: Option<f64>,

    /// Second-stream amplitude.
    #[arg(long, conflicts_with_all = ["ratio", "snr"])]
    pub beta: Option<f64>,

    /// Alternative to --alpha/--beta: amplitude ratio, scaled to --snr.
    #[arg(long, requires = "snr")]
    pub ratio: Option<f64>,

    /// Input SNR E_in/noise_var used with --ratio.
    #[arg(long, requires = "ratio")]
    pub snr: Option<f64>,

    #[arg(long)]
    pub eta: Option<f64>,

    /// Total complex noise variance.
    #[arg(long)]
    pub noise_var: Option<f64>,

    /// Number of symbol pairs.
    #[arg(long)]
    pub n: Option<u64>,

    #[arg(long)]
    pub seed: Option<u64>,

    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,

    /// Write the JSON report here (plus a manifest) instead of standard output.
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    /// Linear SNR.
    Snr,
    /// Eb/N0 in dB.
    Ebn0,
}

impl From<AxisArg> for AxisMode {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Snr => AxisMode::LinearSnr,
            AxisArg::Ebn0 => AxisMode::EbN0Db,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Decision-directed cancellation.
    Dd,
    /// Cancellation with the transmitted first symbol.
    Genie,
}

impl From<ModeArg> for DetectionMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Dd => DetectionMode::DecisionDirected,
            ModeArg::Genie => DetectionMode::GenieAided,
        }
    }
}

pub const ALPHABETS: [Scheme; 4] = [Scheme::Bpsk, Scheme::Ask4, Scheme::Qpsk, Scheme::Psk8];

fn parse_grid(s: &str) -> Result<Grid, String> {
    s.parse().map_err(|e: cocktail_core::error::Error| e.to_string())
}

pub fn parse_alphabet(s: &str) -> Result<Scheme, String> {
    ALPHABETS
        .into_iter()
        .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
        .ok_or_else(|| {
            let names: Vec<_> = ALPHABETS.iter().map(|a| a.name()).collect();
            format!("unknown scheme '{s}'; valid schemes: {}", names.join(", "))
        })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
