//! Command-line front end.
//!
//! Every option can come from a flag, from a `key=value` config file given
//! with `--config`, or from its default, in that order of precedence. The
//! seed additionally falls back to `LATENTGEOM_SEED` before its default.

mod commands;
mod config;
pub mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

pub use config::{Formats, RunConfig};

use crate::error::Error;

#[derive(Debug, Parser)]
#[command(
    name = "latentgeom",
    version,
    about = "Latent-space priors, interpolation and Monte-Carlo verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Draw latent vectors from a prior
    Sample,
    /// Closed-form and Monte-Carlo KL between endpoint and midpoint laws
    Kl,
    /// Endpoint, midpoint and KL Monte-Carlo checks
    McVerify,
    /// Norm profiles along paths, or discriminator profiles with a checkpoint
    Traverse,
    /// Train the toy GAN
    TrainToy,
    /// Latent algebra score on attribute groups
    Las,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample => "sample",
            Command::Kl => "kl",
            Command::McVerify => "mc-verify",
            Command::Traverse => "traverse",
            Command::TrainToy => "train-toy",
            Command::Las => "las",
        }
    }
}

/// Raw options; every field is optional so config-file values can fill gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Options {
    /// Prior family: normal or gamma
    #[arg(long, global = true)]
    pub prior: Option<String>,
    /// Latent dimension
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Comma-separated latent dimensions (kl sweep)
    #[arg(long, global = true)]
    pub dims: Option<String>,
    /// Per-coordinate standard deviation of the normal prior
    #[arg(long, global = true)]
    pub sigma: Option<f64>,
    /// Gamma scale of the squared norm under the gamma prior
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Number of samples
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of endpoint pairs / trajectories
    #[arg(long, global = true)]
    pub pairs: Option<usize>,
    /// Training steps
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Interpolation grid steps
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Interpolation scheme: linear or slerp
    #[arg(long, global = true)]
    pub scheme: Option<String>,
    /// Toy GAN checkpoint (JSON)
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output formats, comma-separated subset of csv,json,svg
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// key=value config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Rescale the second endpoint to the first endpoint's norm (traverse)
    #[arg(long, global = true)]
    pub equal_norm: bool,
    /// Number of binary attributes (las)
    #[arg(long, global = true)]
    pub attributes: Option<usize>,
    /// Vectors per attribute group (las)
    #[arg(long, global = true)]
    pub per_group: Option<usize>,
    /// Noise level of the synthetic attribute model (las)
    #[arg(long, global = true)]
    pub noise: Option<f64>,
    /// CSV of grouped latent vectors to score instead of synthetic ones (las)
    #[arg(long, global = true)]
    pub vectors: Option<PathBuf>,
    /// Normalize each attribute pair by its own mean squared norm (las)
    #[arg(long, global = true)]
    pub per_pair: bool,
}

/// What a successful run concluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Inconsistent,
}

pub const EXIT_INCONSISTENT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO: u8 = 3;

pub fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Io { .. } => EXIT_IO,
        Error::InvalidConfig(_)
        | Error::InvalidParameter(_)
        | Error::CheckpointMissing(_)
        | Error::Json(_)
        | Error::MissingGroup(_)
        | Error::DimensionMismatch { .. } => EXIT_USAGE,
        _ => EXIT_INCONSISTENT,
    }
}

/// Run a parsed invocation.
pub fn run(cli: Cli) -> crate::Result<Outcome> {
    let cfg = RunConfig::resolve(cli.command, &cli.options, |k| std::env::var(k).ok())?;
    commands::dispatch(cli.command, &cfg)
}

/// Binary entry point: parse, run, map to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(Outcome::Success) => ExitCode::SUCCESS,
        Ok(Outcome::Inconsistent) => ExitCode::from(EXIT_INCONSISTENT),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
