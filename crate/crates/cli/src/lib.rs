//! Command-line front end: build basis sets, verify documents, list the
//! zero-pattern constructions available for a space.

pub mod commands;
pub mod document;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ueb_core::special_basis::PhaseChoice;
use ueb_core::zero_pattern::Sec3Case;

pub use commands::run;
pub use document::BasisSetDocument;

pub const EXIT_CERTIFIED: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;
pub const EXIT_PARTITION: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    PartitionNotFound(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self::Invalid(msg.into())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::PartitionNotFound(_) => EXIT_PARTITION,
            Self::Invalid(_) | Self::Io { .. } => EXIT_INVALID,
        }
    }
}

impl From<ueb_core::Error> for CliError {
    fn from(e: ueb_core::Error) -> Self {
        match e {
            ueb_core::Error::PartitionNotFound { .. } => Self::PartitionNotFound(e.to_string()),
            other => Self::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "ueb", version, about = "Unextendible entangled bases with fixed Schmidt number")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a basis set and write it as JSON.
    #[command(subcommand)]
    Construct(Construct),
    /// Check a basis document. Exit 0 = certified, 1 = failed, 2 = inconclusive.
    Verify(VerifyArgs),
    /// List the zero-pattern constructions for a space.
    List(ListArgs),
}

#[derive(Debug, Subcommand)]
pub enum Construct {
    /// Zero-pattern construction.
    Sec3(Sec3Args),
    /// Lift a set to a larger space through a permutation decomposition.
    Lift(LiftArgs),
    /// UMEB from a partial Hadamard matrix.
    Hadamard(HadamardArgs),
}

#[derive(Debug, Args)]
pub struct Output {
    /// JSON output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the states as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Sec3Args {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub dprime: usize,
    #[arg(long)]
    pub case: Sec3Case,
    #[arg(long)]
    pub param: usize,
    /// fourier | tensor-hadamard
    #[arg(long, default_value = "fourier")]
    pub phases: PhaseChoice,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[arg(long)]
    pub inner: PathBuf,
    /// `auto` or a basis document holding a complete SV1B of the inner space.
    #[arg(long, default_value = "auto")]
    pub filler: String,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub q: usize,
    /// `cyclic` or a JSON file `{"p", "q", "perms": [0/1 matrices]}`.
    #[arg(long, default_value = "cyclic")]
    pub decomposition: String,
    #[arg(long, env = "UEB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct HadamardArgs {
    /// `builtin:h3x5` or a JSON file `{"m", "d", "rows": [[[re, im], ...], ...]}`.
    #[arg(long = "H", alias = "h-matrix")]
    pub h: String,
    #[arg(long)]
    pub dprime: usize,
    #[arg(long, default_value_t = 200)]
    pub attempts: usize,
    #[arg(long, default_value_t = 1000)]
    pub iters: usize,
    #[arg(long, env = "UEB_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, env = "UEB_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ListArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub dprime: usize,
}
