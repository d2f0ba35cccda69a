//! Command-line flags and the JSON config file that overrides them.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "anosov", version, about = "Invariants and inequivalence certificates for the flows Z^m")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the plug boundary data as JSON.
    Plug(Flags),
    /// Print the handedness table and old-fan sizes.
    Invariants(Flags),
    /// Run the distinguisher and write one certificate per pair.
    Distinguish(Flags),
    /// Render the model foliations of one torus as SVG.
    Plot(Flags),
    /// Emit the lozenge adjacency of an old fan, optionally end-extended.
    #[command(name = "orbit-space")]
    OrbitSpace(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Plug(f)
            | Command::Invariants(f)
            | Command::Distinguish(f)
            | Command::Plot(f)
            | Command::OrbitSpace(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand; each reads the ones it needs.
///
/// The config file has the same keys (snake_case) plus `pairs`.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    #[arg(long)]
    pub n: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<i64>,
    #[arg(long)]
    pub m1: Option<u32>,
    #[arg(long)]
    pub m2: Option<u32>,
    /// Single flow index for `plot` and `orbit-space`.
    #[arg(long)]
    pub m: Option<u32>,
    /// Torus index for `plot` and `orbit-space`.
    #[arg(long)]
    pub i: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Expansion factor of the affine crossing model.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Noncompact leaves drawn per Reeb annulus.
    #[arg(long)]
    pub leaves: Option<usize>,
    /// Samples per drawn leaf.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    #[serde(default)]
    pub u_end: bool,
    #[arg(long)]
    #[serde(default)]
    pub s_end: bool,
    /// Explicit `(m1, m2)` pairs; config file only.
    #[arg(skip)]
    pub pairs: Option<Vec<(u32, u32)>>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

/// Flags after applying the config file.
pub type RunConfig = Flags;

impl Flags {
    /// Values present in `file` replace the command-line ones.
    pub fn overridden_by(self, file: Flags) -> Flags {
        Flags {
            n: file.n.or(self.n),
            k: file.k.or(self.k),
            m1: file.m1.or(self.m1),
            m2: file.m2.or(self.m2),
            m: file.m.or(self.m),
            i: file.i.or(self.i),
            out: file.out.or(self.out),
            mu: file.mu.or(self.mu),
            format: file.format.or(self.format),
            leaves: file.leaves.or(self.leaves),
            samples: file.samples.or(self.samples),
            u_end: file.u_end || self.u_end,
            s_end: file.s_end || self.s_end,
            pairs: file.pairs.or(self.pairs),
            config: self.config,
        }
    }

    pub fn resolve(self) -> Result<RunConfig, CliError> {
        match self.config.clone() {
            Some(path) => Ok(self.overridden_by(load(&path)?)),
            None => Ok(self),
        }
    }

    pub fn require_n(&self) -> Result<u32, CliError> {
        match self.n {
            Some(0) => Err(CliError::Usage("--n must be at least 1".into())),
            Some(n) => Ok(n),
            None => Err(CliError::Usage("--n is required".into())),
        }
    }

    pub fn require_k(&self) -> Result<i64, CliError> {
        match self.k {
            Some(0) => Err(CliError::Usage("--k must be nonzero".into())),
            Some(k) => Ok(k),
            None => Err(CliError::Usage("--k is required".into())),
        }
    }

    pub fn require_i(&self) -> Result<u32, CliError> {
        self.i.ok_or_else(|| CliError::Usage("--i is required".into()))
    }
}

fn load(path: &Path) -> Result<Flags, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.to_path_buf(), e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
}
