//! Flags shared by every subcommand, and the validated run configuration.

use std::path::PathBuf;

use clap::{Args, ValueEnum};
use rscn_core::arith::MAX_RANK;
use rscn_core::{CheckConfig, SpinPair};

use crate::Failure;

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// Rank of the root system C_n.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Spin as `l` or `l1,l2` (long, short). Also selects `t = q^l` for
    /// `print`.
    #[arg(long)]
    pub l: Option<SpinPair>,
    /// Degree bound of the invariant basis.
    #[arg(long, default_value_t = 4)]
    pub deg: u32,
    /// Directory for cached operators.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Modular,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Modular => "modular",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Text,
    Json,
}

pub const DEFAULT_SPIN: SpinPair = SpinPair { l1: 1, l2: 1 };

impl Common {
    pub fn validate(&self) -> Result<(), Failure> {
        if !(1..=MAX_RANK).contains(&self.n) {
            return Err(Failure::Usage(format!("--n must lie in 1..={MAX_RANK}, got {}", self.n)));
        }
        Ok(())
    }

    pub fn spin(&self) -> SpinPair {
        self.l.unwrap_or(DEFAULT_SPIN)
    }

    pub fn check_config(&self) -> CheckConfig {
        CheckConfig { n: self.n, l: self.spin(), deg: self.deg }
    }
}
