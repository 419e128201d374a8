use serde::{Deserialize, Serialize};

use super::channels::epr_report;
use crate::config::Run;
use crate::error::CliError;
use crate::output::Output;

#[derive(Debug, clap::Args, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Flags {
    /// Squeezing of the two inputs.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    /// Fock truncation per mode for the commutator check.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct Params {
    epsilon: f64,
    dim: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            epsilon: 0.1,
            dim: 10,
        }
    }
}

pub fn run(p: &Params, _run: &Run, out: &mut Output) -> Result<(), CliError> {
    if p.dim < 3 {
        return Err(CliError::Config(format!(
            "dim must be at least 3, got {}",
            p.dim
        )));
    }
    epr_report(p.epsilon, p.dim, out)
}
