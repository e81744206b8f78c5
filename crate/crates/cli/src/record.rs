//! The reproducibility record that every JSON-emitting command prints: one
//! object carrying the canonicalized inputs, the outputs, the toolkit
//! version, and — for stochastic commands — the seed that reproduces the
//! run byte for byte.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    /// Subcommand name.
    pub command: String,
    /// Canonicalized state spec and flags as actually used.
    pub inputs: Value,
    /// Command result object.
    pub outputs: Value,
    /// Toolkit version string.
    pub versions: String,
    /// Echoed seed; present exactly for stochastic commands.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn version_string() -> String {
    format!("spinlab {}", env!("CARGO_PKG_VERSION"))
}

/// Print the record as a single pretty-printed JSON object on standard
/// output.
pub fn emit(record: &RunRecord) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(record)
        .map_err(|e| CliError::numeric(format!("cannot serialize the run record: {e}")))?;
    println!("{text}");
    Ok(())
}

/// A fresh 64-bit seed from operating-system entropy, for stochastic
/// commands invoked without `--seed`.
pub fn entropy_seed() -> u64 {
    use std::hash::{BuildHasher, Hasher, RandomState};
    RandomState::new().build_hasher().finish()
}
