//! State specification: the inline `kind:args` grammar, the versioned JSON
//! file schema, canonicalization, and construction of the actual state.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use spinlab_core::{
    flat_peak_state, gaussian_state, DiagonalMixture, PureState, State, DEFAULT_MAX_N,
};

use crate::error::CliError;

/// Schema version accepted in state files (`"v": 1`).
pub const SCHEMA_VERSION: u32 = 1;

/// A parsed, serializable state description. The JSON form doubles as the
/// state-file schema and as the canonical `inputs.state` field of run
/// records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateSpec {
    pub v: u32,
    #[serde(flatten)]
    pub kind: SpecKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SpecKind {
    /// Number state |k⟩ of the n-particle sector.
    Fock { n: usize, k: usize },
    /// Real Gaussian number-amplitude profile centered at ℓ with width σ.
    Gauss { n: usize, l: usize, sigma: f64 },
    /// Flat off-peak amplitudes p/n with weight 1−p at the central |n/2⟩.
    Flatpeak { n: usize, p: f64 },
    /// Diagonal mixture over |0⟩…|n⟩ (n = probs.len() − 1).
    Mixture { probs: Vec<f64> },
    /// Pure superposition with complex amplitudes as [re, im] pairs.
    Amplitudes { amplitudes: Vec<[f64; 2]> },
}

impl StateSpec {
    /// Particle number of the sector the spec describes.
    pub fn n(&self) -> usize {
        match &self.kind {
            SpecKind::Fock { n, .. }
            | SpecKind::Gauss { n, .. }
            | SpecKind::Flatpeak { n, .. } => *n,
            SpecKind::Mixture { probs } => probs.len().saturating_sub(1),
            SpecKind::Amplitudes { amplitudes } => amplitudes.len().saturating_sub(1),
        }
    }
}

/// The constructed state, preserving the diagonal/pure distinction so
/// commands can pick closed forms where they exist.
#[derive(Debug, Clone)]
pub enum BuiltState {
    Pure(PureState),
    Mixture(DiagonalMixture),
}

impl BuiltState {
    pub fn n(&self) -> usize {
        match self {
            BuiltState::Pure(p) => p.n(),
            BuiltState::Mixture(m) => m.n(),
        }
    }

    pub fn to_state(&self) -> State {
        match self {
            BuiltState::Pure(p) => State::Pure(p.clone()),
            BuiltState::Mixture(m) => State::Mixed(m.to_density()),
        }
    }
}

/// The dimension cap: `SPINLAB_MAX_N` when set (must parse as an integer),
/// otherwise the library default.
pub fn max_n_from_env() -> Result<usize, CliError> {
    match std::env::var("SPINLAB_MAX_N") {
        Ok(text) => text.trim().parse::<usize>().map_err(|_| {
            CliError::usage(format!(
                "SPINLAB_MAX_N must be a non-negative integer, got '{text}'"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_MAX_N),
        Err(err) => Err(CliError::usage(format!("SPINLAB_MAX_N: {err}"))),
    }
}

/// One inline segment with its 1-based column in the original flag value,
/// so parse errors can point at the offending characters.
fn segments(text: &str, base_col: usize, sep: char) -> Vec<(&str, usize)> {
    let mut out = Vec::new();
    let mut col = base_col;
    for part in text.split(sep) {
        out.push((part, col));
        col += part.chars().count() + 1;
    }
    out
}

fn parse_usize(flag: &str, name: &str, (text, col): (&str, usize)) -> Result<usize, CliError> {
    text.trim().parse::<usize>().map_err(|_| {
        CliError::usage(format!(
            "{flag}: expected a non-negative integer for {name} at column {col}, got '{text}'"
        ))
    })
}

fn parse_f64(flag: &str, name: &str, (text, col): (&str, usize)) -> Result<f64, CliError> {
    text.trim().parse::<f64>().map_err(|_| {
        CliError::usage(format!(
            "{flag}: expected a number for {name} at column {col}, got '{text}'"
        ))
    })
}

fn expect_parts<'a>(
    flag: &str,
    kind: &str,
    shape: &str,
    parts: &'a [(&'a str, usize)],
    count: usize,
) -> Result<&'a [(&'a str, usize)], CliError> {
    if parts.len() != count {
        return Err(CliError::usage(format!(
            "{flag}: {kind} spec is '{shape}' ({count} argument(s)), got {} in this spec",
            parts.len()
        )));
    }
    Ok(parts)
}

/// Parse the inline grammar `kind:args`. Errors carry the flag name and the
/// 1-based column of the offending segment.
pub fn parse_inline(flag: &str, text: &str) -> Result<StateSpec, CliError> {
    let (kind, rest, args_col) = match text.split_once(':') {
        Some((k, r)) => (k, r, k.chars().count() + 2),
        None => (text, "", text.chars().count() + 2),
    };
    let kind = match kind {
        "fock" => {
            let parts = segments(rest, args_col, ':');
            let parts = expect_parts(flag, "fock", "fock:n:k", &parts, 2)?;
            SpecKind::Fock {
                n: parse_usize(flag, "n", parts[0])?,
                k: parse_usize(flag, "k", parts[1])?,
            }
        }
        "gauss" => {
            let parts = segments(rest, args_col, ':');
            let parts = expect_parts(flag, "gauss", "gauss:n:l:sigma", &parts, 3)?;
            SpecKind::Gauss {
                n: parse_usize(flag, "n", parts[0])?,
                l: parse_usize(flag, "l", parts[1])?,
                sigma: parse_f64(flag, "sigma", parts[2])?,
            }
        }
        "flatpeak" => {
            let parts = segments(rest, args_col, ':');
            let parts = expect_parts(flag, "flatpeak", "flatpeak:n:p", &parts, 2)?;
            SpecKind::Flatpeak {
                n: parse_usize(flag, "n", parts[0])?,
                p: parse_f64(flag, "p", parts[1])?,
            }
        }
        "mixture" => {
            if rest.is_empty() {
                return Err(CliError::usage(format!(
                    "{flag}: mixture spec is 'mixture:p0,p1,...' and needs at least one probability"
                )));
            }
            let probs = segments(rest, args_col, ',')
                .into_iter()
                .map(|seg| parse_f64(flag, "probability", seg))
                .collect::<Result<Vec<f64>, _>>()?;
            SpecKind::Mixture { probs }
        }
        "amplitudes" => {
            if rest.is_empty() {
                return Err(CliError::usage(format!(
                    "{flag}: amplitudes spec is 'amplitudes:re,im;re,im;...' and needs at least one pair"
                )));
            }
            let mut amplitudes = Vec::new();
            for (pair, col) in segments(rest, args_col, ';') {
                let fields = segments(pair, col, ',');
                let fields =
                    expect_parts(flag, "amplitudes", "re,im per ';'-separated pair", &fields, 2)?;
                amplitudes.push([
                    parse_f64(flag, "re", fields[0])?,
                    parse_f64(flag, "im", fields[1])?,
                ]);
            }
            SpecKind::Amplitudes { amplitudes }
        }
        other => {
            return Err(CliError::usage(format!(
                "{flag}: unknown state kind '{other}' (expected fock, gauss, flatpeak, mixture, or amplitudes)"
            )))
        }
    };
    Ok(StateSpec {
        v: SCHEMA_VERSION,
        kind,
    })
}

/// Parse a JSON state file. serde's errors already carry line and column.
pub fn parse_file(path: &Path) -> Result<StateSpec, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        CliError::usage(format!("--state-file: cannot read {}: {e}", path.display()))
    })?;
    let spec: StateSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("--state-file {}: {e}", path.display())))?;
    if spec.v != SCHEMA_VERSION {
        return Err(CliError::usage(format!(
            "--state-file {}: unsupported schema version {}, expected {SCHEMA_VERSION}",
            path.display(),
            spec.v
        )));
    }
    Ok(spec)
}

/// Resolve `--state`/`--state-file` (exactly one is present; clap enforces
/// the group).
pub fn resolve(state: &Option<String>, state_file: &Option<std::path::PathBuf>) -> Result<StateSpec, CliError> {
    match (state, state_file) {
        (Some(text), None) => parse_inline("--state", text),
        (None, Some(path)) => parse_file(path),
        _ => Err(CliError::usage(
            "exactly one of --state or --state-file is required",
        )),
    }
}

/// Construct the state, enforcing the dimension cap, and return it together
/// with the canonicalized spec (normalized probabilities/amplitudes), which
/// is what run records embed.
pub fn build(spec: &StateSpec, max_n: usize) -> Result<(BuiltState, StateSpec), CliError> {
    let n = spec.n();
    if n > max_n {
        return Err(CliError::usage(format!(
            "state has n = {n}, above the dimension cap {max_n} (set SPINLAB_MAX_N to raise it)"
        )));
    }
    match &spec.kind {
        SpecKind::Fock { n, k } => {
            let state = PureState::number_state(*n, *k)?;
            Ok((BuiltState::Pure(state), spec.clone()))
        }
        SpecKind::Gauss { n, l, sigma } => {
            let state = gaussian_state(*n, *l, *sigma)?;
            Ok((BuiltState::Pure(state), spec.clone()))
        }
        SpecKind::Flatpeak { n, p } => {
            let state = flat_peak_state(*n, *p)?;
            Ok((BuiltState::Pure(state), spec.clone()))
        }
        SpecKind::Mixture { probs } => {
            let (mix, deviation) = DiagonalMixture::normalized(probs)?;
            if deviation > crate::axes::NORM_WARNING_THRESHOLD {
                eprintln!(
                    "warning: mixture probabilities deviate from unit sum by {deviation:.3e}; normalized"
                );
            }
            let canonical = StateSpec {
                v: SCHEMA_VERSION,
                kind: SpecKind::Mixture {
                    probs: mix.probs().to_vec(),
                },
            };
            Ok((BuiltState::Mixture(mix), canonical))
        }
        SpecKind::Amplitudes { amplitudes } => {
            if amplitudes.is_empty() {
                return Err(CliError::usage(
                    "amplitudes spec needs at least one [re, im] pair",
                ));
            }
            let amps: Vec<Complex64> = amplitudes
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect();
            let raw_norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if (raw_norm - 1.0).abs() > crate::axes::NORM_WARNING_THRESHOLD {
                eprintln!(
                    "warning: amplitudes deviate from unit norm by {:.3e}; normalized",
                    (raw_norm - 1.0).abs()
                );
            }
            let state = PureState::superposition(amps.len() - 1, &amps)?;
            let canonical = StateSpec {
                v: SCHEMA_VERSION,
                kind: SpecKind::Amplitudes {
                    amplitudes: state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
                },
            };
            Ok((BuiltState::Pure(state), canonical))
        }
    }
}
