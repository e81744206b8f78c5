//! Direction and frame parsing. Raw component lists are normalized on
//! parse, with a warning on standard error when the norm deviates from 1 by
//! more than [`NORM_WARNING_THRESHOLD`]. Frames must be orthonormal as
//! given — a skewed frame is rejected, never silently repaired.

use spinlab_core::{Direction, OrthogonalTriplet};

use crate::error::CliError;

/// Norm deviation above which normalization is reported on standard error.
pub const NORM_WARNING_THRESHOLD: f64 = 1e-6;

fn parse_number(flag: &str, token: &str) -> Result<f64, CliError> {
    token
        .trim()
        .parse::<f64>()
        .map_err(|_| CliError::usage(format!("{flag}: '{token}' is not a number")))
}

/// Exactly three comma-separated numbers.
pub fn parse_components(flag: &str, text: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "{flag}: expected three comma-separated components, got {} in '{text}'",
            parts.len()
        )));
    }
    Ok([
        parse_number(flag, parts[0])?,
        parse_number(flag, parts[1])?,
        parse_number(flag, parts[2])?,
    ])
}

/// A direction from raw components, normalized (warning above the
/// threshold).
pub fn parse_direction(flag: &str, text: &str) -> Result<Direction, CliError> {
    let [x, y, z] = parse_components(flag, text)?;
    let (dir, deviation) =
        Direction::normalized(x, y, z).map_err(|e| CliError::usage(format!("{flag}: {e}")))?;
    if deviation > NORM_WARNING_THRESHOLD {
        eprintln!(
            "warning: {flag} components '{text}' deviate from unit norm by {deviation:.3e}; normalized"
        );
    }
    Ok(dir)
}

fn axis_by_name(flag: &str, token: &str) -> Result<Direction, CliError> {
    Ok(match token.trim() {
        "x" => Direction::x_axis(),
        "y" => Direction::y_axis(),
        "z" => Direction::z_axis(),
        "-x" => Direction::x_axis().neg(),
        "-y" => Direction::y_axis().neg(),
        "-z" => Direction::z_axis().neg(),
        other => {
            return Err(CliError::usage(format!(
                "{flag}: '{other}' is not an axis name (expected x, y, or z with an optional minus)"
            )))
        }
    })
}

/// A frame (n⃗₁, n⃗₂, n⃗₃) in one of three forms:
///
/// - `auto-z` — a fixed frame whose third axis is ẑ;
/// - named axes, e.g. `z,y,x` or `-z,y,x`;
/// - numeric, three `;`-separated component triples, e.g.
///   `0,0,1;0,1,0;1,0,0`.
///
/// Numeric axes are normalized individually (with the same warning rule as
/// directions) but pairwise orthogonality is *required* of the input.
pub fn parse_triplet(flag: &str, text: &str) -> Result<OrthogonalTriplet, CliError> {
    let text = text.trim();
    if text == "auto-z" {
        return Ok(OrthogonalTriplet::completing_n3(Direction::z_axis()));
    }
    if text.contains(';') {
        let parts: Vec<&str> = text.split(';').collect();
        if parts.len() != 3 {
            return Err(CliError::usage(format!(
                "{flag}: a numeric frame needs three ';'-separated component triples, got {}",
                parts.len()
            )));
        }
        let n1 = parse_direction(flag, parts[0])?;
        let n2 = parse_direction(flag, parts[1])?;
        let n3 = parse_direction(flag, parts[2])?;
        return OrthogonalTriplet::new(n1, n2, n3)
            .map_err(|e| CliError::usage(format!("{flag}: {e}")));
    }
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(CliError::usage(format!(
            "{flag}: expected 'auto-z', three axis names, or three ';'-separated triples, got '{text}'"
        )));
    }
    let n1 = axis_by_name(flag, parts[0])?;
    let n2 = axis_by_name(flag, parts[1])?;
    let n3 = axis_by_name(flag, parts[2])?;
    OrthogonalTriplet::new(n1, n2, n3).map_err(|e| CliError::usage(format!("{flag}: {e}")))
}
