//! Means, second moments, and variances of collective spin components.
//!
//! Two independent evaluation routes are provided and cross-checked in
//! tests:
//!
//! 1. a **matrix oracle** — `⟨A⟩ = Tr(ρA)` evaluated on the explicitly built
//!    operator, valid for arbitrary states; and
//! 2. **closed forms** for number states and number-diagonal mixtures, which
//!    depend on the direction n⃗ only through `nz` (azimuthal symmetry about
//!    the mode-population axis) and on the mixture only through the
//!    occupation moments `⟨k⟩`, `⟨k²⟩`:
//!
//! ```text
//! ⟨J_n⃗⟩        = nz (2⟨k⟩ − N)/2
//! ⟨J_n⃗²⟩       = [N(1+2⟨k⟩) − 2⟨k²⟩]/4 + nz² [N(N−1) − 6N⟨k⟩ + 6⟨k²⟩]/4
//! Δ²J_n⃗        = [N(1+2⟨k⟩) − 2⟨k²⟩]/4 + nz² [6⟨k²⟩ − 2⟨k⟩(N+2⟨k⟩) − N]/4
//! ```
//!
//! which reduce for a number state `|k⟩` to `Δ²J_n⃗ = (1−nz²)(N+2k(N−k))/4`.
//! A separable number state can therefore exceed the distinguishable-qubit
//! witness level `N/4` whenever `nz² < 2k(N−k)/(N+2k(N−k))`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{CollectiveSpinOp, DiagonalMixture, Direction, State};

/// Tolerance rule used when comparing moment routes: absolute for small
/// values, relative once values grow (second moments grow as n²).
pub fn moment_tolerance(value: f64) -> f64 {
    f64::max(1e-10, 1e-10 * value.abs())
}

/// Mean, second moment, and variance of one spin component on one state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    /// ⟨J⟩ (dimensionless spin units, ħ = 1).
    pub mean: f64,
    /// ⟨J²⟩.
    pub second_moment: f64,
    /// Δ²J = ⟨J²⟩ − ⟨J⟩².
    pub variance: f64,
}

impl MomentReport {
    fn from_mean_and_second(mean: f64, second_moment: f64) -> Self {
        MomentReport {
            mean,
            second_moment,
            variance: second_moment - mean * mean,
        }
    }
}

/// Occupation-number moments of a diagonal mixture: `⟨k⟩`, `⟨k²⟩`, `Δ²k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MixtureMoments {
    pub mean_k: f64,
    pub second_k: f64,
    pub var_k: f64,
}

/// Occupation moments of `π` by direct summation.
pub fn k_moments(mix: &DiagonalMixture) -> MixtureMoments {
    let mut mean_k = 0.0;
    let mut second_k = 0.0;
    for (k, &p) in mix.probs().iter().enumerate() {
        mean_k += k as f64 * p;
        second_k += (k * k) as f64 * p;
    }
    MixtureMoments {
        mean_k,
        second_k,
        var_k: second_k - mean_k * mean_k,
    }
}

fn check_same_sector(state: &State, op: &CollectiveSpinOp) -> Result<()> {
    if state.n() != op.n() {
        return Err(Error::DimensionMismatch {
            expected: op.n() + 1,
            found: state.n() + 1,
        });
    }
    Ok(())
}

/// Matrix-oracle expectation `⟨J⟩ = Tr(ρJ)` (real part; the imaginary part
/// of the trace is round-off for Hermitian `J` and is asserted `< 1e-10`).
pub fn expectation(state: &State, op: &CollectiveSpinOp) -> Result<f64> {
    Ok(spin_moments(state, op)?.mean)
}

/// Matrix-oracle variance `Δ²J = ⟨J²⟩ − ⟨J⟩²`.
pub fn variance(state: &State, op: &CollectiveSpinOp) -> Result<f64> {
    Ok(spin_moments(state, op)?.variance)
}

/// Matrix-oracle mean, second moment, and variance in one pass.
///
/// Pure states use `⟨J⟩ = ψ†(Jψ)`, `⟨J²⟩ = ‖Jψ‖²`; mixed states use
/// `⟨J⟩ = Tr(Jρ)`, `⟨J²⟩ = Tr((Jρ)J)` — no explicit `J²` is formed.
pub fn spin_moments(state: &State, op: &CollectiveSpinOp) -> Result<MomentReport> {
    check_same_sector(state, op)?;
    let j = op.matrix();
    let (mean, second) = match state {
        State::Pure(psi) => {
            let jpsi = j * psi.amplitudes();
            let mean = psi.amplitudes().dotc(&jpsi);
            debug_assert!(mean.im.abs() < 1e-10, "⟨J⟩ imaginary part {}", mean.im);
            (mean.re, jpsi.norm_squared())
        }
        State::Mixed(rho) => {
            let jrho = j * rho.matrix();
            let mean = jrho.trace();
            debug_assert!(mean.im.abs() < 1e-10, "⟨J⟩ imaginary part {}", mean.im);
            // Tr((Jρ)J) = Σ_ij (Jρ)_ij J_ji, real for Hermitian ρ, J.
            let mut second = 0.0;
            for i in 0..jrho.nrows() {
                for l in 0..jrho.ncols() {
                    second += (jrho[(i, l)] * j[(l, i)]).re;
                }
            }
            (mean.re, second)
        }
    };
    Ok(MomentReport::from_mean_and_second(mean, second))
}

/// Closed-form moments of the number state `|k⟩` along n⃗.
pub fn number_state_moments(n: usize, k: usize, dir: &Direction) -> Result<MomentReport> {
    if k > n {
        return Err(Error::domain(format!(
            "number state |k={k}⟩ does not exist in the n={n} sector"
        )));
    }
    let nf = n as f64;
    let kf = k as f64;
    let nz2 = dir.z() * dir.z();
    let spread = nf + 2.0 * kf * (nf - kf);
    let mean = dir.z() * (2.0 * kf - nf) / 2.0;
    let second = spread / 4.0 + nz2 * (nf * (nf - 1.0) - 6.0 * kf * (nf - kf)) / 4.0;
    let variance = (1.0 - nz2) * spread / 4.0;
    Ok(MomentReport {
        mean,
        second_moment: second,
        variance,
    })
}

/// Closed-form moments of a number-diagonal mixture along n⃗, from `⟨k⟩` and
/// `⟨k²⟩` alone.
pub fn mixture_spin_moments(mix: &DiagonalMixture, dir: &Direction) -> MomentReport {
    let MixtureMoments {
        mean_k, second_k, ..
    } = k_moments(mix);
    let nf = mix.n() as f64;
    let nz2 = dir.z() * dir.z();
    let isotropic = (nf * (1.0 + 2.0 * mean_k) - 2.0 * second_k) / 4.0;
    let mean = dir.z() * (2.0 * mean_k - nf) / 2.0;
    let second = isotropic + nz2 * (nf * (nf - 1.0) - 6.0 * nf * mean_k + 6.0 * second_k) / 4.0;
    let variance = isotropic
        + nz2 * (6.0 * second_k - 2.0 * mean_k * (nf + 2.0 * mean_k) - nf) / 4.0;
    MomentReport {
        mean,
        second_moment: second,
        variance,
    }
}

/// The `nz²` level below which the number state `|k⟩` exceeds the
/// distinguishable-qubit variance witness `N/4`: `2k(N−k)/(N+2k(N−k))`.
pub fn witness_exceedance_nz2(n: usize, k: usize) -> Result<f64> {
    if k > n {
        return Err(Error::domain(format!(
            "number state |k={k}⟩ does not exist in the n={n} sector"
        )));
    }
    let nf = n as f64;
    let kf = k as f64;
    let a = 2.0 * kf * (nf - kf);
    Ok(a / (nf + a))
}
