//! Collective-variance entanglement inequalities and spin-squeezing
//! parameters.
//!
//! # The four inequalities
//!
//! For `N` distinguishable qubits and any orthonormal frame
//! (n⃗₁, n⃗₂, n⃗₃), every separable state satisfies four collective-variance
//! inequalities, so a violation of any of them detects entanglement.
//! [`toth_check`] evaluates them as signed residuals, normalized so that
//! each check is a single sign test:
//!
//! ```text
//! (1)  lhs1 = ⟨J₁²⟩+⟨J₂²⟩+⟨J₃²⟩ − N(N+2)/4                 ≤ 0
//! (2)  lhs2 = Δ²J₁+Δ²J₂+Δ²J₃ − N/2                          ≥ 0
//! (3)  lhs3 = ⟨J₁²⟩+⟨J₂²⟩ − N/2 − (N−1)·Δ²J₃               ≤ 0
//! (4)  lhs4 = (N−1)(Δ²J₁+Δ²J₂) − ⟨J₃²⟩ − N(N−2)/4          ≥ 0
//! ```
//!
//! On the bosonic sector, (1) saturates identically (Casimir), and of the
//! remaining three only (3) can be violated by a number-diagonal state —
//! with the third axis tilted so that `n₃z²` exceeds a threshold that
//! [`ineq3_threshold`] computes in closed form. States indistinguishable
//! from classical mixtures by all four checks can thus still be "formally
//! entangled" in first quantization: the violation of (3) by number states
//! is a statistics effect.
//!
//! # Squeezing parameters
//!
//! [`xi_parameters`] evaluates, on a frame (n⃗₁, n⃗₂, n⃗₃),
//!
//! ```text
//! ξ²_W = N·Δ²J_{n1} / ⟨J_{n3}⟩²                 (phase-estimation gain)
//! ξ²_S = N·Δ²J_{n1} / (⟨J_{n2}⟩² + ⟨J_{n3}⟩²)   (entanglement witness)
//! ```
//!
//! with `ξ²_W ≥ ξ²_S` whenever both are defined, and `ξ²_S ≥ 1` for every
//! number-diagonal mixture. Vanishing denominators (e.g. any number state
//! with n⃗₁ = ẑ, where the parameters are genuinely undefined 0/0 forms) are
//! reported as [`XiValue::Undefined`] — an honest value, never an error and
//! never NaN.
//!
//! The module also builds the two pure-state families that probe the
//! behavior of ξ²_W near its undefined points: Gaussian-profile
//! superpositions ([`gaussian_state`]), whose ξ²_W stays small as they
//! approach a number state, and flat-plus-peak superpositions
//! ([`flat_peak_state`]), whose ξ²_W approaches `N(N+1)/12 > 1` while the
//! state converges to the very same number state — the two limits bracket a
//! genuine discontinuity.

use num_complex::Complex64;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fock::{collective_spin, DiagonalMixture, OrthogonalTriplet, PureState, State};
use crate::moments::{k_moments, spin_moments};

/// Slack applied to the inequality sign tests (absolute).
pub const DETECTION_TOLERANCE: f64 = 1e-9;

/// Denominators below this are reported as undefined ξ² values.
pub const XI_DENOMINATOR_FLOOR: f64 = 1e-14;

/// Signed residuals of the four collective-variance inequalities, plus the
/// corresponding sign tests at [`DETECTION_TOLERANCE`] slack. `satisfied_*`
/// false means the state is detected as entangled by that inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TothReport {
    pub lhs1: f64,
    pub lhs2: f64,
    pub lhs3: f64,
    pub lhs4: f64,
    pub satisfied1: bool,
    pub satisfied2: bool,
    pub satisfied3: bool,
    pub satisfied4: bool,
}

impl TothReport {
    /// True when no inequality detects entanglement.
    pub fn all_satisfied(&self) -> bool {
        self.satisfied1 && self.satisfied2 && self.satisfied3 && self.satisfied4
    }
}

/// Evaluate the four inequalities on an arbitrary state via matrix-oracle
/// moments (no closed forms), so the report is valid beyond the
/// number-diagonal family.
pub fn toth_check(state: &State, triplet: &OrthogonalTriplet) -> Result<TothReport> {
    let n = state.n();
    let nf = n as f64;
    let dirs = [triplet.n1(), triplet.n2(), triplet.n3()];
    let mut second = [0.0; 3];
    let mut var = [0.0; 3];
    for (i, dir) in dirs.iter().enumerate() {
        let op = collective_spin(n, *dir);
        let m = spin_moments(state, &op)?;
        second[i] = m.second_moment;
        var[i] = m.variance;
    }

    let lhs1 = second[0] + second[1] + second[2] - nf * (nf + 2.0) / 4.0;
    let lhs2 = var[0] + var[1] + var[2] - nf / 2.0;
    let lhs3 = second[0] + second[1] - nf / 2.0 - (nf - 1.0) * var[2];
    let lhs4 = (nf - 1.0) * (var[0] + var[1]) - second[2] - nf * (nf - 2.0) / 4.0;

    Ok(TothReport {
        lhs1,
        lhs2,
        lhs3,
        lhs4,
        satisfied1: lhs1 <= DETECTION_TOLERANCE,
        satisfied2: lhs2 >= -DETECTION_TOLERANCE,
        satisfied3: lhs3 <= DETECTION_TOLERANCE,
        satisfied4: lhs4 >= -DETECTION_TOLERANCE,
    })
}

/// Closed-form left-hand side of inequality (3) for a number-diagonal
/// mixture and a frame whose third axis has `n₃z² = n3z_squared`:
///
/// ```text
/// δ = (N/2)(Δ²k − a) + (n₃z²/2)·((N+2)a − 3NΔ²k),    a = ⟨k⟩(N−⟨k⟩).
/// ```
///
/// Positive δ means the inequality is violated.
pub fn ineq3_delta(mix: &DiagonalMixture, n3z_squared: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&n3z_squared) {
        return Err(Error::domain(format!(
            "n3z² must lie in [0, 1], got {n3z_squared}"
        )));
    }
    let nf = mix.n() as f64;
    let km = k_moments(mix);
    let a = km.mean_k * (nf - km.mean_k);
    Ok((nf / 2.0) * (km.var_k - a) + (n3z_squared / 2.0) * ((nf + 2.0) * a - 3.0 * nf * km.var_k))
}

/// The `n₃z²` threshold above which a number-diagonal mixture violates
/// inequality (3): `N(a − Δ²k) / ((N+2)a − 3NΔ²k)`, defined exactly when
/// `a > NΔ²k` (then automatically < 1). `None` means no tilted frame
/// violates (3) for this mixture.
pub fn ineq3_threshold(mix: &DiagonalMixture) -> Option<f64> {
    let nf = mix.n() as f64;
    let km = k_moments(mix);
    let a = km.mean_k * (nf - km.mean_k);
    if a <= nf * km.var_k {
        return None;
    }
    Some(nf * (a - km.var_k) / ((nf + 2.0) * a - 3.0 * nf * km.var_k))
}

/// A squeezing-parameter value: a real number, or an explicit marker for
/// the 0/0 pathology (denominator below [`XI_DENOMINATOR_FLOOR`]).
///
/// Serializes as the number itself or the JSON string `"undefined"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XiValue {
    Defined(f64),
    Undefined,
}

impl XiValue {
    pub fn is_defined(&self) -> bool {
        matches!(self, XiValue::Defined(_))
    }

    /// The value, if defined.
    pub fn value(&self) -> Option<f64> {
        match self {
            XiValue::Defined(v) => Some(*v),
            XiValue::Undefined => None,
        }
    }
}

impl Serialize for XiValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            XiValue::Defined(v) => serializer.serialize_f64(*v),
            XiValue::Undefined => serializer.serialize_str("undefined"),
        }
    }
}

impl<'de> Deserialize<'de> for XiValue {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        struct XiVisitor;

        impl serde::de::Visitor<'_> for XiVisitor {
            type Value = XiValue;

            fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
                f.write_str("a number or the string \"undefined\"")
            }

            fn visit_f64<E: serde::de::Error>(self, v: f64) -> std::result::Result<XiValue, E> {
                Ok(XiValue::Defined(v))
            }

            fn visit_u64<E: serde::de::Error>(self, v: u64) -> std::result::Result<XiValue, E> {
                Ok(XiValue::Defined(v as f64))
            }

            fn visit_i64<E: serde::de::Error>(self, v: i64) -> std::result::Result<XiValue, E> {
                Ok(XiValue::Defined(v as f64))
            }

            fn visit_str<E: serde::de::Error>(self, v: &str) -> std::result::Result<XiValue, E> {
                if v == "undefined" {
                    Ok(XiValue::Undefined)
                } else {
                    Err(E::invalid_value(serde::de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(XiVisitor)
    }
}

/// Squeezing parameters on a frame, with the raw denominators they were
/// computed from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezingReport {
    pub xi_w_squared: XiValue,
    pub xi_s_squared: XiValue,
    /// Raw ⟨J_{n3}⟩² (the ξ²_W denominator before the N·Δ² numerator).
    pub denominator_w: f64,
    /// Raw ⟨J_{n2}⟩² + ⟨J_{n3}⟩².
    pub denominator_s: f64,
}

/// Evaluate ξ²_W and ξ²_S on a frame via matrix-oracle moments.
/// Undefinedness (denominator < [`XI_DENOMINATOR_FLOOR`]) is a reported
/// value, not an error.
pub fn xi_parameters(state: &State, triplet: &OrthogonalTriplet) -> Result<SqueezingReport> {
    let n = state.n();
    let nf = n as f64;
    let var1 = spin_moments(state, &collective_spin(n, triplet.n1()))?.variance;
    let mean2 = spin_moments(state, &collective_spin(n, triplet.n2()))?.mean;
    let mean3 = spin_moments(state, &collective_spin(n, triplet.n3()))?.mean;

    let denominator_w = mean3 * mean3;
    let denominator_s = mean2 * mean2 + mean3 * mean3;
    let xi = |denominator: f64| {
        if denominator < XI_DENOMINATOR_FLOOR {
            XiValue::Undefined
        } else {
            XiValue::Defined(nf * var1 / denominator)
        }
    };
    Ok(SqueezingReport {
        xi_w_squared: xi(denominator_w),
        xi_s_squared: xi(denominator_s),
        denominator_w,
        denominator_s,
    })
}

/// Closed-form ξ²_S of the number state `|k⟩` for any frame with
/// `n₁ ∦ ẑ`: `N(N + 2k(N−k)) / (2k−N)²` (undefined at `k = N/2`).
pub fn xi_s_number_state(n: usize, k: usize) -> Result<XiValue> {
    if k > n {
        return Err(Error::domain(format!(
            "number state |k={k}⟩ does not exist in the n={n} sector"
        )));
    }
    let nf = n as f64;
    let kf = k as f64;
    let gap = 2.0 * kf - nf;
    if gap * gap < XI_DENOMINATOR_FLOOR {
        return Ok(XiValue::Undefined);
    }
    Ok(XiValue::Defined(
        nf * (nf + 2.0 * kf * (nf - kf)) / (gap * gap),
    ))
}

/// Pure state with a Gaussian occupation profile peaked at `ℓ`:
/// amplitudes `√(p_k)` with `p_k ∝ exp(−(k−ℓ)²/σ²)`, normalized by the
/// explicit sum.
pub fn gaussian_state(n: usize, l: usize, sigma: f64) -> Result<PureState> {
    if l > n {
        return Err(Error::domain(format!(
            "peak ℓ={l} outside the n={n} sector"
        )));
    }
    if sigma <= 0.0 || !sigma.is_finite() {
        return Err(Error::domain(format!("σ must be positive, got {sigma}")));
    }
    let weights: Vec<f64> = (0..=n)
        .map(|k| {
            let d = k as f64 - l as f64;
            (-d * d / (sigma * sigma)).exp()
        })
        .collect();
    let z: f64 = weights.iter().sum();
    let amplitudes: Vec<Complex64> = weights
        .iter()
        .map(|w| Complex64::new((w / z).sqrt(), 0.0))
        .collect();
    PureState::superposition(n, &amplitudes)
}

/// Pure state that is flat at amplitude `p/N` away from the central peak
/// `k = N/2` (amplitude `1−p` there), normalized. Converges to the twin
/// Fock state `|N/2⟩` as `p → 0`, but with `ξ²_W → N(N+1)/12`.
pub fn flat_peak_state(n: usize, p: f64) -> Result<PureState> {
    if n % 2 != 0 || n == 0 {
        return Err(Error::domain(format!(
            "flat-peak family needs a positive even particle number, got {n}"
        )));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p must lie in (0, 1), got {p}")));
    }
    let half = n / 2;
    let amplitudes: Vec<Complex64> = (0..=n)
        .map(|k| {
            let a = if k == half { 1.0 - p } else { p / n as f64 };
            Complex64::new(a, 0.0)
        })
        .collect();
    PureState::superposition(n, &amplitudes)
}

/// Closed-form ξ²_W for a pure state with nonnegative real amplitudes
/// `√(p_k)`, on the fixed frame (n⃗₁, n⃗₂, n⃗₃) = (ẑ, ŷ, x̂):
///
/// ```text
/// ξ²_W = N·Δ²k / (Σ_{k=1}^{N} √(k(N−k+1)) √(p_k p_{k−1}))²
/// ```
///
/// (for such states `⟨Jy⟩ = 0` and `Δ²Jz = Δ²k`, so this is the (ẑ, ŷ, x̂)
/// instance of the general definition).
pub fn xi_w_diagonal_real(state: &PureState) -> Result<XiValue> {
    let n = state.n();
    let nf = n as f64;
    let mut probs = Vec::with_capacity(n + 1);
    for (k, a) in state.amplitudes().iter().enumerate() {
        if a.im.abs() > 1e-14 || a.re < -1e-14 {
            return Err(Error::domain(format!(
                "amplitude {k} is not real and nonnegative: {a}"
            )));
        }
        probs.push(a.re.max(0.0) * a.re.max(0.0));
    }
    let mean_k: f64 = probs.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
    // Two-pass variance: the one-pass ⟨k²⟩ − ⟨k⟩² form cancels
    // catastrophically on sharply peaked profiles (Δ²k down at O(p²) for the
    // flat-peak family), where this parameter's limit lives.
    let var_k: f64 = probs
        .iter()
        .enumerate()
        .map(|(k, p)| (k as f64 - mean_k).powi(2) * p)
        .sum();
    let mut jx_mean = 0.0;
    for k in 1..=n {
        jx_mean += ((k * (n - k + 1)) as f64).sqrt() * (probs[k] * probs[k - 1]).sqrt();
    }
    let denominator = jx_mean * jx_mean;
    if denominator < XI_DENOMINATOR_FLOOR {
        return Ok(XiValue::Undefined);
    }
    Ok(XiValue::Defined(nf * var_k / denominator))
}
