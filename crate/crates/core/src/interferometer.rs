//! Rotation-based phase measurement: exact outcome statistics of number
//! measurements on rotated states, error propagation, classical Fisher
//! information, and Monte-Carlo maximum-likelihood phase estimation against
//! the Cramér–Rao bounds.
//!
//! The measurement model throughout is number-basis counting after the
//! rotation `ρ_θ = e^{−iθJ_rot} ρ e^{iθJ_rot}`; measuring a spin component
//! `J_{n2}` with `n2 ≠ ẑ` is realized as a pre-rotation mapping `n2 → ẑ`
//! followed by number counting, which is how such data is actually
//! acquired and keeps a single sampling path.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fock::{
    apply_unitary, collective_spin, unitary_from_spectrum, Direction, State,
    TRIPLET_ORTHOGONALITY_TOLERANCE,
};
use crate::linalg::{hermitian_eig, Spectrum};
use crate::moments::spin_moments;
use crate::qfi::qfi_spectral;

pub use crate::fock::rotate;

/// Step for the central finite differences in [`error_propagation`] and
/// [`classical_fisher`]: balances truncation against round-off for these
/// smooth trigonometric maps at double precision.
pub const FD_STEP: f64 = 1e-5;

/// Magnitude below which the readout derivative counts as zero and the
/// error-propagation ratio is reported as uninformative.
pub const DERIVATIVE_FLOOR: f64 = 1e-12;

/// Fisher-information floor below which the model distribution carries no
/// usable phase information and maximum-likelihood estimation degenerates.
pub const INFORMATION_FLOOR: f64 = 1e-12;

/// Golden-section search terminates once the bracket is this narrow (rad).
pub const MLE_SEARCH_TOLERANCE: f64 = 1e-6;

/// Error-propagation ratio `δ²θ`, or the report that the chosen readout has
/// (numerically) zero sensitivity at the working point, where the ratio is
/// meaningless rather than merely large.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PropagatedVariance {
    /// `Var(J_meas)/(∂_θ⟨J_meas⟩)²` at the working point.
    Value(f64),
    /// `|∂_θ⟨J_meas⟩|` below [`DERIVATIVE_FLOOR`].
    Uninformative,
}

impl PropagatedVariance {
    /// True when a finite ratio was produced.
    pub fn is_informative(&self) -> bool {
        matches!(self, PropagatedVariance::Value(_))
    }

    /// The ratio, if informative.
    pub fn value(&self) -> Option<f64> {
        match self {
            PropagatedVariance::Value(v) => Some(*v),
            PropagatedVariance::Uninformative => None,
        }
    }
}

impl Serialize for PropagatedVariance {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            PropagatedVariance::Value(v) => serializer.serialize_f64(*v),
            PropagatedVariance::Uninformative => serializer.serialize_str("uninformative"),
        }
    }
}

struct PropagatedVarianceVisitor;

impl Visitor<'_> for PropagatedVarianceVisitor {
    type Value = PropagatedVariance;

    fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
        f.write_str("a number or the string \"uninformative\"")
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
        Ok(PropagatedVariance::Value(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
        Ok(PropagatedVariance::Value(v as f64))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
        Ok(PropagatedVariance::Value(v as f64))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
        if v == "uninformative" {
            Ok(PropagatedVariance::Uninformative)
        } else {
            Err(E::invalid_value(de::Unexpected::Str(v), &self))
        }
    }
}

impl<'de> Deserialize<'de> for PropagatedVariance {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        d.deserialize_any(PropagatedVarianceVisitor)
    }
}

/// Monte-Carlo phase-estimation summary: `repetitions` maximum-likelihood
/// estimates of `theta_true`, each from `shots_per_estimate` independent
/// number-measurement outcomes, against the classical and quantum
/// Cramér–Rao bounds `1/(M·F_cl)` and `1/(M·F_Q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseEstimationResult {
    /// The phase the samples were drawn at (rad).
    pub theta_true: f64,
    /// One maximum-likelihood estimate per repetition, in repetition order.
    pub estimates: Vec<f64>,
    /// Unbiased sample variance of `estimates` (denominator `R − 1`);
    /// defined as `0` when `R = 1`.
    pub sample_variance: f64,
    /// `1/(M·F_Q)` with `F_Q` the quantum Fisher information of the probe.
    pub crb_quantum: f64,
    /// `1/(M·F_cl(θ_true))` with `F_cl` from [`classical_fisher`].
    pub crb_classical: f64,
    /// Shots per repetition, `M`.
    pub shots_per_estimate: usize,
    /// Number of repetitions, `R`.
    pub repetitions: usize,
    /// Root seed; repetition `r` uses the derived stream `seed ⊕ r`.
    pub seed: u64,
}

/// Cached eigendecomposition of the rotation generator together with the
/// state expressed in that eigenbasis, so each additional angle costs
/// `O(m²)` for pure states (`O(m³)` for mixed) instead of a fresh
/// eigensolve.
struct RotationKernel {
    spectrum: Spectrum,
    body: KernelBody,
}

enum KernelBody {
    /// `V†ψ`.
    Pure(DVector<Complex64>),
    /// `V†ρV`.
    Mixed(DMatrix<Complex64>),
}

fn rotation_kernel(state: &State, rot_dir: Direction) -> Result<RotationKernel> {
    let op = collective_spin(state.n(), rot_dir);
    let spectrum = hermitian_eig(op.matrix())?;
    let v = &spectrum.eigenvectors;
    let body = match state {
        State::Pure(psi) => KernelBody::Pure(v.adjoint() * psi.amplitudes()),
        State::Mixed(rho) => KernelBody::Mixed(v.adjoint() * rho.matrix() * v),
    };
    Ok(RotationKernel { spectrum, body })
}

impl RotationKernel {
    /// `p_θ(m) = ⟨m|ρ_θ|m⟩` for all `m`, with round-off negatives clamped
    /// to zero.
    fn distribution(&self, theta: f64) -> Vec<f64> {
        let dim = self.spectrum.dim();
        let v = &self.spectrum.eigenvectors;
        let phases: Vec<Complex64> = self
            .spectrum
            .eigenvalues
            .iter()
            .map(|&lambda| Complex64::from_polar(1.0, -theta * lambda))
            .collect();
        let probs: Vec<f64> = match &self.body {
            KernelBody::Pure(w) => {
                let phased =
                    DVector::from_iterator(dim, w.iter().zip(&phases).map(|(wi, ph)| wi * ph));
                let amplitudes = v * phased;
                amplitudes.iter().map(|a| a.norm_sqr()).collect()
            }
            KernelBody::Mixed(a) => {
                let mut phased = a.clone();
                for i in 0..dim {
                    for j in 0..dim {
                        phased[(i, j)] *= phases[i] * phases[j].conj();
                    }
                }
                let rho_theta = v * phased * v.adjoint();
                (0..dim).map(|m| rho_theta[(m, m)].re.max(0.0)).collect()
            }
        };
        debug_assert!(
            (probs.iter().sum::<f64>() - 1.0).abs() < 1e-10,
            "outcome distribution does not sum to 1"
        );
        probs
    }
}

/// Outcome distribution of a number measurement after rotating `state` by
/// `theta` about `rot_dir`: `p_θ(m) = ⟨m|ρ_θ|m⟩`, `m = 0..n`. Entries are
/// nonnegative (round-off negatives clamped) and sum to 1 within `1e-10`.
pub fn outcome_distribution(state: &State, rot_dir: Direction, theta: f64) -> Result<Vec<f64>> {
    Ok(rotation_kernel(state, rot_dir)?.distribution(theta))
}

/// Classical Fisher information of the number measurement at angle `theta`:
/// `F_cl = Σ_m (∂_θ p_θ(m))²/p_θ(m)`, derivative by central difference with
/// step [`FD_STEP`], outcomes with `p_θ(m) < 1e-12` dropped.
///
/// By the data-processing inequality `F_cl ≤ F_Q` up to the finite-difference
/// error (`≤ 1e-6` in every tested configuration).
pub fn classical_fisher(state: &State, rot_dir: Direction, theta: f64) -> Result<f64> {
    let kernel = rotation_kernel(state, rot_dir)?;
    let center = kernel.distribution(theta);
    let upper = kernel.distribution(theta + FD_STEP);
    let lower = kernel.distribution(theta - FD_STEP);
    let mut info = 0.0;
    for m in 0..center.len() {
        if center[m] >= 1e-12 {
            let derivative = (upper[m] - lower[m]) / (2.0 * FD_STEP);
            info += derivative * derivative / center[m];
        }
    }
    Ok(info)
}

/// Error-propagation phase variance of reading `J_meas` on states rotated
/// about `rot_dir`, at working point `theta0`:
///
/// ```text
/// δ²θ = Var_{θ0}(J_meas) / (∂_θ⟨J_meas⟩|_{θ0})²
/// ```
///
/// The reported derivative is the central difference with step [`FD_STEP`].
/// The zero-sensitivity classification, however, uses the exact commutator
/// identity `∂_θ⟨J_meas⟩ = −⟨J_{rot×meas}⟩_θ`: symmetry-protected zeros
/// (e.g. the twin Fock state read along x̂) sit at exactly zero analytically
/// but at ~`1e-10` by finite difference of round-off, which would otherwise
/// misclassify them as informative with an astronomically wrong ratio.
///
/// At `θ0 = 0`, `δ²θ` equals `ξ²_W/n` of the squeezing module for the frame
/// `(n1, n2, n3) = (meas, rot, rot×meas)` whenever the latter is defined.
///
/// Requires `rot_dir ⊥ meas_dir` (within the triplet orthogonality
/// tolerance); anything else is a domain error.
pub fn error_propagation(
    state: &State,
    rot_dir: Direction,
    meas_dir: Direction,
    theta0: f64,
) -> Result<PropagatedVariance> {
    if rot_dir.dot(&meas_dir).abs() > TRIPLET_ORTHOGONALITY_TOLERANCE {
        return Err(Error::domain(format!(
            "rotation and measurement axes must be orthogonal (dot = {:.3e})",
            rot_dir.dot(&meas_dir)
        )));
    }
    let n = state.n();
    let rot_op = collective_spin(n, rot_dir);
    let spectrum = hermitian_eig(rot_op.matrix())?;
    let meas_op = collective_spin(n, meas_dir);
    let at = |theta: f64| apply_unitary(state, &unitary_from_spectrum(&spectrum, theta));

    let center = spin_moments(&at(theta0), &meas_op)?;
    let upper = spin_moments(&at(theta0 + FD_STEP), &meas_op)?;
    let lower = spin_moments(&at(theta0 - FD_STEP), &meas_op)?;
    let derivative = (upper.mean - lower.mean) / (2.0 * FD_STEP);

    let cross = rot_dir.cross(&meas_dir);
    let cross_dir = Direction::new(cross[0], cross[1], cross[2])?;
    let sensitivity = spin_moments(&at(theta0), &collective_spin(n, cross_dir))?.mean;
    if sensitivity.abs() < DERIVATIVE_FLOOR {
        return Ok(PropagatedVariance::Uninformative);
    }
    Ok(PropagatedVariance::Value(
        center.variance / (derivative * derivative),
    ))
}

/// Deterministic golden-section maximizer of a unimodal-enough `f` on
/// `[a, b]`, to bracket width `tol`.
fn golden_section_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Inverse-CDF draw: smallest `m` with `u < cdf[m]`.
fn sample_index(cdf: &[f64], u: f64) -> usize {
    cdf.iter()
        .position(|&c| u < c)
        .unwrap_or(cdf.len().saturating_sub(1))
}

/// Monte-Carlo maximum-likelihood phase estimation.
///
/// Per repetition `r = 0..R`, draws `M` outcomes from the exact model
/// distribution at `theta_true` by inverse-CDF sampling on the derived
/// deterministic stream `seed ⊕ r`, then maximizes the log-likelihood over
/// `θ ∈ [θ_true/4, min(π/2, 4·θ_true)]` by golden-section search to
/// [`MLE_SEARCH_TOLERANCE`]. The working domain is positive phases
/// `theta_true ∈ (0, π/2)`: the parity symmetry `θ ↔ −θ` of the model makes
/// only `|θ|` identifiable, and the search domain deliberately excludes the
/// non-identifiable point `θ = 0` rather than silently clipping estimates.
///
/// Degenerate models — numerically zero classical or quantum Fisher
/// information at `theta_true`, or a sample whose likelihood vanishes at the
/// maximizer (impossible when sampling from the model itself) — are a
/// numeric error, not a result.
pub fn mle_estimate(
    state: &State,
    rot_dir: Direction,
    theta_true: f64,
    shots: usize,
    repetitions: usize,
    seed: u64,
) -> Result<PhaseEstimationResult> {
    if !(theta_true > 0.0 && theta_true < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain(format!(
            "theta_true must lie in (0, π/2), got {theta_true}"
        )));
    }
    if shots == 0 || repetitions == 0 {
        return Err(Error::domain(
            "shots and repetitions must both be at least 1",
        ));
    }

    let f_cl = classical_fisher(state, rot_dir, theta_true)?;
    let f_q = qfi_spectral(
        &state.to_density(),
        &collective_spin(state.n(), rot_dir),
    )?
    .value;
    if f_cl < INFORMATION_FLOOR || f_q < INFORMATION_FLOOR {
        return Err(Error::DegenerateLikelihood);
    }

    let kernel = rotation_kernel(state, rot_dir)?;
    let model = kernel.distribution(theta_true);
    let cdf: Vec<f64> = model
        .iter()
        .scan(0.0, |acc, &p| {
            *acc += p;
            Some(*acc)
        })
        .collect();

    let lo = theta_true / 4.0;
    let hi = (4.0 * theta_true).min(std::f64::consts::FRAC_PI_2);

    let mut estimates = Vec::with_capacity(repetitions);
    for rep in 0..repetitions {
        let mut rng = crate::rng::CounterRng::derived(seed, rep as u64);
        let mut counts = vec![0u64; model.len()];
        for _ in 0..shots {
            counts[sample_index(&cdf, rng.next_f64())] += 1;
        }
        let log_likelihood = |theta: f64| -> f64 {
            let p = kernel.distribution(theta);
            counts
                .iter()
                .zip(&p)
                .filter(|(&c, _)| c > 0)
                .map(|(&c, &pm)| c as f64 * pm.max(f64::MIN_POSITIVE).ln())
                .sum()
        };
        let estimate = golden_section_max(log_likelihood, lo, hi, MLE_SEARCH_TOLERANCE);
        if !log_likelihood(estimate).is_finite() {
            return Err(Error::DegenerateLikelihood);
        }
        estimates.push(estimate);
    }

    let r = repetitions as f64;
    let mean = estimates.iter().sum::<f64>() / r;
    let sample_variance = if repetitions > 1 {
        estimates.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (r - 1.0)
    } else {
        0.0
    };

    let m = shots as f64;
    Ok(PhaseEstimationResult {
        theta_true,
        estimates,
        sample_variance,
        crb_quantum: 1.0 / (m * f_q),
        crb_classical: 1.0 / (m * f_cl),
        shots_per_estimate: shots,
        repetitions,
        seed,
    })
}
