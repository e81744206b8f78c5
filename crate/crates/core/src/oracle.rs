//! Small-N distinguishable-qubit brute force.
//!
//! Everything here works on the full `2^n` tensor-product space of `n`
//! individually addressable qubits — deliberately *not* on the
//! `(n+1)`-dimensional symmetric sector the rest of the crate uses — so it
//! can serve as an independent cross-check:
//!
//! - [`product_variance`] verifies the separable-state variance bound
//!   `Δ²J_n⃗ ≤ n/4` by explicit tensor construction;
//! - [`antisymmetric_overlap`] verifies the two-copy identity
//!   `⟨Ψ₋|ρ⊗ρ|Ψ₋⟩ = det ρ`;
//! - [`dicke_embedding_check`] builds the symmetric Dicke state with `k`
//!   excitations and confirms its collective-spin moments equal the
//!   sector values for `|k⟩` — the sector states' inequality violations
//!   are a statistics effect, not an arithmetic artifact;
//! - [`toth_check_products`] evaluates the four collective-variance
//!   inequalities on mixtures of product states, the separable family they
//!   are guaranteed to hold on.
//!
//! Qubit basis convention: index 1 is the excited state with `j_z = +1/2`,
//! so a computational basis vector with `k` ones has total `J_z = (2k−n)/2`,
//! matching the sector's number state `|k⟩`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Direction, OrthogonalTriplet, DIRECTION_UNIT_TOLERANCE};
use crate::moments::number_state_moments;
use crate::rng::CounterRng;
use crate::squeezing::{TothReport, DETECTION_TOLERANCE};

/// Hard cap on the brute-force qubit count (dimension `2^8 = 256`): keeps
/// every check sub-second, and the verified claims are
/// dimension-independent, so small `n` suffices.
pub const MAX_ORACLE_QUBITS: usize = 8;

/// Largest qubit count for [`dicke_embedding_check`] (dimension 64).
pub const MAX_EMBEDDING_QUBITS: usize = 6;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A pure product state of `n` distinguishable qubits, one unit Bloch
/// vector per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductState {
    bloch_vectors: Vec<[f64; 3]>,
}

impl ProductState {
    /// Validates `1 ≤ n ≤ `[`MAX_ORACLE_QUBITS`] and unit norm of every
    /// Bloch vector (within `1e-12`).
    pub fn new(bloch_vectors: Vec<[f64; 3]>) -> Result<Self> {
        let n = bloch_vectors.len();
        if n == 0 || n > MAX_ORACLE_QUBITS {
            return Err(Error::domain(format!(
                "product states support 1..={MAX_ORACLE_QUBITS} qubits, got {n}"
            )));
        }
        for (j, v) in bloch_vectors.iter().enumerate() {
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if (norm - 1.0).abs() > DIRECTION_UNIT_TOLERANCE {
                return Err(Error::domain(format!(
                    "Bloch vector {j} has norm {norm}, expected 1"
                )));
            }
        }
        Ok(Self { bloch_vectors })
    }

    /// All qubits polarized along `dir`.
    pub fn aligned(n: usize, dir: &Direction) -> Result<Self> {
        Self::new(vec![dir.components(); n])
    }

    /// Independent uniformly random Bloch vectors from the deterministic
    /// generator.
    pub fn random(n: usize, rng: &mut CounterRng) -> Result<Self> {
        Self::new((0..n).map(|_| rng.next_direction().components()).collect())
    }

    /// Qubit count.
    pub fn n(&self) -> usize {
        self.bloch_vectors.len()
    }

    /// The Bloch vectors.
    pub fn bloch_vectors(&self) -> &[[f64; 3]] {
        &self.bloch_vectors
    }

    /// Full `2^n` state vector (qubit 0 owns the most significant bit).
    fn state_vector(&self) -> DVector<Complex64> {
        let mut v = DVector::from_element(1, Complex64::ONE);
        for bloch in &self.bloch_vectors {
            let s = spinor(*bloch);
            let mut next = DVector::zeros(v.len() * 2);
            for (i, amp) in v.iter().enumerate() {
                next[2 * i] = amp * s[0];
                next[2 * i + 1] = amp * s[1];
            }
            v = next;
        }
        v
    }
}

/// Single-qubit pure state `(down, up)` with Bloch vector `v`:
/// `⟨ψ|σ⃗|ψ⟩ = v⃗`.
fn spinor(v: [f64; 3]) -> [Complex64; 2] {
    let up = ((1.0 + v[2]).max(0.0) / 2.0).sqrt();
    let down = ((1.0 - v[2]).max(0.0) / 2.0).sqrt();
    let phi = v[1].atan2(v[0]);
    [Complex64::from_polar(down, phi), c(up)]
}

/// Single-qubit spin component `v⃗·j⃗` in the `(down, up)` basis. The wing
/// phases mirror the sector convention, so the `n = 1` sector and the
/// one-qubit space carry identical matrices.
fn qubit_spin(dir: &Direction) -> DMatrix<Complex64> {
    let (x, y, z) = (dir.x(), dir.y(), dir.z());
    DMatrix::from_row_slice(
        2,
        2,
        &[
            Complex64::new(-z / 2.0, 0.0),
            Complex64::new(x / 2.0, y / 2.0),
            Complex64::new(x / 2.0, -y / 2.0),
            Complex64::new(z / 2.0, 0.0),
        ],
    )
}

/// `Σ_j 1⊗…⊗(v⃗·j⃗)⊗…⊗1` on the full `2^n` space, built explicitly.
fn collective_qubit_spin(n: usize, dir: &Direction) -> DMatrix<Complex64> {
    let single = qubit_spin(dir);
    let dim = 1usize << n;
    let mut total = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..n {
        let left = DMatrix::<Complex64>::identity(1 << j, 1 << j);
        let right = DMatrix::<Complex64>::identity(1 << (n - 1 - j), 1 << (n - 1 - j));
        total += left.kronecker(&single).kronecker(&right);
    }
    total
}

fn vector_moments(s: &DMatrix<Complex64>, psi: &DVector<Complex64>) -> (f64, f64) {
    let spsi = s * psi;
    let mean = psi.dotc(&spsi);
    debug_assert!(mean.im.abs() < 1e-10);
    (mean.re, spsi.norm_squared())
}

/// Variance of the collective spin `J_n⃗ = Σ_j j_n⃗^{(j)}` on the explicit
/// `2^n` tensor product. For every product state this equals
/// `n/4 − Σ_j ⟨j_n⃗^{(j)}⟩²` and therefore never exceeds `n/4`.
pub fn product_variance(ps: &ProductState, dir: &Direction) -> f64 {
    let s = collective_qubit_spin(ps.n(), dir);
    let psi = ps.state_vector();
    let (mean, second) = vector_moments(&s, &psi);
    second - mean * mean
}

/// Two-copy overlap with the singlet: `⟨Ψ₋|ρ⊗ρ|Ψ₋⟩`, built as an explicit
/// `4×4` product. Equals `det ρ` for every single-qubit density matrix —
/// zero exactly on pure states.
pub fn antisymmetric_overlap(rho_single: &DMatrix<Complex64>) -> Result<f64> {
    if rho_single.nrows() != 2 || rho_single.ncols() != 2 {
        return Err(Error::domain(format!(
            "expected a 2×2 density matrix, got {}×{}",
            rho_single.nrows(),
            rho_single.ncols()
        )));
    }
    if crate::linalg::hermiticity_defect(rho_single) > 1e-12 {
        return Err(Error::domain("single-qubit density matrix is not Hermitian"));
    }
    let trace = rho_single.trace();
    if (trace.re - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "single-qubit density matrix has trace {}, expected 1",
            trace.re
        )));
    }
    let det = (rho_single[(0, 0)] * rho_single[(1, 1)]
        - rho_single[(0, 1)] * rho_single[(1, 0)])
        .re;
    if rho_single[(0, 0)].re < -1e-12 || rho_single[(1, 1)].re < -1e-12 || det < -1e-12 {
        return Err(Error::domain(
            "single-qubit density matrix is not positive semidefinite",
        ));
    }

    let pair = rho_single.kronecker(rho_single);
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let singlet = DVector::from_column_slice(&[
        Complex64::ZERO,
        c(inv_sqrt2),
        c(-inv_sqrt2),
        Complex64::ZERO,
    ]);
    let overlap = singlet.dotc(&(&pair * &singlet));
    debug_assert!(overlap.im.abs() < 1e-12);
    Ok(overlap.re)
}

/// Result of comparing the first-quantization Dicke state (symmetrized `k`
/// excitations on `n` qubits) against the sector number state `|k⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DickeEmbeddingReport {
    /// `⟨J_n⃗⟩` on the explicit tensor product.
    pub qubit_mean: f64,
    /// `⟨J_n⃗⟩` from the sector closed form.
    pub sector_mean: f64,
    /// `Δ²J_n⃗` on the explicit tensor product.
    pub qubit_variance: f64,
    /// `Δ²J_n⃗` from the sector closed form.
    pub sector_variance: f64,
    /// Worst absolute disagreement between the two routes.
    pub max_deviation: f64,
    /// `max_deviation ≤ 1e-10`.
    pub ok: bool,
}

/// Build the Dicke state with `k` excitations on `n ≤ 6` qubits, compute
/// its collective-spin mean and variance with tensor-product operators, and
/// compare with the sector values for `|k⟩`.
pub fn dicke_embedding_check(n: usize, k: usize, dir: &Direction) -> Result<DickeEmbeddingReport> {
    if n == 0 || n > MAX_EMBEDDING_QUBITS {
        return Err(Error::domain(format!(
            "Dicke embedding supports 1..={MAX_EMBEDDING_QUBITS} qubits, got {n}"
        )));
    }
    if k > n {
        return Err(Error::domain(format!(
            "cannot place {k} excitations on {n} qubits"
        )));
    }
    let psi = dicke_vector(n, k);
    let s = collective_qubit_spin(n, dir);
    let (qubit_mean, second) = vector_moments(&s, &psi);
    let qubit_variance = second - qubit_mean * qubit_mean;
    let sector = number_state_moments(n, k, dir)?;
    let max_deviation = (qubit_mean - sector.mean)
        .abs()
        .max((qubit_variance - sector.variance).abs());
    Ok(DickeEmbeddingReport {
        qubit_mean,
        sector_mean: sector.mean,
        qubit_variance,
        sector_variance: sector.variance,
        max_deviation,
        ok: max_deviation <= 1e-10,
    })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k.min(n - k)).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Equal-weight superposition of all `n`-bit strings with `k` ones.
fn dicke_vector(n: usize, k: usize) -> DVector<Complex64> {
    let dim = 1usize << n;
    let amp = c(1.0 / binomial(n, k).sqrt());
    DVector::from_iterator(
        dim,
        (0..dim).map(|idx: usize| {
            if idx.count_ones() as usize == k {
                amp
            } else {
                Complex64::ZERO
            }
        }),
    )
}

/// Evaluate the four collective-variance inequalities on the mixture
/// `ρ = Σ_t w_t |prod_t⟩⟨prod_t|` of product states — a separable state of
/// distinguishable qubits, on which all four must hold. Moments are
/// accumulated per pure component (`⟨S⟩ = Σ_t w_t ⟨S⟩_t`), so no `2^n × 2^n`
/// density matrix is formed.
pub fn toth_check_products(
    weights: &[f64],
    states: &[ProductState],
    triplet: &OrthogonalTriplet,
) -> Result<TothReport> {
    if weights.len() != states.len() || states.is_empty() {
        return Err(Error::domain(
            "need equal, nonzero numbers of weights and product states",
        ));
    }
    let n = states[0].n();
    if states.iter().any(|s| s.n() != n) {
        return Err(Error::domain(
            "all product states in a mixture must share the qubit count",
        ));
    }
    if weights.iter().any(|&w| w < 0.0 || !w.is_finite()) {
        return Err(Error::domain("mixture weights must be finite and ≥ 0"));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!(
            "mixture weights must sum to 1, got {total}"
        )));
    }

    let dirs = [triplet.n1(), triplet.n2(), triplet.n3()];
    let ops: Vec<DMatrix<Complex64>> =
        dirs.iter().map(|d| collective_qubit_spin(n, d)).collect();
    let vectors: Vec<DVector<Complex64>> = states.iter().map(|s| s.state_vector()).collect();

    let mut mean = [0.0; 3];
    let mut second = [0.0; 3];
    for (w, psi) in weights.iter().zip(&vectors) {
        for (a, op) in ops.iter().enumerate() {
            let (m, s2) = vector_moments(op, psi);
            mean[a] += w * m;
            second[a] += w * s2;
        }
    }
    let var: Vec<f64> = (0..3).map(|a| second[a] - mean[a] * mean[a]).collect();

    let nf = n as f64;
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

/// Aggregate result of a randomized oracle run; see [`run_oracle_suite`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    /// Qubit count the product-variance trials ran at.
    pub qubit_count: usize,
    /// Trials per randomized check.
    pub trials: usize,
    /// Seed of the deterministic generator.
    pub seed: u64,
    /// Worst `Δ²J − n/4` over the product-variance trials (≤ 0 up to
    /// round-off: the separable bound).
    pub max_variance_excess: f64,
    /// Worst `|⟨Ψ₋|ρ⊗ρ|Ψ₋⟩ − det ρ|` over random single-qubit states.
    pub max_overlap_error: f64,
    /// Worst Dicke-vs-sector moment deviation over all `n ≤ 6`, all `k`,
    /// axes and random directions.
    pub max_embedding_error: f64,
    /// Worst violation margin of the four inequalities over random product
    /// mixtures (positive would mean a separable state got detected).
    pub max_toth_violation: f64,
    /// All four checks within their tolerances
    /// (`1e-10`, `1e-12`, `1e-10`, `1e-9`).
    pub all_ok: bool,
}

/// Run the full randomized oracle suite: `trials` product-variance trials at
/// `qubit_count` qubits, `trials` overlap-identity trials, the exhaustive
/// Dicke-embedding sweep, and `trials` product-mixture inequality trials at
/// each of `n ∈ {2, 3, 4}`. Deterministic in `seed`.
pub fn run_oracle_suite(qubit_count: usize, trials: usize, seed: u64) -> Result<OracleSummary> {
    if !(2..=MAX_ORACLE_QUBITS).contains(&qubit_count) {
        return Err(Error::domain(format!(
            "oracle suite supports 2..={MAX_ORACLE_QUBITS} qubits, got {qubit_count}"
        )));
    }
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    let mut rng = CounterRng::new(seed);

    let mut max_variance_excess = f64::NEG_INFINITY;
    for _ in 0..trials {
        let ps = ProductState::random(qubit_count, &mut rng)?;
        let dir = rng.next_direction();
        let excess = product_variance(&ps, &dir) - qubit_count as f64 / 4.0;
        max_variance_excess = max_variance_excess.max(excess);
    }

    let mut max_overlap_error = 0.0f64;
    for _ in 0..trials {
        let rho = random_single_qubit_density(&mut rng);
        let det = (rho[(0, 0)] * rho[(1, 1)] - rho[(0, 1)] * rho[(1, 0)]).re;
        let overlap = antisymmetric_overlap(&rho)?;
        max_overlap_error = max_overlap_error.max((overlap - det).abs());
    }

    let mut max_embedding_error = 0.0f64;
    for n in 1..=MAX_EMBEDDING_QUBITS.min(qubit_count) {
        for k in 0..=n {
            let mut dirs = vec![Direction::x_axis(), Direction::y_axis(), Direction::z_axis()];
            dirs.push(rng.next_direction());
            dirs.push(rng.next_direction());
            for dir in dirs {
                let report = dicke_embedding_check(n, k, &dir)?;
                max_embedding_error = max_embedding_error.max(report.max_deviation);
            }
        }
    }

    let mut max_toth_violation = f64::NEG_INFINITY;
    for n in 2..=4usize.min(qubit_count) {
        for _ in 0..trials {
            let components = 1 + (rng.next_u64() % 4) as usize;
            let weights = rng.next_dirichlet(components);
            let states: Vec<ProductState> = (0..components)
                .map(|_| ProductState::random(n, &mut rng))
                .collect::<Result<_>>()?;
            let report = toth_check_products(&weights, &states, &rng.next_triplet())?;
            let violation = report
                .lhs1
                .max(-report.lhs2)
                .max(report.lhs3)
                .max(-report.lhs4);
            max_toth_violation = max_toth_violation.max(violation);
        }
    }

    let all_ok = max_variance_excess <= 1e-10
        && max_overlap_error <= 1e-12
        && max_embedding_error <= 1e-10
        && max_toth_violation <= DETECTION_TOLERANCE;
    Ok(OracleSummary {
        qubit_count,
        trials,
        seed,
        max_variance_excess,
        max_overlap_error,
        max_embedding_error,
        max_toth_violation,
        all_ok,
    })
}

/// Random single-qubit density matrix `ρ = (1 + r⃗·σ⃗)/2`, `|r⃗| ≤ 1`.
fn random_single_qubit_density(rng: &mut CounterRng) -> DMatrix<Complex64> {
    let dir = rng.next_direction();
    let radius = rng.next_f64();
    let r = [radius * dir.x(), radius * dir.y(), radius * dir.z()];
    let mut rho = qubit_spin(&dir) * c(2.0 * radius);
    rho[(0, 0)] += c(1.0);
    rho[(1, 1)] += c(1.0);
    rho *= c(0.5);
    debug_assert!((rho.trace().re - 1.0).abs() < 1e-14);
    let _ = r;
    rho
}
