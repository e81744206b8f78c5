//! States and collective spin operators of the two-mode Fock sector.
//!
//! A system of `n` identical bosons distributed over two modes `a`, `b`
//! (equivalently: `n` indistinguishable qubits) lives in the `(n+1)`-dimensional
//! sector spanned by
//!
//! ```text
//! |k⟩ = (a†)^k (b†)^{n−k} / √(k!(n−k)!) |0⟩,    k = 0, …, n,
//! ```
//!
//! where `k` counts the particles in mode `a`. Basis vectors are stored in
//! ascending `k`. The collective spin operators are the Schwinger
//! pseudo-spins
//!
//! ```text
//! Jx = (a†b + a b†)/2,   Jy = (a†b − a b†)/(2i),   Jz = (a†a − b†b)/2,
//! ```
//!
//! realized here from the single source of truth
//! `⟨k+1| a†b |k⟩ = √((k+1)(n−k))` together with the diagonal
//! `⟨k| Jz |k⟩ = (2k−n)/2`. They satisfy `[Jx,Jy] = iJz` (cyclically) and the
//! Casimir identity `Jx² + Jy² + Jz² = (n/2)(n/2 + 1)·I` on the sector.
//!
//! # Rotation conventions
//!
//! A mode rotation by angle θ about unit direction n⃗ is `U(θ) = exp(−iθ J_n⃗)`;
//! states transform as `ρ ↦ U ρ U†` (vectors as `ψ ↦ U ψ`). Operators
//! conjugate as `U J U†`, which for rotations about ŷ gives
//!
//! ```text
//! U(θ) Jz U(θ)† = cos θ · Jz + sin θ · Jx .
//! ```
//!
//! The θ = π/2 case maps `Jz ↦ Jx`: that is exactly the Bogolubov change of
//! mode basis `c = (a+b)/√2`, `d = (a−b)/√2` (the "energy bipartition" of a
//! double-well system), exposed as [`energy_bipartition_rotation`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, Spectrum};

/// Default cap on the particle number accepted from external input. All
/// matrices are dense `(n+1)²`; this bound keeps accidental huge requests
/// from exhausting memory. Binaries may override it via configuration (the
/// CLI reads `SPINLAB_MAX_N`).
pub const DEFAULT_MAX_N: usize = 4096;

/// Tolerance for unit-norm checks on [`Direction`].
pub const DIRECTION_UNIT_TOLERANCE: f64 = 1e-12;

/// Tolerance for orthonormality checks on [`OrthogonalTriplet`].
pub const TRIPLET_ORTHOGONALITY_TOLERANCE: f64 = 1e-10;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

// ---------------------------------------------------------------------------
// Directions and triplets
// ---------------------------------------------------------------------------

/// A unit vector in ℝ³ selecting a collective spin component `J_n⃗`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    x: f64,
    y: f64,
    z: f64,
}

impl Direction {
    /// A direction from components that must already be unit-norm within
    /// [`DIRECTION_UNIT_TOLERANCE`].
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > DIRECTION_UNIT_TOLERANCE {
            return Err(Error::domain(format!(
                "direction ({x}, {y}, {z}) is not unit-norm (|n| = {norm})"
            )));
        }
        Ok(Direction { x, y, z })
    }

    /// Normalize raw components into a direction, returning the deviation
    /// `| |v| − 1 |` of the raw input so callers can warn about sloppy input.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<(Self, f64)> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::domain(format!(
                "cannot normalize near-zero direction ({x}, {y}, {z})"
            )));
        }
        Ok((
            Direction {
                x: x / norm,
                y: y / norm,
                z: z / norm,
            },
            (norm - 1.0).abs(),
        ))
    }

    /// x̂.
    pub fn x_axis() -> Self {
        Direction { x: 1.0, y: 0.0, z: 0.0 }
    }

    /// ŷ.
    pub fn y_axis() -> Self {
        Direction { x: 0.0, y: 1.0, z: 0.0 }
    }

    /// ẑ.
    pub fn z_axis() -> Self {
        Direction { x: 0.0, y: 0.0, z: 1.0 }
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Components as an array `[x, y, z]`.
    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Euclidean inner product.
    pub fn dot(&self, other: &Direction) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Cross product (not necessarily unit for non-orthogonal inputs).
    pub fn cross(&self, other: &Direction) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    /// Flip the direction.
    pub fn neg(&self) -> Direction {
        Direction { x: -self.x, y: -self.y, z: -self.z }
    }
}

/// An orthonormal frame (n⃗₁, n⃗₂, n⃗₃) for triplet-valued quantities
/// (squeezing inequalities, squeezing parameters, uncertainty chains).
///
/// Orthonormality is enforced within [`TRIPLET_ORTHOGONALITY_TOLERANCE`].
/// Handedness is *not* constrained; identities that need a right-handed
/// frame (e.g. `[J₁, J₂] = iJ₃`) hold up to the sign of n⃗₃, and every
/// quantity computed from a triplet in this crate depends on n⃗₃ only through
/// even powers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthogonalTriplet {
    n1: Direction,
    n2: Direction,
    n3: Direction,
}

impl OrthogonalTriplet {
    /// A triplet from three mutually orthogonal unit directions.
    pub fn new(n1: Direction, n2: Direction, n3: Direction) -> Result<Self> {
        for (label, dot) in [
            ("n1·n2", n1.dot(&n2)),
            ("n1·n3", n1.dot(&n3)),
            ("n2·n3", n2.dot(&n3)),
        ] {
            if dot.abs() > TRIPLET_ORTHOGONALITY_TOLERANCE {
                return Err(Error::domain(format!(
                    "triplet is not orthogonal: {label} = {dot:.3e}"
                )));
            }
        }
        // Completeness along any coordinate axis — a consequence of
        // orthonormality in ℝ³, asserted directly since downstream closed
        // forms rely on n1z² + n2z² + n3z² = 1.
        let z_completeness = n1.z() * n1.z() + n2.z() * n2.z() + n3.z() * n3.z();
        if (z_completeness - 1.0).abs() > TRIPLET_ORTHOGONALITY_TOLERANCE {
            return Err(Error::domain(format!(
                "triplet is not complete: n1z² + n2z² + n3z² = {z_completeness}"
            )));
        }
        Ok(OrthogonalTriplet { n1, n2, n3 })
    }

    /// The coordinate frame (x̂, ŷ, ẑ).
    pub fn xyz() -> Self {
        OrthogonalTriplet {
            n1: Direction::x_axis(),
            n2: Direction::y_axis(),
            n3: Direction::z_axis(),
        }
    }

    /// A right-handed frame completing the given n⃗₃ (n⃗₁ and n⃗₂ chosen
    /// deterministically orthogonal to it).
    pub fn completing_n3(n3: Direction) -> Self {
        // Pick the coordinate axis least aligned with n3 as a helper.
        let helper = if n3.x.abs() <= n3.y.abs() && n3.x.abs() <= n3.z.abs() {
            Direction::x_axis()
        } else if n3.y.abs() <= n3.z.abs() {
            Direction::y_axis()
        } else {
            Direction::z_axis()
        };
        let c1 = n3.cross(&helper);
        let (n1, _) = Direction::normalized(c1[0], c1[1], c1[2])
            .expect("helper axis is not parallel to n3");
        let c2 = n3.cross(&n1);
        let (n2, _) =
            Direction::normalized(c2[0], c2[1], c2[2]).expect("cross of orthogonal units is unit");
        OrthogonalTriplet { n1, n2, n3 }
    }

    pub fn n1(&self) -> Direction {
        self.n1
    }

    pub fn n2(&self) -> Direction {
        self.n2
    }

    pub fn n3(&self) -> Direction {
        self.n3
    }
}

// ---------------------------------------------------------------------------
// Collective spin operators
// ---------------------------------------------------------------------------

/// Raw builder: the matrix `cx·Jx + cy·Jy + cz·Jz` on the `n`-particle
/// sector, with no unit-norm requirement on the coefficients. The unchecked
/// entry point exists so linearity in the direction is a testable property;
/// use [`collective_spin`] for an actual spin component.
pub fn spin_matrix(n: usize, coefficients: [f64; 3]) -> DMatrix<Complex64> {
    let [cx, cy, cz] = coefficients;
    let dim = n + 1;
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..dim {
        m[(k, k)] = c(cz * (2.0 * k as f64 - n as f64) / 2.0);
    }
    // ⟨k+1| a†b |k⟩ = √((k+1)(n−k)):  Jx adds (ladder)/2 on both wings,
    // Jy adds ∓i·(ladder)/2.
    for k in 0..n {
        let ladder = (((k + 1) * (n - k)) as f64).sqrt();
        m[(k + 1, k)] += c(cx * ladder / 2.0) - I * c(cy * ladder / 2.0);
        m[(k, k + 1)] += c(cx * ladder / 2.0) + I * c(cy * ladder / 2.0);
    }
    m
}

/// The three coordinate spin matrices `(Jx, Jy, Jz)` on the `n`-particle
/// sector.
pub fn spin_components(n: usize) -> [DMatrix<Complex64>; 3] {
    [
        spin_matrix(n, [1.0, 0.0, 0.0]),
        spin_matrix(n, [0.0, 1.0, 0.0]),
        spin_matrix(n, [0.0, 0.0, 1.0]),
    ]
}

/// A collective spin component `J_n⃗` on the `n`-particle sector, carrying its
/// dense matrix and the direction it was built from.
#[derive(Debug, Clone)]
pub struct CollectiveSpinOp {
    n: usize,
    direction: Direction,
    matrix: DMatrix<Complex64>,
}

impl CollectiveSpinOp {
    /// Particle number of the sector the operator acts on.
    pub fn n(&self) -> usize {
        self.n
    }

    /// The direction n⃗ of this component.
    pub fn direction(&self) -> Direction {
        self.direction
    }

    /// Dense `(n+1)×(n+1)` matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Build `J_n⃗` for a unit direction.
pub fn collective_spin(n: usize, direction: Direction) -> CollectiveSpinOp {
    CollectiveSpinOp {
        n,
        direction,
        matrix: spin_matrix(n, direction.components()),
    }
}

// ---------------------------------------------------------------------------
// States
// ---------------------------------------------------------------------------

/// A normalized pure state of the `n`-particle sector, stored as amplitudes
/// over the number basis `|0⟩, …, |n⟩`.
#[derive(Debug, Clone)]
pub struct PureState {
    n: usize,
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// The number state `|k⟩`.
    pub fn number_state(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::domain(format!(
                "number state |k={k}⟩ does not exist in the n={n} sector"
            )));
        }
        let mut amplitudes = DVector::<Complex64>::zeros(n + 1);
        amplitudes[k] = c(1.0);
        Ok(PureState { n, amplitudes })
    }

    /// A normalized superposition of the `n`-particle sector from raw
    /// amplitudes over `|0⟩, …, |n⟩`. The input is normalized; a wrong-length
    /// or (almost) zero vector is rejected.
    pub fn superposition(n: usize, amplitudes: &[Complex64]) -> Result<Self> {
        if amplitudes.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: amplitudes.len(),
            });
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm_sqr.is_finite() || norm_sqr < 1e-24 {
            return Err(Error::domain(
                "cannot normalize a (near-)zero amplitude vector",
            ));
        }
        let norm = norm_sqr.sqrt();
        let amplitudes = DVector::from_iterator(
            amplitudes.len(),
            amplitudes.iter().map(|a| a / norm),
        );
        Ok(PureState { n, amplitudes })
    }

    /// Particle number of the sector.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Amplitudes over the number basis.
    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// ⟨self|other⟩.
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// The projector |ψ⟩⟨ψ| as a density operator.
    pub fn to_density(&self) -> DensityOperator {
        let dim = self.n + 1;
        let m = DMatrix::from_fn(dim, dim, |i, j| {
            self.amplitudes[i] * self.amplitudes[j].conj()
        });
        DensityOperator {
            n: self.n,
            matrix: m,
        }
    }
}

/// A classical (diagonal) mixture of number states: probabilities `π_k` over
/// `|0⟩, …, |n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagonalMixture {
    n: usize,
    probs: Vec<f64>,
}

impl DiagonalMixture {
    /// Probability-vector constructor; requires `π_k ≥ 0` and `Σπ = 1`
    /// within `1e-12`.
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::domain("mixture needs at least one probability"));
        }
        if let Some(bad) = probs.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::domain(format!(
                "mixture probabilities must be finite and non-negative, got {bad}"
            )));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!(
                "mixture probabilities must sum to 1, got {total}"
            )));
        }
        Ok(DiagonalMixture {
            n: probs.len() - 1,
            probs,
        })
    }

    /// Normalize raw non-negative weights into a mixture, returning the raw
    /// sum's deviation from 1 alongside.
    pub fn normalized(weights: &[f64]) -> Result<(Self, f64)> {
        if weights.is_empty() {
            return Err(Error::domain("mixture needs at least one weight"));
        }
        if let Some(bad) = weights.iter().find(|&&p| p < 0.0 || !p.is_finite()) {
            return Err(Error::domain(format!(
                "mixture weights must be finite and non-negative, got {bad}"
            )));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::domain("mixture weights sum to zero"));
        }
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        Ok((
            DiagonalMixture {
                n: probs.len() - 1,
                probs,
            },
            (total - 1.0).abs(),
        ))
    }

    /// The point mixture δ_{kℓ} concentrated on `|ℓ⟩`.
    pub fn point(n: usize, l: usize) -> Result<Self> {
        if l > n {
            return Err(Error::domain(format!(
                "point mixture at k={l} does not exist in the n={n} sector"
            )));
        }
        let mut probs = vec![0.0; n + 1];
        probs[l] = 1.0;
        Ok(DiagonalMixture { n, probs })
    }

    /// Particle number of the sector.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Probabilities `π_0, …, π_n`.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// The corresponding diagonal density operator.
    pub fn to_density(&self) -> DensityOperator {
        let dim = self.n + 1;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for k in 0..dim {
            m[(k, k)] = c(self.probs[k]);
        }
        DensityOperator {
            n: self.n,
            matrix: m,
        }
    }
}

/// The diagonal density operator of a classical number-state mixture.
pub fn mixture_density(mix: &DiagonalMixture) -> DensityOperator {
    mix.to_density()
}

/// A density operator on the `n`-particle sector: Hermitian, unit trace, and
/// positive semidefinite up to the numerical floor `−1e-10` on eigenvalues.
///
/// Construction validates Hermiticity and trace (cheap, elementwise). The
/// eigenvalue floor is enforced where spectra are actually computed — the
/// QFI routines clamp round-off negatives in `[−1e-10, 0)` and reject
/// anything lower — and by [`DensityOperator::validate_spectrum`] for
/// explicit audits.
#[derive(Debug, Clone)]
pub struct DensityOperator {
    n: usize,
    matrix: DMatrix<Complex64>,
}

/// Hermiticity/trace tolerance for density-operator construction.
pub const DENSITY_TOLERANCE: f64 = 1e-12;

/// Numerical floor on density-operator eigenvalues: values in
/// `[−EIGENVALUE_FLOOR, 0)` are treated as round-off zeros.
pub const EIGENVALUE_FLOOR: f64 = 1e-10;

impl DensityOperator {
    /// Wrap a dense matrix after checking Hermiticity and unit trace within
    /// [`DENSITY_TOLERANCE`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::domain(format!(
                "density operator must be square and non-empty, got {}×{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let defect = crate::linalg::hermiticity_defect(&matrix);
        if defect > DENSITY_TOLERANCE {
            return Err(Error::domain(format!(
                "density operator is not Hermitian: max |ρ − ρ†| = {defect:.3e}"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > DENSITY_TOLERANCE || trace.im.abs() > DENSITY_TOLERANCE {
            return Err(Error::domain(format!(
                "density operator must have unit trace, got {} + {}i",
                trace.re, trace.im
            )));
        }
        Ok(DensityOperator {
            n: matrix.nrows() - 1,
            matrix,
        })
    }

    /// Particle number of the sector.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Diagonal in the number basis (the outcome distribution of a number
    /// measurement).
    pub fn diagonal_probabilities(&self) -> Vec<f64> {
        (0..=self.n).map(|k| self.matrix[(k, k)].re).collect()
    }

    /// Eigendecompose and check the positivity floor: eigenvalues must be
    /// `≥ −`[`EIGENVALUE_FLOOR`]. Returns the spectrum for reuse.
    pub fn validate_spectrum(&self) -> Result<Spectrum> {
        let spectrum = hermitian_eig(&self.matrix)?;
        if let Some(&lambda) = spectrum
            .eigenvalues
            .iter()
            .find(|&&lambda| lambda < -EIGENVALUE_FLOOR)
        {
            return Err(Error::domain(format!(
                "density operator is not positive semidefinite: eigenvalue {lambda:.3e}"
            )));
        }
        Ok(spectrum)
    }
}

/// A state of the sector — pure or mixed — for routines that accept both.
#[derive(Debug, Clone)]
pub enum State {
    Pure(PureState),
    Mixed(DensityOperator),
}

impl State {
    /// Particle number of the sector.
    pub fn n(&self) -> usize {
        match self {
            State::Pure(p) => p.n(),
            State::Mixed(m) => m.n(),
        }
    }

    /// Materialize as a density operator (projector for pure states).
    pub fn to_density(&self) -> DensityOperator {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(m) => m.clone(),
        }
    }

    /// Outcome distribution of a number measurement on this state.
    pub fn number_distribution(&self) -> Vec<f64> {
        match self {
            State::Pure(p) => p.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
            State::Mixed(m) => m.diagonal_probabilities(),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityOperator> for State {
    fn from(m: DensityOperator) -> Self {
        State::Mixed(m)
    }
}

impl From<DiagonalMixture> for State {
    fn from(mix: DiagonalMixture) -> Self {
        State::Mixed(mix.to_density())
    }
}

// ---------------------------------------------------------------------------
// Mode rotations
// ---------------------------------------------------------------------------

/// The unitary `U(θ) = exp(−iθ J_n⃗)` on the `n`-particle sector, computed
/// through the Hermitian eigendecomposition of `J_n⃗`.
///
/// Under this convention `U(θ) Jz U(θ)† = cos θ·Jz + sin θ·Jx` for rotations
/// about ŷ (see module docs).
///
/// # Errors
///
/// Propagates eigensolver non-convergence as a numeric error.
pub fn mode_rotation(n: usize, direction: Direction, angle: f64) -> Result<DMatrix<Complex64>> {
    let op = collective_spin(n, direction);
    let spectrum = hermitian_eig(op.matrix())?;
    Ok(unitary_from_spectrum(&spectrum, angle))
}

/// `exp(−i·angle·A)` from the spectral data of `A`.
pub(crate) fn unitary_from_spectrum(spectrum: &Spectrum, angle: f64) -> DMatrix<Complex64> {
    let dim = spectrum.dim();
    let v = &spectrum.eigenvectors;
    // U = V · diag(e^{−iθλ}) · V†, assembled column-block wise.
    let mut phased = v.clone();
    for (j, &lambda) in spectrum.eigenvalues.iter().enumerate() {
        let phase = Complex64::from_polar(1.0, -angle * lambda);
        for i in 0..dim {
            phased[(i, j)] *= phase;
        }
    }
    phased * v.adjoint()
}

/// The θ = π/2 rotation about ŷ implementing the Bogolubov change of mode
/// basis `(a, b) ↦ ((a+b)/√2, (a−b)/√2)`: conjugation by this unitary maps
/// `Jz ↦ Jx` and thereby re-expresses number-basis quantities in the
/// energy-eigenmode bipartition of a symmetric double well.
pub fn energy_bipartition_rotation(n: usize) -> Result<DMatrix<Complex64>> {
    mode_rotation(n, Direction::y_axis(), std::f64::consts::FRAC_PI_2)
}

/// Rotate a state: `ρ ↦ U ρ U†` (pure states stay pure: `ψ ↦ U ψ`).
pub fn rotate(state: &State, direction: Direction, angle: f64) -> Result<State> {
    let u = mode_rotation(state.n(), direction, angle)?;
    Ok(apply_unitary(state, &u))
}

/// Apply a precomputed unitary to a state, preserving its kind.
pub(crate) fn apply_unitary(state: &State, u: &DMatrix<Complex64>) -> State {
    match state {
        State::Pure(p) => {
            let amplitudes = u * p.amplitudes();
            State::Pure(PureState {
                n: p.n(),
                amplitudes,
            })
        }
        State::Mixed(m) => {
            let rotated = u * m.matrix() * u.adjoint();
            State::Mixed(DensityOperator {
                n: m.n(),
                matrix: rotated,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn commutator(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        a * b - b * a
    }

    fn max_abs(m: &DMatrix<Complex64>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn jz_is_diagonal_with_half_integer_entries() {
        let [_, _, jz] = spin_components(4);
        // |k=3⟩ in the n=4 sector: ⟨Jz⟩ = (2·3−4)/2 = 1.
        assert_relative_eq!(jz[(3, 3)].re, 1.0);
        assert_relative_eq!(jz[(0, 0)].re, -2.0);
        assert_relative_eq!(jz[(4, 4)].re, 2.0);
    }

    #[test]
    fn jx_for_two_particles_is_tridiagonal_sqrt2_over_2() {
        let [jx, _, _] = spin_components(2);
        let expected = (2.0f64).sqrt() / 2.0;
        assert_relative_eq!(jx[(1, 0)].re, expected, epsilon = 1e-15);
        assert_relative_eq!(jx[(0, 1)].re, expected, epsilon = 1e-15);
        assert_relative_eq!(jx[(2, 1)].re, expected, epsilon = 1e-15);
        assert_relative_eq!(jx[(1, 2)].re, expected, epsilon = 1e-15);
        assert_relative_eq!(jx[(0, 2)].norm(), 0.0);
        assert_relative_eq!(jx[(2, 0)].norm(), 0.0);
    }

    #[test]
    fn jx_for_two_particles_has_spin_one_eigenvalues() {
        let [jx, _, _] = spin_components(2);
        let s = hermitian_eig(&jx).unwrap();
        assert_relative_eq!(s.eigenvalues[0], -1.0, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn su2_commutators_hold() {
        for n in [1usize, 2, 3, 7, 20] {
            let [jx, jy, jz] = spin_components(n);
            assert!(max_abs(&(commutator(&jx, &jy) - &jz * I)) < 1e-12, "n={n}");
            assert!(max_abs(&(commutator(&jy, &jz) - &jx * I)) < 1e-12, "n={n}");
            assert!(max_abs(&(commutator(&jz, &jx) - &jy * I)) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn casimir_identity_holds() {
        for n in [1usize, 2, 5, 12] {
            let [jx, jy, jz] = spin_components(n);
            let total = &jx * &jx + &jy * &jy + &jz * &jz;
            let j = n as f64 / 2.0;
            let expected =
                DMatrix::<Complex64>::identity(n + 1, n + 1) * c(j * (j + 1.0));
            assert!(max_abs(&(total - expected)) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn spin_eigenvalues_stay_in_the_representation_range() {
        let mut rng = crate::rng::CounterRng::new(0xF0C5);
        for n in [1usize, 2, 7, 24] {
            let dir = rng.next_direction();
            let op = collective_spin(n, dir);
            let s = hermitian_eig(op.matrix()).unwrap();
            let half = n as f64 / 2.0;
            for &lambda in &s.eigenvalues {
                assert!(lambda >= -half - 1e-10 && lambda <= half + 1e-10, "n={n}");
            }
            // The extremes are attained: J_n⃗ is unitarily equivalent to Jz.
            assert_relative_eq!(s.eigenvalues[0], -half, epsilon = 1e-10);
            assert_relative_eq!(s.eigenvalues[n], half, epsilon = 1e-10);
        }
    }

    #[test]
    fn casimir_holds_for_random_triplets() {
        let mut rng = crate::rng::CounterRng::new(0xCA51);
        for n in [1usize, 3, 9] {
            let t = rng.next_triplet();
            let sum = [t.n1(), t.n2(), t.n3()]
                .iter()
                .map(|d| {
                    let j = collective_spin(n, *d);
                    j.matrix() * j.matrix()
                })
                .fold(DMatrix::<Complex64>::zeros(n + 1, n + 1), |acc, m| acc + m);
            let j = n as f64 / 2.0;
            let expected = DMatrix::<Complex64>::identity(n + 1, n + 1) * c(j * (j + 1.0));
            assert!(max_abs(&(sum - expected)) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn spin_matrix_is_linear_in_the_direction() {
        let n = 5;
        let a = spin_matrix(n, [0.3, -1.2, 2.0]);
        let b = spin_matrix(n, [-0.7, 0.4, 0.1]);
        let combined = spin_matrix(n, [0.3 - 0.7, -1.2 + 0.4, 2.0 + 0.1]);
        assert!(max_abs(&(a + b - combined)) < 1e-13);
    }

    #[test]
    fn direction_construction_enforces_unit_norm() {
        assert!(Direction::new(1.0, 0.0, 0.0).is_ok());
        assert!(Direction::new(1.0, 1.0, 0.0).is_err());
        let (d, dev) = Direction::normalized(0.0, 2.0, 0.0).unwrap();
        assert_relative_eq!(d.y(), 1.0);
        assert_relative_eq!(dev, 1.0);
        assert!(Direction::normalized(0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn triplet_rejects_non_orthogonal_frames() {
        let t = OrthogonalTriplet::new(
            Direction::x_axis(),
            Direction::new(0.6, 0.8, 0.0).unwrap(),
            Direction::z_axis(),
        );
        assert!(t.is_err());
        assert!(OrthogonalTriplet::xyz().n3().z() == 1.0);
    }

    #[test]
    fn completing_n3_builds_an_orthonormal_frame() {
        let (n3, _) = Direction::normalized(0.3, -0.5, 0.81).unwrap();
        let t = OrthogonalTriplet::completing_n3(n3);
        assert!(t.n1().dot(&t.n2()).abs() < 1e-12);
        assert!(t.n1().dot(&t.n3()).abs() < 1e-12);
        assert!(t.n2().dot(&t.n3()).abs() < 1e-12);
        // Right-handed: n1 × n2 = n3.
        let cr = t.n1().cross(&t.n2());
        assert_relative_eq!(cr[0], t.n3().x(), epsilon = 1e-12);
        assert_relative_eq!(cr[1], t.n3().y(), epsilon = 1e-12);
        assert_relative_eq!(cr[2], t.n3().z(), epsilon = 1e-12);
    }

    #[test]
    fn number_state_and_superposition_basics() {
        let k1 = PureState::number_state(4, 1).unwrap();
        assert_eq!(k1.n(), 4);
        assert_relative_eq!(k1.amplitudes()[1].re, 1.0);
        assert!(PureState::number_state(4, 5).is_err());

        // (1, i, 0) normalizes to (1/√2)(1, i, 0).
        let s = PureState::superposition(2, &[c(1.0), I, c(0.0)]).unwrap();
        let r = 1.0 / (2.0f64).sqrt();
        assert_relative_eq!(s.amplitudes()[0].re, r, epsilon = 1e-15);
        assert_relative_eq!(s.amplitudes()[1].im, r, epsilon = 1e-15);
        assert_relative_eq!(s.amplitudes()[2].norm(), 0.0);

        // (1, 1, 1) on n = 2 normalizes to (1/√3)(1, 1, 1); (0, 5) to (0, 1).
        let u = PureState::superposition(2, &[c(1.0), c(1.0), c(1.0)]).unwrap();
        assert_relative_eq!(u.amplitudes()[2].re, 1.0 / (3.0f64).sqrt(), epsilon = 1e-15);
        let v = PureState::superposition(1, &[c(0.0), c(5.0)]).unwrap();
        assert_relative_eq!(v.amplitudes()[1].re, 1.0, epsilon = 1e-15);

        assert!(PureState::superposition(1, &[c(0.0), c(0.0)]).is_err());
        assert!(PureState::superposition(3, &[c(1.0), c(0.0)]).is_err());
    }

    #[test]
    fn mixture_validation_and_density() {
        assert!(DiagonalMixture::new(vec![0.5, 0.6]).is_err());
        assert!(DiagonalMixture::new(vec![0.5, -0.1, 0.6]).is_err());
        let m = DiagonalMixture::new(vec![0.25, 0.5, 0.25]).unwrap();
        assert_eq!(m.n(), 2);
        let rho = m.to_density();
        assert_relative_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-15);

        // Uniform mixture on n = 2 → diag(1/3, 1/3, 1/3); point mixture → projector.
        let uniform = DiagonalMixture::new(vec![1.0 / 3.0; 3]).unwrap();
        let rho_u = mixture_density(&uniform);
        for k in 0..3 {
            assert_relative_eq!(rho_u.matrix()[(k, k)].re, 1.0 / 3.0, epsilon = 1e-15);
        }
        let point = DiagonalMixture::point(2, 1).unwrap();
        let rho_p = mixture_density(&point);
        let proj = PureState::number_state(2, 1).unwrap().to_density();
        assert!((rho_p.matrix() - proj.matrix()).norm() < 1e-15);

        let (nm, dev) = DiagonalMixture::normalized(&[1.0, 1.0, 2.0]).unwrap();
        assert_relative_eq!(nm.probs()[2], 0.5);
        assert_relative_eq!(dev, 3.0);
    }

    #[test]
    fn density_operator_validation() {
        // Non-unit trace.
        let m = DMatrix::<Complex64>::identity(3, 3);
        assert!(DensityOperator::new(m).is_err());
        // Valid projector.
        let psi = PureState::number_state(2, 1).unwrap();
        let rho = psi.to_density();
        assert_relative_eq!(rho.matrix().trace().re, 1.0, epsilon = 1e-15);
        let spec = rho.validate_spectrum().unwrap();
        assert_relative_eq!(spec.eigenvalues[2], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mode_rotation_is_unitary_and_invertible() {
        let n = 6;
        let (dir, _) = Direction::normalized(1.0, -2.0, 0.5).unwrap();
        let u = mode_rotation(n, dir, 0.7).unwrap();
        let eye = DMatrix::<Complex64>::identity(n + 1, n + 1);
        assert!(max_abs(&(&u * u.adjoint() - &eye)) < 1e-10);
        let uinv = mode_rotation(n, dir, -0.7).unwrap();
        assert!(max_abs(&(&u * uinv - eye)) < 1e-10);
    }

    #[test]
    fn adjoint_identity_fixes_the_sign_convention() {
        // U(θ) Jz U(θ)† = cos θ·Jz + sin θ·Jx with U = exp(−iθ Jy).
        for n in [1usize, 2, 5] {
            for theta in [0.3, 1.1, -0.8, std::f64::consts::FRAC_PI_2] {
                let [jx, _, jz] = spin_components(n);
                let u = mode_rotation(n, Direction::y_axis(), theta).unwrap();
                let conjugated = &u * &jz * u.adjoint();
                let expected = &jz * c(theta.cos()) + &jx * c(theta.sin());
                assert!(
                    max_abs(&(conjugated - expected)) < 1e-10,
                    "n={n} theta={theta}"
                );
            }
        }
    }

    #[test]
    fn energy_bipartition_maps_jz_to_jx() {
        for n in [1usize, 3, 8] {
            let [jx, _, jz] = spin_components(n);
            let u = energy_bipartition_rotation(n).unwrap();
            let conjugated = &u * &jz * u.adjoint();
            assert!(max_abs(&(conjugated - jx)) < 1e-10, "n={n}");
        }
    }

    #[test]
    fn rotation_preserves_state_kind_and_trace() {
        let pure: State = PureState::number_state(5, 2).unwrap().into();
        let rotated = rotate(&pure, Direction::y_axis(), 0.4).unwrap();
        assert!(matches!(rotated, State::Pure(_)));
        let norm: f64 = rotated.number_distribution().iter().sum();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-12);

        let mixed: State = DiagonalMixture::new(vec![0.3, 0.3, 0.4]).unwrap().into();
        let rotated = rotate(&mixed, Direction::x_axis(), 1.2).unwrap();
        match &rotated {
            State::Mixed(m) => {
                assert_relative_eq!(m.matrix().trace().re, 1.0, epsilon = 1e-12);
                m.validate_spectrum().unwrap();
            }
            State::Pure(_) => panic!("mixed state must stay mixed"),
        }
    }

    #[test]
    fn single_particle_rotation_gives_the_textbook_distribution() {
        // n = 1, |k=1⟩, rotation about ŷ: outcome distribution
        // (sin²(θ/2), cos²(θ/2)).
        let theta = 0.9;
        let state: State = PureState::number_state(1, 1).unwrap().into();
        let rotated = rotate(&state, Direction::y_axis(), theta).unwrap();
        let p = rotated.number_distribution();
        assert_relative_eq!(p[0], (theta / 2.0).sin().powi(2), epsilon = 1e-12);
        assert_relative_eq!(p[1], (theta / 2.0).cos().powi(2), epsilon = 1e-12);
    }
}
