//! Deterministic counter-based random number generation.
//!
//! Every stochastic routine in this crate (measurement sampling, randomized
//! property trials, the oracle suite) draws from [`CounterRng`], a seeded
//! 64-bit *counter-based* generator: the `i`-th output is a pure function of
//! `(seed, i)`, so streams can be replayed, split, and verified across
//! platforms — and reimplemented in a few lines in any language. That
//! reproducibility is the whole point: published numbers must be
//! re-derivable from the seed alone.
//!
//! # Specification
//!
//! The generator is the SplitMix64 output function applied to an affine
//! counter sequence. With wrapping 64-bit arithmetic:
//!
//! ```text
//! state_i = seed + (i + 1) · 0x9E37_79B9_7F4A_7C15          (golden ratio)
//! mix(z):  z ^= z >> 30;  z *= 0xBF58_476D_1CE4_E5B9;
//!          z ^= z >> 27;  z *= 0x94D0_49BB_1331_11EB;
//!          z ^= z >> 31;  return z
//! output_i = mix(state_i)
//! ```
//!
//! `next_f64` maps an output to `[0, 1)` by taking the top 53 bits;
//! `next_open_f64` maps to the open interval `(0, 1)` (safe under `ln`);
//! `next_gaussian` is a plain Box–Muller transform consuming exactly two
//! outputs per call. Derived streams for independent repetitions use
//! `seed ⊕ index` (see [`CounterRng::derived`]).

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::fock::{DensityOperator, DiagonalMixture, Direction, OrthogonalTriplet, PureState};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seeded counter-based 64-bit generator (see module docs for the exact
/// specification).
#[derive(Debug, Clone)]
pub struct CounterRng {
    seed: u64,
    counter: u64,
}

impl CounterRng {
    /// Generator for the stream identified by `seed`, positioned at its
    /// first output.
    pub fn new(seed: u64) -> Self {
        CounterRng { seed, counter: 0 }
    }

    /// Generator for an independent derived stream: stream `index` of `seed`
    /// is the stream of `seed ⊕ index`. Used for per-repetition streams so
    /// repetitions are reproducible in isolation and order-independent.
    pub fn derived(seed: u64, index: u64) -> Self {
        CounterRng::new(seed ^ index)
    }

    /// The seed this stream was created with.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Next raw 64-bit output.
    pub fn next_u64(&mut self) -> u64 {
        self.counter += 1;
        mix(self.seed.wrapping_add(self.counter.wrapping_mul(GOLDEN)))
    }

    /// Uniform on `[0, 1)` with 53-bit resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on the open interval `(0, 1)`; safe to pass through `ln`.
    pub fn next_open_f64(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate via Box–Muller (two outputs consumed, the
    /// sine branch is discarded so the draw count stays predictable).
    pub fn next_gaussian(&mut self) -> f64 {
        let u1 = self.next_open_f64();
        let u2 = self.next_f64();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform direction on the unit sphere (three normalized Gaussians;
    /// the degenerate near-zero vector is rejected and redrawn).
    pub fn next_direction(&mut self) -> Direction {
        loop {
            let (x, y, z) = (
                self.next_gaussian(),
                self.next_gaussian(),
                self.next_gaussian(),
            );
            let norm = (x * x + y * y + z * z).sqrt();
            if norm > 1e-6 {
                return Direction::new(x / norm, y / norm, z / norm)
                    .expect("normalized vector is a valid direction");
            }
        }
    }

    /// Symmetric Dirichlet(1) probability vector of length `len`
    /// (normalized exponentials), suitable as a random diagonal mixture.
    pub fn next_dirichlet(&mut self, len: usize) -> Vec<f64> {
        assert!(len > 0, "Dirichlet draw needs at least one component");
        let mut probs: Vec<f64> = (0..len).map(|_| -self.next_open_f64().ln()).collect();
        let total: f64 = probs.iter().sum();
        for p in &mut probs {
            *p /= total;
        }
        probs
    }

    /// Uniformly random orthonormal frame: n⃗₁ uniform on the sphere, n⃗₂ a
    /// normalized cross with an independent direction (redrawn when nearly
    /// parallel), n⃗₃ = n⃗₁ × n⃗₂ (right-handed).
    pub fn next_triplet(&mut self) -> OrthogonalTriplet {
        let n1 = self.next_direction();
        let n2 = loop {
            let helper = self.next_direction();
            let cr = n1.cross(&helper);
            if let Ok((d, _)) = Direction::normalized(cr[0], cr[1], cr[2]) {
                break d;
            }
        };
        let cr = n1.cross(&n2);
        let (n3, _) = Direction::normalized(cr[0], cr[1], cr[2])
            .expect("cross product of orthogonal unit vectors is unit");
        OrthogonalTriplet::new(n1, n2, n3).expect("constructed frame is orthonormal")
    }

    /// Haar-like random pure state of the `n`-particle sector: i.i.d. complex
    /// Gaussian amplitudes, normalized.
    pub fn next_pure_state(&mut self, n: usize) -> PureState {
        loop {
            let amplitudes: Vec<Complex64> = (0..=n)
                .map(|_| Complex64::new(self.next_gaussian(), self.next_gaussian()))
                .collect();
            if let Ok(state) = PureState::superposition(n, &amplitudes) {
                return state;
            }
        }
    }

    /// Random diagonal mixture of the `n`-particle sector (Dirichlet(1)
    /// probabilities).
    pub fn next_diagonal_mixture(&mut self, n: usize) -> DiagonalMixture {
        let (mix, _) = DiagonalMixture::normalized(&self.next_dirichlet(n + 1))
            .expect("Dirichlet draw is a valid weight vector");
        mix
    }

    /// Random mixed state: convex combination of `rank` random pure states
    /// with Dirichlet(1) weights. Positive semidefinite and unit-trace by
    /// construction.
    pub fn next_density(&mut self, n: usize, rank: usize) -> DensityOperator {
        assert!(rank > 0, "mixed state needs at least one component");
        let weights = self.next_dirichlet(rank);
        let dim = n + 1;
        let mut matrix = DMatrix::<Complex64>::zeros(dim, dim);
        for &w in &weights {
            let psi = self.next_pure_state(n);
            let a = psi.amplitudes();
            for i in 0..dim {
                for j in 0..dim {
                    matrix[(i, j)] += a[i] * a[j].conj() * w;
                }
            }
        }
        DensityOperator::new(matrix).expect("convex combination of projectors is a state")
    }
}
