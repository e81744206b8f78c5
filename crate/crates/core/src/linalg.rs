//! Dense Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! The spectral routines of this crate (mode rotations, quantum Fisher
//! information, symmetric logarithmic derivatives) all reduce to the
//! eigendecomposition of a complex Hermitian matrix. At the dimensions in
//! play here (a few thousand at most, usually well under a hundred) the
//! Jacobi iteration is a sound choice: unconditionally robust for Hermitian
//! input, explicitly accurate for small off-diagonal residuals, and simple
//! enough to audit line by line.
//!
//! This is the *complex* two-sided Jacobi: each pivot (p, q) is annihilated
//! by a unitary that first rotates the pivot's phase away and then applies a
//! real Givens rotation, exactly as in the classical real-symmetric
//! algorithm. Sweeps are cyclic over the upper triangle; iteration stops
//! when the off-diagonal Frobenius norm drops below `1e-13 · ‖A‖_F`, and a
//! budget of 100 sweeps guards against (never observed) stagnation — running
//! out of budget is a numeric error carrying the final residual.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative off-diagonal Frobenius tolerance declaring convergence.
pub const JACOBI_TOLERANCE: f64 = 1e-13;

/// Hard cap on cyclic sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Hermiticity tolerance accepted on input (max elementwise |A − A†|).
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Result of a Hermitian eigendecomposition: real eigenvalues in ascending
/// order and the matching orthonormal eigenvector columns, so that
/// `A = V · diag(λ) · V†`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues, ascending.
    pub eigenvalues: Vec<f64>,
    /// Unitary matrix whose `i`-th column is the eigenvector of
    /// `eigenvalues[i]`.
    pub eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    /// Dimension of the decomposed matrix.
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

/// Max elementwise deviation of `a` from its own adjoint.
pub fn hermiticity_defect(a: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.nrows() {
        for j in i..a.ncols() {
            let d = (a[(i, j)] - a[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Frobenius norm of the strictly off-diagonal part.
fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let mut sum = 0.0;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi
/// rotations.
///
/// The input must be square and Hermitian within [`HERMITICITY_TOLERANCE`]
/// (elementwise); it is symmetrized as `(A + A†)/2` before iterating so
/// rounding asymmetry cannot accumulate. Returns eigenvalues ascending with
/// orthonormal eigenvectors.
///
/// # Errors
///
/// [`Error::Domain`] for non-square or non-Hermitian input;
/// [`Error::NonConvergence`] (with the final off-diagonal residual) if the
/// tolerance is not reached within [`JACOBI_MAX_SWEEPS`] sweeps.
pub fn hermitian_eig(a: &DMatrix<Complex64>) -> Result<Spectrum> {
    let m = a.nrows();
    if m != a.ncols() {
        return Err(Error::domain(format!(
            "eigensolver needs a square matrix, got {}×{}",
            a.nrows(),
            a.ncols()
        )));
    }
    let defect = hermiticity_defect(a);
    if defect > HERMITICITY_TOLERANCE {
        return Err(Error::domain(format!(
            "eigensolver input is not Hermitian: max |A - A†| = {defect:.3e}"
        )));
    }
    if m == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: DMatrix::zeros(0, 0),
        });
    }

    // Work on the symmetrized copy; accumulate the unitary in `v`.
    let mut w = DMatrix::from_fn(m, m, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = DMatrix::<Complex64>::identity(m, m);

    let norm = w.norm(); // Frobenius
    let target = JACOBI_TOLERANCE * norm;
    if norm == 0.0 || off_diagonal_norm(&w) <= target {
        return Ok(sorted_spectrum(w, v));
    }

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        for p in 0..m - 1 {
            for q in p + 1..m {
                let g = w[(p, q)];
                let mag = g.norm();
                if mag == 0.0 {
                    continue;
                }
                // Phase factor making the pivot real, then the classical
                // real-rotation angle from the diagonal gap.
                let phase = g / mag; // e^{iφ}
                let alpha = w[(p, p)].re;
                let beta = w[(q, q)].re;
                let tau = (beta - alpha) / (2.0 * mag);
                let t = if tau.abs() > 1e153 {
                    // Avoid overflow in tau²; asymptotic root of t² + 2tτ − 1.
                    0.5 / tau
                } else {
                    tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Unitary restricted to columns (p, q):
                //   U[p][p] = c        U[p][q] = s
                //   U[q][p] = −s·w̄    U[q][q] = c·w̄        (w̄ = conj(phase))
                // Apply A ← U† A U and V ← V U.
                let wbar = phase.conj();
                for i in 0..m {
                    let aip = w[(i, p)];
                    let aiq = w[(i, q)];
                    w[(i, p)] = aip * c - aiq * wbar * s;
                    w[(i, q)] = aip * s + aiq * wbar * c;
                }
                for j in 0..m {
                    let apj = w[(p, j)];
                    let aqj = w[(q, j)];
                    w[(p, j)] = apj * c - aqj * phase * s;
                    w[(q, j)] = apj * s + aqj * phase * c;
                }
                // Pivot is annihilated by construction; pin it to keep the
                // off-diagonal norm honest against rounding.
                w[(p, q)] = Complex64::new(0.0, 0.0);
                w[(q, p)] = Complex64::new(0.0, 0.0);
                w[(p, p)] = Complex64::new(w[(p, p)].re, 0.0);
                w[(q, q)] = Complex64::new(w[(q, q)].re, 0.0);

                for i in 0..m {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * c - viq * wbar * s;
                    v[(i, q)] = vip * s + viq * wbar * c;
                }
            }
        }
        if off_diagonal_norm(&w) <= target {
            return Ok(sorted_spectrum(w, v));
        }
    }

    Err(Error::NonConvergence {
        residual: off_diagonal_norm(&w),
    })
}

/// Sort eigenvalues ascending and permute eigenvector columns to match.
fn sorted_spectrum(w: DMatrix<Complex64>, v: DMatrix<Complex64>) -> Spectrum {
    let m = w.nrows();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| {
        w[(i, i)]
            .re
            .partial_cmp(&w[(j, j)].re)
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| w[(i, i)].re).collect();
    let eigenvectors = DMatrix::from_fn(m, m, |i, j| v[(i, order[j])]);
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::CounterRng;
    use approx::assert_relative_eq;

    fn random_hermitian(m: usize, rng: &mut CounterRng) -> DMatrix<Complex64> {
        let g = DMatrix::from_fn(m, m, |_, _| {
            Complex64::new(rng.next_gaussian(), rng.next_gaussian())
        });
        (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
    }

    fn reconstruction_error(a: &DMatrix<Complex64>, s: &Spectrum) -> f64 {
        let m = a.nrows();
        let lambda = DMatrix::from_fn(m, m, |i, j| {
            if i == j {
                Complex64::new(s.eigenvalues[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let rebuilt = &s.eigenvectors * lambda * s.eigenvectors.adjoint();
        (a - rebuilt).norm()
    }

    #[test]
    fn diagonal_matrix_is_immediate() {
        let a = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(3.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(2.0, 0.0),
        ]));
        let s = hermitian_eig(&a).unwrap();
        assert_eq!(s.eigenvalues, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn known_two_by_two() {
        // [[1, i], [-i, 1]] has eigenvalues 0 and 2.
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        let s = hermitian_eig(&a).unwrap();
        assert_relative_eq!(s.eigenvalues[0], 0.0, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], 2.0, epsilon = 1e-12);
        assert!(reconstruction_error(&a, &s) < 1e-12);
    }

    #[test]
    fn random_matrices_reconstruct_and_stay_orthonormal() {
        let mut rng = CounterRng::new(0xE16);
        for &m in &[1usize, 2, 3, 8, 25, 60] {
            let a = random_hermitian(m, &mut rng);
            let s = hermitian_eig(&a).unwrap();
            assert!(
                reconstruction_error(&a, &s) < 1e-10 * (1.0 + a.norm()),
                "m = {m}"
            );
            let gram = s.eigenvectors.adjoint() * &s.eigenvectors;
            let eye = DMatrix::<Complex64>::identity(m, m);
            assert!((gram - eye).norm() < 1e-11, "m = {m}");
            for w in s.eigenvalues.windows(2) {
                assert!(w[0] <= w[1]);
            }
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
            ],
        );
        assert!(matches!(hermitian_eig(&a), Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_non_square_input() {
        let a = DMatrix::<Complex64>::zeros(2, 3);
        assert!(matches!(hermitian_eig(&a), Err(Error::Domain(_))));
    }

    #[test]
    fn degenerate_spectra_are_handled() {
        // Projector onto a two-dimensional subspace: eigenvalues {0, 1, 1}.
        let mut rng = CounterRng::new(0xDE6);
        let u = {
            let a = random_hermitian(3, &mut rng);
            hermitian_eig(&a).unwrap().eigenvectors
        };
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
        ]));
        let a = &u * d * u.adjoint();
        let s = hermitian_eig(&a).unwrap();
        assert_relative_eq!(s.eigenvalues[0], 0.0, epsilon = 1e-10);
        assert_relative_eq!(s.eigenvalues[1], 1.0, epsilon = 1e-10);
        assert_relative_eq!(s.eigenvalues[2], 1.0, epsilon = 1e-10);
        assert!(reconstruction_error(&a, &s) < 1e-10);
    }
}
