//! Numerical toolkit for two-mode bosonic spin systems: states and
//! collective spin operators of `n` identical qubits, variance-based
//! entanglement detection, spin squeezing, quantum Fisher information, and
//! Monte-Carlo interferometric phase estimation.
//!
//! Everything lives on the `(n+1)`-dimensional two-mode number basis — see
//! [`fock`] for conventions. Modules:
//!
//! - [`fock`] — states ([`PureState`], [`DensityOperator`], [`DiagonalMixture`]),
//!   directions and frames, collective spin matrices, mode rotations;
//! - [`moments`] — expectation values, variances, and closed forms for
//!   number-diagonal states;
//! - [`squeezing`] — the four collective-variance entanglement inequalities,
//!   the tilted-axis violation analysis for number-diagonal states, and the
//!   squeezing parameters ξ²_W, ξ²_S with their special state families;
//! - [`qfi`] — quantum Fisher information via the symmetric logarithmic
//!   derivative, closed forms, and uncertainty-bound chains;
//! - [`interferometer`] — rotation statistics, classical Fisher information,
//!   error propagation, and maximum-likelihood phase estimation;
//! - [`oracle`] — an independent distinguishable-qubit implementation used
//!   to cross-check the sector formulas in tests;
//! - [`linalg`] — the Hermitian eigensolver behind the spectral routines;
//! - [`rng`] — the deterministic counter-based random number generator;
//! - [`error`] — the crate-wide error type.

pub mod error;
pub mod fock;
pub mod interferometer;
pub mod linalg;
pub mod moments;
pub mod oracle;
pub mod qfi;
pub mod rng;
pub mod squeezing;

pub use error::{Error, Result};
pub use interferometer::{
    classical_fisher, error_propagation, mle_estimate, outcome_distribution,
    PhaseEstimationResult, PropagatedVariance,
};
pub use fock::{
    collective_spin, energy_bipartition_rotation, mixture_density, mode_rotation, rotate,
    spin_components, spin_matrix, CollectiveSpinOp, DensityOperator, DiagonalMixture, Direction,
    OrthogonalTriplet, PureState, State, DEFAULT_MAX_N,
};
pub use linalg::{hermitian_eig, Spectrum};
pub use moments::{
    k_moments, mixture_spin_moments, number_state_moments, spin_moments, witness_exceedance_nz2,
    MixtureMoments, MomentReport,
};
pub use oracle::{
    antisymmetric_overlap, dicke_embedding_check, product_variance, run_oracle_suite,
    toth_check_products, DickeEmbeddingReport, OracleSummary, ProductState,
};
pub use qfi::{
    bound_chain_check, qfi_diagonal_mixture, qfi_gaussian_asymptotics, qfi_number_state,
    qfi_pure, qfi_spectral, sld, BoundChainReport, FisherRatioCheck, QfiMethod, QfiReport,
};
pub use rng::CounterRng;
pub use squeezing::{
    flat_peak_state, gaussian_state, ineq3_delta, ineq3_threshold, toth_check,
    xi_parameters, xi_s_number_state, xi_w_diagonal_real, SqueezingReport, TothReport, XiValue,
};
