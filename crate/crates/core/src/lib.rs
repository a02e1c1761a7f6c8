//! Diagonalization of complex normal matrices by a randomized reduction to a
//! single Hermitian eigenproblem, with a complex Schur baseline, the matrix
//! families used to evaluate it, error metrics and file formats.
//!
//! ```
//! use randdiag_core::{generators, metrics, rand_diag, RngState};
//!
//! let mut rng = RngState::new(7);
//! let (a, _spectrum) = generators::random_normal_matrix(16, &mut rng).unwrap();
//! let result = rand_diag(&a, &mut rng).unwrap();
//! let err = metrics::offdiag_error(&a, &result.u).unwrap();
//! assert!(err <= 1e-12 * a.frobenius_norm());
//! ```

pub mod eigh;
pub mod error;
pub mod generators;
mod householder;
pub mod matrix;
pub mod metrics;
pub mod mmio;
pub mod randdiag;
pub mod rng;
pub mod schur;

pub use eigh::{eigh, tridiagonalize, EigenDecomposition, Tridiagonal};
pub use error::{Error, Result};
pub use generators::{
    counterexample_matrix, random_normal_matrix, thermal_unitary, unitary_exp_i, ThermalModelSpec,
};
pub use matrix::{Complex64, ComplexDense, C64};
pub use metrics::{eig_relative_error, hungarian, offdiag_error, AssignmentResult, Summary};
pub use mmio::{Algorithm, MatrixKind, TrialRecord};
pub use randdiag::{diag_of, fixed_comb_diag, rand_diag, RandDiagResult};
pub use rng::{gue, haar_unitary, RngState};
pub use schur::{hessenberg, schur, SchurDecomposition};
