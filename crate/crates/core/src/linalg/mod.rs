//! Dense complex matrix kernel: factorizations, norms and the matrix
//! functions (exponential, principal logarithm, inverse square root,
//! resolvent) that the rest of the crate is written against.
//!
//! The operator norm is the spectral norm throughout. Everything here is a
//! pure function of its inputs.

mod expm;
mod hermitian;
mod logm;
mod lstsq;
mod lu;
mod matrix;
mod norm;

pub use expm::mat_exp;
pub use hermitian::{herm_inv_sqrt, hermitian_eigen, singular_values, HermitianEigen};
pub use logm::{mat_log_principal, mat_sqrt_principal};
pub use lstsq::least_squares;
pub use lu::{mat_inverse, mat_inverse_capped, resolvent_apply, LuFactorization, DEFAULT_CONDITION_CAP};
pub use matrix::ComplexMatrix;
pub use norm::operator_norm;

pub(crate) use matrix::{ONE, ZERO};

pub use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix must be non-empty")]
    EmptyMatrix,
    #[error("expected {expected} entries, got {actual}")]
    DataLength { expected: usize, actual: usize },
    #[error("entry {index} is not finite")]
    NonFinite { index: usize },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular (pivot {pivot_index} collapsed)")]
    SingularMatrix { pivot_index: usize },
    #[error("condition estimate {estimate:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { estimate: f64, cap: f64 },
    #[error("resolvent is singular: z lies on or next to the spectrum")]
    ResolventSingular,
    #[error("logarithm series needs ||m - I|| < 1, got {distance:.6}")]
    OutOfDomain { distance: f64 },
    #[error("matrix is not Hermitian (defect {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("iteration did not converge: {0}")]
    NoConvergence(&'static str),
}

/// `max(1, x)`, the scale factor every relative tolerance in the crate uses.
#[inline]
pub fn unit_floor(x: f64) -> f64 {
    x.max(1.0)
}
