//! Lifting algebraic elements along a quotient with nilpotent kernel:
//! block-upper-triangular matrices onto their diagonal blocks, optionally
//! twisted by an analytic conjugation. A family `b(λ)` of algebraic elements
//! of the quotient is lifted by applying the Riesz calculus to a preimage.

mod lift;
mod model;

pub use lift::{
    lift_family, lift_family_selfadjoint, lift_family_with_kernel, local_lift, polynomial_fit_residual, LiftPoint, LiftReport, LiftStop, LiftedFamily,
    Lifter, LocalLift, CERTIFY_FACTOR, FIT_THRESHOLD, SEPARATION_FACTOR,
};
pub use model::{AnalyticFamily, QuotientModel, TWIST_CONDITION_CAP};

use num_complex::Complex64;

use crate::linalg::{ComplexMatrix, LinalgError};
use crate::spectral::SpectralError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LiftError {
    #[error("matrix is not block upper triangular (lower defect {defect:.3e})")]
    NotInAlgebra { defect: f64 },
    #[error("matrix is not block diagonal (off-diagonal defect {defect:.3e})")]
    NotInQuotient { defect: f64 },
    #[error("perturbation is not strictly block upper triangular (defect {defect:.3e})")]
    NotInKernel { defect: f64 },
    #[error("invalid block structure: {0}")]
    BadBlocks(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("family has no coefficients")]
    EmptyFamily,
    #[error("family radius must be positive, got {0}")]
    BadRadius(f64),
    #[error("grid is empty")]
    EmptyGrid,
    #[error("λ = {lambda} lies outside the family's domain")]
    OutsideDomain { lambda: Complex64 },
    #[error("target at λ = {lambda} is not algebraic (relative residual {residual:.3e})")]
    NotLiftableInput { lambda: Complex64, residual: f64 },
    #[error("target at λ = {lambda} is not fixed by the involution (defect {defect:.3e})")]
    NotSelfAdjointInput { lambda: Complex64, defect: f64 },
    #[error("spectrum of the section left the contours at λ = {lambda} (defect {defect:.3e})")]
    SpectralSeparationLost { lambda: Complex64, defect: f64 },
    #[error("twist is not invertible at λ = {lambda}")]
    ProjectionDegenerate { lambda: Complex64 },
    #[error("symmetrized lift at λ = {lambda} is not algebraic (relative residual {residual:.3e})")]
    SymmetrizationBrokeMembership { lambda: Complex64, residual: f64 },
    #[error("lift at λ = {lambda} failed its certificates")]
    Uncertified { lambda: Complex64 },
    #[error("no lift at λ = 0: {0}")]
    NotLiftableAtZero(Box<LiftError>),
    #[error("self-adjoint lift needs an involutive model")]
    NotInvolutive,
    #[error("self-adjoint lift needs an untwisted model")]
    TwistUnsupported,
    #[error("self-adjoint lift needs real roots")]
    NotRealSpec,
    #[error("self-adjoint lift needs a real-analytic family")]
    NotRealFamily,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// The involutive model with blocks `(1, 2, 1)` and the family
/// `b(λ) = (1 + λn)·q·(1 − λn)` with roots `{0, 1, 2}`, where
/// `q = diag(1, [[1, 1], [1, 1]], 1)` and `n` is a square-zero block with
/// `σ(n) = −n`, so every `b(λ)` is algebraic and σ-fixed for real `λ`.
pub fn flip_example(radius: f64) -> (QuotientModel, AnalyticFamily, crate::spectral::SpectrumSpec) {
    let model = QuotientModel::new(vec![1, 2, 1], true, Vec::new()).expect("palindromic");
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let q = ComplexMatrix::from_real_rows(&[&[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 1.0, 0.0], &[0.0, 1.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]]);
    let mut n = ComplexMatrix::zeros(4, 4);
    n[(1, 1)] = one;
    n[(1, 2)] = i;
    n[(2, 1)] = i;
    n[(2, 2)] = -one;
    let c1 = &(&n * &q) - &(&q * &n);
    let c2 = (&(&n * &q) * &n).scale_real(-1.0);
    let family = AnalyticFamily::new(vec![q, c1, c2], radius, true).expect("square coefficients");
    let spec = crate::spectral::SpectrumSpec::real(&[0.0, 1.0, 2.0]).expect("distinct roots");
    (model, family, spec)
}

/// Twist `v(λ) = I − (λ/ρ)·E_11`, singular at `λ = ρ`; it rescales one
/// coordinate of the middle block of the `(1, 2, 1)` flag.
pub fn degenerating_twist(rho: f64) -> Vec<ComplexMatrix> {
    let mut slope = ComplexMatrix::zeros(4, 4);
    slope[(1, 1)] = Complex64::new(-1.0 / rho, 0.0);
    vec![ComplexMatrix::identity(4), slope]
}
