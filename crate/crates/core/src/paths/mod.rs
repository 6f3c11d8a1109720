//! Paths inside the set of algebraic elements: exponential and unitary
//! similarity orbits, straight segments through exchange idempotents, the
//! polygonal ladder, and chaining of local constructions.

mod chain;
mod cubic;
mod exchange;
mod ladder;
mod piecewise;
mod similarity;

pub use chain::{chain_path, ChainMode, ChainedPath};
pub use cubic::{cubic_candidate_path, CubicPathReport};
pub use exchange::{exchange_idempotent, idempotent_defect, idempotent_similarity, nilpotent_generators, two_segment_path, ExchangeDefects, NilpotentPair};
pub use ladder::{polygonal_ladder, polygonal_path, PolygonalLadder};
pub use piecewise::{PathSample, PiecewisePath, Segment, SegmentReport};
pub use similarity::{ep_similarity, exp_path, index_gaps, unitary_similarity, SimilarityCertificate};

use crate::linalg::LinalgError;
use crate::spectral::{AlgebraicElement, SpectralError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum PathError {
    #[error("not idempotent: ||e² − e|| = {defect:.3e}")]
    NotIdempotent { defect: f64 },
    #[error("idempotents too far apart at index {index}: gap {gap:.6} must stay below 1")]
    TooFar { index: usize, gap: f64 },
    #[error("not Hermitian: defect {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("||s − I|| = {distance:.6} is outside the logarithm domain; similarity found but no generator")]
    LogOutOfDomain {
        distance: f64,
        certificate: Box<SimilarityCertificate>,
    },
    #[error("ladder step {step} breaks at index {index}: gap {gap:.6}")]
    LadderBroken { step: usize, index: usize, gap: f64 },
    #[error("link {index} exceeds the local radius: gap {gap:.6}")]
    LinkTooFar { index: usize, gap: f64 },
    #[error("need at least two waypoints, got {0}")]
    TooFewWaypoints(usize),
    #[error("elements use different root lists")]
    SpecMismatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("certificate carries no generators")]
    MissingGenerators,
    #[error("path has no segments")]
    EmptyPath,
    #[error("segment {segment} does not start where the previous one ends (gap {gap:.3e})")]
    EndpointMismatch { segment: usize, gap: f64 },
    #[error("segment {segment} leaves the solution set: relative residual {residual:.3e} > {threshold:.3e}")]
    ContainmentLost { segment: usize, residual: f64, threshold: f64 },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub(crate) fn check_compatible(a0: &AlgebraicElement, a1: &AlgebraicElement) -> Result<(), PathError> {
    if a0.spec().roots() != a1.spec().roots() {
        return Err(PathError::SpecMismatch);
    }
    if a0.dim() != a1.dim() {
        return Err(PathError::DimMismatch {
            expected: a0.dim(),
            found: a1.dim(),
        });
    }
    Ok(())
}
