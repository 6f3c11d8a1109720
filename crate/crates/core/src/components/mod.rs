//! Connected components of the solution set in a full matrix algebra:
//! signatures, exact distances between self-adjoint components, the
//! separation lower bound, and geometric tests (centrality, complex lines,
//! the projection sphere).

mod classify;
mod experiment;
mod geometry;

pub use classify::{
    all_signatures, common_basis_distance, component_distance_oracle, random_realized_distance, separation_lower_bound, signature,
    ComponentSignature,
};
pub use experiment::{conjecture_experiment, ExperimentReport, ExperimentRow, MAX_EXPERIMENT_DIM, MAX_EXPERIMENT_TRIALS};
pub use geometry::{
    centrality_cross_check, centrality_test, fit_projection_curve, line_embedding, profile_varies, segment_singular_values, sphere_coordinates,
    sphere_defect, CurveFit, LineEmbedding, FIT_PROBES,
};

use crate::linalg::LinalgError;
use crate::spectral::SpectralError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ComponentError {
    #[error("trace of idempotent {index} is {trace}, not an integer")]
    NonIntegerTrace { index: usize, trace: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimMismatch { expected: usize, found: usize },
    #[error("signature has {found} entries, spec has {expected} roots")]
    LengthMismatch { expected: usize, found: usize },
    #[error("requires real roots")]
    NotRealSpec,
    #[error("root index {index} out of range for {n} roots")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("line embedding needs two different indices, got {0} twice")]
    SameIndex(usize),
    #[error("not a rank-one orthogonal projection: {0}")]
    NotRankOneProjection(String),
    #[error("{samples} samples cannot determine a degree-{degree} fit")]
    FitUnderdetermined { samples: usize, degree: usize },
    #[error("experiment too large: {0}")]
    ExperimentTooLarge(String),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::spectral::{decompose, SpectrumSpec};
    use crate::tolerances::Tolerances;
    use num_complex::Complex64;

    fn sig(v: &[usize]) -> ComponentSignature {
        ComponentSignature::new(v.to_vec())
    }

    #[test]
    fn signature_examples() {
        let tol = Tolerances::default();
        let spec = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
        let a = decompose(&ComplexMatrix::from_real_diag(&[0.0, 0.0, 1.0]), &spec, &tol).unwrap();
        assert_eq!(signature(&a, &tol).unwrap(), sig(&[2, 1]));
        let spec3 = SpectrumSpec::real(&[4.0, 1.0, 2.0]).unwrap();
        let b = decompose(&ComplexMatrix::scalar(4, Complex64::new(4.0, 0.0)), &spec3, &tol).unwrap();
        assert_eq!(signature(&b, &tol).unwrap(), sig(&[4, 0, 0]));
    }

    #[test]
    fn oracle_examples() {
        let spec = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
        assert_eq!(component_distance_oracle(&sig(&[2, 1]), &sig(&[2, 1]), &spec).unwrap(), 0.0);
        assert_eq!(component_distance_oracle(&sig(&[2, 1]), &sig(&[1, 2]), &spec).unwrap(), 1.0);
        let spec3 = SpectrumSpec::real(&[0.0, 1.0, 2.0]).unwrap();
        assert_eq!(component_distance_oracle(&sig(&[1, 1, 1]), &sig(&[0, 2, 1]), &spec3).unwrap(), 1.0);
        assert!(matches!(
            component_distance_oracle(&sig(&[1, 1, 1]), &sig(&[1, 2, 1]), &spec3),
            Err(ComponentError::DimMismatch { .. })
        ));
    }

    #[test]
    fn bound_examples() {
        assert_eq!(separation_lower_bound(&SpectrumSpec::real(&[0.0, 1.0]).unwrap()), 1.0);
        assert!((separation_lower_bound(&SpectrumSpec::real(&[-0.3, 2.2]).unwrap()) - 2.5).abs() < 1e-12);
        assert!((separation_lower_bound(&SpectrumSpec::real(&[0.0, 1.0, 2.0]).unwrap()) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn signature_enumeration() {
        let all = all_signatures(3, 2);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], sig(&[0, 0, 2]));
        assert!(all.iter().all(|s| s.dim() == 2));
    }

    #[test]
    fn sphere_examples() {
        let tol = Tolerances::default();
        assert_eq!(sphere_coordinates(&ComplexMatrix::from_real_diag(&[1.0, 0.0]), &tol).unwrap(), (1.0, 0.0, 0.0));
        assert_eq!(sphere_coordinates(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), &tol).unwrap(), (0.0, 0.0, 0.0));
        let half = ComplexMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]);
        let c = sphere_coordinates(&half, &tol).unwrap();
        assert_eq!(c, (0.5, 0.5, 0.0));
        assert!(sphere_defect(c) < 1e-15);
        assert!(sphere_coordinates(&ComplexMatrix::identity(2), &tol).is_err());
    }

    #[test]
    fn line_example() {
        let tol = Tolerances::default();
        let spec = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
        let a = decompose(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), &spec, &tol).unwrap();
        let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let line = line_embedding(&a, &x, 0, 1).unwrap();
        let t = Complex64::new(3.0, 0.0);
        assert_eq!(line.eval(t), ComplexMatrix::from_real_rows(&[&[0.0, -3.0], &[0.0, 1.0]]));
        assert!(!line.is_constant(1e-12));
        let flat = line_embedding(&a, &x, 1, 0).unwrap();
        assert!(flat.is_constant(1e-12));
        assert!(matches!(line_embedding(&a, &x, 0, 0), Err(ComponentError::SameIndex(0))));
    }

    #[test]
    fn centrality_examples() {
        let tol = Tolerances::default();
        assert!(centrality_test(&ComplexMatrix::scalar(3, Complex64::new(2.0, 1.0)), &tol).unwrap());
        assert!(!centrality_test(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), &tol).unwrap());
        let spec = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
        let a = decompose(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), &spec, &tol).unwrap();
        assert!(!centrality_cross_check(&a, &tol));
        let b = decompose(&ComplexMatrix::identity(2), &spec, &tol).unwrap();
        assert!(centrality_cross_check(&b, &tol));
    }
}
