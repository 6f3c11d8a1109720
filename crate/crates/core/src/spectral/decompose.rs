use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{PartitionOfUnity, SpectralError, SpectrumSpec};
use crate::linalg::{operator_norm, unit_floor, ComplexMatrix};
use crate::tolerances::Tolerances;

/// An element `a` with `p(a) = 0`, together with its spectral partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicElement {
    matrix: ComplexMatrix,
    spec: SpectrumSpec,
    partition: PartitionOfUnity,
    residual: f64,
}

impl AlgebraicElement {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn spec(&self) -> &SpectrumSpec {
        &self.spec
    }

    pub fn partition(&self) -> &PartitionOfUnity {
        &self.partition
    }

    /// `e_i`.
    pub fn idempotent(&self, i: usize) -> &ComplexMatrix {
        self.partition.get(i)
    }

    /// `||p(a)||`.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Whether the element lives in the self-adjoint class: real roots and
    /// a Hermitian matrix.
    pub fn self_adjoint(&self) -> bool {
        self.partition.self_adjoint()
    }

    /// `Π_j (||a|| + |λ_j|)`.
    pub fn scale(&self) -> f64 {
        self.spec.membership_scale(operator_norm(&self.matrix))
    }

    /// `||Σ λ_i e_i − a||`.
    pub fn reconstruction_error(&self) -> f64 {
        operator_norm(&(&self.partition.combine(&self.spec) - &self.matrix))
    }
}

/// Spectral decomposition `a = Σ λ_i e_i` with `e_i = p_i(a)`.
///
/// Fails with `NotAlgebraic` when `||p(a)|| > tol.base · max(1, Π_j(||a|| + |λ_j|))`.
/// Elements with real roots and a Hermitian matrix get a self-adjoint
/// partition, which is checked as such.
pub fn decompose(a: &ComplexMatrix, spec: &SpectrumSpec, tol: &Tolerances) -> Result<AlgebraicElement, SpectralError> {
    a.ensure_square()?;
    let norm_a = operator_norm(a);
    let residual = spec.residual(a);
    let threshold = tol.base * unit_floor(spec.membership_scale(norm_a));
    if residual > threshold {
        return Err(SpectralError::NotAlgebraic { residual, threshold });
    }
    let self_adjoint = spec.real_only() && operator_norm(&(a - &a.adjoint())) <= tol.base * unit_floor(norm_a);
    let idempotents: Vec<ComplexMatrix> = (0..spec.n()).map(|i| spec.eval_lagrange(i, a)).collect();
    let partition = PartitionOfUnity::new(idempotents, tol.base, self_adjoint)?;
    Ok(AlgebraicElement {
        matrix: a.clone(),
        spec: spec.clone(),
        partition,
        residual,
    })
}

/// Assembles `Σ λ_i e_i` from a partition and decomposes it again.
pub fn from_partition(pou: &PartitionOfUnity, spec: &SpectrumSpec, tol: &Tolerances) -> Result<AlgebraicElement, SpectralError> {
    let a = super::reconstruct(pou, spec, tol.base)?;
    decompose(&a, spec, tol)
}

/// `Σ_i λ_i e_i` for explicitly given coefficients; a convenience for tests
/// and generators.
pub fn combine(values: &[Complex64], idempotents: &[ComplexMatrix]) -> ComplexMatrix {
    let n = idempotents[0].dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for (&l, e) in values.iter().zip(idempotents) {
        out.axpy(l, e);
    }
    out
}
