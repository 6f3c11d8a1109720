use serde::{Deserialize, Serialize};

use super::{SpectralError, SpectrumSpec};
use crate::linalg::{operator_norm, unit_floor, ComplexMatrix};

/// Measured violations of the partition-of-unity identities, in operator norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PartitionDefects {
    /// `max_i ||e_i² − e_i||`
    pub idempotency: f64,
    /// `max_{i≠j} ||e_i e_j||`
    pub orthogonality: f64,
    /// `||Σ e_i − I||`
    pub completeness: f64,
    /// `max_i ||e_i − e_i*||`
    pub hermitian: f64,
    /// `max(1, max_i ||e_i||)²`; the idempotency and orthogonality defects
    /// scale with it.
    pub scale: f64,
}

impl PartitionDefects {
    pub fn measure(idempotents: &[ComplexMatrix]) -> Self {
        let n = idempotents.first().map_or(0, |e| e.dim());
        let mut idempotency: f64 = 0.0;
        let mut orthogonality: f64 = 0.0;
        let mut hermitian: f64 = 0.0;
        let mut largest: f64 = 0.0;
        let mut sum = ComplexMatrix::zeros(n, n);
        for (i, e) in idempotents.iter().enumerate() {
            largest = largest.max(operator_norm(e));
            idempotency = idempotency.max(operator_norm(&(&(e * e) - e)));
            hermitian = hermitian.max(operator_norm(&(e - &e.adjoint())));
            for (j, f) in idempotents.iter().enumerate() {
                if i != j {
                    orthogonality = orthogonality.max(operator_norm(&(e * f)));
                }
            }
            sum += e;
        }
        let completeness = operator_norm(&(&sum - &ComplexMatrix::identity(n)));
        Self {
            idempotency,
            orthogonality,
            completeness,
            hermitian,
            scale: unit_floor(largest).powi(2),
        }
    }

    /// Worst of idempotency, orthogonality and completeness.
    pub fn worst(&self) -> f64 {
        self.idempotency.max(self.orthogonality).max(self.completeness)
    }

    /// Passes when every defect is below `tol·scale` (and the Hermitian
    /// defect too, if `self_adjoint`).
    pub fn within(&self, tol: f64, self_adjoint: bool) -> bool {
        let bound = tol * self.scale;
        self.worst() <= bound && (!self_adjoint || self.hermitian <= bound)
    }

    fn describe_violation(&self, tol: f64, self_adjoint: bool) -> String {
        let bound = tol * self.scale;
        let mut parts = Vec::new();
        if self.idempotency > bound {
            parts.push(format!("idempotency defect {:.3e}", self.idempotency));
        }
        if self.orthogonality > bound {
            parts.push(format!("orthogonality defect {:.3e}", self.orthogonality));
        }
        if self.completeness > bound {
            parts.push(format!("sum-to-identity defect {:.3e}", self.completeness));
        }
        if self_adjoint && self.hermitian > bound {
            parts.push(format!("self-adjointness defect {:.3e}", self.hermitian));
        }
        format!("{} (bound {:.3e})", parts.join(", "), bound)
    }
}

/// Ordered, mutually orthogonal idempotents summing to the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionOfUnity {
    idempotents: Vec<ComplexMatrix>,
    tol_used: f64,
    self_adjoint: bool,
}

impl PartitionOfUnity {
    /// Checks every invariant at `tol` (relative to `max(1, max||e_i||)²`).
    pub fn new(idempotents: Vec<ComplexMatrix>, tol: f64, self_adjoint: bool) -> Result<Self, SpectralError> {
        if idempotents.is_empty() {
            return Err(SpectralError::InvalidPartition("no idempotents".into()));
        }
        let n = idempotents[0].rows();
        if idempotents.iter().any(|e| !e.is_square() || e.rows() != n) {
            return Err(SpectralError::InvalidPartition("idempotents must be square of equal size".into()));
        }
        let defects = PartitionDefects::measure(&idempotents);
        if !defects.within(tol, self_adjoint) {
            return Err(SpectralError::InvalidPartition(defects.describe_violation(tol, self_adjoint)));
        }
        Ok(Self {
            idempotents,
            tol_used: tol,
            self_adjoint,
        })
    }

    pub fn idempotents(&self) -> &[ComplexMatrix] {
        &self.idempotents
    }

    pub fn get(&self, i: usize) -> &ComplexMatrix {
        &self.idempotents[i]
    }

    pub fn len(&self) -> usize {
        self.idempotents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.idempotents.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.idempotents[0].dim()
    }

    pub fn tol_used(&self) -> f64 {
        self.tol_used
    }

    pub fn self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    pub fn defects(&self) -> PartitionDefects {
        PartitionDefects::measure(&self.idempotents)
    }

    pub fn into_idempotents(self) -> Vec<ComplexMatrix> {
        self.idempotents
    }

    /// `Σ λ_i e_i` without any membership check.
    pub fn combine(&self, spec: &SpectrumSpec) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for (e, &l) in self.idempotents.iter().zip(spec.roots()) {
            out.axpy(l, e);
        }
        out
    }
}

/// `Σ λ_i e_i`, checked to satisfy `||p(result)|| ≤ tol·scale`.
pub fn reconstruct(pou: &PartitionOfUnity, spec: &SpectrumSpec, tol: f64) -> Result<ComplexMatrix, SpectralError> {
    if pou.len() != spec.n() {
        return Err(SpectralError::InvalidPartition(format!(
            "{} idempotents for {} roots",
            pou.len(),
            spec.n()
        )));
    }
    let a = pou.combine(spec);
    let residual = spec.residual(&a);
    let threshold = tol * unit_floor(spec.membership_scale(operator_norm(&a)));
    if residual > threshold {
        return Err(SpectralError::NotAlgebraic { residual, threshold });
    }
    Ok(a)
}
