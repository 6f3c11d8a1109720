use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{PartitionDefects, SpectralError};
use crate::linalg::{operator_norm, ComplexMatrix};
use crate::tolerances::Tolerances;

/// A representation `a = Σ λ_k e_k` with zero idempotents removed and terms
/// sorted by `(Re λ, Im λ)`. Two representations of the same element have
/// equal canonical forms up to rounding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CanonicalForm {
    terms: Vec<(Complex64, ComplexMatrix)>,
}

impl CanonicalForm {
    pub fn terms(&self) -> &[(Complex64, ComplexMatrix)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn values(&self) -> Vec<Complex64> {
        self.terms.iter().map(|(l, _)| *l).collect()
    }

    /// Largest difference between matching values or idempotents; infinite
    /// when the term counts differ.
    pub fn distance(&self, other: &Self) -> f64 {
        if self.terms.len() != other.terms.len() {
            return f64::INFINITY;
        }
        self.terms
            .iter()
            .zip(&other.terms)
            .map(|((l1, e1), (l2, e2))| (l1 - l2).norm().max(operator_norm(&(e1 - e2))))
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }
}

pub fn canonicalize(pairs: Vec<(Complex64, ComplexMatrix)>, tol: &Tolerances) -> Result<CanonicalForm, SpectralError> {
    if pairs.is_empty() {
        return Err(SpectralError::InvalidPartition("empty representation".into()));
    }
    let idempotents: Vec<ComplexMatrix> = pairs.iter().map(|(_, e)| e.clone()).collect();
    let defects = PartitionDefects::measure(&idempotents);
    if !defects.within(tol.base, false) {
        return Err(SpectralError::InvalidPartition(format!(
            "representation is not a partition of unity (worst defect {:.3e})",
            defects.worst()
        )));
    }
    let mut terms: Vec<(Complex64, ComplexMatrix)> = pairs
        .into_iter()
        .filter(|(_, e)| operator_norm(e) > tol.zero_idempotent)
        .collect();
    terms.sort_by(|(a, _), (b, _)| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    if let Some(w) = terms.windows(2).find(|w| (w[0].0 - w[1].0).norm() < tol.duplicate_root) {
        return Err(SpectralError::InvalidPartition(format!("value {} appears twice with nonzero idempotents", w[0].0)));
    }
    Ok(CanonicalForm { terms })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn drops_zero_term() {
        let form = canonicalize(vec![(c(1.0), ComplexMatrix::zeros(2, 2)), (c(2.0), ComplexMatrix::identity(2))], &Tolerances::default()).unwrap();
        assert_eq!(form.len(), 1);
        assert_eq!(form.terms()[0].0, c(2.0));
        assert_eq!(form.terms()[0].1, ComplexMatrix::identity(2));
    }

    #[test]
    fn sorts_permuted_input() {
        let e1 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let e2 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let a = canonicalize(vec![(c(3.0), e1.clone()), (c(-1.0), e2.clone())], &Tolerances::default()).unwrap();
        let b = canonicalize(vec![(c(-1.0), e2), (c(3.0), e1)], &Tolerances::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values(), vec![c(-1.0), c(3.0)]);
    }

    #[test]
    fn independent_representations_agree() {
        // diag(0,0,1) written with different padding by zero idempotents
        let p = ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0]);
        let q = ComplexMatrix::from_real_diag(&[0.0, 0.0, 1.0]);
        let z = ComplexMatrix::zeros(3, 3);
        let first = canonicalize(vec![(c(0.0), p.clone()), (c(1.0), q.clone()), (c(5.0), z.clone())], &Tolerances::default()).unwrap();
        let second = canonicalize(
            vec![(c(-2.0), z.clone()), (c(1.0), q), (c(7.0), z), (c(0.0), p)],
            &Tolerances::default(),
        )
        .unwrap();
        assert!(first.approx_eq(&second, 1e-15));
    }

    #[test]
    fn non_partition_rejected() {
        let bad = vec![(c(0.0), ComplexMatrix::identity(2)), (c(1.0), ComplexMatrix::identity(2))];
        assert!(canonicalize(bad, &Tolerances::default()).is_err());
        let repeated = vec![
            (c(0.0), ComplexMatrix::from_real_diag(&[1.0, 0.0])),
            (c(0.0), ComplexMatrix::from_real_diag(&[0.0, 1.0])),
        ];
        assert!(canonicalize(repeated, &Tolerances::default()).is_err());
    }
}
