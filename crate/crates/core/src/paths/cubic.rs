use serde::{Deserialize, Serialize};

use super::{check_compatible, nilpotent_generators, NilpotentPair, PathError, PiecewisePath, Segment};
use crate::linalg::{operator_norm, unit_floor, ComplexMatrix};
use crate::spectral::AlgebraicElement;
use crate::tolerances::Tolerances;

/// The cubic candidate path together with what was measured on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicPathReport {
    pub path: PiecewisePath,
    pub start_error: f64,
    pub end_error: f64,
    /// Grid maximum of `||p(ã(t))|| / max(1, scale)`.
    pub max_residual: f64,
    /// One generator pair serves every index (two roots only).
    pub shared_generators: bool,
    /// Whether containment was asserted (two roots) or only measured.
    pub asserted: bool,
}

impl CubicPathReport {
    /// `(t, relative residual)` at every grid point.
    pub fn residual_curve(&self) -> Vec<(f64, f64)> {
        self.path.samples().into_iter().map(|s| (s.t, s.relative_residual)).collect()
    }
}

/// `ã(t) = Σ_i (1 + d'_i t)(1 + d_i t) e_{0i} · a0 · Σ_i e_{0i} (1 − d_i t)(1 − d'_i t)`
/// with square-zero generators `d_i`, `d'_i` exchanging `e_{0i}` for `e_{1i}`.
///
/// With two roots the pair computed for the first index also carries the
/// second (`1 − e_{01}` to `1 − e_{11}`), so the path is a similarity orbit and
/// containment is asserted. With more roots the left and right sums are not
/// inverse to each other in general; the residual is reported only.
pub fn cubic_candidate_path(a0: &AlgebraicElement, a1: &AlgebraicElement, tol: &Tolerances) -> Result<CubicPathReport, PathError> {
    check_compatible(a0, a1)?;
    let n_roots = a0.spec().n();
    let shared = n_roots == 2;
    let pairs: Vec<NilpotentPair> = if shared {
        let p = nilpotent_generators(a0.idempotent(0), a1.idempotent(0), tol)?;
        vec![p.clone(), p]
    } else {
        (0..n_roots)
            .map(|i| nilpotent_generators(a0.idempotent(i), a1.idempotent(i), tol))
            .collect::<Result<_, _>>()?
    };
    let n = a0.dim();
    let mut left = vec![ComplexMatrix::zeros(n, n); 3];
    let mut right = vec![ComplexMatrix::zeros(n, n); 3];
    for (i, p) in pairs.iter().enumerate() {
        let e = a0.idempotent(i);
        let sum = &p.d + &p.d_prime;
        left[0] += e;
        left[1] += &(&sum * e);
        left[2] += &(&(&p.d_prime * &p.d) * e);
        right[0] += e;
        right[1] -= &(e * &sum);
        right[2] += &(&(e * &p.d) * &p.d_prime);
    }
    let segment = Segment::Sandwich {
        left,
        middle: a0.matrix().clone(),
        right,
    };
    let path = PiecewisePath::new(a0.spec().clone(), false, vec![segment], tol)?;
    let start_error = operator_norm(&(&path.start() - a0.matrix()));
    let end_error = operator_norm(&(&path.end() - a1.matrix()));
    let endpoint_tol = tol.base * unit_floor(operator_norm(a0.matrix())).powi(2);
    if start_error > endpoint_tol || end_error > endpoint_tol {
        return Err(PathError::VerificationFailed(format!(
            "cubic path endpoints off by {start_error:.3e} / {end_error:.3e}"
        )));
    }
    if shared {
        path.require_membership(tol.base)?;
    }
    Ok(CubicPathReport {
        max_residual: path.max_relative_membership(),
        path,
        start_error,
        end_error,
        shared_generators: shared,
        asserted: shared,
    })
}
