use std::f64::consts::PI;

use num_complex::Complex64;

use super::{SpectralError, SpectrumSpec};
use crate::linalg::{resolvent_apply, ComplexMatrix};

/// Fewest trapezoid nodes accepted on a contour.
pub const MIN_QUAD_POINTS: usize = 64;

/// Riesz projection onto the spectrum inside the circle `|z − center| = radius`:
/// `(1/2πi) ∮ (z·I − a)^{-1} dz`, counterclockwise, by the trapezoid rule.
///
/// With `z_k = center + r·e^{iθ_k}` and `dz = i·r·e^{iθ}dθ` the sum collapses
/// to `(1/N) Σ_k r·e^{iθ_k} (z_k − a)^{-1}`.
pub fn riesz_projection(a: &ComplexMatrix, center: Complex64, radius: f64, quad_points: usize) -> Result<ComplexMatrix, SpectralError> {
    if quad_points < MIN_QUAD_POINTS {
        return Err(SpectralError::QuadratureTooCoarse { points: quad_points });
    }
    let n = a.ensure_square()?;
    let mut acc = ComplexMatrix::zeros(n, n);
    for k in 0..quad_points {
        let theta = 2.0 * PI * (k as f64) / (quad_points as f64);
        let offset = Complex64::from_polar(radius, theta);
        let resolvent = resolvent_apply(a, center + offset)?;
        acc.axpy(offset, &resolvent);
    }
    Ok(acc.scale_real(1.0 / quad_points as f64))
}

/// Riesz idempotent for root `i` on the circle of radius `δ/3` around it.
pub fn riesz_idempotent(a: &ComplexMatrix, i: usize, spec: &SpectrumSpec, quad_points: usize) -> Result<ComplexMatrix, SpectralError> {
    spec.check_index(i)?;
    riesz_projection(a, spec.root(i), spec.min_gap() / 3.0, quad_points)
}

/// All Riesz idempotents for `spec`, in root order.
pub fn riesz_partition(a: &ComplexMatrix, spec: &SpectrumSpec, quad_points: usize) -> Result<Vec<ComplexMatrix>, SpectralError> {
    (0..spec.n()).map(|i| riesz_idempotent(a, i, spec, quad_points)).collect()
}
