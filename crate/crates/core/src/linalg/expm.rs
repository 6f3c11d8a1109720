use super::{ComplexMatrix, LinalgError};

/// Target norm of the scaled argument before the Taylor sum.
const SCALED_NORM_TARGET: f64 = 0.5;
const MAX_TAYLOR_TERMS: usize = 40;

/// Matrix exponential by scaling and squaring with a truncated Taylor series.
///
/// The argument is scaled by `2^{-s}` until its Frobenius norm (an upper bound
/// for the spectral norm) is at most 1/2; the series is summed until the next
/// term is below unit roundoff relative to the partial sum, then squared `s`
/// times.
pub fn mat_exp(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = m.ensure_square()?;
    let norm = m.frobenius_norm();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    let squarings = if norm > SCALED_NORM_TARGET {
        (norm / SCALED_NORM_TARGET).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale_real(0.5f64.powi(squarings));

    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=MAX_TAYLOR_TERMS {
        term = (&term * &scaled).scale_real(1.0 / k as f64);
        let term_norm = term.frobenius_norm();
        sum += &term;
        if term_norm <= 1e-18 * sum.frobenius_norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if !sum.is_finite() {
        return Err(LinalgError::NoConvergence("matrix exponential overflowed"));
    }
    Ok(sum)
}
