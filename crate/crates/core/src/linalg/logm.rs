use super::{operator_norm, ComplexMatrix, LinalgError, LuFactorization};

/// Distance from the unit circle below which `log` is refused.
const DOMAIN_MARGIN: f64 = 1e-9;
/// Square roots are taken until `||X − I||_F` drops below this.
const SERIES_RADIUS: f64 = 0.25;
const SERIES_TERM_CUTOFF: f64 = 1e-16;
const MAX_SERIES_TERMS: usize = 400;
const MAX_SQRT_STEPS: usize = 60;
const MAX_DB_ITERATIONS: usize = 100;

/// Principal logarithm of a matrix with `||m − I|| < 1`.
///
/// Inverse scaling and squaring: principal square roots bring the argument
/// into `||X − I||_F ≤ 1/4`, the series `Σ (−1)^{k+1} x^k / k` is summed
/// until a term drops below 1e-16, and the result is multiplied back by
/// `2^k`. On the domain the spectrum sits in the open unit disk around 1, so
/// every square root taken is the principal one.
pub fn mat_log_principal(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = m.ensure_square()?;
    let identity = ComplexMatrix::identity(n);
    let distance = operator_norm(&(m - &identity));
    if distance >= 1.0 - DOMAIN_MARGIN {
        return Err(LinalgError::OutOfDomain { distance });
    }

    let mut x = m.clone();
    let mut roots = 0u32;
    while (&x - &identity).frobenius_norm() > SERIES_RADIUS {
        if roots as usize >= MAX_SQRT_STEPS {
            return Err(LinalgError::NoConvergence("inverse scaling did not reach the series radius"));
        }
        x = mat_sqrt_principal(&x)?;
        roots += 1;
    }

    let delta = &x - &identity;
    let mut sum = ComplexMatrix::zeros(n, n);
    let mut power = delta.clone();
    let mut converged = false;
    for k in 1..=MAX_SERIES_TERMS {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let term = power.scale_real(sign / k as f64);
        sum += &term;
        if term.frobenius_norm() < SERIES_TERM_CUTOFF {
            converged = true;
            break;
        }
        power = &power * &delta;
    }
    if !converged {
        return Err(LinalgError::NoConvergence("logarithm series"));
    }
    Ok(sum.scale_real(2f64.powi(roots as i32)))
}

/// Principal square root by the Denman–Beavers iteration. Requires a
/// spectrum off the closed negative real axis.
pub fn mat_sqrt_principal(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = m.ensure_square()?;
    let mut y = m.clone();
    let mut z = ComplexMatrix::identity(n);
    for _ in 0..MAX_DB_ITERATIONS {
        let y_inv = LuFactorization::new(&y)?.inverse();
        let z_inv = LuFactorization::new(&z)?.inverse();
        let y_next = (&y + &z_inv).scale_real(0.5);
        let z_next = (&z + &y_inv).scale_real(0.5);
        let change = (&y_next - &y).frobenius_norm();
        y = y_next;
        z = z_next;
        if change <= 1e-15 * y.frobenius_norm() {
            return Ok(y);
        }
    }
    Err(LinalgError::NoConvergence("Denman-Beavers square root"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::mat_exp;

    #[test]
    fn log_identity_is_zero() {
        let l = mat_log_principal(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(l.max_abs(), 0.0);
    }

    #[test]
    fn log_diagonal() {
        let l = mat_log_principal(&ComplexMatrix::from_real_diag(&[1.5, 1.0])).unwrap();
        assert!((&l - &ComplexMatrix::from_real_diag(&[1.5f64.ln(), 0.0])).max_abs() < 1e-15);
    }

    #[test]
    fn log_near_edge_of_domain() {
        let m = ComplexMatrix::from_real_diag(&[1.95, 0.1]);
        let l = mat_log_principal(&m).unwrap();
        let back = mat_exp(&l).unwrap();
        assert!((&back - &m).max_abs() < 1e-12);
    }

    #[test]
    fn out_of_domain() {
        let m = ComplexMatrix::from_real_diag(&[2.0, 1.0]);
        assert!(matches!(mat_log_principal(&m), Err(LinalgError::OutOfDomain { .. })));
        let m = ComplexMatrix::from_real_diag(&[-0.5, 1.0]);
        assert!(matches!(mat_log_principal(&m), Err(LinalgError::OutOfDomain { .. })));
    }

    #[test]
    fn sqrt_squares_back() {
        let m = ComplexMatrix::from_real_rows(&[&[1.2, 0.3], &[-0.1, 0.9]]);
        let r = mat_sqrt_principal(&m).unwrap();
        assert!((&(&r * &r) - &m).max_abs() < 1e-14);
    }
}
