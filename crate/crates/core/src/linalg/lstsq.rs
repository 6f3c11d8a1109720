use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, ZERO};

/// Least-squares solution of `a·X ≈ b` (`a` is m×k with m ≥ k) by Householder QR.
pub fn least_squares(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let (m, k) = (a.rows(), a.cols());
    if m < k {
        return Err(LinalgError::ShapeMismatch(format!("underdetermined system {m}x{k}")));
    }
    if b.rows() != m {
        return Err(LinalgError::ShapeMismatch(format!("rhs has {} rows, expected {m}", b.rows())));
    }
    let mut r = a.clone();
    let mut qtb = b.clone();
    let scale = a.max_abs();

    for j in 0..k {
        let norm: f64 = (j..m).map(|i| r[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        if norm <= 1e-14 * scale || norm == 0.0 {
            return Err(LinalgError::SingularMatrix { pivot_index: j });
        }
        let head = r[(j, j)];
        let phase = if head.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { head / head.norm() };
        let alpha = -phase * norm;
        // v = x − alpha·e1, normalized
        let mut v: Vec<Complex64> = (j..m).map(|i| r[(i, j)]).collect();
        v[0] -= alpha;
        let v_norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if v_norm == 0.0 {
            continue;
        }
        v.iter_mut().for_each(|z| *z /= v_norm);
        reflect(&mut r, &v, j, j);
        reflect(&mut qtb, &v, j, 0);
    }

    let q = b.cols();
    let mut x = ComplexMatrix::zeros(k, q);
    for col in 0..q {
        for row in (0..k).rev() {
            let mut acc = qtb[(row, col)];
            for c in (row + 1)..k {
                acc -= r[(row, c)] * x[(c, col)];
            }
            x[(row, col)] = acc / r[(row, row)];
        }
    }
    Ok(x)
}

/// Applies `I − 2vv*` to rows `row0..` of columns `col0..`.
fn reflect(m: &mut ComplexMatrix, v: &[Complex64], row0: usize, col0: usize) {
    for c in col0..m.cols() {
        let mut dot = ZERO;
        for (i, vi) in v.iter().enumerate() {
            dot += vi.conj() * m[(row0 + i, c)];
        }
        if dot == ZERO {
            continue;
        }
        for (i, vi) in v.iter().enumerate() {
            m[(row0 + i, c)] -= *vi * dot * 2.0;
        }
    }
}
