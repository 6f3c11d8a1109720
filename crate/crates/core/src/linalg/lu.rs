use num_complex::Complex64;

use super::{ComplexMatrix, LinalgError, ONE, ZERO};

/// Pivots below this multiple of the largest input entry count as zero.
const PIVOT_EPSILON: f64 = 1e-14;

/// Default cap on the 1-norm condition estimate accepted by [`mat_inverse`].
pub const DEFAULT_CONDITION_CAP: f64 = 1e12;

/// Resolvent norms above this are treated as `z` touching the spectrum.
/// For normal matrices this is exactly "z within 1e-8 of an eigenvalue".
const RESOLVENT_NORM_LIMIT: f64 = 1e8;

/// Row-pivoted LU factorization `P·m = L·U`.
#[derive(Debug, Clone)]
pub struct LuFactorization {
    lu: ComplexMatrix,
    perm: Vec<usize>,
}

impl LuFactorization {
    pub fn new(m: &ComplexMatrix) -> Result<Self, LinalgError> {
        let n = m.ensure_square()?;
        let threshold = PIVOT_EPSILON * m.max_abs();
        let mut lu = m.clone();
        let mut perm: Vec<usize> = (0..n).collect();

        for k in 0..n {
            let (pivot_row, pivot_abs) = (k..n)
                .map(|r| (r, lu[(r, k)].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pivot_abs <= threshold || pivot_abs == 0.0 {
                return Err(LinalgError::SingularMatrix { pivot_index: k });
            }
            if pivot_row != k {
                perm.swap(k, pivot_row);
                for c in 0..n {
                    let tmp = lu[(k, c)];
                    lu[(k, c)] = lu[(pivot_row, c)];
                    lu[(pivot_row, c)] = tmp;
                }
            }
            let pivot = lu[(k, k)];
            for r in (k + 1)..n {
                let factor = lu[(r, k)] / pivot;
                lu[(r, k)] = factor;
                if factor == ZERO {
                    continue;
                }
                for c in (k + 1)..n {
                    let u = lu[(k, c)];
                    lu[(r, c)] -= factor * u;
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn solve_vec(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        assert_eq!(rhs.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for r in 0..n {
            let mut v = x[r];
            for c in 0..r {
                v -= self.lu[(r, c)] * x[c];
            }
            x[r] = v;
        }
        for r in (0..n).rev() {
            let mut v = x[r];
            for c in (r + 1)..n {
                v -= self.lu[(r, c)] * x[c];
            }
            x[r] = v / self.lu[(r, r)];
        }
        x
    }

    /// Solves `m·X = rhs` column by column.
    pub fn solve(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(rhs.rows(), self.dim());
        let mut out = ComplexMatrix::zeros(rhs.rows(), rhs.cols());
        for c in 0..rhs.cols() {
            let col = self.solve_vec(&rhs.column(c));
            for (r, v) in col.into_iter().enumerate() {
                out[(r, c)] = v;
            }
        }
        out
    }

    pub fn inverse(&self) -> ComplexMatrix {
        self.solve(&ComplexMatrix::identity(self.dim()))
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.dim();
        let mut det = ONE;
        for i in 0..n {
            det *= self.lu[(i, i)];
        }
        // parity of the permutation
        let mut seen = vec![false; n];
        let mut transpositions = 0usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                j = self.perm[j];
                len += 1;
            }
            transpositions += len - 1;
        }
        if transpositions % 2 == 1 {
            -det
        } else {
            det
        }
    }
}

/// Inverse with the default condition cap.
pub fn mat_inverse(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    mat_inverse_capped(m, DEFAULT_CONDITION_CAP)
}

/// Inverse via row-pivoted LU; rejects matrices whose 1-norm condition
/// estimate exceeds `cap`.
pub fn mat_inverse_capped(m: &ComplexMatrix, cap: f64) -> Result<ComplexMatrix, LinalgError> {
    let lu = LuFactorization::new(m)?;
    let inv = lu.inverse();
    let estimate = m.norm_1() * inv.norm_1();
    if !estimate.is_finite() || estimate > cap {
        return Err(LinalgError::IllConditioned { estimate, cap });
    }
    Ok(inv)
}

/// `(z·I − a)^{-1}`.
pub fn resolvent_apply(a: &ComplexMatrix, z: Complex64) -> Result<ComplexMatrix, LinalgError> {
    a.ensure_square()?;
    let shifted = (-a).shift(z);
    let lu = LuFactorization::new(&shifted).map_err(|e| match e {
        LinalgError::SingularMatrix { .. } => LinalgError::ResolventSingular,
        other => other,
    })?;
    let r = lu.inverse();
    if !r.is_finite() || r.frobenius_norm() > RESOLVENT_NORM_LIMIT {
        return Err(LinalgError::ResolventSingular);
    }
    Ok(r)
}
