use num_complex::Complex64;

use super::{operator_norm, unit_floor, ComplexMatrix, LinalgError, ZERO};

const MAX_SWEEPS: usize = 100;
const HERMITIAN_TOL: f64 = 1e-10;
const MIN_EIGENVALUE: f64 = 1e-10;

/// Eigen-decomposition `m = V·diag(values)·V*` of a Hermitian matrix,
/// eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// `V·diag(f(λ))·V*`.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let scaled = ComplexMatrix::from_fn(n, n, |r, c| self.vectors[(r, c)] * f(self.values[c]));
        &scaled * &self.vectors.adjoint()
    }
}

/// Cyclic complex Jacobi. Only the Hermitian part of `m` is used.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<HermitianEigen, LinalgError> {
    let n = m.ensure_square()?;
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();
    if total == 0.0 {
        return Ok(HermitianEigen {
            values: vec![0.0; n],
            vectors: v,
        });
    }

    let mut converged = n < 2;
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * total {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                let phase = apq / mag;
                let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // R = diag(1, conj(phase)) · [[c, s], [-s, c]]
                let r_pp = Complex64::new(c, 0.0);
                let r_pq = Complex64::new(s, 0.0);
                let r_qp = phase.conj() * -s;
                let r_qq = phase.conj() * c;
                rotate(&mut a, &mut v, p, q, [r_pp, r_pq, r_qp, r_qq]);
            }
        }
    }
    if !converged {
        return Err(LinalgError::NoConvergence("Hermitian Jacobi sweeps"));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// `A ← R*·A·R`, `V ← V·R` for a unitary acting on coordinates `p`, `q`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, r: [Complex64; 4]) {
    let [r_pp, r_pq, r_qp, r_qq] = r;
    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * r_pp + akq * r_qp;
        a[(k, q)] = akp * r_pq + akq * r_qq;
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * r_pp + vkq * r_qp;
        v[(k, q)] = vkp * r_pq + vkq * r_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = r_pp.conj() * apk + r_qp.conj() * aqk;
        a[(q, k)] = r_pq.conj() * apk + r_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;
}

/// `m^{-1/2}` for Hermitian positive definite `m`.
pub fn herm_inv_sqrt(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    m.ensure_square()?;
    let defect = operator_norm(&(m - &m.adjoint()));
    if defect > HERMITIAN_TOL * unit_floor(operator_norm(m)) {
        return Err(LinalgError::NotHermitian { defect });
    }
    let eig = hermitian_eigen(m)?;
    let min_eigenvalue = eig.values[0];
    if min_eigenvalue <= MIN_EIGENVALUE {
        return Err(LinalgError::NotPositiveDefinite { min_eigenvalue });
    }
    Ok(eig.apply(|x| 1.0 / x.sqrt()).hermitian_part())
}

/// Singular values, descending, from the eigenvalues of `m*·m`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>, LinalgError> {
    let gram = &m.adjoint() * m;
    let eig = hermitian_eigen(&gram)?;
    Ok(eig.values.iter().rev().map(|&x| x.max(0.0).sqrt()).collect())
}
