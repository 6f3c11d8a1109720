use serde::{Deserialize, Serialize};

use super::{PathError, PiecewisePath, Segment};
use crate::linalg::{mat_inverse, operator_norm, unit_floor, ComplexMatrix};
use crate::spectral::SpectrumSpec;
use crate::tolerances::Tolerances;

/// `||e² − e|| / max(1, ||e||)²`.
pub fn idempotent_defect(e: &ComplexMatrix) -> f64 {
    operator_norm(&(&(e * e) - e)) / unit_floor(operator_norm(e)).powi(2)
}

fn require_idempotent(e: &ComplexMatrix, tol: &Tolerances) -> Result<(), PathError> {
    e.ensure_square()?;
    let defect = idempotent_defect(e);
    if defect > tol.base {
        return Err(PathError::NotIdempotent { defect });
    }
    Ok(())
}

/// Checks both idempotents and `||e1 − e0|| < 1 − margin`; returns the gap.
fn require_exchangeable(e0: &ComplexMatrix, e1: &ComplexMatrix, tol: &Tolerances) -> Result<f64, PathError> {
    require_idempotent(e0, tol)?;
    require_idempotent(e1, tol)?;
    if e0.rows() != e1.rows() {
        return Err(PathError::DimMismatch {
            expected: e0.rows(),
            found: e1.rows(),
        });
    }
    let gap = operator_norm(&(e1 - e0));
    if gap >= 1.0 - tol.gap_margin {
        return Err(PathError::TooFar { index: 0, gap });
    }
    Ok(gap)
}

/// The idempotent `g = e1 (e0 + e1 − 1)^{-2} e0` with the range of `e1` and
/// the kernel of `e0`.
pub fn exchange_idempotent(e0: &ComplexMatrix, e1: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, PathError> {
    require_exchangeable(e0, e1, tol)?;
    let n = e0.dim();
    let m = &(e0 + e1) - &ComplexMatrix::identity(n);
    let m2_inv = mat_inverse(&(&m * &m))?;
    Ok(&(e1 * &m2_inv) * e0)
}

/// Residuals of `e1·g = g`, `g·e1 = e1`, `e0·g = e0`, `g·e0 = g` and `g² = g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExchangeDefects {
    pub e1_g: f64,
    pub g_e1: f64,
    pub e0_g: f64,
    pub g_e0: f64,
    pub idempotency: f64,
}

impl ExchangeDefects {
    pub fn measure(e0: &ComplexMatrix, e1: &ComplexMatrix, g: &ComplexMatrix) -> Self {
        let d = |x: ComplexMatrix, y: &ComplexMatrix| operator_norm(&(&x - y));
        Self {
            e1_g: d(e1 * g, g),
            g_e1: d(g * e1, e1),
            e0_g: d(e0 * g, e0),
            g_e0: d(g * e0, g),
            idempotency: d(g * g, g),
        }
    }

    pub fn worst(&self) -> f64 {
        [self.e1_g, self.g_e1, self.e0_g, self.g_e0, self.idempotency].into_iter().fold(0.0, f64::max)
    }
}

fn idempotent_spec() -> SpectrumSpec {
    SpectrumSpec::real(&[0.0, 1.0]).expect("fixed roots")
}

/// `e0 → g → e1` along two straight segments of idempotents.
pub fn two_segment_path(e0: &ComplexMatrix, e1: &ComplexMatrix, tol: &Tolerances) -> Result<PiecewisePath, PathError> {
    let g = exchange_idempotent(e0, e1, tol)?;
    let segments = vec![
        Segment::Linear {
            start: e0.clone(),
            end: g.clone(),
        },
        Segment::Linear { start: g, end: e1.clone() },
    ];
    let path = PiecewisePath::new(idempotent_spec(), false, segments, tol)?;
    path.require_membership(tol.base)?;
    Ok(path)
}

/// `u = e1·e0 + (1 − e1)(1 − e0)`, which satisfies `u·e0 = e1·u` and is
/// invertible when `||e1 − e0|| < 1`.
pub fn idempotent_similarity(e0: &ComplexMatrix, e1: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix, PathError> {
    require_exchangeable(e0, e1, tol)?;
    let id = ComplexMatrix::identity(e0.dim());
    let u = &(e1 * e0) + &(&(&id - e1) * &(&id - e0));
    let intertwining = operator_norm(&(&(&u * e0) - &(e1 * &u)));
    let scale = unit_floor(operator_norm(&u)) * unit_floor(operator_norm(e0).max(operator_norm(e1)));
    if intertwining > tol.base * scale {
        return Err(PathError::VerificationFailed(format!("u·e0 − e1·u = {intertwining:.3e}")));
    }
    Ok(u)
}

/// Square-zero `d = g − e0` and `d' = g − e1` with
/// `(1 + d')(1 + d)·e0·(1 − d)(1 − d') = e1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NilpotentPair {
    pub d: ComplexMatrix,
    pub d_prime: ComplexMatrix,
}

impl NilpotentPair {
    /// `max(||d²||, ||d'²||)`.
    pub fn square_defect(&self) -> f64 {
        operator_norm(&(&self.d * &self.d)).max(operator_norm(&(&self.d_prime * &self.d_prime)))
    }

    /// `(1 + d'·t)(1 + d·t)`.
    pub fn left_factor(&self, t: f64) -> ComplexMatrix {
        let n = self.d.dim();
        let id = ComplexMatrix::identity(n);
        let mut a = id.clone();
        a.axpy(t.into(), &self.d_prime);
        let mut b = id;
        b.axpy(t.into(), &self.d);
        &a * &b
    }

    /// `(1 − d·t)(1 − d'·t)`, the inverse of [`Self::left_factor`].
    pub fn right_factor(&self, t: f64) -> ComplexMatrix {
        let n = self.d.dim();
        let id = ComplexMatrix::identity(n);
        let mut a = id.clone();
        a.axpy((-t).into(), &self.d);
        let mut b = id;
        b.axpy((-t).into(), &self.d_prime);
        &a * &b
    }

    pub fn conjugate(&self, x: &ComplexMatrix, t: f64) -> ComplexMatrix {
        &(&self.left_factor(t) * x) * &self.right_factor(t)
    }

    /// Residuals of `d·e0 = d`, `e0·d = 0`, `d'·e1 = 0`, `e1·d' = d'`.
    pub fn relation_defects(&self, e0: &ComplexMatrix, e1: &ComplexMatrix) -> [f64; 4] {
        [
            operator_norm(&(&(&self.d * e0) - &self.d)),
            operator_norm(&(e0 * &self.d)),
            operator_norm(&(&self.d_prime * e1)),
            operator_norm(&(&(e1 * &self.d_prime) - &self.d_prime)),
        ]
    }
}

pub fn nilpotent_generators(e0: &ComplexMatrix, e1: &ComplexMatrix, tol: &Tolerances) -> Result<NilpotentPair, PathError> {
    let g = exchange_idempotent(e0, e1, tol)?;
    let pair = NilpotentPair {
        d: &g - e0,
        d_prime: &g - e1,
    };
    let scale = unit_floor(operator_norm(&g)).powi(4);
    let square = pair.square_defect();
    if square > tol.base * scale {
        return Err(PathError::VerificationFailed(format!("generator square {square:.3e}")));
    }
    let conj = operator_norm(&(&pair.conjugate(e0, 1.0) - e1));
    if conj > tol.base * scale {
        return Err(PathError::VerificationFailed(format!("generator conjugation defect {conj:.3e}")));
    }
    Ok(pair)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair() -> (ComplexMatrix, ComplexMatrix) {
        (
            ComplexMatrix::from_real_diag(&[1.0, 0.0]),
            ComplexMatrix::from_real_rows(&[&[1.0, 0.3], &[0.0, 0.0]]),
        )
    }

    #[test]
    fn equal_idempotents_exchange_to_themselves() {
        let e = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, 0.0]]);
        let tol = Tolerances::default();
        assert!((&exchange_idempotent(&e, &e, &tol).unwrap() - &e).max_abs() < 1e-14);
        assert!((&idempotent_similarity(&e, &e, &tol).unwrap() - &ComplexMatrix::identity(2)).max_abs() < 1e-14);
        let np = nilpotent_generators(&e, &e, &tol).unwrap();
        assert!(np.d.max_abs() < 1e-14 && np.d_prime.max_abs() < 1e-14);
    }

    #[test]
    fn hand_computed_pair() {
        let (e0, e1) = pair();
        let tol = Tolerances::default();
        let g = exchange_idempotent(&e0, &e1, &tol).unwrap();
        assert!((&g - &e0).max_abs() < 1e-15);
        let u = idempotent_similarity(&e0, &e1, &tol).unwrap();
        assert!((&u - &ComplexMatrix::from_real_rows(&[&[1.0, -0.3], &[0.0, 1.0]])).max_abs() < 1e-15);
        let np = nilpotent_generators(&e0, &e1, &tol).unwrap();
        assert!(np.d.max_abs() < 1e-15);
        assert!((&np.d_prime - &ComplexMatrix::from_real_rows(&[&[0.0, -0.3], &[0.0, 0.0]])).max_abs() < 1e-15);
    }

    #[test]
    fn two_segment_midpoint() {
        let (e0, e1) = pair();
        let path = two_segment_path(&e0, &e1, &Tolerances::default()).unwrap();
        assert_eq!(path.len(), 2);
        let g = exchange_idempotent(&e0, &e1, &Tolerances::default()).unwrap();
        let mid = path.eval(0.25);
        let expected = (&e0 + &g).scale_real(0.5);
        assert!((&mid - &expected).max_abs() < 1e-15);
        assert!(idempotent_defect(&mid) < 1e-12);
    }

    #[test]
    fn far_pair_rejected() {
        let e0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let e1 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        assert!(matches!(exchange_idempotent(&e0, &e1, &Tolerances::default()), Err(PathError::TooFar { .. })));
        let not_idem = ComplexMatrix::from_real_diag(&[2.0, 0.0]);
        assert!(matches!(exchange_idempotent(&not_idem, &e1, &Tolerances::default()), Err(PathError::NotIdempotent { .. })));
    }
}
