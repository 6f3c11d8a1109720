use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{check_compatible, idempotent_similarity, PathError, PiecewisePath, Segment};
use crate::linalg::{herm_inv_sqrt, mat_exp, mat_log_principal, operator_norm, unit_floor, ComplexMatrix, LinalgError};
use crate::spectral::AlgebraicElement;
use crate::tolerances::Tolerances;

/// `s` with `a1 = s⁻¹·a0·s`, and optionally `s = e^{c_1}…e^{c_m}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityCertificate {
    pub s: ComplexMatrix,
    pub s_inverse: ComplexMatrix,
    pub generators: Vec<ComplexMatrix>,
    pub unitary: bool,
}

impl SimilarityCertificate {
    pub fn identity(n: usize) -> Self {
        Self {
            s: ComplexMatrix::identity(n),
            s_inverse: ComplexMatrix::identity(n),
            generators: vec![ComplexMatrix::zeros(n, n)],
            unitary: true,
        }
    }

    /// `s⁻¹·a·s`.
    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        &(&self.s_inverse * a) * &self.s
    }

    /// `||s·s⁻¹ − I||`.
    pub fn inverse_defect(&self) -> f64 {
        operator_norm(&(&(&self.s * &self.s_inverse) - &ComplexMatrix::identity(self.s.dim())))
    }

    /// `||s*·s − I||`.
    pub fn unitary_defect(&self) -> f64 {
        operator_norm(&(&(&self.s.adjoint() * &self.s) - &ComplexMatrix::identity(self.s.dim())))
    }

    /// `||e^{c_1}…e^{c_m} − s||`, or `None` without generators.
    pub fn exp_product_defect(&self) -> Option<f64> {
        if self.generators.is_empty() {
            return None;
        }
        let mut prod = ComplexMatrix::identity(self.s.dim());
        for c in &self.generators {
            prod = &prod * &mat_exp(c).expect("square generator");
        }
        Some(operator_norm(&(&prod - &self.s)))
    }

    /// `max_k ||h_k − h_k*||` with `c_k = i·h_k`.
    pub fn generator_hermitian_defect(&self) -> f64 {
        self.hermitian_generators()
            .iter()
            .map(|h| operator_norm(&(h - &h.adjoint())))
            .fold(0.0, f64::max)
    }

    /// `h_k = −i·c_k`.
    pub fn hermitian_generators(&self) -> Vec<ComplexMatrix> {
        self.generators.iter().map(|c| c.scale(-Complex64::i())).collect()
    }

    /// `||s² − I||`: whether `s` happens to be an involution.
    pub fn involution_defect(&self) -> f64 {
        operator_norm(&(&(&self.s * &self.s) - &ComplexMatrix::identity(self.s.dim())))
    }

    /// The similarity `self` followed by `next`: `s = s_self·s_next`.
    pub fn then(&self, next: &SimilarityCertificate) -> SimilarityCertificate {
        SimilarityCertificate {
            s: &self.s * &next.s,
            s_inverse: &next.s_inverse * &self.s_inverse,
            generators: self.generators.iter().chain(&next.generators).cloned().collect(),
            unitary: self.unitary && next.unitary,
        }
    }
}

fn finish_certificate(
    a0: &AlgebraicElement,
    a1: &AlgebraicElement,
    s: ComplexMatrix,
    s_inverse: ComplexMatrix,
    unitary: bool,
    tol: &Tolerances,
) -> Result<SimilarityCertificate, PathError> {
    let mut cert = SimilarityCertificate {
        s,
        s_inverse,
        generators: Vec::new(),
        unitary,
    };
    let cond = unit_floor(operator_norm(&cert.s) * operator_norm(&cert.s_inverse));
    let inv = cert.inverse_defect();
    if inv > tol.base * cond {
        return Err(PathError::VerificationFailed(format!("s·s⁻¹ − I = {inv:.3e}")));
    }
    let conj = operator_norm(&(&cert.conjugate(a0.matrix()) - a1.matrix()));
    if conj > tol.base * cond * unit_floor(operator_norm(a0.matrix())) {
        return Err(PathError::VerificationFailed(format!("s⁻¹·a0·s − a1 = {conj:.3e}")));
    }
    if unitary {
        let u = cert.unitary_defect();
        if u > tol.base {
            return Err(PathError::VerificationFailed(format!("s*·s − I = {u:.3e}")));
        }
    }
    let distance = operator_norm(&cert.s.shift(-Complex64::new(1.0, 0.0)));
    match mat_log_principal(&cert.s) {
        Ok(mut c) => {
            if unitary {
                c = (&c - &c.adjoint()).scale_real(0.5);
            }
            cert.generators.push(c);
            Ok(cert)
        }
        Err(LinalgError::OutOfDomain { .. }) => Err(PathError::LogOutOfDomain {
            distance,
            certificate: Box::new(cert),
        }),
        Err(e) => Err(e.into()),
    }
}

/// Per-index gaps `||e_{1i} − e_{0i}||`.
pub fn index_gaps(a0: &AlgebraicElement, a1: &AlgebraicElement) -> Vec<f64> {
    (0..a0.spec().n())
        .map(|i| operator_norm(&(a1.idempotent(i) - a0.idempotent(i))))
        .collect()
}

fn require_index_gaps(a0: &AlgebraicElement, a1: &AlgebraicElement, bound: f64) -> Result<(), PathError> {
    match index_gaps(a0, a1).into_iter().enumerate().find(|&(_, g)| g >= bound) {
        Some((index, gap)) => Err(PathError::TooFar { index, gap }),
        None => Ok(()),
    }
}

/// `s = Σ_i e_{0i}·u_i⁻¹` with `s⁻¹ = Σ_i u_i·e_{0i}`, where `u_i` carries
/// `e_{0i}` to `e_{1i}`. Adds the generator `log s` when `||s − I|| < 1`.
pub fn ep_similarity(a0: &AlgebraicElement, a1: &AlgebraicElement, tol: &Tolerances) -> Result<SimilarityCertificate, PathError> {
    check_compatible(a0, a1)?;
    require_index_gaps(a0, a1, 1.0 - tol.gap_margin)?;
    let n = a0.dim();
    let mut s = ComplexMatrix::zeros(n, n);
    let mut s_inverse = ComplexMatrix::zeros(n, n);
    for i in 0..a0.spec().n() {
        let (e0, e1) = (a0.idempotent(i), a1.idempotent(i));
        let u = idempotent_similarity(e0, e1, tol)?;
        let u_inv = crate::linalg::mat_inverse(&u)?;
        s += &(e0 * &u_inv);
        s_inverse += &(&u * e0);
    }
    finish_certificate(a0, a1, s, s_inverse, false, tol)
}

/// Unitary `s = Σ_i e_{0i}·w_i*` with `w_i = u_i·(u_i*·u_i)^{-1/2}` for
/// self-adjoint elements; the generator `c = log s` is skew-Hermitian, so
/// `s = e^{i·h}` with `h = −i·c` Hermitian.
pub fn unitary_similarity(a0: &AlgebraicElement, a1: &AlgebraicElement, tol: &Tolerances) -> Result<SimilarityCertificate, PathError> {
    check_compatible(a0, a1)?;
    for a in [a0, a1] {
        if !a.self_adjoint() {
            let defect = operator_norm(&(a.matrix() - &a.matrix().adjoint()));
            return Err(PathError::NotHermitian { defect });
        }
    }
    require_index_gaps(a0, a1, 1.0 - tol.gap_margin)?;
    let n = a0.dim();
    let mut s = ComplexMatrix::zeros(n, n);
    let mut s_inverse = ComplexMatrix::zeros(n, n);
    for i in 0..a0.spec().n() {
        let (e0, e1) = (a0.idempotent(i), a1.idempotent(i));
        let u = idempotent_similarity(e0, e1, tol)?;
        let gram = (&u.adjoint() * &u).hermitian_part();
        let w = &u * &herm_inv_sqrt(&gram)?;
        s += &(e0 * &w.adjoint());
        s_inverse += &(&w * e0);
    }
    finish_certificate(a0, a1, s, s_inverse, true, tol)
}

/// Single exponential segment `t ↦ e^{−c_m t}…a0…e^{c_m t}`, checked for
/// membership on the grid (and Hermitian-ness for unitary certificates).
pub fn exp_path(a0: &AlgebraicElement, cert: &SimilarityCertificate, tol: &Tolerances) -> Result<PiecewisePath, PathError> {
    if cert.generators.is_empty() {
        return Err(PathError::MissingGenerators);
    }
    let segment = Segment::Exp {
        a0: a0.matrix().clone(),
        generators: cert.generators.clone(),
    };
    let self_adjoint = cert.unitary && a0.self_adjoint();
    let path = PiecewisePath::new(a0.spec().clone(), self_adjoint, vec![segment], tol)?;
    path.require_membership(tol.base)?;
    if self_adjoint {
        path.require_hermitian(tol.base * unit_floor(operator_norm(a0.matrix())))?;
    }
    Ok(path)
}
