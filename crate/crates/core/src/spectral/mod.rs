//! The polynomial `p`, its Lagrange basis, and the two routes to the
//! spectral partition of an algebraic element: Lagrange polynomials
//! `e_i = p_i(a)` and Riesz contour integrals.

mod canonical;
mod decompose;
mod partition;
mod riesz;
mod spec;

pub use canonical::{canonicalize, CanonicalForm};
pub use decompose::{combine, decompose, from_partition, AlgebraicElement};
pub use partition::{reconstruct, PartitionDefects, PartitionOfUnity};
pub use riesz::{riesz_idempotent, riesz_partition, riesz_projection, MIN_QUAD_POINTS};
pub use spec::{eval_scalar_poly, parse_complex, SpectrumSpec};

use num_complex::Complex64;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SpectralError {
    #[error("need at least two roots, got {0}")]
    TooFewRoots(usize),
    #[error("roots {first} and {second} coincide (repeated roots are not supported)")]
    DuplicateRoots { first: usize, second: usize },
    #[error("root {index} is not real but the spec is self-adjoint")]
    NonRealRoot { index: usize },
    #[error("cannot parse root: {0}")]
    BadRoot(String),
    #[error("not algebraic: ||p(a)|| = {residual:.3e} exceeds {threshold:.3e}")]
    NotAlgebraic { residual: f64, threshold: f64 },
    #[error("invalid partition of unity: {0}")]
    InvalidPartition(String),
    #[error("root index {index} out of range for {n} roots")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("quadrature needs at least {} points, got {points}", MIN_QUAD_POINTS)]
    QuadratureTooCoarse { points: usize },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Lagrange interpolation polynomials `p_i` with `p_i(λ_j) = δ_ij`, as
/// ascending coefficient lists of length `n`.
pub fn lagrange_basis(spec: &SpectrumSpec) -> Vec<Vec<Complex64>> {
    spec.lagrange_coeffs().to_vec()
}

/// Upper bound on `||e_i(a + ε) − e_i(a)||` for `a, a + ε` both algebraic:
///
/// `[Π_{j≠i}(||a|| + ||ε|| + |λ_j|) − Π_{j≠i}(||a|| + |λ_j|)] / Π_{j≠i}|λ_i − λ_j|`.
///
/// The expansion argument behind it holds for any `||ε||`; callers normally
/// stay in `||ε|| ≤ 1`.
pub fn continuity_bound(spec: &SpectrumSpec, norm_a: f64, norm_eps: f64, i: usize) -> f64 {
    let li = spec.root(i);
    let others = || spec.roots().iter().enumerate().filter(move |&(j, _)| j != i).map(|(_, l)| *l);
    let perturbed: f64 = others().map(|l| norm_a + norm_eps + l.norm()).product();
    let base: f64 = others().map(|l| norm_a + l.norm()).product();
    let denom: f64 = others().map(|l| (li - l).norm()).product();
    (perturbed - base) / denom
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn two_root_basis() {
        let spec = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
        let basis = lagrange_basis(&spec);
        assert_eq!(basis[0], vec![c(1.0), c(-1.0)]);
        assert_eq!(basis[1], vec![c(0.0), c(1.0)]);
    }

    #[test]
    fn three_root_basis_matches_direct_formula() {
        let spec = SpectrumSpec::real(&[0.0, 1.0, 2.0]).unwrap();
        let basis = lagrange_basis(&spec);
        // (λ−1)(λ−2)/2 = 1 − 1.5λ + 0.5λ²
        for (got, want) in basis[0].iter().zip([1.0, -1.5, 0.5]) {
            assert!((got - c(want)).norm() < 1e-15);
        }
        for (i, p) in basis.iter().enumerate() {
            assert_eq!(p.len(), 3);
            for (j, &l) in spec.roots().iter().enumerate() {
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((eval_scalar_poly(p, l) - c(expected)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn basis_sums_to_one_and_interpolates_identity() {
        let spec = SpectrumSpec::parse("0,1+2i,-3,0.5-0.5i", false).unwrap();
        let basis = lagrange_basis(&spec);
        let n = spec.n();
        for k in 0..n {
            let sum: Complex64 = basis.iter().map(|p| p[k]).sum();
            let weighted: Complex64 = basis.iter().zip(spec.roots()).map(|(p, l)| p[k] * l).sum();
            let one = if k == 0 { 1.0 } else { 0.0 };
            let lambda = if k == 1 { 1.0 } else { 0.0 };
            assert!((sum - c(one)).norm() < 1e-12, "coefficient {k} of Σ p_i");
            assert!((weighted - c(lambda)).norm() < 1e-12, "coefficient {k} of Σ λ_i p_i");
        }
    }

    #[test]
    fn continuity_bound_values() {
        let spec = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
        assert_eq!(continuity_bound(&spec, 1.0, 0.0, 0), 0.0);
        assert!((continuity_bound(&spec, 1.0, 0.1, 0) - 0.1).abs() < 1e-15);
    }
}
