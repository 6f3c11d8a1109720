use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::LiftError;
use crate::linalg::{mat_inverse_capped, ComplexMatrix, LinalgError, ZERO};
use crate::sampling::Sampler;

/// Largest condition number accepted for the twist `v(λ)`.
pub const TWIST_CONDITION_CAP: f64 = 1e8;

/// Matrix-valued polynomial `Σ_k C_k λ^k` on `|λ| < radius` (real `λ` only
/// when `real`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyticFamily {
    #[serde(rename = "coeffs")]
    coefficients: Vec<ComplexMatrix>,
    radius: f64,
    real: bool,
}

impl AnalyticFamily {
    pub fn new(coefficients: Vec<ComplexMatrix>, radius: f64, real: bool) -> Result<Self, LiftError> {
        let first = coefficients.first().ok_or(LiftError::EmptyFamily)?;
        let n = first.ensure_square()?;
        if let Some(c) = coefficients.iter().find(|c| !c.is_square() || c.rows() != n) {
            return Err(LiftError::DimMismatch {
                expected: n,
                found: c.rows(),
            });
        }
        if !(radius > 0.0) {
            return Err(LiftError::BadRadius(radius));
        }
        Ok(Self {
            coefficients,
            radius,
            real,
        })
    }

    pub fn constant(c: ComplexMatrix, radius: f64, real: bool) -> Result<Self, LiftError> {
        Self::new(vec![c], radius, real)
    }

    pub fn coefficients(&self) -> &[ComplexMatrix] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.coefficients[0].dim()
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn real(&self) -> bool {
        self.real
    }

    pub fn contains(&self, lambda: Complex64) -> bool {
        lambda.norm() < self.radius && (!self.real || lambda.im == 0.0)
    }

    /// Horner evaluation.
    pub fn eval(&self, lambda: Complex64) -> ComplexMatrix {
        let mut iter = self.coefficients.iter().rev();
        let mut acc = iter.next().expect("nonempty").clone();
        for c in iter {
            acc = acc.scale(lambda);
            acc += c;
        }
        acc
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&ComplexMatrix) -> ComplexMatrix) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(f).collect(),
            radius: self.radius,
            real: self.real,
        }
    }
}

/// Block-upper-triangular algebra `A` over the flag given by `block_sizes`,
/// mapped onto block-diagonal `B` by `π(λ)(x) = π0(v(λ)·x·v(λ)⁻¹)`, where `π0`
/// keeps the diagonal blocks and `v` is a block-diagonal twist
/// (identity when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuotientModel {
    block_sizes: Vec<usize>,
    involutive: bool,
    #[serde(rename = "twist_coeffs", default)]
    twist: Vec<ComplexMatrix>,
}

impl QuotientModel {
    pub fn new(block_sizes: Vec<usize>, involutive: bool, twist: Vec<ComplexMatrix>) -> Result<Self, LiftError> {
        if block_sizes.is_empty() || block_sizes.contains(&0) {
            return Err(LiftError::BadBlocks(format!("{block_sizes:?}")));
        }
        if involutive && block_sizes.iter().ne(block_sizes.iter().rev()) {
            return Err(LiftError::BadBlocks(format!("involutive model needs palindromic sizes, got {block_sizes:?}")));
        }
        let model = Self {
            block_sizes,
            involutive,
            twist: Vec::new(),
        };
        let n = model.dim();
        for c in &twist {
            if !c.is_square() || c.rows() != n {
                return Err(LiftError::DimMismatch { expected: n, found: c.rows() });
            }
            if model.off_diagonal_norm(c) != 0.0 {
                return Err(LiftError::BadBlocks("twist coefficients must be block diagonal".into()));
            }
        }
        Ok(Self { twist, ..model })
    }

    pub fn plain(block_sizes: Vec<usize>) -> Result<Self, LiftError> {
        Self::new(block_sizes, false, Vec::new())
    }

    pub fn from_json(text: &str) -> Result<Self, LiftError> {
        let raw: Self = serde_json::from_str(text).map_err(|e| LiftError::Parse(e.to_string()))?;
        Self::new(raw.block_sizes, raw.involutive, raw.twist)
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.block_sizes.len()
    }

    pub fn involutive(&self) -> bool {
        self.involutive
    }

    pub fn has_twist(&self) -> bool {
        !self.twist.is_empty()
    }

    pub fn twist_coefficients(&self) -> &[ComplexMatrix] {
        &self.twist
    }

    pub fn dim(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    fn block_index(&self) -> Vec<usize> {
        self.block_sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &k)| std::iter::repeat_n(b, k))
            .collect()
    }

    fn part(&self, x: &ComplexMatrix, keep: impl Fn(usize, usize) -> bool) -> ComplexMatrix {
        let idx = self.block_index();
        ComplexMatrix::from_fn(x.rows(), x.cols(), |r, c| if keep(idx[r], idx[c]) { x[(r, c)] } else { ZERO })
    }

    fn off_diagonal_norm(&self, x: &ComplexMatrix) -> f64 {
        self.part(x, |a, b| a != b).max_abs()
    }

    /// Largest entry in the strictly lower blocks.
    pub fn lower_defect(&self, x: &ComplexMatrix) -> f64 {
        self.part(x, |a, b| a > b).max_abs()
    }

    fn check_dim(&self, x: &ComplexMatrix) -> Result<(), LiftError> {
        if !x.is_square() || x.rows() != self.dim() {
            return Err(LiftError::DimMismatch {
                expected: self.dim(),
                found: x.rows(),
            });
        }
        Ok(())
    }

    /// Rejects `x` with strictly lower blocks above `1e-12·max(1, max|x|)`.
    pub fn check_in_algebra(&self, x: &ComplexMatrix) -> Result<(), LiftError> {
        self.check_dim(x)?;
        let defect = self.lower_defect(x);
        if defect > 1e-12 * x.max_abs().max(1.0) {
            return Err(LiftError::NotInAlgebra { defect });
        }
        Ok(())
    }

    pub fn check_block_diagonal(&self, x: &ComplexMatrix) -> Result<(), LiftError> {
        self.check_dim(x)?;
        let defect = self.off_diagonal_norm(x);
        if defect > 1e-12 * x.max_abs().max(1.0) {
            return Err(LiftError::NotInQuotient { defect });
        }
        Ok(())
    }

    /// `π0`: keeps the diagonal blocks.
    pub fn diagonal_part(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.part(x, |a, b| a == b)
    }

    /// The kernel component: strictly upper blocks.
    pub fn strict_upper_part(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.part(x, |a, b| a < b)
    }

    /// `(v(λ), v(λ)⁻¹)`, or `None` without a twist.
    pub fn twist_at(&self, lambda: Complex64) -> Result<Option<(ComplexMatrix, ComplexMatrix)>, LiftError> {
        if self.twist.is_empty() {
            return Ok(None);
        }
        let mut iter = self.twist.iter().rev();
        let mut v = iter.next().expect("nonempty").clone();
        for c in iter {
            v = v.scale(lambda);
            v += c;
        }
        match mat_inverse_capped(&v, TWIST_CONDITION_CAP) {
            Ok(inv) => Ok(Some((v, inv))),
            Err(LinalgError::SingularMatrix { .. } | LinalgError::IllConditioned { .. }) => Err(LiftError::ProjectionDegenerate { lambda }),
            Err(e) => Err(e.into()),
        }
    }

    /// `π(λ)(x)`.
    pub fn project(&self, x: &ComplexMatrix, lambda: Complex64) -> Result<ComplexMatrix, LiftError> {
        self.check_in_algebra(x)?;
        Ok(match self.twist_at(lambda)? {
            Some((v, v_inv)) => self.diagonal_part(&(&(&v * x) * &v_inv)),
            None => self.diagonal_part(x),
        })
    }

    /// Anti-diagonal permutation `J`.
    pub fn flip(&self) -> ComplexMatrix {
        let n = self.dim();
        ComplexMatrix::from_fn(n, n, |r, c| if r + c + 1 == n { Complex64::new(1.0, 0.0) } else { ZERO })
    }

    /// `σ(x) = J·x*·J`: conjugate-linear, reverses products, maps the
    /// algebra and the kernel to themselves when the sizes are palindromic.
    pub fn involution(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let n = x.rows();
        let xs = x.adjoint();
        ComplexMatrix::from_fn(n, n, |r, c| xs[(n - 1 - r, n - 1 - c)])
    }

    /// `(x + σ(x)) / 2`.
    pub fn symmetrize(&self, x: &ComplexMatrix) -> ComplexMatrix {
        (x + &self.involution(x)).scale_real(0.5)
    }

    pub fn random_algebra_element(&self, sampler: &mut Sampler) -> ComplexMatrix {
        let m = sampler.disk_matrix(self.dim());
        &self.diagonal_part(&m) + &self.strict_upper_part(&m)
    }

    pub fn random_kernel_element(&self, sampler: &mut Sampler) -> ComplexMatrix {
        self.strict_upper_part(&sampler.disk_matrix(self.dim()))
    }
}
