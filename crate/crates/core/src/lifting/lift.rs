use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{AnalyticFamily, LiftError, QuotientModel};
use crate::linalg::{least_squares, operator_norm, unit_floor, ComplexMatrix, LinalgError};
use crate::spectral::{riesz_idempotent, PartitionDefects, SpectralError, SpectrumSpec};
use crate::tolerances::Tolerances;

/// Certificates at a grid point must hold within `CERTIFY_FACTOR · tol.base`.
pub const CERTIFY_FACTOR: f64 = 10.0;
/// The unrepaired Riesz idempotents must sum to `I` within
/// `SEPARATION_FACTOR · tol.base`.
pub const SEPARATION_FACTOR: f64 = 1e3;
/// Largest residual accepted from the polynomial fit over the grid.
pub const FIT_THRESHOLD: f64 = 1e-7;

/// Per-grid-point certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftPoint {
    pub lambda_re: f64,
    pub lambda_im: f64,
    /// `||p(a)|| / max(1, scale)`.
    pub membership: f64,
    /// `||π(λ)(a) − b|| / max(1, ||b||)`.
    pub projection_error: f64,
    /// `||Σ e_i − I||` before the last idempotent is repaired.
    pub separation: f64,
    /// Worst partition defect after the repair.
    pub partition_defect: f64,
    /// `||a − σ(a)||`, self-adjoint lifts only.
    pub involution_defect: Option<f64>,
    pub certified: bool,
}

impl LiftPoint {
    pub fn lambda(&self) -> Complex64 {
        Complex64::new(self.lambda_re, self.lambda_im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftReport {
    pub tol: f64,
    pub threshold: f64,
    pub points: Vec<LiftPoint>,
    pub max_membership: f64,
    pub max_projection_error: f64,
    pub max_partition_defect: f64,
    pub max_involution_defect: Option<f64>,
    /// Degree of the analyticity fit; `None` for twisted models or grids too
    /// small to overdetermine it.
    pub fit_degree: Option<usize>,
    pub fit_residual: Option<f64>,
    pub certified: bool,
}

impl LiftReport {
    fn build(points: Vec<LiftPoint>, tol: &Tolerances, fit: Option<(usize, f64)>) -> Self {
        let max = |f: &dyn Fn(&LiftPoint) -> f64| points.iter().map(f).fold(0.0, f64::max);
        let max_membership = max(&|p| p.membership);
        let max_projection_error = max(&|p| p.projection_error);
        let max_partition_defect = max(&|p| p.partition_defect);
        let max_involution_defect = points
            .iter()
            .filter_map(|p| p.involution_defect)
            .reduce(f64::max);
        let certified = points.iter().all(|p| p.certified) && fit.is_none_or(|(_, r)| r <= FIT_THRESHOLD);
        Self {
            tol: tol.base,
            threshold: CERTIFY_FACTOR * tol.base,
            points,
            max_membership,
            max_projection_error,
            max_partition_defect,
            max_involution_defect,
            fit_degree: fit.map(|f| f.0),
            fit_residual: fit.map(|f| f.1),
            certified,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Everything needed to evaluate the lift at any `λ` in the family's domain.
#[derive(Debug, Clone, PartialEq)]
pub struct Lifter {
    model: QuotientModel,
    target: AnalyticFamily,
    kernel: Option<AnalyticFamily>,
    spec: SpectrumSpec,
    self_adjoint: bool,
    tol: Tolerances,
}

impl Lifter {
    pub fn new(model: QuotientModel, target: AnalyticFamily, spec: SpectrumSpec, tol: Tolerances) -> Result<Self, LiftError> {
        if target.dim() != model.dim() {
            return Err(LiftError::DimMismatch {
                expected: model.dim(),
                found: target.dim(),
            });
        }
        for c in target.coefficients() {
            model.check_block_diagonal(c)?;
        }
        Ok(Self {
            model,
            target,
            kernel: None,
            spec,
            self_adjoint: false,
            tol,
        })
    }

    /// Adds a kernel-valued perturbation `k(λ)` to the section.
    pub fn with_kernel(mut self, kernel: AnalyticFamily) -> Result<Self, LiftError> {
        if kernel.dim() != self.model.dim() {
            return Err(LiftError::DimMismatch {
                expected: self.model.dim(),
                found: kernel.dim(),
            });
        }
        for c in kernel.coefficients() {
            let defect = (c - &self.model.strict_upper_part(c)).max_abs();
            if defect > 0.0 {
                return Err(LiftError::NotInKernel { defect });
            }
        }
        self.kernel = Some(kernel);
        Ok(self)
    }

    /// Switches to the σ-fixed lift; the kernel perturbation is symmetrized.
    pub fn self_adjoint(mut self) -> Result<Self, LiftError> {
        if !self.model.involutive() {
            return Err(LiftError::NotInvolutive);
        }
        if self.model.has_twist() {
            return Err(LiftError::TwistUnsupported);
        }
        if !self.spec.real_only() {
            return Err(LiftError::NotRealSpec);
        }
        if !self.target.real() {
            return Err(LiftError::NotRealFamily);
        }
        let model = self.model.clone();
        self.kernel = self.kernel.map(|k| k.map(|c| model.symmetrize(c)));
        self.self_adjoint = true;
        Ok(self)
    }

    pub fn model(&self) -> &QuotientModel {
        &self.model
    }

    pub fn target(&self) -> &AnalyticFamily {
        &self.target
    }

    pub fn spec(&self) -> &SpectrumSpec {
        &self.spec
    }

    fn threshold(&self) -> f64 {
        CERTIFY_FACTOR * self.tol.base
    }

    /// `v(λ)⁻¹·b(λ)·v(λ) + k(λ)`: a preimage of `b(λ)` under `π(λ)`.
    pub fn section(&self, lambda: Complex64) -> Result<ComplexMatrix, LiftError> {
        if !self.target.contains(lambda) {
            return Err(LiftError::OutsideDomain { lambda });
        }
        let b = self.target.eval(lambda);
        let residual = self.spec.relative_residual(&b);
        if residual > self.threshold() {
            return Err(LiftError::NotLiftableInput { lambda, residual });
        }
        if self.self_adjoint {
            let defect = operator_norm(&(&b - &self.model.involution(&b)));
            if defect > self.threshold() * unit_floor(operator_norm(&b)) {
                return Err(LiftError::NotSelfAdjointInput { lambda, defect });
            }
        }
        let mut x = match self.model.twist_at(lambda)? {
            Some((v, v_inv)) => &(&v_inv * &b) * &v,
            None => b,
        };
        if let Some(k) = &self.kernel {
            x += &k.eval(lambda);
        }
        Ok(x)
    }

    /// Lifted idempotents of the section, the last one repaired to
    /// `I − Σ_{j<n} e_j`.
    pub fn idempotents(&self, lambda: Complex64) -> Result<(Vec<ComplexMatrix>, f64), LiftError> {
        let x = self.section(lambda)?;
        let n = x.rows();
        let mut parts = Vec::with_capacity(self.spec.n());
        for i in 0..self.spec.n() {
            match riesz_idempotent(&x, i, &self.spec, self.tol.quad_points) {
                Ok(e) => parts.push(e),
                Err(SpectralError::Linalg(LinalgError::ResolventSingular)) => return Err(LiftError::SpectralSeparationLost { lambda, defect: f64::INFINITY }),
                Err(e) => return Err(e.into()),
            }
        }
        let mut sum = ComplexMatrix::zeros(n, n);
        for e in &parts {
            sum += e;
        }
        let separation = operator_norm(&(&sum - &ComplexMatrix::identity(n)));
        if !(separation <= SEPARATION_FACTOR * self.tol.base) {
            return Err(LiftError::SpectralSeparationLost { lambda, defect: separation });
        }
        let mut last = ComplexMatrix::identity(n);
        for e in &parts[..parts.len() - 1] {
            last -= e;
        }
        *parts.last_mut().expect("at least two roots") = last;
        Ok((parts, separation))
    }

    /// `a(λ) = Σ λ_i e_i(λ)`.
    pub fn eval(&self, lambda: Complex64) -> Result<ComplexMatrix, LiftError> {
        self.eval_point(lambda).map(|(a, _)| a)
    }

    /// The lift at `λ` with its certificate. Errors only when the lift cannot
    /// be formed; failed certificates are reported in the point.
    pub fn eval_point(&self, lambda: Complex64) -> Result<(ComplexMatrix, LiftPoint), LiftError> {
        let (parts, separation) = self.idempotents(lambda)?;
        let mut a = ComplexMatrix::zeros(self.model.dim(), self.model.dim());
        for (e, &l) in parts.iter().zip(self.spec.roots()) {
            a.axpy(l, e);
        }
        let threshold = self.threshold();
        let mut involution_defect = None;
        if self.self_adjoint {
            let symmetric = self.model.symmetrize(&a);
            let residual = self.spec.relative_residual(&symmetric);
            if residual > threshold {
                return Err(LiftError::SymmetrizationBrokeMembership { lambda, residual });
            }
            a = symmetric;
            involution_defect = Some(operator_norm(&(&a - &self.model.involution(&a))));
        }
        let b = self.target.eval(lambda);
        let projected = self.model.project(&a, lambda)?;
        let projection_error = operator_norm(&(&projected - &b)) / unit_floor(operator_norm(&b));
        let membership = self.spec.relative_residual(&a);
        let defects = PartitionDefects::measure(&parts);
        let partition_defect = defects.worst() / defects.scale;
        let certified = membership <= threshold
            && projection_error <= threshold
            && partition_defect <= threshold
            && involution_defect.is_none_or(|d| d <= threshold);
        Ok((
            a,
            LiftPoint {
                lambda_re: lambda.re,
                lambda_im: lambda.im,
                membership,
                projection_error,
                separation,
                partition_defect,
                involution_defect,
                certified,
            },
        ))
    }

    /// Degree up to which `a(·)` is polynomial when there is no twist: the
    /// larger of `deg b + 2r` and `(n·r − 1)·deg x`, since `a = q(x)` for the
    /// Hermite interpolant `q` of the root labels to order `r` and
    /// `p(x)^r = 0`.
    pub fn fit_degree(&self) -> usize {
        let r = self.model.num_blocks();
        let deg_x = self.target.degree().max(self.kernel.as_ref().map_or(0, |k| k.degree()));
        (self.target.degree() + 2 * r).max((self.spec.n() * r - 1) * deg_x)
    }

    /// Certifies the lift at every grid point.
    pub fn certify(&self, grid: &[Complex64]) -> Result<LiftReport, LiftError> {
        if grid.is_empty() {
            return Err(LiftError::EmptyGrid);
        }
        let mut values = Vec::with_capacity(grid.len());
        let mut points = Vec::with_capacity(grid.len());
        for &lambda in grid {
            let (a, point) = self.eval_point(lambda)?;
            values.push(a);
            points.push(point);
        }
        let fit = if self.model.has_twist() {
            None
        } else {
            let degree = self.fit_degree();
            if grid.len() > degree + 1 {
                Some((degree, polynomial_fit_residual(grid, &values, degree)?))
            } else {
                None
            }
        };
        Ok(LiftReport::build(points, &self.tol, fit))
    }
}

fn chebyshev_row(s: Complex64, degree: usize) -> Vec<Complex64> {
    let mut row = vec![Complex64::new(1.0, 0.0)];
    if degree >= 1 {
        row.push(s);
    }
    for k in 2..=degree {
        let next = s * row[k - 1] * 2.0 - row[k - 2];
        row.push(next);
    }
    row
}

/// Least-squares fit of every entry by a degree-`degree` polynomial in
/// `λ / max|λ|` (Chebyshev basis); returns the worst misfit relative to
/// `max(1, max|a|)`.
pub fn polynomial_fit_residual(grid: &[Complex64], values: &[ComplexMatrix], degree: usize) -> Result<f64, LiftError> {
    let radius = grid.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let n = values[0].rows();
    let rows: Vec<Vec<Complex64>> = grid.iter().map(|&l| chebyshev_row(l / radius, degree)).collect();
    let design = ComplexMatrix::from_fn(grid.len(), degree + 1, |r, c| rows[r][c]);
    let rhs = ComplexMatrix::from_fn(grid.len(), n * n, |r, c| values[r][(c / n, c % n)]);
    let coeffs = least_squares(&design, &rhs)?;
    let misfit = (&(&design * &coeffs) - &rhs).max_abs();
    Ok(misfit / unit_floor(rhs.max_abs()))
}

/// Lift together with its grid report.
#[derive(Debug, Clone, PartialEq)]
pub struct LiftedFamily {
    pub lifter: Lifter,
    pub report: LiftReport,
}

impl LiftedFamily {
    pub fn eval(&self, lambda: Complex64) -> Result<ComplexMatrix, LiftError> {
        self.lifter.eval(lambda)
    }
}

/// Lifts `b(·)` through the zero-filled section.
pub fn lift_family(model: &QuotientModel, b: &AnalyticFamily, spec: &SpectrumSpec, grid: &[Complex64], tol: &Tolerances) -> Result<LiftedFamily, LiftError> {
    let lifter = Lifter::new(model.clone(), b.clone(), spec.clone(), *tol)?;
    let report = lifter.certify(grid)?;
    Ok(LiftedFamily { lifter, report })
}

/// Lifts `b(·)` through the section perturbed by the kernel family `k(·)`.
pub fn lift_family_with_kernel(
    model: &QuotientModel,
    b: &AnalyticFamily,
    kernel: &AnalyticFamily,
    spec: &SpectrumSpec,
    grid: &[Complex64],
    tol: &Tolerances,
) -> Result<LiftedFamily, LiftError> {
    let lifter = Lifter::new(model.clone(), b.clone(), spec.clone(), *tol)?.with_kernel(kernel.clone())?;
    let report = lifter.certify(grid)?;
    Ok(LiftedFamily { lifter, report })
}

/// σ-fixed lift of a σ-fixed real-analytic family on a real grid.
pub fn lift_family_selfadjoint(
    model: &QuotientModel,
    b: &AnalyticFamily,
    spec: &SpectrumSpec,
    grid: &[f64],
    tol: &Tolerances,
) -> Result<LiftedFamily, LiftError> {
    let lifter = Lifter::new(model.clone(), b.clone(), spec.clone(), *tol)?.self_adjoint()?;
    let grid: Vec<Complex64> = grid.iter().map(|&t| Complex64::new(t, 0.0)).collect();
    let report = lifter.certify(&grid)?;
    Ok(LiftedFamily { lifter, report })
}

/// Where and why [`local_lift`] stopped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LiftStop {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalLift {
    /// Largest `|λ|` certified before the first failure.
    pub radius: f64,
    pub stopped_at: Option<LiftStop>,
    /// Lift and certificates restricted to grid points with `|λ| ≤ radius`.
    pub family: LiftedFamily,
}

/// Certifies at `λ = 0`, then walks the grid in order of increasing `|λ|`
/// and stops at the first point that fails. Points at or beyond that
/// modulus are dropped.
pub fn local_lift(model: &QuotientModel, b: &AnalyticFamily, spec: &SpectrumSpec, grid: &[Complex64], tol: &Tolerances) -> Result<LocalLift, LiftError> {
    let lifter = Lifter::new(model.clone(), b.clone(), spec.clone(), *tol)?;
    match lifter.eval_point(Complex64::new(0.0, 0.0)) {
        Ok((_, p)) if p.certified => {}
        Ok(_) => return Err(LiftError::NotLiftableAtZero(Box::new(LiftError::Uncertified { lambda: Complex64::new(0.0, 0.0) }))),
        Err(e) => return Err(LiftError::NotLiftableAtZero(Box::new(e))),
    }
    let mut order: Vec<Complex64> = grid.to_vec();
    order.sort_by(|x, y| x.norm().total_cmp(&y.norm()));
    let mut stopped_at = None;
    let mut stop_radius = f64::INFINITY;
    for &lambda in &order {
        let failure = match lifter.eval_point(lambda) {
            Ok((_, p)) if p.certified => None,
            Ok(_) => Some(LiftError::Uncertified { lambda }.to_string()),
            Err(e) => Some(e.to_string()),
        };
        if let Some(reason) = failure {
            stop_radius = lambda.norm();
            stopped_at = Some(LiftStop {
                lambda_re: lambda.re,
                lambda_im: lambda.im,
                reason,
            });
            break;
        }
    }
    let inside: Vec<Complex64> = grid.iter().copied().filter(|l| l.norm() < stop_radius).collect();
    let radius = inside.iter().map(|l| l.norm()).fold(0.0, f64::max);
    let report = if inside.is_empty() {
        LiftReport::build(Vec::new(), tol, None)
    } else {
        lifter.certify(&inside)?
    };
    Ok(LocalLift {
        radius,
        stopped_at,
        family: LiftedFamily { lifter, report },
    })
}
