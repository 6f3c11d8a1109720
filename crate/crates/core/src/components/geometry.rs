use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::ComponentError;
use crate::linalg::{least_squares, operator_norm, singular_values, unit_floor, ComplexMatrix};
use crate::spectral::{AlgebraicElement, SpectrumSpec};
use crate::tolerances::Tolerances;

/// Whether `a` is a scalar multiple of the identity, the centre of the full
/// matrix algebra.
pub fn centrality_test(a: &ComplexMatrix, tol: &Tolerances) -> Result<bool, ComponentError> {
    let n = a.ensure_square()?;
    let mean = a.trace() / n as f64;
    Ok(operator_norm(&a.shift(-mean)) <= tol.base * unit_floor(operator_norm(a)))
}

/// Centrality decided through the spectral partition: `a` is central iff
/// `e_i·B·e_j = 0` for every matrix unit `B` and every `i ≠ j`.
///
/// For `B = E_rs` the product is the outer product of column `r` of `e_i`
/// and row `s` of `e_j`, so its norm is the product of those vector norms.
pub fn centrality_cross_check(a: &AlgebraicElement, tol: &Tolerances) -> bool {
    let parts = a.partition().idempotents();
    let n = a.dim();
    let col_norms = |e: &ComplexMatrix| -> Vec<f64> { (0..n).map(|r| (0..n).map(|k| e[(k, r)].norm_sqr()).sum::<f64>().sqrt()).collect() };
    let row_norms = |e: &ComplexMatrix| -> Vec<f64> { (0..n).map(|s| (0..n).map(|k| e[(s, k)].norm_sqr()).sum::<f64>().sqrt()).collect() };
    for (i, ei) in parts.iter().enumerate() {
        let cols = col_norms(ei);
        for (j, ej) in parts.iter().enumerate() {
            if i == j {
                continue;
            }
            let rows = row_norms(ej);
            let worst = cols.iter().fold(0.0, |m: f64, c| m.max(*c)) * rows.iter().fold(0.0, |m: f64, r| m.max(*r));
            if worst > tol.zero_idempotent {
                return false;
            }
        }
    }
    true
}

/// Affine complex line `t ↦ base + t·direction` inside the solution set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineEmbedding {
    pub base: ComplexMatrix,
    pub direction: ComplexMatrix,
}

impl LineEmbedding {
    pub fn eval(&self, t: Complex64) -> ComplexMatrix {
        let mut out = self.base.clone();
        out.axpy(t, &self.direction);
        out
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        operator_norm(&self.direction) <= tol
    }

    /// `max_t ||p(a(t))|| / max(1, scale(t))` over the given parameters.
    pub fn max_relative_residual(&self, spec: &SpectrumSpec, ts: &[Complex64]) -> f64 {
        ts.iter().map(|&t| spec.relative_residual(&self.eval(t))).fold(0.0, f64::max)
    }
}

/// `t ↦ a + t·(λ_i − λ_j)·e_i·x·e_j`. Since `n = e_i x e_j` squares to zero and
/// `n·a = λ_j n`, `a·n = λ_i n`, every point is the similarity
/// `(1 − s·n) a (1 + s·n)` of `a` with `s = t`.
pub fn line_embedding(a: &AlgebraicElement, x: &ComplexMatrix, i: usize, j: usize) -> Result<LineEmbedding, ComponentError> {
    let n = a.spec().n();
    for index in [i, j] {
        if index >= n {
            return Err(ComponentError::IndexOutOfRange { index, n });
        }
    }
    if i == j {
        return Err(ComponentError::SameIndex(i));
    }
    if x.rows() != a.dim() || !x.is_square() {
        return Err(ComponentError::DimMismatch {
            expected: a.dim(),
            found: x.rows(),
        });
    }
    let nil = &(a.idempotent(i) * x) * a.idempotent(j);
    Ok(LineEmbedding {
        base: a.matrix().clone(),
        direction: nil.scale(a.spec().root(i) - a.spec().root(j)),
    })
}

/// `(a, c, d)` with `T = [[a, c + id], [c − id, 1 − a]]` for a rank-one
/// orthogonal projection `T` of size 2.
pub fn sphere_coordinates(t: &ComplexMatrix, tol: &Tolerances) -> Result<(f64, f64, f64), ComponentError> {
    if t.rows() != 2 || t.cols() != 2 {
        return Err(ComponentError::NotRankOneProjection("matrix must be 2×2".into()));
    }
    let herm = operator_norm(&(t - &t.adjoint()));
    let idem = operator_norm(&(&(t * t) - t));
    let trace = t.trace();
    if herm > tol.base || idem > tol.base || (trace - Complex64::new(1.0, 0.0)).norm() > tol.trace_integrality {
        return Err(ComponentError::NotRankOneProjection(format!(
            "hermitian defect {herm:.3e}, idempotency defect {idem:.3e}, trace {trace}"
        )));
    }
    Ok((t[(0, 0)].re, t[(0, 1)].re, t[(0, 1)].im))
}

/// `|(a − 1/2)² + c² + d² − 1/4|`.
pub fn sphere_defect((a, c, d): (f64, f64, f64)) -> f64 {
    ((a - 0.5).powi(2) + c * c + d * d - 0.25).abs()
}

/// Polynomial fit of a sampled curve of rank-one 2×2 projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveFit {
    pub degree: usize,
    /// Worst coordinate misfit at the samples.
    pub sample_residual: f64,
    /// Worst sphere-constraint defect of the fitted polynomial at the probe
    /// parameters.
    pub constraint_residual: f64,
}

impl CurveFit {
    pub fn residual(&self) -> f64 {
        self.sample_residual.max(self.constraint_residual)
    }
}

/// Probe parameters for [`fit_projection_curve`].
pub const FIT_PROBES: [f64; 6] = [-1e3, -1e2, -1e1, 1e1, 1e2, 1e3];

fn chebyshev_row(s: f64, degree: usize) -> Vec<f64> {
    let mut row = Vec::with_capacity(degree + 1);
    row.push(1.0);
    if degree >= 1 {
        row.push(s);
    }
    for k in 2..=degree {
        let next = 2.0 * s * row[k - 1] - row[k - 2];
        row.push(next);
    }
    row
}

/// Fits each sphere coordinate by a polynomial of degree `≤ degree` in `t`
/// that passes through the first sample (Chebyshev basis, least squares on
/// the rest), then evaluates the sphere constraint of the fitted curve at
/// [`FIT_PROBES`]. A polynomial curve that stays on the sphere must be
/// constant, so a nonconstant sampled curve shows up as a large residual
/// either at the samples or at the probes.
pub fn fit_projection_curve(samples: &[(f64, ComplexMatrix)], degree: usize, tol: &Tolerances) -> Result<CurveFit, ComponentError> {
    if samples.len() < degree + 1 {
        return Err(ComponentError::FitUnderdetermined {
            samples: samples.len(),
            degree,
        });
    }
    let coords: Vec<(f64, [f64; 3])> = samples
        .iter()
        .map(|(t, m)| sphere_coordinates(m, tol).map(|(a, c, d)| (*t, [a, c, d])))
        .collect::<Result<_, _>>()?;
    let (t_min, t_max) = coords.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), (t, _)| (lo.min(*t), hi.max(*t)));
    let width = if t_max > t_min { t_max - t_min } else { 1.0 };
    let to_s = |t: f64| (2.0 * t - t_min - t_max) / width;
    let (t0, y0) = coords[0];
    let base_row = chebyshev_row(to_s(t0), degree);
    let design_row = |t: f64| -> Vec<f64> { chebyshev_row(to_s(t), degree).iter().zip(&base_row).skip(1).map(|(a, b)| a - b).collect() };

    let coeffs: Vec<[f64; 3]> = if degree == 0 {
        Vec::new()
    } else {
        let rest = &coords[1..];
        let a = ComplexMatrix::from_fn(rest.len(), degree, |r, c| design_row(rest[r].0)[c].into());
        let b = ComplexMatrix::from_fn(rest.len(), 3, |r, c| (rest[r].1[c] - y0[c]).into());
        let x = least_squares(&a, &b)?;
        (0..degree).map(|k| [x[(k, 0)].re, x[(k, 1)].re, x[(k, 2)].re]).collect()
    };
    let fitted = |t: f64| -> [f64; 3] {
        let row = design_row(t);
        let mut y = y0;
        for (w, c) in row.iter().zip(&coeffs) {
            for k in 0..3 {
                y[k] += w * c[k];
            }
        }
        y
    };
    let sample_residual = coords
        .iter()
        .map(|(t, y)| {
            let f = fitted(*t);
            (0..3).map(|k| (f[k] - y[k]).abs()).fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    let constraint_residual = FIT_PROBES
        .iter()
        .map(|&t| {
            let f = fitted(t);
            sphere_defect((f[0], f[1], f[2]))
        })
        .fold(0.0, f64::max);
    Ok(CurveFit {
        degree,
        sample_residual,
        constraint_residual,
    })
}

/// Singular values of `(1 − s)·p0 + s·p1` at `points` equally spaced `s`.
pub fn segment_singular_values(p0: &ComplexMatrix, p1: &ComplexMatrix, points: usize) -> Result<Vec<Vec<f64>>, ComponentError> {
    let g = points.max(2);
    (0..g)
        .map(|k| {
            let s = k as f64 / (g - 1) as f64;
            let mut m = p0.scale_real(1.0 - s);
            m.axpy(s.into(), p1);
            singular_values(&m).map_err(ComponentError::from)
        })
        .collect()
}

/// Whether some singular value moves by more than `tol` along the profile.
pub fn profile_varies(profile: &[Vec<f64>], tol: f64) -> bool {
    let Some(first) = profile.first() else {
        return false;
    };
    (0..first.len()).any(|k| {
        let (lo, hi) = profile.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), row| (lo.min(row[k]), hi.max(row[k])));
        hi - lo > tol
    })
}
