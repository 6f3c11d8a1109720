use std::fmt;

use serde::{Deserialize, Serialize};

use super::ComponentError;
use crate::linalg::{operator_norm, ComplexMatrix};
use crate::sampling::Sampler;
use crate::spectral::{AlgebraicElement, SpectrumSpec};
use crate::tolerances::Tolerances;

/// Multiplicity of each root, i.e. the rank of each spectral idempotent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ComponentSignature {
    multiplicities: Vec<usize>,
}

impl ComponentSignature {
    pub fn new(multiplicities: Vec<usize>) -> Self {
        Self { multiplicities }
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn dim(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    /// Eigenvalue list with multiplicity, sorted descending.
    pub fn sorted_eigenvalues(&self, spec: &SpectrumSpec) -> Vec<f64> {
        let mut values: Vec<f64> = self
            .multiplicities
            .iter()
            .zip(spec.roots())
            .flat_map(|(&m, l)| std::iter::repeat_n(l.re, m))
            .collect();
        values.sort_by(|a, b| b.total_cmp(a));
        values
    }
}

/// Written as `2;1;0`.
impl fmt::Display for ComponentSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.multiplicities.iter().map(|m| m.to_string()).collect();
        f.write_str(&parts.join(";"))
    }
}

/// Ranks `round(trace e_i)`, each trace within `tol.trace_integrality` of an
/// integer.
pub fn signature(a: &AlgebraicElement, tol: &Tolerances) -> Result<ComponentSignature, ComponentError> {
    let mut multiplicities = Vec::with_capacity(a.spec().n());
    for (index, e) in a.partition().idempotents().iter().enumerate() {
        let trace = e.trace();
        let rounded = trace.re.round();
        if (trace.re - rounded).abs() > tol.trace_integrality || trace.im.abs() > tol.trace_integrality || rounded < 0.0 {
            return Err(ComponentError::NonIntegerTrace {
                index,
                trace: trace.re,
            });
        }
        multiplicities.push(rounded as usize);
    }
    let sig = ComponentSignature::new(multiplicities);
    if sig.dim() != a.dim() {
        return Err(ComponentError::DimMismatch {
            expected: a.dim(),
            found: sig.dim(),
        });
    }
    Ok(sig)
}

/// Every signature with `n` entries summing to `dim`, in lexicographic order.
pub fn all_signatures(n: usize, dim: usize) -> Vec<ComponentSignature> {
    fn rec(left: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<ComponentSignature>) {
        if slots == 1 {
            prefix.push(left);
            out.push(ComponentSignature::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            rec(left - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(dim, n, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

fn check_pair(sig0: &ComponentSignature, sig1: &ComponentSignature, spec: &SpectrumSpec) -> Result<(), ComponentError> {
    if !spec.real_only() {
        return Err(ComponentError::NotRealSpec);
    }
    for sig in [sig0, sig1] {
        if sig.multiplicities.len() != spec.n() {
            return Err(ComponentError::LengthMismatch {
                expected: spec.n(),
                found: sig.multiplicities.len(),
            });
        }
    }
    if sig0.dim() != sig1.dim() {
        return Err(ComponentError::DimMismatch {
            expected: sig0.dim(),
            found: sig1.dim(),
        });
    }
    Ok(())
}

/// Distance between two components of self-adjoint elements:
/// `max_k |α↓_k − β↓_k|` over the descending eigenvalue lists.
pub fn component_distance_oracle(sig0: &ComponentSignature, sig1: &ComponentSignature, spec: &SpectrumSpec) -> Result<f64, ComponentError> {
    check_pair(sig0, sig1, spec)?;
    let a = sig0.sorted_eigenvalues(spec);
    let b = sig1.sorted_eigenvalues(spec);
    Ok(a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
}

/// Lower bound on the distance between distinct components:
///
/// `δ · min_i Π_{j≠i}|λ_i − λ_j| / (Π_{j≠i}(M_j + δ) − Π_{j≠i} M_j)`
///
/// with `δ` the minimal gap and `M_j = max_{k≠j}|λ_k − λ_j|`.
pub fn separation_lower_bound(spec: &SpectrumSpec) -> f64 {
    let roots = spec.roots();
    let n = roots.len();
    let delta = spec.min_gap();
    let spread: Vec<f64> = (0..n)
        .map(|j| (0..n).filter(|&k| k != j).map(|k| (roots[k] - roots[j]).norm()).fold(0.0, f64::max))
        .collect();
    let worst = (0..n)
        .map(|i| {
            let others = || (0..n).filter(move |&j| j != i);
            let num: f64 = others().map(|j| (roots[i] - roots[j]).norm()).product();
            let grown: f64 = others().map(|j| spread[j] + delta).product();
            let base: f64 = others().map(|j| spread[j]).product();
            num / (grown - base)
        })
        .fold(f64::INFINITY, f64::min);
    delta * worst
}

/// `U0·D0·U0* − U1·D1·U1*` in operator norm for Haar-like `U0`, `U1`.
pub fn random_realized_distance(sig0: &ComponentSignature, sig1: &ComponentSignature, spec: &SpectrumSpec, sampler: &mut Sampler) -> f64 {
    let d0 = ComplexMatrix::from_real_diag(&sig0.sorted_eigenvalues(spec));
    let d1 = ComplexMatrix::from_real_diag(&sig1.sorted_eigenvalues(spec));
    let n = sig0.dim();
    let u0 = sampler.unitary(n);
    let u1 = sampler.unitary(n);
    let a0 = &(&u0 * &d0) * &u0.adjoint();
    let a1 = &(&u1 * &d1) * &u1.adjoint();
    operator_norm(&(&a0 - &a1))
}

/// Distance realized by both elements diagonal in one random unitary basis,
/// eigenvalues sorted the same way; equals the oracle value.
pub fn common_basis_distance(sig0: &ComponentSignature, sig1: &ComponentSignature, spec: &SpectrumSpec, sampler: &mut Sampler) -> f64 {
    let diff: Vec<f64> = sig0
        .sorted_eigenvalues(spec)
        .iter()
        .zip(sig1.sorted_eigenvalues(spec))
        .map(|(a, b)| a - b)
        .collect();
    let u = sampler.unitary(sig0.dim());
    operator_norm(&(&(&u * &ComplexMatrix::from_real_diag(&diff)) * &u.adjoint()))
}
