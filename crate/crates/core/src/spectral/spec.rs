use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::SpectralError;
use crate::linalg::{operator_norm, ComplexMatrix, ONE, ZERO};
use crate::tolerances::Tolerances;

/// The polynomial `p(λ) = Π (λ − λ_i)` given by its distinct roots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct SpectrumSpec {
    roots: Vec<Complex64>,
    real_only: bool,
    min_gap: f64,
    lagrange: Vec<Vec<Complex64>>,
}

impl SpectrumSpec {
    /// Validates the roots with the default duplicate threshold.
    pub fn new(roots: Vec<Complex64>, real_only: bool) -> Result<Self, SpectralError> {
        Self::with_tolerances(roots, real_only, &Tolerances::default())
    }

    pub fn with_tolerances(roots: Vec<Complex64>, real_only: bool, tol: &Tolerances) -> Result<Self, SpectralError> {
        if roots.len() < 2 {
            return Err(SpectralError::TooFewRoots(roots.len()));
        }
        if let Some(index) = roots.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(SpectralError::BadRoot(format!("root {index} is not finite")));
        }
        if real_only {
            if let Some(index) = roots.iter().position(|z| z.im != 0.0) {
                return Err(SpectralError::NonRealRoot { index });
            }
        }
        let mut min_gap = f64::INFINITY;
        for i in 0..roots.len() {
            for j in (i + 1)..roots.len() {
                let gap = (roots[i] - roots[j]).norm();
                if gap < tol.duplicate_root {
                    return Err(SpectralError::DuplicateRoots { first: i, second: j });
                }
                min_gap = min_gap.min(gap);
            }
        }
        let lagrange = (0..roots.len()).map(|i| lagrange_coefficients(&roots, i)).collect();
        Ok(Self {
            roots,
            real_only,
            min_gap,
            lagrange,
        })
    }

    /// Real roots; sets `real_only`.
    pub fn real(roots: &[f64]) -> Result<Self, SpectralError> {
        Self::new(roots.iter().map(|&r| Complex64::new(r, 0.0)).collect(), true)
    }

    /// Parses the CLI syntax `"0,1+2i,3"`.
    pub fn parse(text: &str, real_only: bool) -> Result<Self, SpectralError> {
        let roots = text
            .split(',')
            .map(|tok| parse_complex(tok.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(roots, real_only)
    }

    pub fn roots(&self) -> &[Complex64] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> Complex64 {
        self.roots[i]
    }

    /// Number of roots.
    pub fn n(&self) -> usize {
        self.roots.len()
    }

    pub fn real_only(&self) -> bool {
        self.real_only
    }

    /// `δ = min_{i≠j} |λ_i − λ_j|`.
    pub fn min_gap(&self) -> f64 {
        self.min_gap
    }

    /// Coefficients of the Lagrange polynomials `p_i`, ascending powers.
    pub fn lagrange_coeffs(&self) -> &[Vec<Complex64>] {
        &self.lagrange
    }

    pub fn check_index(&self, i: usize) -> Result<(), SpectralError> {
        if i < self.n() {
            Ok(())
        } else {
            Err(SpectralError::IndexOutOfRange { index: i, n: self.n() })
        }
    }

    /// `p(a) = Π_j (a − λ_j)`.
    pub fn eval_poly(&self, a: &ComplexMatrix) -> ComplexMatrix {
        product_of_shifts(a, self.roots.iter().copied())
    }

    /// `p_i(a) = Π_{j≠i} (a − λ_j) / (λ_i − λ_j)`, evaluated in product form.
    pub fn eval_lagrange(&self, i: usize, a: &ComplexMatrix) -> ComplexMatrix {
        let li = self.roots[i];
        let denom: Complex64 = self
            .roots
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &lj)| li - lj)
            .product();
        let others = self.roots.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &l)| l);
        product_of_shifts(a, others).scale(ONE / denom)
    }

    /// `Π_j (norm_a + |λ_j|)`, the growth scale of `||p(a)||`.
    pub fn membership_scale(&self, norm_a: f64) -> f64 {
        self.roots.iter().map(|l| norm_a + l.norm()).product()
    }

    /// `||p(a)||`.
    pub fn residual(&self, a: &ComplexMatrix) -> f64 {
        operator_norm(&self.eval_poly(a))
    }

    /// `||p(a)|| / max(1, Π_j(||a|| + |λ_j|))`.
    pub fn relative_residual(&self, a: &ComplexMatrix) -> f64 {
        self.residual(a) / self.membership_scale(operator_norm(a)).max(1.0)
    }

    /// Stable identifier used in reports, e.g. `0;1;2` or `0;1+2i`.
    pub fn id(&self) -> String {
        self.roots.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(";")
    }

    /// Same roots mapped through `z ↦ scale·z + shift`.
    pub fn affine_image(&self, scale: Complex64, shift: Complex64) -> Result<Self, SpectralError> {
        let roots: Vec<Complex64> = self.roots.iter().map(|&z| scale * z + shift).collect();
        let real_only = self.real_only && roots.iter().all(|z| z.im == 0.0);
        Self::new(roots, real_only)
    }
}

impl fmt::Display for SpectrumSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.roots.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(", "))
    }
}

impl FromStr for SpectrumSpec {
    type Err = SpectralError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s, false)
    }
}

fn product_of_shifts(a: &ComplexMatrix, shifts: impl Iterator<Item = Complex64>) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(a.dim());
    for l in shifts {
        acc = &acc * &a.shift(-l);
    }
    acc
}

/// Ascending coefficients of `Π_{j≠i} (λ − λ_j) / (λ_i − λ_j)`.
fn lagrange_coefficients(roots: &[Complex64], i: usize) -> Vec<Complex64> {
    let mut coeffs = vec![ONE];
    let mut denom = ONE;
    for (j, &lj) in roots.iter().enumerate() {
        if j == i {
            continue;
        }
        let mut next = vec![ZERO; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * lj;
        }
        coeffs = next;
        denom *= roots[i] - lj;
    }
    coeffs.iter().map(|&c| c / denom).collect()
}

/// Horner evaluation of ascending coefficients.
pub fn eval_scalar_poly(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
}

pub(crate) fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Parses `3`, `-1.5`, `2i`, `-i`, `1+2i`, `1e-3-4.5e-1i`.
pub fn parse_complex(tok: &str) -> Result<Complex64, SpectralError> {
    let bad = || SpectralError::BadRoot(tok.to_string());
    let tok = tok.trim();
    if tok.is_empty() {
        return Err(bad());
    }
    let Some(body) = tok.strip_suffix('i').or_else(|| tok.strip_suffix('j')) else {
        return tok.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re_part.is_empty() { 0.0 } else { re_part.parse::<f64>().map_err(|_| bad())? };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    roots: Vec<[f64; 2]>,
    real_only: bool,
}

impl TryFrom<SpecJson> for SpectrumSpec {
    type Error = SpectralError;

    fn try_from(raw: SpecJson) -> Result<Self, Self::Error> {
        Self::new(raw.roots.iter().map(|&[re, im]| Complex64::new(re, im)).collect(), raw.real_only)
    }
}

impl From<SpectrumSpec> for SpecJson {
    fn from(spec: SpectrumSpec) -> Self {
        SpecJson {
            roots: spec.roots.iter().map(|z| [z.re, z.im]).collect(),
            real_only: spec.real_only,
        }
    }
}
