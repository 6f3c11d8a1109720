//! Seeded random matrices and algebraic elements.
//!
//! Every generator draws from a ChaCha8 stream, so a `(seed, stream)` pair
//! fixes the output on every platform.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{mat_exp, operator_norm, ComplexMatrix};
use crate::spectral::SpectrumSpec;

/// `Σ λ_i P_i` in a random basis, with the basis kept for reference.
#[derive(Debug, Clone)]
pub struct SampledElement {
    pub matrix: ComplexMatrix,
    pub signature: Vec<usize>,
    pub basis: ComplexMatrix,
    pub basis_inverse: ComplexMatrix,
}

impl SampledElement {
    /// `basis · P_i · basis⁻¹`, the exact spectral idempotent for root `i`.
    pub fn idempotent(&self, i: usize) -> ComplexMatrix {
        let start: usize = self.signature[..i].iter().sum();
        let n = self.matrix.dim();
        let diag: Vec<f64> = (0..n)
            .map(|k| if k >= start && k < start + self.signature[i] { 1.0 } else { 0.0 })
            .collect();
        &(&self.basis * &ComplexMatrix::from_real_diag(&diag)) * &self.basis_inverse
    }
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` under `seed`; used for per-trial draws.
    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    /// Uniform on the closed unit disk.
    pub fn disk_scalar(&mut self) -> Complex64 {
        let r = self.rng.gen::<f64>().sqrt();
        let theta = self.rng.gen_range(0.0..2.0 * PI);
        Complex64::from_polar(r, theta)
    }

    /// Standard complex normal (real and imaginary variance 1/2).
    pub fn gaussian_scalar(&mut self) -> Complex64 {
        let re: f64 = self.rng.sample(StandardNormal);
        let im: f64 = self.rng.sample(StandardNormal);
        Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn disk_matrix(&mut self, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| self.disk_scalar())
    }

    pub fn gaussian_matrix(&mut self, n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, n, |_, _| self.gaussian_scalar())
    }

    pub fn hermitian(&mut self, n: usize) -> ComplexMatrix {
        self.gaussian_matrix(n).hermitian_part()
    }

    /// Haar-like unitary: Gram–Schmidt (two passes) on a Gaussian matrix.
    pub fn unitary(&mut self, n: usize) -> ComplexMatrix {
        let g = self.gaussian_matrix(n);
        let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(n);
        for c in 0..n {
            let mut v = g.column(c);
            for _ in 0..2 {
                for u in &q {
                    let dot: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (x, y) in v.iter_mut().zip(u) {
                        *x -= dot * y;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            q.push(v.into_iter().map(|z| z / norm).collect());
        }
        ComplexMatrix::from_fn(n, n, |r, c| q[c][r])
    }

    /// Invertible `s = U·Σ·V*` with singular values spread geometrically over
    /// `[1/√cond, √cond]`; returns `(s, s⁻¹)` with the inverse formed exactly
    /// from the factors.
    pub fn conditioned(&mut self, n: usize, cond: f64) -> (ComplexMatrix, ComplexMatrix) {
        let u = self.unitary(n);
        let v = self.unitary(n);
        let half = cond.max(1.0).sqrt();
        let sigma: Vec<f64> = (0..n)
            .map(|k| {
                let frac = if n > 1 { k as f64 / (n - 1) as f64 } else { 0.5 };
                half.powf(1.0 - 2.0 * frac)
            })
            .collect();
        let inv: Vec<f64> = sigma.iter().map(|s| 1.0 / s).collect();
        let s = &(&u * &ComplexMatrix::from_real_diag(&sigma)) * &v.adjoint();
        let s_inv = &(&v * &ComplexMatrix::from_real_diag(&inv)) * &u.adjoint();
        (s, s_inv)
    }

    /// Random multiplicities `α_1..α_n` summing to `dim`.
    pub fn signature(&mut self, n_roots: usize, dim: usize) -> Vec<usize> {
        let mut sig = vec![0; n_roots];
        for _ in 0..dim {
            sig[self.index(n_roots)] += 1;
        }
        sig
    }

    /// Random element with a random signature. Self-adjoint mode uses a
    /// unitary basis and a real spec; otherwise the basis has condition
    /// number `cond`.
    pub fn algebraic(&mut self, spec: &SpectrumSpec, dim: usize, self_adjoint: bool, cond: f64) -> SampledElement {
        let sig = self.signature(spec.n(), dim);
        self.algebraic_with_signature(spec, &sig, self_adjoint, cond)
    }

    pub fn algebraic_with_signature(&mut self, spec: &SpectrumSpec, signature: &[usize], self_adjoint: bool, cond: f64) -> SampledElement {
        let dim: usize = signature.iter().sum();
        let diag: Vec<Complex64> = signature
            .iter()
            .zip(spec.roots())
            .flat_map(|(&m, &l)| std::iter::repeat_n(l, m))
            .collect();
        let (basis, basis_inverse) = if self_adjoint {
            let u = self.unitary(dim);
            let ua = u.adjoint();
            (u, ua)
        } else {
            self.conditioned(dim, cond)
        };
        let mut matrix = &(&basis * &ComplexMatrix::from_diag(&diag)) * &basis_inverse;
        if self_adjoint {
            matrix = matrix.hermitian_part();
        }
        SampledElement {
            matrix,
            signature: signature.to_vec(),
            basis,
            basis_inverse,
        }
    }

    /// `e^{−c} a e^{c}` with `c` random (skew-Hermitian when `self_adjoint`)
    /// and rescaled until `gap/2 ≤ ||result − a|| ≤ gap`, with `||c||` capped at
    /// `π` (unitary) or 4 so the exponentials stay accurate. Returns `a` itself
    /// when `a` commutes with every draw (scalar `a`), and the closest draw
    /// within `gap` if the rescaling does not settle.
    pub fn similar_nearby(&mut self, a: &ComplexMatrix, gap: f64, self_adjoint: bool) -> ComplexMatrix {
        let n = a.dim();
        let mut c = if self_adjoint {
            self.hermitian(n).scale(Complex64::i())
        } else {
            self.gaussian_matrix(n)
        };
        c = c.scale_real(gap / (2.0 * operator_norm(a).max(1.0) * operator_norm(&c).max(1e-300)));
        let mut best = a.clone();
        let floor = 1e-12 * operator_norm(a).max(1.0);
        let cap = if self_adjoint { PI } else { 4.0 };
        for _ in 0..40 {
            let Some(conj) = conjugate_by_exp(a, &c) else { break };
            let diff = operator_norm(&(&conj - a));
            if diff <= floor {
                return a.clone();
            }
            if diff <= gap {
                best = conj;
                if diff >= 0.5 * gap {
                    break;
                }
            }
            let norm_c = operator_norm(&c);
            if norm_c >= cap {
                break;
            }
            c = c.scale_real((0.8 * gap / diff).min(10.0).min(cap / norm_c));
        }
        if self_adjoint {
            best.hermitian_part()
        } else {
            best
        }
    }

    /// Pair `(a0, a1)` in the same component with `||a1 − a0|| ≤ gap`.
    pub fn close_pair(&mut self, spec: &SpectrumSpec, dim: usize, self_adjoint: bool, gap: f64, cond: f64) -> (ComplexMatrix, ComplexMatrix) {
        let a0 = self.algebraic(spec, dim, self_adjoint, cond).matrix;
        let a1 = self.similar_nearby(&a0, gap, self_adjoint);
        (a0, a1)
    }

    /// Idempotents `(e0, e1)` of rank `rank` with `||e1 − e0|| ≤ gap`;
    /// orthogonal projections when `hermitian`.
    pub fn projection_pair(&mut self, dim: usize, rank: usize, gap: f64, hermitian: bool) -> (ComplexMatrix, ComplexMatrix) {
        let spec = SpectrumSpec::real(&[0.0, 1.0]).expect("fixed roots");
        let e0 = self.algebraic_with_signature(&spec, &[dim - rank, rank], hermitian, 4.0).matrix;
        let e1 = self.similar_nearby(&e0, gap, hermitian);
        (e0, e1)
    }
}

fn conjugate_by_exp(a: &ComplexMatrix, c: &ComplexMatrix) -> Option<ComplexMatrix> {
    let ec = mat_exp(c).ok()?;
    let emc = mat_exp(&-c).ok()?;
    Some(&(&emc * a) * &ec)
}
