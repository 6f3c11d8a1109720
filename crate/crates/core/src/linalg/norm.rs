use num_complex::Complex64;

use super::{hermitian_eigen, ComplexMatrix};

/// Squarings of the Gram matrix before the fallback power sweep.
const GRAM_SQUARINGS: usize = 6;
const POWER_STEPS: usize = 8;

/// Spectral norm (largest singular value): square root of the largest
/// eigenvalue of `m*·m`, computed by Jacobi on the rescaled Gram matrix.
/// Accurate to rounding even when the top singular values cluster.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let scale = m.max_abs();
    if scale == 0.0 {
        return 0.0;
    }
    let unit = m.scale_real(1.0 / scale);
    let gram = &unit.adjoint() * &unit;
    let top = match hermitian_eigen(&gram) {
        Ok(eig) => eig.values.last().copied().unwrap_or(0.0),
        Err(_) => power_sweep(&gram),
    };
    scale * top.max(0.0).sqrt()
}

/// Rayleigh quotient after power iteration started from the largest column
/// of `gram^64`. A lower bound for the top eigenvalue.
fn power_sweep(gram: &ComplexMatrix) -> f64 {
    let mut power = gram.clone();
    for _ in 0..GRAM_SQUARINGS {
        power = &power * &power;
        let f = power.frobenius_norm();
        if f == 0.0 {
            break;
        }
        power = power.scale_real(1.0 / f);
    }
    let n = gram.cols();
    let best_col = (0..n)
        .map(|c| (c, (0..n).map(|r| power[(r, c)].norm_sqr()).sum::<f64>()))
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .map_or(0, |(c, _)| c);
    let mut v = power.column(best_col);
    let mut rayleigh = 0.0;
    for _ in 0..POWER_STEPS {
        let len = vec_norm(&v);
        if len == 0.0 {
            break;
        }
        v.iter_mut().for_each(|x| *x /= len);
        let w = gram.mul_vec(&v);
        rayleigh = v.iter().zip(&w).map(|(a, b)| a.conj() * b).sum::<Complex64>().re;
        v = w;
    }
    rayleigh
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
