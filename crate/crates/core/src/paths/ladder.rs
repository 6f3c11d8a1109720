use serde::{Deserialize, Serialize};

use super::{check_compatible, exchange_idempotent, PathError, PiecewisePath, Segment};
use crate::linalg::{operator_norm, ComplexMatrix};
use crate::spectral::{AlgebraicElement, PartitionDefects, PartitionOfUnity, SpectrumSpec};
use crate::tolerances::Tolerances;

/// Rows `f_0..f_n` of partitions of unity: row 0 is the start partition and
/// step `i` exchanges coordinate `i` for the target idempotent `e_{1i}`:
///
/// `g_i = g(f_{i−1,i}, e_{1i})`, `f_{ii} = g_i`, `f_{ij} = f_{i−1,j}(1 − g_i)` for `j ≠ i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonalLadder {
    spec: SpectrumSpec,
    rows: Vec<Vec<ComplexMatrix>>,
    exchanges: Vec<ComplexMatrix>,
    final_defect: f64,
}

impl PolygonalLadder {
    pub fn spec(&self) -> &SpectrumSpec {
        &self.spec
    }

    pub fn rows(&self) -> &[Vec<ComplexMatrix>] {
        &self.rows
    }

    pub fn row(&self, k: usize) -> &[ComplexMatrix] {
        &self.rows[k]
    }

    /// `g_i` used in step `i` (0-based).
    pub fn exchange(&self, i: usize) -> &ComplexMatrix {
        &self.exchanges[i]
    }

    /// `max_j ||f_{nj} − e_{1j}||`.
    pub fn final_defect(&self) -> f64 {
        self.final_defect
    }

    /// `Σ_j λ_j f_{kj}`.
    pub fn row_element(&self, k: usize) -> ComplexMatrix {
        crate::spectral::combine(self.spec.roots(), &self.rows[k])
    }

    /// Row `(1 − t)·f_{k−1} + t·f_k` for segment `k ∈ 1..=n`.
    pub fn interpolated_row(&self, k: usize, t: f64) -> Vec<ComplexMatrix> {
        self.rows[k - 1]
            .iter()
            .zip(&self.rows[k])
            .map(|(a, b)| {
                let mut out = a.scale_real(1.0 - t);
                out.axpy(t.into(), b);
                out
            })
            .collect()
    }

    /// Worst partition defect over `grid_points` samples of every segment.
    pub fn max_interpolation_defect(&self, grid_points: usize) -> f64 {
        let g = grid_points.max(2);
        let mut worst: f64 = 0.0;
        for k in 1..self.rows.len() {
            for step in 0..g {
                let t = step as f64 / (g - 1) as f64;
                let d = PartitionDefects::measure(&self.interpolated_row(k, t));
                worst = worst.max(d.worst() / d.scale);
            }
        }
        worst
    }
}

pub fn polygonal_ladder(a0: &AlgebraicElement, a1: &AlgebraicElement, tol: &Tolerances) -> Result<PolygonalLadder, PathError> {
    check_compatible(a0, a1)?;
    let n_roots = a0.spec().n();
    let dim = a0.dim();
    let id = ComplexMatrix::identity(dim);
    let mut rows = vec![a0.partition().idempotents().to_vec()];
    let mut exchanges = Vec::with_capacity(n_roots);
    for i in 0..n_roots {
        let prev = &rows[i];
        let target = a1.idempotent(i);
        let gap = operator_norm(&(target - &prev[i]));
        if gap >= 1.0 - tol.gap_margin {
            return Err(PathError::LadderBroken { step: i + 1, index: i, gap });
        }
        let g = exchange_idempotent(&prev[i], target, tol).map_err(|_| PathError::LadderBroken { step: i + 1, index: i, gap })?;
        let complement = &id - &g;
        let next: Vec<ComplexMatrix> = prev
            .iter()
            .enumerate()
            .map(|(j, f)| if j == i { g.clone() } else { f * &complement })
            .collect();
        PartitionOfUnity::new(next.clone(), tol.base, false)?;
        rows.push(next);
        exchanges.push(g);
    }
    let final_defect = rows[n_roots]
        .iter()
        .enumerate()
        .map(|(j, f)| operator_norm(&(f - a1.idempotent(j))))
        .fold(0.0, f64::max);
    if final_defect > 100.0 * tol.base {
        return Err(PathError::VerificationFailed(format!("last ladder row misses the target by {final_defect:.3e}")));
    }
    Ok(PolygonalLadder {
        spec: a0.spec().clone(),
        rows,
        exchanges,
        final_defect,
    })
}

/// One straight segment per ladder step: segment `k` runs from
/// `Σ λ_j f_{k−1,j}` to `Σ λ_j f_{kj}`.
pub fn polygonal_path(ladder: &PolygonalLadder, tol: &Tolerances) -> Result<PiecewisePath, PathError> {
    let segments = (1..ladder.rows.len())
        .map(|k| Segment::Linear {
            start: ladder.row_element(k - 1),
            end: ladder.row_element(k),
        })
        .collect();
    let path = PiecewisePath::new(ladder.spec.clone(), false, segments, tol)?;
    path.require_membership(10.0 * tol.base)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::decompose;

    #[test]
    fn constant_ladder() {
        let spec = SpectrumSpec::real(&[0.0, 1.0, 2.0]).unwrap();
        let tol = Tolerances::default();
        let a = decompose(&ComplexMatrix::from_real_diag(&[2.0, 0.0, 1.0, 1.0]), &spec, &tol).unwrap();
        let ladder = polygonal_ladder(&a, &a, &tol).unwrap();
        assert_eq!(ladder.rows().len(), 4);
        for row in ladder.rows() {
            for (f, e) in row.iter().zip(a.partition().idempotents()) {
                assert!((f - e).max_abs() < 1e-15);
            }
        }
        let path = polygonal_path(&ladder, &tol).unwrap();
        assert_eq!(path.len(), 3);
        assert!(path.max_distance_from_start() < 1e-15);
    }

    #[test]
    fn two_root_ladder_matches_exchange() {
        let spec = SpectrumSpec::real(&[0.0, 1.0]).unwrap();
        let tol = Tolerances::default();
        let a0 = decompose(&ComplexMatrix::from_real_diag(&[0.0, 1.0]), &spec, &tol).unwrap();
        let a1 = decompose(&ComplexMatrix::from_real_rows(&[&[0.0, 0.2], &[0.0, 1.0]]), &spec, &tol).unwrap();
        let ladder = polygonal_ladder(&a0, &a1, &tol).unwrap();
        assert!(ladder.final_defect() < 1e-15);
        let g = exchange_idempotent(a0.idempotent(0), a1.idempotent(0), &tol).unwrap();
        assert!((ladder.exchange(0) - &g).max_abs() < 1e-15);
        let path = polygonal_path(&ladder, &tol).unwrap();
        assert_eq!(path.len(), 2);
        assert!((&path.start() - a0.matrix()).max_abs() < 1e-15);
        assert!((&path.end() - a1.matrix()).max_abs() < 1e-15);
        assert!(ladder.max_interpolation_defect(101) < 1e-14);
    }
}
