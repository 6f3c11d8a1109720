use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{all_signatures, common_basis_distance, component_distance_oracle, random_realized_distance, separation_lower_bound, ComponentError};
use crate::sampling::Sampler;
use crate::spectral::SpectrumSpec;

pub const MAX_EXPERIMENT_DIM: usize = 12;
pub const MAX_EXPERIMENT_TRIALS: usize = 100_000;

/// Slack allowed between a randomly realized distance and the oracle.
const SEARCH_SLACK: f64 = 1e-9;

/// One CSV row per unordered pair of distinct signatures.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub spec_id: String,
    pub dim: usize,
    pub sig0: String,
    pub sig1: String,
    pub oracle: f64,
    #[serde(rename = "bound18")]
    pub bound: f64,
    pub min_gap: f64,
    pub bound_le_oracle: bool,
    pub oracle_ge_gap: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub rows: Vec<ExperimentRow>,
    pub trials: usize,
    /// Trials whose random pair came closer than the oracle allows.
    pub search_violations: usize,
    /// Common-basis pairs whose distance differed from the oracle.
    pub attainment_failures: usize,
    /// Smallest distance any random trial realized, per row order.
    pub min_realized: Vec<f64>,
}

impl ExperimentReport {
    pub fn bound_violations(&self) -> usize {
        self.rows.iter().filter(|r| !r.bound_le_oracle).count()
    }

    /// Rows where the oracle distance is below the minimal root gap.
    pub fn gap_flags(&self) -> usize {
        self.rows.iter().filter(|r| !r.oracle_ge_gap).count()
    }

    pub fn min_oracle(&self) -> f64 {
        self.rows.iter().map(|r| r.oracle).fold(f64::INFINITY, f64::min)
    }

    pub fn passed(&self) -> bool {
        self.bound_violations() == 0 && self.search_violations == 0 && self.attainment_failures == 0
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Tabulates oracle distance against the lower bound and the minimal gap
/// for every pair of distinct signatures, and runs `trials` random unitary
/// placements (trial `k` uses stream `k` under `seed`, cycling through the
/// pairs) to confirm no realized distance undercuts the oracle.
pub fn conjecture_experiment(spec: &SpectrumSpec, dim: usize, trials: usize, seed: u64) -> Result<ExperimentReport, ComponentError> {
    if !spec.real_only() {
        return Err(ComponentError::NotRealSpec);
    }
    if dim == 0 || dim > MAX_EXPERIMENT_DIM {
        return Err(ComponentError::ExperimentTooLarge(format!("dim {dim} outside 1..={MAX_EXPERIMENT_DIM}")));
    }
    if trials > MAX_EXPERIMENT_TRIALS {
        return Err(ComponentError::ExperimentTooLarge(format!("{trials} trials exceed {MAX_EXPERIMENT_TRIALS}")));
    }
    let sigs = all_signatures(spec.n(), dim);
    let bound = separation_lower_bound(spec);
    let gap = spec.min_gap();
    let mut pairs = Vec::new();
    let mut rows = Vec::new();
    for (i, s0) in sigs.iter().enumerate() {
        for s1 in &sigs[i + 1..] {
            let oracle = component_distance_oracle(s0, s1, spec)?;
            rows.push(ExperimentRow {
                spec_id: spec.id(),
                dim,
                sig0: s0.to_string(),
                sig1: s1.to_string(),
                oracle,
                bound,
                min_gap: gap,
                bound_le_oracle: bound <= oracle + 1e-12 * oracle.max(1.0),
                oracle_ge_gap: oracle >= gap - 1e-12 * gap.max(1.0),
                seed,
            });
            pairs.push((s0.clone(), s1.clone()));
        }
    }
    let mut min_realized = vec![f64::INFINITY; pairs.len()];
    let mut search_violations = 0;
    let mut attainment_failures = 0;
    if !pairs.is_empty() {
        for k in 0..trials {
            let p = k % pairs.len();
            let (s0, s1) = &pairs[p];
            let mut sampler = Sampler::with_stream(seed, k as u64);
            let realized = random_realized_distance(s0, s1, spec, &mut sampler);
            min_realized[p] = min_realized[p].min(realized);
            if realized < rows[p].oracle - SEARCH_SLACK {
                search_violations += 1;
            }
            if k < pairs.len() {
                let attained = common_basis_distance(s0, s1, spec, &mut sampler);
                if (attained - rows[p].oracle).abs() > 1e-9 * rows[p].oracle.max(1.0) {
                    attainment_failures += 1;
                }
            }
        }
    }
    Ok(ExperimentReport {
        rows,
        trials,
        search_violations,
        attainment_failures,
        min_realized,
    })
}
