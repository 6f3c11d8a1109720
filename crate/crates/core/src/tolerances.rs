//! Centralized numerical thresholds.
//!
//! Every check in the crate reads its threshold from a [`Tolerances`] value.
//! The defaults are the ones the invariant suite is calibrated against; the
//! CLI can override the base tolerance with `--tol` or `ALGPATHS_TOL`.

use serde::{Deserialize, Serialize};

/// Environment variable that overrides [`Tolerances::base`].
pub const TOL_ENV_VAR: &str = "ALGPATHS_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Base tolerance: `||p(a)||` is compared against `base · Π_j(||a|| + |λ_j|)`,
    /// partition defects against `base · max(1, max_i ||e_i||)²`.
    pub base: f64,
    /// Idempotents with norm at or below this are dropped by canonicalization.
    pub zero_idempotent: f64,
    /// Roots closer than this are rejected as repeated.
    pub duplicate_root: f64,
    /// Local constructions accept a pair when every per-index idempotent gap
    /// is below this; farther pairs need chaining.
    pub local_radius: f64,
    /// Margin below 1 for `||e1 − e0||` in the exchange-idempotent construction.
    pub gap_margin: f64,
    /// Trapezoid nodes on each Riesz contour.
    pub quad_points: usize,
    /// Samples per path segment during grid validation.
    pub grid_points: usize,
    /// Allowed distance of an idempotent trace from an integer.
    pub trace_integrality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            base: 1e-9,
            zero_idempotent: 1e-8,
            duplicate_root: 1e-10,
            local_radius: 0.5,
            gap_margin: 1e-9,
            quad_points: 128,
            grid_points: 101,
            trace_integrality: 1e-6,
        }
    }
}

impl Tolerances {
    pub fn with_base(base: f64) -> Self {
        Self {
            base,
            ..Self::default()
        }
    }

    /// Defaults, with `base` taken from `ALGPATHS_TOL` when it parses as a
    /// positive finite number.
    pub fn from_env() -> Self {
        let mut tol = Self::default();
        if let Some(base) = std::env::var(TOL_ENV_VAR)
            .ok()
            .and_then(|s| s.trim().parse::<f64>().ok())
            .filter(|b| b.is_finite() && *b > 0.0)
        {
            tol.base = base;
        }
        tol
    }
}
