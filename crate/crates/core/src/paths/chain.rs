use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ep_similarity, exp_path, index_gaps, polygonal_ladder, polygonal_path, unitary_similarity, PathError, PiecewisePath, SimilarityCertificate};
use crate::spectral::AlgebraicElement;
use crate::tolerances::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainMode {
    Exp,
    Unitary,
    Polygonal,
}

impl FromStr for ChainMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exp" => Ok(Self::Exp),
            "unitary" => Ok(Self::Unitary),
            "polygonal" => Ok(Self::Polygonal),
            other => Err(format!("unknown chain mode `{other}`")),
        }
    }
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exp => "exp",
            Self::Unitary => "unitary",
            Self::Polygonal => "polygonal",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainedPath {
    pub path: PiecewisePath,
    /// Accumulated similarity with generators `c_1..c_m` in link order
    /// (exp and unitary modes).
    pub certificate: Option<SimilarityCertificate>,
}

/// Joins consecutive waypoints by the local construction of `mode`. Each
/// link must have every per-index idempotent gap below `tol.local_radius`.
/// Polygonal mode yields `n` segments per link.
pub fn chain_path(waypoints: &[AlgebraicElement], mode: ChainMode, tol: &Tolerances) -> Result<ChainedPath, PathError> {
    if waypoints.len() < 2 {
        return Err(PathError::TooFewWaypoints(waypoints.len()));
    }
    let mut pieces = Vec::with_capacity(waypoints.len() - 1);
    let mut certificate: Option<SimilarityCertificate> = None;
    for (index, pair) in waypoints.windows(2).enumerate() {
        let (a0, a1) = (&pair[0], &pair[1]);
        super::check_compatible(a0, a1)?;
        let gap = index_gaps(a0, a1).into_iter().fold(0.0, f64::max);
        if gap >= tol.local_radius {
            return Err(PathError::LinkTooFar { index, gap });
        }
        match mode {
            ChainMode::Exp | ChainMode::Unitary => {
                let cert = if mode == ChainMode::Exp {
                    ep_similarity(a0, a1, tol)?
                } else {
                    unitary_similarity(a0, a1, tol)?
                };
                pieces.push(exp_path(a0, &cert, tol)?);
                certificate = Some(match certificate {
                    Some(prev) => prev.then(&cert),
                    None => cert,
                });
            }
            ChainMode::Polygonal => {
                let ladder = polygonal_ladder(a0, a1, tol)?;
                pieces.push(polygonal_path(&ladder, tol)?);
            }
        }
    }
    let path = PiecewisePath::concat(pieces, tol)?;
    Ok(ChainedPath { path, certificate })
}
