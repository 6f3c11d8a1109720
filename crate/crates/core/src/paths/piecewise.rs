use std::io::Write;

use serde::{Deserialize, Serialize};

use super::PathError;
use crate::linalg::{mat_exp, operator_norm, unit_floor, ComplexMatrix};
use crate::spectral::SpectrumSpec;
use crate::tolerances::Tolerances;

/// One piece of a path, parametrized by local `t ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Segment {
    /// `e^{−c_m t}…e^{−c_1 t} · a0 · e^{c_1 t}…e^{c_m t}`.
    Exp { a0: ComplexMatrix, generators: Vec<ComplexMatrix> },
    /// `(1 − t)·start + t·end`.
    Linear { start: ComplexMatrix, end: ComplexMatrix },
    /// `L(t) · middle · R(t)` for matrix polynomials `L`, `R` given by
    /// ascending coefficients.
    Sandwich {
        left: Vec<ComplexMatrix>,
        middle: ComplexMatrix,
        right: Vec<ComplexMatrix>,
    },
}

impl Segment {
    pub fn kind(&self) -> &'static str {
        match self {
            Segment::Exp { .. } => "exp",
            Segment::Linear { .. } => "linear",
            Segment::Sandwich { .. } => "sandwich",
        }
    }

    pub fn eval(&self, t: f64) -> ComplexMatrix {
        match self {
            Segment::Exp { a0, generators } => {
                let mut out = a0.clone();
                for c in generators {
                    let ct = c.scale_real(t);
                    let fwd = mat_exp(&ct).expect("validated square");
                    let back = mat_exp(&-&ct).expect("validated square");
                    out = &(&back * &out) * &fwd;
                }
                out
            }
            Segment::Linear { start, end } => {
                let mut out = start.scale_real(1.0 - t);
                out.axpy(t.into(), end);
                out
            }
            Segment::Sandwich { left, middle, right } => &(&horner(left, t) * middle) * &horner(right, t),
        }
    }

    pub fn start(&self) -> ComplexMatrix {
        match self {
            Segment::Exp { a0, .. } => a0.clone(),
            Segment::Linear { start, .. } => start.clone(),
            Segment::Sandwich { .. } => self.eval(0.0),
        }
    }

    pub fn end(&self) -> ComplexMatrix {
        match self {
            Segment::Linear { end, .. } => end.clone(),
            _ => self.eval(1.0),
        }
    }

    fn matrices(&self) -> Vec<&ComplexMatrix> {
        match self {
            Segment::Exp { a0, generators } => std::iter::once(a0).chain(generators).collect(),
            Segment::Linear { start, end } => vec![start, end],
            Segment::Sandwich { left, middle, right } => left.iter().chain(std::iter::once(middle)).chain(right).collect(),
        }
    }
}

fn horner(coeffs: &[ComplexMatrix], t: f64) -> ComplexMatrix {
    let mut iter = coeffs.iter().rev();
    let mut acc = iter.next().expect("nonempty coefficients").clone();
    for c in iter {
        acc = acc.scale_real(t);
        acc += c;
    }
    acc
}

/// Grid maxima for one segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub kind: String,
    /// `max_t ||p(a(t))||`
    pub membership: f64,
    /// `max_t ||p(a(t))|| / max(1, Π_j(||a(t)|| + |λ_j|))`
    pub relative_membership: f64,
    /// `max_t ||a(t) − a(t)*||`
    pub hermitian: f64,
    /// `max_t ||a(t) − a(0)||`, measured from the start of the whole path
    pub max_distance: f64,
}

/// One grid sample, as written to the residual CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub segment: usize,
    pub kind: String,
    pub t: f64,
    pub residual: f64,
    pub relative_residual: f64,
    pub distance: f64,
    pub hermitian: f64,
}

/// A path `[0, 1] → matrices` made of segments of equal parameter length,
/// with per-segment grid residuals computed at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewisePath {
    spec: SpectrumSpec,
    self_adjoint: bool,
    grid_points: usize,
    segments: Vec<Segment>,
    residuals: Vec<SegmentReport>,
}

impl PiecewisePath {
    /// Validates shapes and endpoint continuity, then samples every segment
    /// on `tol.grid_points` equally spaced points.
    pub fn new(spec: SpectrumSpec, self_adjoint: bool, segments: Vec<Segment>, tol: &Tolerances) -> Result<Self, PathError> {
        if segments.is_empty() {
            return Err(PathError::EmptyPath);
        }
        let n = segments[0].start().rows();
        for seg in &segments {
            if let Some(m) = seg.matrices().into_iter().find(|m| !m.is_square() || m.rows() != n) {
                return Err(PathError::DimMismatch { expected: n, found: m.rows() });
            }
        }
        for (k, pair) in segments.windows(2).enumerate() {
            let (end, start) = (pair[0].end(), pair[1].start());
            let gap = operator_norm(&(&end - &start));
            if gap > tol.base * unit_floor(operator_norm(&end)) {
                return Err(PathError::EndpointMismatch { segment: k + 1, gap });
            }
        }
        let mut path = Self {
            spec,
            self_adjoint,
            grid_points: tol.grid_points.max(2),
            segments,
            residuals: Vec::new(),
        };
        path.residuals = path.compute_reports();
        Ok(path)
    }

    fn compute_reports(&self) -> Vec<SegmentReport> {
        let mut reports: Vec<SegmentReport> = self
            .segments
            .iter()
            .map(|s| SegmentReport {
                kind: s.kind().to_string(),
                membership: 0.0,
                relative_membership: 0.0,
                hermitian: 0.0,
                max_distance: 0.0,
            })
            .collect();
        for s in self.samples() {
            let r = &mut reports[s.segment];
            r.membership = r.membership.max(s.residual);
            r.relative_membership = r.relative_membership.max(s.relative_residual);
            r.hermitian = r.hermitian.max(s.hermitian);
            r.max_distance = r.max_distance.max(s.distance);
        }
        reports
    }

    pub fn spec(&self) -> &SpectrumSpec {
        &self.spec
    }

    pub fn self_adjoint(&self) -> bool {
        self.self_adjoint
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn residuals(&self) -> &[SegmentReport] {
        &self.residuals
    }

    pub fn grid_points(&self) -> usize {
        self.grid_points
    }

    /// Evaluates at global `t ∈ [0, 1]`; segment `k` of `K` covers `[k/K, (k+1)/K]`.
    pub fn eval(&self, t: f64) -> ComplexMatrix {
        let k = self.segments.len();
        let scaled = t.clamp(0.0, 1.0) * k as f64;
        let idx = (scaled.floor() as usize).min(k - 1);
        self.segments[idx].eval(scaled - idx as f64)
    }

    pub fn start(&self) -> ComplexMatrix {
        self.segments[0].start()
    }

    pub fn end(&self) -> ComplexMatrix {
        self.segments[self.segments.len() - 1].end()
    }

    pub fn max_relative_membership(&self) -> f64 {
        self.residuals.iter().map(|r| r.relative_membership).fold(0.0, f64::max)
    }

    pub fn max_hermitian_defect(&self) -> f64 {
        self.residuals.iter().map(|r| r.hermitian).fold(0.0, f64::max)
    }

    pub fn max_distance_from_start(&self) -> f64 {
        self.residuals.iter().map(|r| r.max_distance).fold(0.0, f64::max)
    }

    /// Fails on the first segment whose relative membership residual
    /// exceeds `threshold`.
    pub fn require_membership(&self, threshold: f64) -> Result<(), PathError> {
        match self.residuals.iter().position(|r| r.relative_membership > threshold) {
            Some(segment) => Err(PathError::ContainmentLost {
                segment,
                residual: self.residuals[segment].relative_membership,
                threshold,
            }),
            None => Ok(()),
        }
    }

    pub fn require_hermitian(&self, threshold: f64) -> Result<(), PathError> {
        match self.residuals.iter().position(|r| r.hermitian > threshold) {
            Some(segment) => Err(PathError::NotHermitian {
                defect: self.residuals[segment].hermitian,
            }),
            None => Ok(()),
        }
    }

    /// Every grid point of every segment, in order.
    pub fn samples(&self) -> Vec<PathSample> {
        let a0 = self.start();
        let k = self.segments.len() as f64;
        let g = self.grid_points;
        let mut out = Vec::with_capacity(self.segments.len() * g);
        for (idx, seg) in self.segments.iter().enumerate() {
            for step in 0..g {
                let local = step as f64 / (g - 1) as f64;
                let a = seg.eval(local);
                let residual = self.spec.residual(&a);
                let scale = unit_floor(self.spec.membership_scale(operator_norm(&a)));
                out.push(PathSample {
                    segment: idx,
                    kind: seg.kind().to_string(),
                    t: (idx as f64 + local) / k,
                    residual,
                    relative_residual: residual / scale,
                    distance: operator_norm(&(&a - &a0)),
                    hermitian: operator_norm(&(&a - &a.adjoint())),
                });
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("path serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Header `segment,kind,t,residual,relative_residual,distance,hermitian`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        for s in self.samples() {
            w.serialize(s)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Joins paths end to start; all must share the spec.
    pub fn concat(paths: Vec<PiecewisePath>, tol: &Tolerances) -> Result<Self, PathError> {
        let first = paths.first().ok_or(PathError::EmptyPath)?;
        let spec = first.spec.clone();
        let self_adjoint = paths.iter().all(|p| p.self_adjoint);
        if paths.iter().any(|p| p.spec != spec) {
            return Err(PathError::SpecMismatch);
        }
        let segments = paths.into_iter().flat_map(|p| p.segments).collect();
        Self::new(spec, self_adjoint, segments, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn spec01() -> SpectrumSpec {
        SpectrumSpec::real(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn linear_segment_eval() {
        let e0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let e1 = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 0.0]]);
        let path = PiecewisePath::new(spec01(), false, vec![Segment::Linear { start: e0.clone(), end: e1.clone() }], &Tolerances::default()).unwrap();
        let mid = path.eval(0.5);
        assert_eq!(mid, ComplexMatrix::from_real_rows(&[&[1.0, 0.5], &[0.0, 0.0]]));
        assert!(path.max_relative_membership() < 1e-15);
        assert_eq!(path.start(), e0);
        assert_eq!(path.end(), e1);
    }

    #[test]
    fn discontinuous_segments_rejected() {
        let a = ComplexMatrix::identity(2);
        let b = ComplexMatrix::zeros(2, 2);
        let segs = vec![
            Segment::Linear { start: a.clone(), end: a.clone() },
            Segment::Linear { start: b.clone(), end: b },
        ];
        assert!(matches!(
            PiecewisePath::new(spec01(), false, segs, &Tolerances::default()),
            Err(PathError::EndpointMismatch { segment: 1, .. })
        ));
    }

    #[test]
    fn exp_segment_with_zero_generator_is_constant() {
        let a0 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let seg = Segment::Exp {
            a0: a0.clone(),
            generators: vec![ComplexMatrix::zeros(2, 2)],
        };
        let path = PiecewisePath::new(spec01(), true, vec![seg], &Tolerances::default()).unwrap();
        assert_eq!(path.max_distance_from_start(), 0.0);
        assert_eq!(path.end(), a0);
    }

    #[test]
    fn sandwich_segment_matches_product() {
        let left = vec![ComplexMatrix::identity(2), ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])];
        let right = vec![ComplexMatrix::identity(2), ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[0.0, 0.0]])];
        let middle = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let seg = Segment::Sandwich { left, middle, right };
        let path = PiecewisePath::new(spec01(), false, vec![seg], &Tolerances::default()).unwrap();
        // (I + tN) diag(1,0) (I − tN) with N the shift is idempotent for all t
        assert!(path.max_relative_membership() < 1e-15);
        assert_eq!(path.eval(1.0), ComplexMatrix::from_real_rows(&[&[1.0, -1.0], &[0.0, 0.0]]));
    }

    #[test]
    fn json_and_csv_round_trip() {
        let a = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let seg = Segment::Exp {
            a0: a.clone(),
            generators: vec![ComplexMatrix::from_fn(2, 2, |r, c| if r != c { Complex64::new(0.0, 0.1) } else { Complex64::new(0.0, 0.0) })],
        };
        let path = PiecewisePath::new(spec01(), true, vec![seg], &Tolerances::default()).unwrap();
        let back = PiecewisePath::from_json(&path.to_json()).unwrap();
        assert_eq!(back, path);
        let mut buf = Vec::new();
        path.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("segment,kind,t,residual,relative_residual,distance,hermitian\n"));
        assert_eq!(text.lines().count(), 1 + 101);
    }
}
