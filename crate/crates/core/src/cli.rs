//! Command-line front end. Exit codes: 0 success, 2 validation failure,
//! 3 parse or input error.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::components::{conjecture_experiment, signature, ComponentError, MAX_EXPERIMENT_DIM};
use crate::lifting::{degenerating_twist, flip_example, lift_family, lift_family_selfadjoint, local_lift, AnalyticFamily, LiftError, QuotientModel};
use crate::linalg::{operator_norm, unit_floor, ComplexMatrix};
use crate::paths::{
    cubic_candidate_path, ep_similarity, exp_path, nilpotent_generators, polygonal_ladder, polygonal_path, two_segment_path, unitary_similarity,
    ExchangeDefects, PathError, PiecewisePath, Segment,
};
use crate::sampling::Sampler;
use crate::spectral::{decompose, riesz_partition, AlgebraicElement, PartitionDefects, SpectralError, SpectrumSpec};
use crate::tolerances::Tolerances;

#[derive(Debug, Parser)]
#[command(name = "algpaths", version, about = "Spectral partitions, connecting paths, component distances and lifts for algebraic matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectral partition of a matrix (read with --in, or sampled).
    Decompose(Common),
    /// Path between two elements of one component.
    Path(Common),
    /// Component distances against the separation bound, as CSV.
    Distance(Common),
    /// Lift an analytic family along a block-triangular quotient.
    Lift(Common),
    /// Run the invariant suite and print a pass/fail summary.
    Check(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// Distinct roots, e.g. `0,1,2` or `1,-1,i`.
    #[arg(long, allow_hyphen_values = true)]
    roots: Option<String>,
    /// Restrict to real roots and Hermitian elements.
    #[arg(long)]
    selfadjoint: bool,
    /// Base tolerance; overrides ALGPATHS_TOL.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 1000)]
    trials: usize,
    /// Grid points per path segment, or lift grid size.
    #[arg(long)]
    grid: Option<usize>,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Path: exp, unitary, two-segment, polygonal, cubic (alias esterle).
    /// Lift: global or local.
    #[arg(long)]
    kind: Option<String>,
}

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Validation(_) => 2,
            Self::Parse(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Parse(m) | Self::Validation(m) => m,
        }
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::BadRoot(_) => Self::Parse(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

impl From<PathError> for CliError {
    fn from(e: PathError) -> Self {
        Self::Validation(e.to_string())
    }
}

impl From<ComponentError> for CliError {
    fn from(e: ComponentError) -> Self {
        Self::Validation(e.to_string())
    }
}

impl From<LiftError> for CliError {
    fn from(e: LiftError) -> Self {
        match e {
            LiftError::Parse(_) => Self::Parse(e.to_string()),
            _ => Self::Validation(e.to_string()),
        }
    }
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Parse(format!("{}: {e}", path.display()))
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code. Reports go to `--out` or `stdout`; diagnostics to `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 3 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { stdout.write_all(text.as_bytes()) } else { stderr.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Decompose(c) => Context::new(c, "decompose").and_then(|ctx| ctx.decompose(stdout)),
        Command::Path(c) => Context::new(c, "path").and_then(|ctx| ctx.path(stdout)),
        Command::Distance(c) => Context::new(c, "distance").and_then(|ctx| ctx.distance(stdout, stderr)),
        Command::Lift(c) => Context::new(c, "lift").and_then(|ctx| ctx.lift(stdout)),
        Command::Check(c) => Context::new(c, "check").and_then(|ctx| ctx.check(stdout)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

#[derive(Debug, Serialize)]
struct Header {
    command: &'static str,
    roots: Option<String>,
    self_adjoint: bool,
    tol: f64,
    seed: u64,
    dim: usize,
}

struct Context<'a> {
    args: &'a Common,
    command: &'static str,
    tol: Tolerances,
}

impl<'a> Context<'a> {
    fn new(args: &'a Common, command: &'static str) -> Result<Self, CliError> {
        let mut tol = Tolerances::from_env();
        if let Some(t) = args.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Parse(format!("--tol must be a positive number, got {t}")));
            }
            tol.base = t;
        }
        if let Some(g) = args.grid {
            if g < 2 {
                return Err(CliError::Parse(format!("--grid must be at least 2, got {g}")));
            }
            if command == "path" {
                tol.grid_points = g;
            }
        }
        if args.dim == 0 {
            return Err(CliError::Parse("--dim must be positive".into()));
        }
        Ok(Self { args, command, tol })
    }

    fn spec(&self) -> Result<SpectrumSpec, CliError> {
        let text = self.args.roots.as_deref().ok_or_else(|| CliError::Parse("--roots is required".into()))?;
        Ok(SpectrumSpec::parse(text, self.args.selfadjoint)?)
    }

    fn header(&self, spec: Option<&SpectrumSpec>) -> Header {
        Header {
            command: self.command,
            roots: spec.map(|s| s.to_string()),
            self_adjoint: self.args.selfadjoint,
            tol: self.tol.base,
            seed: self.args.seed,
            dim: self.args.dim,
        }
    }

    fn read_json<T: for<'de> Deserialize<'de>>(&self, path: &Path) -> Result<T, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        serde_json::from_str(&text).map_err(|e| io_error(path, e))
    }

    fn emit(&self, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
        match &self.args.out {
            Some(path) => std::fs::write(path, text).map_err(|e| io_error(path, e)),
            None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Parse(e.to_string())),
        }
    }

    fn sampler(&self) -> Sampler {
        Sampler::new(self.args.seed)
    }

    fn decompose(&self, stdout: &mut dyn Write) -> Result<(), CliError> {
        let spec = self.spec()?;
        let matrix = match &self.args.input {
            Some(path) => self.read_json::<ComplexMatrix>(path)?,
            None => self.sampler().algebraic(&spec, self.args.dim, self.args.selfadjoint, 4.0).matrix,
        };
        let a = decompose(&matrix, &spec, &self.tol)?;
        let sig = if spec.real_only() || spec.roots().iter().all(|z| z.im == 0.0) {
            signature(&a, &self.tol).ok().map(|s| s.to_string())
        } else {
            None
        };
        let report = json!({
            "header": self.header(Some(&spec)),
            "matrix": a.matrix(),
            "residual": a.residual(),
            "self_adjoint": a.self_adjoint(),
            "signature": sig,
            "defects": a.partition().defects(),
            "idempotents": a.partition().idempotents(),
        });
        self.emit(&pretty(&report), stdout)
    }

    fn pair(&self, spec: &SpectrumSpec, self_adjoint: bool) -> Result<(AlgebraicElement, AlgebraicElement), CliError> {
        #[derive(Deserialize)]
        struct Pair {
            a0: ComplexMatrix,
            a1: ComplexMatrix,
        }
        let (m0, m1) = match &self.args.input {
            Some(path) => {
                let p: Pair = self.read_json(path)?;
                (p.a0, p.a1)
            }
            None => self
                .sampler()
                .close_pair(spec, self.args.dim, self_adjoint, 0.02 * spec.min_gap(), 4.0),
        };
        Ok((decompose(&m0, spec, &self.tol)?, decompose(&m1, spec, &self.tol)?))
    }

    fn path(&self, stdout: &mut dyn Write) -> Result<(), CliError> {
        let kind = self.args.kind.as_deref().unwrap_or("exp");
        let spec = self.spec()?;
        let tol = &self.tol;
        let (path, extra) = match kind {
            "exp" => {
                let (a0, a1) = self.pair(&spec, self.args.selfadjoint)?;
                let cert = ep_similarity(&a0, &a1, tol)?;
                (exp_path(&a0, &cert, tol)?, json!({}))
            }
            "unitary" => {
                let real_spec = real_spec(&spec, "unitary paths")?;
                let (a0, a1) = self.pair(&real_spec, true)?;
                let cert = unitary_similarity(&a0, &a1, tol)?;
                let path = exp_path(&a0, &cert, tol)?;
                let h = cert.generator_hermitian_defect();
                (path, json!({ "generator_hermitian_defect": h, "unitary_defect": cert.unitary_defect() }))
            }
            "two-segment" => {
                if spec.n() != 2 {
                    return Err(CliError::Validation(format!("two-segment paths need exactly two roots, got {}", spec.n())));
                }
                let (a0, a1) = self.pair(&spec, self.args.selfadjoint)?;
                (two_segment_elements(&spec, &a0, &a1, tol)?, json!({}))
            }
            "polygonal" => {
                let (a0, a1) = self.pair(&spec, self.args.selfadjoint)?;
                let ladder = polygonal_ladder(&a0, &a1, tol)?;
                let path = polygonal_path(&ladder, tol)?;
                (path, json!({ "final_row_defect": ladder.final_defect() }))
            }
            "cubic" | "esterle" => {
                let (a0, a1) = self.pair(&spec, self.args.selfadjoint)?;
                let report = cubic_candidate_path(&a0, &a1, tol)?;
                let extra = json!({
                    "start_error": report.start_error,
                    "end_error": report.end_error,
                    "max_residual": report.max_residual,
                    "shared_generators": report.shared_generators,
                    "asserted": report.asserted,
                });
                (report.path, extra)
            }
            other => return Err(CliError::Parse(format!("unknown path kind `{other}`"))),
        };
        let report = json!({
            "header": self.header(Some(&spec)),
            "kind": kind,
            "segments": path.len(),
            "max_relative_membership": path.max_relative_membership(),
            "endpoint_distance": operator_norm(&(&path.end() - &path.start())),
            "details": extra,
            "path": path,
        });
        self.emit(&pretty(&report), stdout)?;
        if let Some(out) = &self.args.out {
            let csv_path = residual_csv_path(out);
            let file = std::fs::File::create(&csv_path).map_err(|e| io_error(&csv_path, e))?;
            path.write_csv(file).map_err(|e| io_error(&csv_path, e))?;
        }
        Ok(())
    }

    fn distance(&self, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
        let spec = self.spec()?;
        if self.args.dim > MAX_EXPERIMENT_DIM {
            return Err(CliError::Validation(format!("--dim {} exceeds {MAX_EXPERIMENT_DIM}", self.args.dim)));
        }
        let spec = real_spec(&spec, "component distances")?;
        let report = conjecture_experiment(&spec, self.args.dim, self.args.trials, self.args.seed)?;
        let mut buf = Vec::new();
        report.write_csv(&mut buf).map_err(|e| CliError::Parse(e.to_string()))?;
        self.emit(&String::from_utf8(buf).expect("csv is utf-8"), stdout)?;
        let _ = writeln!(
            stderr,
            "tol={} rows={} bound_violations={} gap_flags={} search_violations={} attainment_failures={}",
            self.tol.base,
            report.rows.len(),
            report.bound_violations(),
            report.gap_flags(),
            report.search_violations,
            report.attainment_failures
        );
        if report.passed() {
            Ok(())
        } else {
            Err(CliError::Validation("separation bound or oracle distance violated".into()))
        }
    }

    fn lift(&self, stdout: &mut dyn Write) -> Result<(), CliError> {
        #[derive(Deserialize)]
        struct LiftConfig {
            model: QuotientModel,
            family: AnalyticFamily,
        }
        let kind = self.args.kind.as_deref().unwrap_or("global");
        if kind != "global" && kind != "local" {
            return Err(CliError::Parse(format!("unknown lift kind `{kind}`")));
        }
        let (model, family, spec) = match &self.args.input {
            Some(path) => {
                let cfg: LiftConfig = self.read_json(path)?;
                let model = QuotientModel::new(cfg.model.block_sizes().to_vec(), cfg.model.involutive(), cfg.model.twist_coefficients().to_vec())?;
                let family = AnalyticFamily::new(cfg.family.coefficients().to_vec(), cfg.family.radius(), cfg.family.real())?;
                (model, family, self.spec()?)
            }
            None => {
                let (model, family, spec) = flip_example(1.0);
                if self.args.roots.is_some() && self.spec()?.roots() != spec.roots() {
                    return Err(CliError::Validation(format!("the built-in lifting example uses roots {spec}")));
                }
                let model = if kind == "local" {
                    QuotientModel::new(vec![1, 2, 1], false, degenerating_twist(0.7))?
                } else {
                    model
                };
                (model, family, spec)
            }
        };
        let points = self.args.grid.unwrap_or(50);
        let r = family.radius();
        let (report, radius, stopped_at) = if kind == "local" {
            let grid: Vec<Complex64> = (0..points).map(|k| Complex64::new(r * k as f64 / points as f64, 0.0)).collect();
            let local = local_lift(&model, &family, &spec, &grid, &self.tol)?;
            (local.family.report, Some(local.radius), local.stopped_at)
        } else if self.args.selfadjoint {
            let grid: Vec<f64> = (0..points).map(|k| 0.95 * r * (2.0 * k as f64 / (points - 1) as f64 - 1.0)).collect();
            (lift_family_selfadjoint(&model, &family, &spec, &grid, &self.tol)?.report, None, None)
        } else {
            let grid: Vec<Complex64> = if family.real() {
                (0..points).map(|k| Complex64::new(0.95 * r * (2.0 * k as f64 / (points - 1) as f64 - 1.0), 0.0)).collect()
            } else {
                (0..points)
                    .map(|k| Complex64::from_polar(0.95 * r * k as f64 / (points - 1) as f64, 2.399963229728653 * k as f64))
                    .collect()
            };
            (lift_family(&model, &family, &spec, &grid, &self.tol)?.report, None, None)
        };
        let certified = report.certified;
        let out = json!({
            "header": self.header(Some(&spec)),
            "kind": kind,
            "block_sizes": model.block_sizes(),
            "radius": radius,
            "stopped_at": stopped_at,
            "report": report,
        });
        self.emit(&pretty(&out), stdout)?;
        if certified {
            Ok(())
        } else {
            Err(CliError::Validation("lift certificates failed on the grid".into()))
        }
    }

    fn check(&self, stdout: &mut dyn Write) -> Result<(), CliError> {
        let spec = self.spec()?;
        let suites = run_suites(&spec, self.args.dim, self.args.seed, self.args.selfadjoint, &self.tol);
        let mut text = String::new();
        let _ = writeln!(text, "algpaths check");
        let _ = writeln!(text, "roots: {spec}");
        let _ = writeln!(text, "dim: {}", self.args.dim);
        let _ = writeln!(text, "seed: {}", self.args.seed);
        let _ = writeln!(text, "self_adjoint: {}", self.args.selfadjoint);
        let _ = writeln!(text, "tol: {:e}", self.tol.base);
        let (mut passed, mut failed, mut skipped) = (0, 0, 0);
        for s in &suites {
            let _ = writeln!(text, "{:<14} {:<4} {}", s.name, s.status.label(), s.detail);
            match s.status {
                Status::Pass => passed += 1,
                Status::Fail => failed += 1,
                Status::Skip => skipped += 1,
            }
        }
        let _ = writeln!(text, "summary: {passed} passed, {failed} failed, {skipped} skipped");
        self.emit(&text, stdout)?;
        if failed == 0 {
            Ok(())
        } else {
            let names: Vec<&str> = suites.iter().filter(|s| s.status == Status::Fail).map(|s| s.name).collect();
            Err(CliError::Validation(format!("invariant suites failed: {}", names.join(", "))))
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json value serializes");
    s.push('\n');
    s
}

/// `spec` with `real_only` set, or a validation error naming `what`.
fn real_spec(spec: &SpectrumSpec, what: &str) -> Result<SpectrumSpec, CliError> {
    if spec.roots().iter().any(|z| z.im != 0.0) {
        return Err(CliError::Validation(format!("{what} need real roots")));
    }
    Ok(SpectrumSpec::new(spec.roots().to_vec(), true)?)
}

/// `out.csv`, or `out.residuals.csv` when `out` already ends in `.csv`.
pub fn residual_csv_path(out: &Path) -> PathBuf {
    let candidate = out.with_extension("csv");
    if candidate == out {
        PathBuf::from(format!("{}.residuals.csv", out.display()))
    } else {
        candidate
    }
}

/// Two straight segments through the exchange idempotent of the `λ_1`
/// idempotents, mapped to elements by `e ↦ λ_0 + (λ_1 − λ_0)·e`.
fn two_segment_elements(spec: &SpectrumSpec, a0: &AlgebraicElement, a1: &AlgebraicElement, tol: &Tolerances) -> Result<PiecewisePath, PathError> {
    let e_path = two_segment_path(a0.idempotent(1), a1.idempotent(1), tol)?;
    let (l0, l1) = (spec.root(0), spec.root(1));
    let map = |e: &ComplexMatrix| -> ComplexMatrix { e.scale(l1 - l0).shift(l0) };
    let segments = e_path
        .segments()
        .iter()
        .map(|s| match s {
            Segment::Linear { start, end } => Segment::Linear {
                start: map(start),
                end: map(end),
            },
            other => other.clone(),
        })
        .collect();
    let self_adjoint = a0.self_adjoint() && a1.self_adjoint();
    let path = PiecewisePath::new(spec.clone(), self_adjoint, segments, tol)?;
    path.require_membership(tol.base)?;
    Ok(path)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Self::Pass => "PASS",
            Self::Fail => "FAIL",
            Self::Skip => "SKIP",
        }
    }
}

struct Suite {
    name: &'static str,
    status: Status,
    detail: String,
}

impl Suite {
    /// `ratio` is the worst defect divided by its allowed threshold.
    fn measured(name: &'static str, ratio: Result<f64, String>) -> Self {
        match ratio {
            Ok(r) => Self {
                name,
                status: if r <= 1.0 { Status::Pass } else { Status::Fail },
                detail: format!("worst_ratio={r:.3e}"),
            },
            Err(e) => Self {
                name,
                status: Status::Fail,
                detail: e,
            },
        }
    }

    fn skipped(name: &'static str, why: &str) -> Self {
        Self {
            name,
            status: Status::Skip,
            detail: why.to_string(),
        }
    }
}

fn worst_of(values: impl IntoIterator<Item = Result<f64, String>>) -> Result<f64, String> {
    values.into_iter().try_fold(0.0, |m: f64, v| v.map(|x| m.max(x)))
}

const CHECK_SAMPLES: usize = 20;
const CHECK_PAIRS: usize = 5;

/// The invariant suite behind `check`; suite `k` draws from stream `k`.
fn run_suites(spec: &SpectrumSpec, dim: usize, seed: u64, self_adjoint: bool, tol: &Tolerances) -> Vec<Suite> {
    let real = spec.roots().iter().all(|z| z.im == 0.0);
    let stream = |k: u64| Sampler::with_stream(seed, k);
    let gap = 0.02 * spec.min_gap();
    let mut suites = Vec::new();

    let mut s = stream(0);
    suites.push(Suite::measured(
        "decomposition",
        worst_of((0..CHECK_SAMPLES).map(|_| {
            let m = s.algebraic(spec, dim, self_adjoint, 4.0).matrix;
            let a = decompose(&m, spec, tol).map_err(|e| e.to_string())?;
            let riesz = riesz_partition(&m, spec, tol.quad_points).map_err(|e| e.to_string())?;
            let defects = a.partition().defects();
            let agree = a
                .partition()
                .idempotents()
                .iter()
                .zip(&riesz)
                .map(|(e, f)| operator_norm(&(e - f)))
                .fold(0.0, f64::max);
            let riesz_defects = PartitionDefects::measure(&riesz);
            let limit = 100.0 * tol.base;
            Ok((agree / (limit * defects.scale))
                .max(defects.worst() / (tol.base * defects.scale))
                .max(riesz_defects.worst() / (limit * riesz_defects.scale)))
        })),
    ));

    let mut s = stream(1);
    suites.push(Suite::measured(
        "roundtrip",
        worst_of((0..CHECK_SAMPLES).map(|_| {
            let m = s.algebraic(spec, dim, self_adjoint, 4.0).matrix;
            let text = serde_json::to_string(&m).map_err(|e| e.to_string())?;
            let back: ComplexMatrix = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            if back != m {
                return Err("matrix JSON round trip changed entries".into());
            }
            let a = decompose(&m, spec, tol).map_err(|e| e.to_string())?;
            Ok(a.reconstruction_error() / (tol.base * unit_floor(operator_norm(&m))))
        })),
    ));

    let mut s = stream(2);
    suites.push(Suite::measured(
        "exp-path",
        worst_of((0..CHECK_PAIRS).map(|_| {
            let (m0, m1) = s.close_pair(spec, dim, self_adjoint, gap, 4.0);
            let a0 = decompose(&m0, spec, tol).map_err(|e| e.to_string())?;
            let a1 = decompose(&m1, spec, tol).map_err(|e| e.to_string())?;
            let cert = ep_similarity(&a0, &a1, tol).map_err(|e| e.to_string())?;
            let path = exp_path(&a0, &cert, tol).map_err(|e| e.to_string())?;
            let end = operator_norm(&(&path.end() - &m1)) / unit_floor(operator_norm(&m1));
            Ok(end.max(path.max_relative_membership()) / tol.base)
        })),
    ));

    if real {
        let real_spec = SpectrumSpec::new(spec.roots().to_vec(), true).expect("validated roots");
        let mut s = stream(3);
        suites.push(Suite::measured(
            "unitary-path",
            worst_of((0..CHECK_PAIRS).map(|_| {
                let (m0, m1) = s.close_pair(&real_spec, dim, true, gap, 4.0);
                let a0 = decompose(&m0, &real_spec, tol).map_err(|e| e.to_string())?;
                let a1 = decompose(&m1, &real_spec, tol).map_err(|e| e.to_string())?;
                let cert = unitary_similarity(&a0, &a1, tol).map_err(|e| e.to_string())?;
                let path = exp_path(&a0, &cert, tol).map_err(|e| e.to_string())?;
                let scale = unit_floor(operator_norm(&m1));
                let end = operator_norm(&(&path.end() - &m1)) / scale;
                Ok(end.max(path.max_relative_membership()).max(path.max_hermitian_defect() / scale) / tol.base)
            })),
        ));
    } else {
        suites.push(Suite::skipped("unitary-path", "roots are not real"));
    }

    let mut s = stream(4);
    suites.push(Suite::measured(
        "ladder",
        worst_of((0..CHECK_PAIRS).map(|_| {
            let (m0, m1) = s.close_pair(spec, dim, self_adjoint, gap, 4.0);
            let a0 = decompose(&m0, spec, tol).map_err(|e| e.to_string())?;
            let a1 = decompose(&m1, spec, tol).map_err(|e| e.to_string())?;
            let ladder = polygonal_ladder(&a0, &a1, tol).map_err(|e| e.to_string())?;
            let path = polygonal_path(&ladder, tol).map_err(|e| e.to_string())?;
            if path.len() != spec.n() {
                return Err(format!("{} segments for {} roots", path.len(), spec.n()));
            }
            Ok((ladder.final_defect() / (100.0 * tol.base)).max(ladder.max_interpolation_defect(tol.grid_points) / (10.0 * tol.base)))
        })),
    ));

    let mut s = stream(5);
    let rank = (dim / 2).max(1).min(dim);
    suites.push(Suite::measured(
        "exchange",
        worst_of((0..CHECK_SAMPLES).map(|_| {
            let (e0, e1) = s.projection_pair(dim, rank, 0.3, self_adjoint);
            let pair = nilpotent_generators(&e0, &e1, tol).map_err(|e| e.to_string())?;
            let g = crate::paths::exchange_idempotent(&e0, &e1, tol).map_err(|e| e.to_string())?;
            let relations = pair.relation_defects(&e0, &e1).into_iter().fold(0.0, f64::max);
            Ok(relations.max(ExchangeDefects::measure(&e0, &e1, &g).worst()) / (0.1 * tol.base))
        })),
    ));

    if real && dim <= MAX_EXPERIMENT_DIM {
        let real_spec = SpectrumSpec::new(spec.roots().to_vec(), true).expect("validated roots");
        let suite = match conjecture_experiment(&real_spec, dim, 200, seed) {
            Ok(r) if r.passed() => Suite {
                name: "components",
                status: Status::Pass,
                detail: format!("rows={} min_oracle={:.6} bound={:.6}", r.rows.len(), r.min_oracle(), r.rows.first().map_or(f64::NAN, |row| row.bound)),
            },
            Ok(r) => Suite {
                name: "components",
                status: Status::Fail,
                detail: format!(
                    "bound_violations={} search_violations={} attainment_failures={}",
                    r.bound_violations(),
                    r.search_violations,
                    r.attainment_failures
                ),
            },
            Err(e) => Suite {
                name: "components",
                status: Status::Fail,
                detail: e.to_string(),
            },
        };
        suites.push(suite);
    } else {
        suites.push(Suite::skipped("components", "needs real roots and a small dimension"));
    }

    let (model, family, lift_spec) = flip_example(1.0);
    let grid: Vec<Complex64> = (0..50).map(|k| Complex64::new(0.95 * (2.0 * k as f64 / 49.0 - 1.0), 0.0)).collect();
    suites.push(Suite::measured(
        "lifting",
        lift_family(&model, &family, &lift_spec, &grid, tol)
            .map_err(|e| e.to_string())
            .and_then(|l| {
                let worst = l.report.max_membership.max(l.report.max_projection_error) / l.report.threshold;
                if l.report.certified {
                    Ok(worst)
                } else {
                    Err(format!("certificates failed (worst_ratio={worst:.3e})"))
                }
            }),
    ));
    suites
}
