//! Command implementations behind the `surface-beta` binary.
//!
//! Each command takes a validated [`SurfaceSpec`] and returns a
//! [`RunReport`]; failures carry the process exit code through
//! [`CliError::exit_code`].

mod spec;

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use thiserror::Error;

pub use spec::{CutoffOverrides, SurfaceSpec, MAX_LEVEL};

use crate::beta::oracle::sphere2;
use crate::beta::{
    beta_global_continued, beta_global_continued_at_level, beta_global_direct, beta_global_direct_at_level,
    beta_point_continued, beta_point_direct, mobius_energy, mobius_energy_at_level, nearest_pole, residue_numeric,
    BetaError, ContinuationOptions, Estimate, DIRECT_GUARD, POLE_GUARD,
};
use crate::jet::{extract_jet, pointwise_residues_closed_form, residue_cross_check, JetError};
use crate::surface::{Surface, SurfaceError, SurfacePoint};
use crate::verify::{self, Probes};

/// Outer level used for surfaces with boundary when none is given.
pub const DEFAULT_PATCH_LEVEL: u32 = 2;
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("specification error: {0}")]
    Spec(String),
    #[error("numerical failure: {0}")]
    Numerical(BetaError),
    #[error("pole guard: {0}")]
    PoleGuard(BetaError),
    #[error("verification failed: {0} check(s) did not pass")]
    VerifyFailed(usize),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Spec(_) | CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::PoleGuard(_) => 4,
        }
    }
}

impl From<BetaError> for CliError {
    fn from(e: BetaError) -> Self {
        match e {
            BetaError::NearPole { .. } => CliError::PoleGuard(e),
            BetaError::InvalidOption(msg) => CliError::Spec(msg),
            BetaError::Surface(SurfaceError::NoSuchChart(_) | SurfaceError::OutsideDomain(_)) => {
                CliError::Spec(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

impl From<JetError> for CliError {
    fn from(e: JetError) -> Self {
        BetaError::from(e).into()
    }
}

/// Evaluation path for `eval` and `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Direct quadrature iff `Re s > −2 + DIRECT_GUARD`, else continuation.
    Auto,
    Direct,
    Continued,
}

impl Mode {
    fn resolve(self, s: Complex64) -> Mode {
        match self {
            Mode::Auto if s.re > -2.0 + DIRECT_GUARD => Mode::Direct,
            Mode::Auto => Mode::Continued,
            m => m,
        }
    }

    fn name(self) -> &'static str {
        match self {
            Mode::Auto => "auto",
            Mode::Direct => "direct",
            Mode::Continued => "continued",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidueMethod {
    Closed,
    Numeric,
    Both,
}

/// How reliable a reported number is.
#[derive(Debug, Clone, PartialEq)]
pub enum Accuracy {
    /// Closed form, exact up to rounding.
    Exact,
    Estimate(f64),
    /// Rows that report a check rather than a number; holds the run time.
    Timing(f64),
}

impl fmt::Display for Accuracy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Accuracy::Exact => write!(f, "exact"),
            Accuracy::Estimate(e) => write!(f, "{e:.2e}"),
            Accuracy::Timing(t) => write!(f, "{t:.2}s"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub quantity: String,
    pub value: String,
    pub accuracy: Accuracy,
}

/// What a command prints.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunReport {
    pub command: String,
    pub config: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
    pub notes: Vec<String>,
    /// Outcomes of coefficient adjudications, printed prominently.
    pub verdicts: Vec<String>,
    pub elapsed: Duration,
}

impl RunReport {
    fn new(command: &str) -> Self {
        Self { command: command.to_string(), ..Default::default() }
    }

    fn config(&mut self, key: &str, value: impl fmt::Display) {
        self.config.push((key.to_string(), value.to_string()));
    }

    fn row(&mut self, quantity: impl Into<String>, value: impl Into<String>, accuracy: Accuracy) {
        self.rows.push(ReportRow { quantity: quantity.into(), value: value.into(), accuracy });
    }

    fn estimate_row(&mut self, quantity: impl Into<String>, e: Estimate) {
        self.row(quantity, format_complex(e.value), Accuracy::Estimate(e.error));
    }
}

impl fmt::Display for RunReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "command: {}", self.command)?;
        for (k, v) in &self.config {
            writeln!(f, "  {k:<14} {v}")?;
        }
        for v in &self.verdicts {
            writeln!(f, "VERDICT: {v}")?;
        }
        if !self.rows.is_empty() {
            let w = self.rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0).max(8);
            let vw = self.rows.iter().map(|r| r.value.len()).max().unwrap_or(0).max(5);
            writeln!(f, "{:<w$}  {:<vw$}  error", "quantity", "value")?;
            for r in &self.rows {
                writeln!(f, "{:<w$}  {:<vw$}  {}", r.quantity, r.value, r.accuracy)?;
            }
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        write!(f, "time: {:.3} s", self.elapsed.as_secs_f64())
    }
}

/// `RE+IMi` with 17 significant digits; the imaginary part is omitted when
/// zero.
pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.16e}", z.re)
    } else {
        format!("{:.16e}{:+.16e}i", z.re, z.im)
    }
}

/// Parse `RE`, `RE+IMi`, `RE-IMi` or `IMi`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || CliError::Spec(format!("cannot parse complex number '{text}' (expected RE, RE+IMi or IMi)"));
    let num = |s: &str| -> Result<f64, CliError> {
        match s {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => s.parse::<f64>().map_err(|_| bad()),
        }
    };
    let z = if let Some(body) = t.strip_suffix('i') {
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        match split {
            Some(k) => Complex64::new(body[..k].parse::<f64>().map_err(|_| bad())?, num(&body[k..])?),
            None => Complex64::new(0.0, num(body)?),
        }
    } else {
        Complex64::new(t.parse::<f64>().map_err(|_| bad())?, 0.0)
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    Ok(z)
}

/// Parse `u,v` or `u,v,chart`.
pub fn parse_point(text: &str) -> Result<SurfacePoint, CliError> {
    let bad = || CliError::Spec(format!("cannot parse point '{text}' (expected u,v or u,v,chart)"));
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() < 2 || parts.len() > 3 {
        return Err(bad());
    }
    let u: f64 = parts[0].parse().map_err(|_| bad())?;
    let v: f64 = parts[1].parse().map_err(|_| bad())?;
    let chart = match parts.get(2) {
        Some(c) => c.parse().map_err(|_| bad())?,
        None => 0,
    };
    if !(u.is_finite() && v.is_finite()) {
        return Err(bad());
    }
    Ok(SurfacePoint::new(chart, u, v))
}

/// Settings shared by the evaluating commands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub tol: f64,
    /// Fixed outer quadrature level; `None` refines until converged.
    pub level: Option<u32>,
    pub continuation: ContinuationOptions,
}

impl RunSettings {
    /// Spec values, overridden by command-line values where given.
    pub fn resolve(spec: &SurfaceSpec, tol: Option<f64>, level: Option<u32>) -> Result<Self, CliError> {
        let tol = tol.or(spec.tol).unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Spec(format!("tol must lie in (0, 1), got {tol}")));
        }
        let level = level.or(spec.level);
        if let Some(l) = level {
            if l > MAX_LEVEL {
                return Err(CliError::Spec(format!("level {l} exceeds the maximum {MAX_LEVEL}")));
            }
        }
        let defaults = ContinuationOptions::default();
        let continuation = ContinuationOptions {
            tol,
            cutoff_radius: spec.cutoff.radius,
            circle_nodes: spec.cutoff.circle_nodes.unwrap_or(defaults.circle_nodes),
            outer_level: level.unwrap_or(defaults.outer_level),
        };
        Ok(Self { tol, level, continuation })
    }

    fn describe(&self, report: &mut RunReport) {
        report.config("tol", format!("{:e}", self.tol));
        match self.level {
            Some(l) => report.config("outer level", l),
            None => report.config("outer level", "refined until converged"),
        }
        match self.continuation.cutoff_radius {
            Some(r) => report.config("cutoff radius", r),
            None => report.config("cutoff radius", "default"),
        }
        report.config("circle nodes", self.continuation.circle_nodes);
    }
}

fn check_point(surface: &Surface, u: SurfacePoint) -> Result<(), CliError> {
    let chart = surface.chart(u.chart).map_err(|e| CliError::Spec(e.to_string()))?;
    if !chart.domain().contains(u.param) {
        return Err(CliError::Spec(format!("point {:?} lies outside chart {}", u.param, u.chart)));
    }
    Ok(())
}

fn pole_guard_error(s: Complex64) -> Option<CliError> {
    let (pole, dist) = nearest_pole(s);
    (dist < POLE_GUARD).then_some(CliError::PoleGuard(BetaError::NearPole { s, pole }))
}

fn pole_note(s: Complex64) -> Option<String> {
    let (pole, dist) = nearest_pole(s);
    (dist < 10.0 * POLE_GUARD).then(|| format!("s is {dist:.2e} from the pole at {pole}; expect reduced accuracy"))
}

/// One evaluation of `B^u(s)` (with a point) or `B_M(s)`.
pub fn evaluate(
    surface: &Surface,
    s: Complex64,
    point: Option<SurfacePoint>,
    mode: Mode,
    settings: &RunSettings,
) -> Result<(Estimate, Mode), CliError> {
    let mode = mode.resolve(s);
    if mode == Mode::Continued {
        if let Some(e) = pole_guard_error(s) {
            return Err(e);
        }
    }
    let level_or_default = settings.level.unwrap_or(DEFAULT_PATCH_LEVEL);
    let value = match (mode, point) {
        (Mode::Direct, Some(u)) => beta_point_direct(surface, u, s, settings.tol)?,
        (_, Some(u)) => {
            let r = beta_point_continued(surface, u, s, None, &settings.continuation)?;
            let value = r.value.ok_or(BetaError::NearPole { s, pole: r.nearest_pole.unwrap_or(f64::NAN) })?;
            Estimate { value, error: r.error_estimate }
        }
        (Mode::Direct, None) if surface.closed && settings.level.is_none() => {
            beta_global_direct(surface, s, settings.tol)?
        }
        (Mode::Direct, None) => beta_global_direct_at_level(surface, s, settings.tol, level_or_default)?,
        (_, None) if surface.closed && settings.level.is_none() => {
            beta_global_continued(surface, s, &settings.continuation)?
        }
        (_, None) => beta_global_continued_at_level(surface, s, &settings.continuation, level_or_default)?,
    };
    Ok((value, mode))
}

fn quantity_name(point: Option<SurfacePoint>, s: Complex64) -> String {
    let s = format_s(s);
    match point {
        Some(u) => format!("B^u({s}) at ({}, {}) chart {}", u.param[0], u.param[1], u.chart),
        None => format!("B_M({s})"),
    }
}

fn format_s(s: Complex64) -> String {
    if s.im == 0.0 {
        format!("{}", s.re)
    } else {
        format!("{}{:+}i", s.re, s.im)
    }
}

fn surface_config(report: &mut RunReport, surface: &Surface) {
    report.config("surface", &surface.label);
}

pub fn cmd_eval(
    spec: &SurfaceSpec,
    s: Complex64,
    point: Option<SurfacePoint>,
    mode: Mode,
    settings: &RunSettings,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let surface = spec.build()?;
    if let Some(u) = point {
        check_point(&surface, u)?;
    }
    let mut report = RunReport::new("eval");
    surface_config(&mut report, &surface);
    report.config("s", format_s(s));
    report.config("mode", mode.resolve(s).name());
    settings.describe(&mut report);
    let (value, _) = evaluate(&surface, s, point, mode, settings)?;
    report.estimate_row(quantity_name(point, s), value);
    if let (Some(r), None) = (spec.sphere_radius(), point) {
        if let Ok((_, global)) = sphere2(r, s) {
            report.row("closed form B_M(s)", format_complex(global), Accuracy::Exact);
        }
    } else if let (Some(r), Some(_)) = (spec.sphere_radius(), point) {
        if let Ok((pointwise, _)) = sphere2(r, s) {
            report.row("closed form B^u(s)", format_complex(pointwise), Accuracy::Exact);
        }
    }
    report.notes.extend(pole_note(s));
    report.elapsed = start.elapsed();
    Ok(report)
}

pub fn cmd_residues(
    spec: &SurfaceSpec,
    point: SurfacePoint,
    method: ResidueMethod,
    settings: &RunSettings,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let surface = spec.build()?;
    check_point(&surface, point)?;
    let mut report = RunReport::new("residues");
    surface_config(&mut report, &surface);
    report.config("point", format!("({}, {}) chart {}", point.param[0], point.param[1], point.chart));
    settings.describe(&mut report);
    let (view, q) = surface.evaluation_view(point).map_err(BetaError::from)?;
    let (_, jet) = extract_jet(&view, q)?;
    let closed = pointwise_residues_closed_form(&jet);
    for pole in [-2, -4, -6] {
        if method != ResidueMethod::Numeric {
            let v = closed.at_pole(pole).expect("listed pole");
            report.row(format!("Res_{pole} closed form"), format!("{v:.16e}"), Accuracy::Exact);
        }
        if method != ResidueMethod::Closed {
            let e = residue_numeric(&surface, point, pole, &settings.continuation)?;
            report.row(format!("Res_{pole} numeric"), format!("{:.16e}", e.value.re), Accuracy::Estimate(e.error));
        }
    }
    let cc = residue_cross_check(&jet);
    report.row("Res_-4 curvature-invariant form", format!("{:.16e}", cc.res4_h), Accuracy::Exact);
    report.row("Res_-6 curvature-invariant form", format!("{:.16e}", cc.res6_h), Accuracy::Exact);
    match cc.ratio4 {
        Some(r) => report.notes.push(format!("Res_-4 invariant form / polynomial = {r:.12}")),
        None => report.notes.push("Res_-4 vanishes (umbilic point); no invariant-form ratio".into()),
    }
    match cc.ratio6 {
        Some(r) => report.notes.push(format!("Res_-6 invariant form / polynomial = {r:.12}")),
        None => report.notes.push("Res_-6 polynomial vanishes; no ratio".into()),
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// One CSV row of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub s: Complex64,
    /// `None` on pole-guard rows.
    pub value: Option<Estimate>,
    pub mode: &'static str,
    pub pole_flag: bool,
}

pub const CSV_HEADER: &str = "re_s,im_s,re_value,im_value,error_estimate,mode,pole_flag";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        let g = |x: f64| format!("{x:.16e}");
        match self.value {
            Some(v) => format!(
                "{},{},{},{},{},{},{}",
                g(self.s.re),
                g(self.s.im),
                g(v.value.re),
                g(v.value.im),
                g(v.error),
                self.mode,
                u8::from(self.pole_flag)
            ),
            None => format!("{},{},,,,{},{}", g(self.s.re), g(self.s.im), self.mode, u8::from(self.pole_flag)),
        }
    }
}

/// `count` equally spaced points from `from` to `to` inclusive.
pub fn sweep_points(from: Complex64, to: Complex64, count: usize) -> Vec<Complex64> {
    match count {
        0 => Vec::new(),
        1 => vec![from],
        n => (0..n).map(|k| from + (to - from) * (k as f64 / (n - 1) as f64)).collect(),
    }
}

pub fn sweep_rows(
    surface: &Surface,
    points: &[Complex64],
    point: Option<SurfacePoint>,
    mode: Mode,
    settings: &RunSettings,
) -> Result<Vec<SweepRow>, CliError> {
    let mut rows = Vec::with_capacity(points.len());
    for &s in points {
        let row = match evaluate(surface, s, point, mode, settings) {
            Ok((v, m)) => SweepRow { s, value: Some(v), mode: m.name(), pole_flag: false },
            Err(CliError::PoleGuard(_)) => SweepRow { s, value: None, mode: "pole", pole_flag: true },
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(mut out: W, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{}", r.to_csv())?;
    }
    out.flush()
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    spec: &SurfaceSpec,
    from: Complex64,
    to: Complex64,
    count: usize,
    point: Option<SurfacePoint>,
    mode: Mode,
    settings: &RunSettings,
    out: &Path,
) -> Result<RunReport, CliError> {
    let start = Instant::now();
    if count == 0 {
        return Err(CliError::Spec("sweep needs at least one point".into()));
    }
    let surface = spec.build()?;
    if let Some(u) = point {
        check_point(&surface, u)?;
    }
    let mut report = RunReport::new("sweep");
    surface_config(&mut report, &surface);
    report.config("from", format_s(from));
    report.config("to", format_s(to));
    report.config("points", count);
    report.config("mode", mode.name());
    report.config("output", out.display());
    settings.describe(&mut report);
    let rows = sweep_rows(&surface, &sweep_points(from, to, count), point, mode, settings)?;
    let file = std::fs::File::create(out)?;
    write_csv(std::io::BufWriter::new(file), &rows)?;
    let flagged = rows.iter().filter(|r| r.pole_flag).count();
    let worst = rows.iter().filter_map(|r| r.value.map(|v| v.error)).fold(0.0, f64::max);
    report.row("rows written", rows.len().to_string(), Accuracy::Exact);
    report.row("largest error estimate", format!("{worst:.3e}"), Accuracy::Exact);
    if flagged > 0 {
        report.notes.push(format!("{flagged} row(s) within {POLE_GUARD:e} of a pole were flagged and left empty"));
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

pub fn cmd_mobius(spec: &SurfaceSpec, settings: &RunSettings) -> Result<RunReport, CliError> {
    let start = Instant::now();
    let surface = spec.build()?;
    let mut report = RunReport::new("mobius");
    surface_config(&mut report, &surface);
    settings.describe(&mut report);
    let value = match settings.level {
        None if surface.closed => mobius_energy(&surface, &settings.continuation)?,
        level => mobius_energy_at_level(&surface, &settings.continuation, level.unwrap_or(DEFAULT_PATCH_LEVEL))?,
    };
    report.estimate_row("renormalised Moebius energy FP_{s=-4} B_M", value);
    if spec.sphere_radius().is_some() {
        report.row("closed form -pi^2", format!("{:.16e}", -PI * PI), Accuracy::Exact);
    }
    if !surface.closed {
        report.notes.push(
            "surface has boundary; base points are weighted by a smooth cutoff of their distance to the edge".into(),
        );
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Run the acceptance checks (all when `ids` is empty). The report lists
/// one `CHECK <id> PASS|FAIL` row per check; a failing run is an error
/// carrying the report text.
pub fn cmd_verify(probes: &Probes, ids: &[u32]) -> (RunReport, Result<(), CliError>) {
    let start = Instant::now();
    let result = if ids.is_empty() { verify::run_all(probes) } else { verify::run_checks(ids, probes) };
    let mut report = RunReport::new("verify");
    for c in &result.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        report.row(format!("CHECK {:>2} {status} {}", c.id, c.title), c.detail.clone(), Accuracy::Timing(c.seconds));
    }
    report.verdicts.extend(result.verdicts.residue_normalisation.iter().map(|v| format!("residue at -4: {v}")));
    report.verdicts.extend(result.verdicts.sphere_power.iter().map(|v| format!("sphere power of two: {v}")));
    report.elapsed = start.elapsed();
    let failed = result.checks.iter().filter(|c| !c.passed).count();
    (report, if failed == 0 { Ok(()) } else { Err(CliError::VerifyFailed(failed)) })
}
