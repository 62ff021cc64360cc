//! Batch jobs: a config names a manifold, a field, a box and a list of
//! checks; running it yields a JSON report and optionally a CSV grid.
//!
//! ```toml
//! seed = 7
//! tolerance = 1e-5
//!
//! [manifold]
//! id = "nil3"
//!
//! [field]
//! family = "nil3-e1"
//! params = [0.0, 1.0, 0.0, 0.0]
//!
//! [domain]
//! lower = [-1.0, -1.0, -1.0]
//! upper = [1.0, 1.0, 1.0]
//!
//! checks = ["classify", { kind = "bienergy", name = "energy" }]
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};
use serde_json::value::RawValue;
use sha2::{Digest, Sha256};

use crate::diff::DiffBackend;
use crate::error::{GeomError, Result};
use crate::expr::{ExprField, ExprScalar};
use crate::field::{ConstantField, VectorField};
use crate::geometry::{Chart, Geometry};
use crate::models::chart::ModelChart;
use crate::models::families::{field_family_with_exprs, FamilyField};
use crate::models::ode::{integrate_local, ode_residual, OdeId, OdeSpec};
use crate::scalar::Scalar;
use crate::variational::{BoxDomain, Verdict, DEFAULT_CLASSIFY_TOL, DEFAULT_SAMPLES_PER_AXIS};

pub const SCHEMA_VERSION: u32 = 1;

fn default_tolerance() -> f64 {
    DEFAULT_CLASSIFY_TOL
}
fn default_quadrature_points() -> usize {
    16
}
fn default_sample_points() -> usize {
    DEFAULT_SAMPLES_PER_AXIS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub backend: DiffBackend,
    pub manifold: ManifoldConfig,
    pub field: FieldConfig,
    pub domain: DomainConfig,
    #[serde(default)]
    pub checks: Vec<CheckEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variation: Option<VariationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ode: Option<OdeConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldConfig {
    pub id: String,
    #[serde(default)]
    pub params: Vec<f64>,
}

/// Either a named family (with `params`, or `u`/`v` for `r2-xu-plus-v`) or
/// one expression per component.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    #[serde(default = "default_quadrature_points")]
    pub quadrature_points: usize,
    /// Classification grid points per axis.
    #[serde(default = "default_sample_points")]
    pub sample_points: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    Classify,
    Bienergy,
    FirstVariation,
    Ode,
}

impl CheckKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            CheckKind::Classify => "classify",
            CheckKind::Bienergy => "bienergy",
            CheckKind::FirstVariation => "first-variation",
            CheckKind::Ode => "ode",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CheckEntry {
    Kind(CheckKind),
    Detailed {
        kind: CheckKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        name: Option<String>,
        /// Expected verdict for `classify`; `blow-up` or `global` for an
        /// `ode` integration.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        expect: Option<String>,
    },
}

impl CheckEntry {
    pub fn kind(&self) -> CheckKind {
        match self {
            CheckEntry::Kind(k) | CheckEntry::Detailed { kind: k, .. } => *k,
        }
    }

    pub fn name(&self) -> String {
        match self {
            CheckEntry::Detailed { name: Some(n), .. } => n.clone(),
            _ => self.kind().as_str().to_string(),
        }
    }

    pub fn expect(&self) -> Option<&str> {
        match self {
            CheckEntry::Detailed { expect, .. } => expect.as_deref(),
            CheckEntry::Kind(_) => None,
        }
    }
}

/// Direction of the first variation before the bump is applied. Without
/// it, a constant vector is drawn from the seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariationConfig {
    pub components: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OdeConfig {
    pub id: String,
    #[serde(default = "default_ode_n")]
    pub n: usize,
    #[serde(default = "default_ode_c")]
    pub c: f64,
    /// Trial function of `x` whose residual is evaluated at `points`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub points: Vec<f64>,
    /// Initial state `(v, v', v'', v''')` for integrating the transformed equation.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub integrate: Option<[f64; 4]>,
    #[serde(default = "default_span")]
    pub span: [f64; 2],
    #[serde(default = "default_step")]
    pub step: f64,
}

fn default_ode_n() -> usize {
    2
}
fn default_ode_c() -> f64 {
    1.0
}
fn default_span() -> [f64; 2] {
    [0.0, 10.0]
}
fn default_step() -> f64 {
    1e-3
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv: Option<PathBuf>,
    /// Points per axis of the CSV grid; defaults to `sample_points` on every axis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_grid: Option<Vec<usize>>,
}

impl JobConfig {
    /// Parses TOML, or JSON when the text starts with `{`.
    pub fn parse(text: &str) -> Result<Self> {
        let parsed = if text.trim_start().starts_with('{') {
            serde_json::from_str(text).map_err(|e| GeomError::Degenerate(format!("config: {e}")))
        } else {
            toml::from_str(text).map_err(|e| GeomError::Degenerate(format!("config: {e}")))
        }?;
        Ok(parsed)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| GeomError::Degenerate(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// SHA-256 of the canonical JSON form, leaving out `[output]` so the
    /// destination does not change the report.
    pub fn digest(&self) -> String {
        let inputs = JobConfig { output: OutputConfig::default(), ..self.clone() };
        let canonical = serde_json::to_string(&inputs).expect("config serializes");
        hex::encode(Sha256::digest(canonical.as_bytes()))
    }

    pub fn chart(&self) -> Result<ModelChart> {
        ModelChart::from_id(&self.manifold.id, &self.manifold.params)
    }

    pub fn build_field(&self, chart: &ModelChart) -> Result<AnyField> {
        let f = &self.field;
        match (&f.family, &f.components) {
            (Some(_), Some(_)) => Err(GeomError::Degenerate("field has both `family` and `components`".into())),
            (None, None) => Err(GeomError::Degenerate("field needs `family` or `components`".into())),
            (None, Some(c)) => Ok(AnyField::Expr(ExprField::parse(c, chart.dim())?)),
            (Some(id), None) => {
                let exprs: Vec<String> = match (&f.u, &f.v) {
                    (Some(u), Some(v)) => vec![u.clone(), v.clone()],
                    (None, None) => vec![],
                    _ => return Err(GeomError::Degenerate("give both `u` and `v`".into())),
                };
                Ok(AnyField::Family(field_family_with_exprs(id, &f.params, &exprs, chart)?))
            }
        }
    }

    pub fn build_domain(&self, chart: &ModelChart) -> Result<BoxDomain> {
        let d = BoxDomain::new(self.domain.lower.clone(), self.domain.upper.clone(), self.domain.quadrature_points)?;
        d.validate(chart)?;
        Ok(d)
    }

    fn variation_field(&self, dim: usize) -> Result<AnyField> {
        match &self.variation {
            Some(v) => Ok(AnyField::Expr(ExprField::parse(&v.components, dim)?)),
            None => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                Ok(AnyField::Constant(ConstantField((0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())))
            }
        }
    }
}

/// Any field a job can describe.
#[derive(Clone, Debug)]
pub enum AnyField {
    Family(FamilyField),
    Expr(ExprField),
    Constant(ConstantField),
}

impl VectorField for AnyField {
    fn dim(&self) -> usize {
        match self {
            AnyField::Family(f) => f.dim(),
            AnyField::Expr(f) => f.dim(),
            AnyField::Constant(f) => f.dim(),
        }
    }
    fn eval<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        match self {
            AnyField::Family(f) => f.eval(x),
            AnyField::Expr(f) => f.eval(x),
            AnyField::Constant(f) => f.eval(x),
        }
    }
    fn label(&self) -> String {
        match self {
            AnyField::Family(f) => f.label(),
            AnyField::Expr(f) => f.label(),
            AnyField::Constant(f) => f.label(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

/// Floats are written in scientific notation with 17 significant digits;
/// non-finite values become `null`.
fn raw_number(v: f64) -> Box<RawValue> {
    let text = if v.is_finite() { format!("{v:.16e}") } else { "null".to_string() };
    RawValue::from_string(text).expect("formatted float is valid JSON")
}

fn ser_map<S: Serializer>(m: &BTreeMap<String, f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let raw: BTreeMap<&String, Box<RawValue>> = m.iter().map(|(k, v)| (k, raw_number(*v))).collect();
    raw.serialize(s)
}

fn ser_opt<S: Serializer>(v: &Option<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => raw_number(*x).serialize(s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub kind: CheckKind,
    pub status: Status,
    #[serde(serialize_with = "ser_map")]
    pub residuals: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    /// Wall-clock time; only recorded when requested since it is not reproducible.
    #[serde(serialize_with = "ser_opt")]
    pub runtime_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config_digest: String,
    pub seed: u64,
    pub backend: DiffBackend,
    pub manifold: String,
    pub field: String,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    pub timing: bool,
}

/// Runs every check; a failing check never stops the others. Results are
/// sorted by name. Errors are returned only when the manifold, field or
/// domain cannot be built.
pub fn run_job(config: &JobConfig, opts: RunOptions) -> Result<Report> {
    let chart = config.chart()?;
    let field = config.build_field(&chart)?;
    let domain = config.build_domain(&chart)?;
    let geo = Geometry::with_backend(chart, config.backend);
    let mut names: Vec<String> = config.checks.iter().map(CheckEntry::name).collect();
    names.sort();
    if names.windows(2).any(|w| w[0] == w[1]) {
        return Err(GeomError::Degenerate("check names must be unique".into()));
    }
    let mut checks: Vec<CheckResult> = config
        .checks
        .par_iter()
        .map(|entry| {
            let start = Instant::now();
            let mut r = run_check(config, &geo, &field, &domain, entry);
            if opts.timing {
                r.runtime_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            r
        })
        .collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(Report {
        schema_version: SCHEMA_VERSION,
        config_digest: config.digest(),
        seed: config.seed,
        backend: config.backend,
        manifold: geo.chart.name(),
        field: field.label(),
        checks,
    })
}

fn run_check(
    config: &JobConfig,
    geo: &Geometry<ModelChart>,
    field: &AnyField,
    domain: &BoxDomain,
    entry: &CheckEntry,
) -> CheckResult {
    let mut r = CheckResult {
        name: entry.name(),
        kind: entry.kind(),
        status: Status::Pass,
        residuals: BTreeMap::new(),
        verdict: None,
        message: None,
        runtime_ms: None,
    };
    let outcome = match entry.kind() {
        CheckKind::Classify => classify_check(config, geo, field, domain, entry, &mut r),
        CheckKind::Bienergy => bienergy_check(geo, field, domain, &mut r),
        CheckKind::FirstVariation => variation_check(config, geo, field, domain, &mut r),
        CheckKind::Ode => ode_check(config, entry, &mut r),
    };
    if let Err(e) = outcome {
        r.status = Status::Error;
        r.message = Some(e.to_string());
    }
    r
}

fn classify_check(
    config: &JobConfig,
    geo: &Geometry<ModelChart>,
    field: &AnyField,
    domain: &BoxDomain,
    entry: &CheckEntry,
    r: &mut CheckResult,
) -> Result<()> {
    let rep = geo.classify_with_samples(field, domain, config.tolerance, config.domain.sample_points);
    if let Some(e) = rep.error {
        return Err(GeomError::Degenerate(e));
    }
    r.residuals.insert("parallel".into(), rep.residuals.parallel);
    r.residuals.insert("rough_laplacian".into(), rep.residuals.rough_laplacian);
    r.residuals.insert("s_tensor".into(), rep.residuals.s_tensor);
    r.residuals.insert("bitension".into(), rep.residuals.bitension);
    r.residuals.insert("tolerance".into(), rep.tolerance);
    r.verdict = Some(rep.verdict.as_str().to_string());
    if let Some(expect) = entry.expect() {
        let want = Verdict::parse(expect).ok_or_else(|| GeomError::UnknownId(format!("verdict `{expect}`")))?;
        if want != rep.verdict {
            r.status = Status::Fail;
            r.message = Some(format!("expected {expect}, got {}", rep.verdict.as_str()));
        }
    }
    Ok(())
}

fn bienergy_check(geo: &Geometry<ModelChart>, field: &AnyField, domain: &BoxDomain, r: &mut CheckResult) -> Result<()> {
    let q = geo.bienergy(field, domain)?;
    r.residuals.insert("value".into(), q.value);
    r.residuals.insert("error_estimate".into(), q.error_estimate);
    if !q.converged {
        r.status = Status::Fail;
        r.message = Some("quadrature did not converge; raise quadrature_points".into());
    }
    Ok(())
}

fn variation_check(
    config: &JobConfig,
    geo: &Geometry<ModelChart>,
    field: &AnyField,
    domain: &BoxDomain,
    r: &mut CheckResult,
) -> Result<()> {
    let v = config.variation_field(geo.dim())?;
    let fv = geo.first_variation(field, &v, domain)?;
    r.residuals.insert("lhs".into(), fv.lhs);
    r.residuals.insert("rhs".into(), fv.rhs);
    r.residuals.insert("scale".into(), fv.scale);
    r.residuals.insert("relative_gap".into(), fv.relative_gap());
    r.residuals.insert("derivative_error_estimate".into(), fv.derivative_error_estimate);
    r.residuals.insert("quadrature_error_estimate".into(), fv.quadrature.error_estimate);
    if !fv.agrees(crate::variational::FIRST_VARIATION_RTOL) {
        r.status = Status::Fail;
    }
    Ok(())
}

fn ode_check(config: &JobConfig, entry: &CheckEntry, r: &mut CheckResult) -> Result<()> {
    let ode = config
        .ode
        .as_ref()
        .ok_or_else(|| GeomError::Degenerate("the ode check needs an [ode] table".into()))?;
    let (residuals, passed) = evaluate_ode(ode, config.tolerance, entry.expect())?;
    r.residuals = residuals;
    if !passed {
        r.status = Status::Fail;
    }
    Ok(())
}

/// Residual of `f` at the given points and/or an integration of the
/// transformed equation. Returns the named numbers and whether the
/// residual stayed under `tolerance` and the expectation (`blow-up` or
/// `global`) held.
pub fn evaluate_ode(ode: &OdeConfig, tolerance: f64, expect: Option<&str>) -> Result<(BTreeMap<String, f64>, bool)> {
    let id = OdeId::parse(&ode.id)?;
    let mut out = BTreeMap::new();
    let mut passed = true;
    let mut ran = false;
    if let Some(text) = &ode.f {
        let f = ExprScalar::parse(text)?;
        if f.expr.arity() > 1 {
            return Err(GeomError::UnknownId("ODE trial functions use only `x`".into()));
        }
        if ode.points.is_empty() {
            return Err(GeomError::Degenerate("give `points` for the residual".into()));
        }
        let mut worst = 0.0_f64;
        for &t in &ode.points {
            // domain errors depend only on the real parts, so a successful
            // plain evaluation guarantees the jet evaluation succeeds
            f.expr.eval(&[t])?;
            let res = ode_residual(
                id,
                |x| f.expr.eval(&[x]).unwrap_or_else(|_| crate::models::ode::Jet::zero()),
                t,
                ode.n,
                ode.c,
            )?;
            worst = worst.max(res.abs());
        }
        out.insert("max_abs_residual".into(), worst);
        passed &= worst < tolerance;
        ran = true;
    }
    if let Some(init) = ode.integrate {
        if id != OdeId::HyperbolicTransformed {
            return Err(GeomError::Degenerate("only hyperbolic-transformed can be integrated".into()));
        }
        let spec = OdeSpec::new(ode.n, ode.c)?;
        let tr = integrate_local(&spec, init, (ode.span[0], ode.span[1]), ode.step)?;
        out.insert("max_abs_v".into(), tr.max_abs_v());
        out.insert("steps".into(), (tr.t.len() - 1) as f64);
        out.insert("t_end".into(), *tr.t.last().unwrap_or(&ode.span[0]));
        if let Some(b) = tr.blow_up {
            out.insert("t_star".into(), b.t_star);
        }
        match expect {
            Some("blow-up") => passed &= tr.blow_up.is_some(),
            Some("global") => passed &= tr.blow_up.is_none(),
            None => {}
            Some(other) => return Err(GeomError::UnknownId(format!("ode expectation `{other}`"))),
        }
        ran = true;
    }
    if !ran {
        return Err(GeomError::Degenerate("[ode] needs `f` and `points`, or `integrate`".into()));
    }
    Ok((out, passed))
}

/// Header and rows of the residual grid: coordinates, `|∇X|`, `|Δ̄X|`,
/// `|S(X)|`, `|bitension|`, the bienergy density, then the components of
/// `Δ̄X`.
pub fn grid_csv<C: Chart, F: VectorField>(geo: &Geometry<C>, field: &F, domain: &BoxDomain, grid: &[usize]) -> Result<String> {
    let m = geo.dim();
    if grid.len() != m {
        return Err(GeomError::Dimension { expected: m, got: grid.len() });
    }
    if grid.iter().any(|&k| k < 2) {
        return Err(GeomError::InvalidDomain("grid needs at least 2 points per axis".into()));
    }
    domain.validate(&geo.chart)?;
    let axes: Vec<Vec<f64>> = (0..m)
        .map(|d| {
            let k = grid[d];
            (0..k)
                .map(|i| domain.lower[d] + (domain.upper[d] - domain.lower[d]) * i as f64 / (k - 1) as f64)
                .collect()
        })
        .collect();
    let points = crate::quadrature::tensor_grid(&axes);
    let diags = geo.sweep(field, &points)?;
    let mut out = String::new();
    let coords: Vec<String> = (1..=m).map(|i| format!("x{i}")).collect();
    let lap: Vec<String> = (1..=m).map(|i| format!("rough_laplacian_{i}")).collect();
    writeln!(
        out,
        "{},grad_norm,rough_laplacian_norm,s_norm,bitension_norm,bienergy_density,{}",
        coords.join(","),
        lap.join(",")
    )
    .unwrap();
    for d in diags {
        let mut row: Vec<String> = d.point.iter().map(|v| format!("{v:.16e}")).collect();
        for v in [d.covariant_norm, d.rough_laplacian_norm, d.s_norm, d.bitension_norm, d.bienergy_density] {
            row.push(format!("{v:.16e}"));
        }
        row.extend(d.rough_laplacian.iter().map(|v| format!("{v:.16e}")));
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    Ok(out)
}

/// Writes the grid CSV to `path`.
pub fn emit_csv<C: Chart, F: VectorField>(
    geo: &Geometry<C>,
    field: &F,
    domain: &BoxDomain,
    grid: &[usize],
    path: &Path,
) -> Result<()> {
    let text = grid_csv(geo, field, domain, grid)?;
    std::fs::write(path, text).map_err(|e| GeomError::Degenerate(format!("cannot write {}: {e}", path.display())))
}

/// Runs the job and writes the report and CSV named in its `[output]` table.
pub fn run_and_write(config: &JobConfig, opts: RunOptions) -> Result<Report> {
    let report = run_job(config, opts)?;
    if let Some(path) = &config.output.report {
        std::fs::write(path, report.to_json())
            .map_err(|e| GeomError::Degenerate(format!("cannot write {}: {e}", path.display())))?;
    }
    if let Some(path) = &config.output.csv {
        let chart = config.chart()?;
        let geo = Geometry::with_backend(chart, config.backend);
        let field = config.build_field(&chart)?;
        let domain = config.build_domain(&chart)?;
        let grid = config
            .output
            .csv_grid
            .clone()
            .unwrap_or_else(|| vec![config.domain.sample_points; chart.dim()]);
        emit_csv(&geo, &field, &domain, &grid, path)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PARALLEL: &str = r#"
seed = 1
checks = [{ kind = "classify", expect = "parallel" }, "bienergy"]

[manifold]
id = "euclidean"
params = [2]

[field]
components = ["1", "0"]

[domain]
lower = [0.0, 0.0]
upper = [1.0, 1.0]
quadrature_points = 4
"#;

    #[test]
    fn parallel_field_job() {
        let cfg = JobConfig::parse(PARALLEL).unwrap();
        let rep = run_job(&cfg, RunOptions::default()).unwrap();
        assert!(rep.all_passed(), "{}", rep.to_json());
        assert_eq!(rep.checks[0].name, "bienergy");
        assert_eq!(rep.checks[1].verdict.as_deref(), Some("parallel"));
        assert!(rep.to_json().contains("\"runtime_ms\": null"));
    }

    #[test]
    fn json_config_and_digest() {
        let cfg = JobConfig::parse(PARALLEL).unwrap();
        let json = serde_json::to_string(&cfg).unwrap();
        let back = JobConfig::parse(&json).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(cfg.digest(), back.digest());
        let mut other = cfg.clone();
        other.seed = 2;
        assert_ne!(cfg.digest(), other.digest());
        let mut moved = cfg.clone();
        moved.output.report = Some("elsewhere.json".into());
        assert_eq!(cfg.digest(), moved.digest());
    }

    #[test]
    fn check_errors_are_captured() {
        let text = PARALLEL.replace(r#"checks = [{ kind = "classify", expect = "parallel" }, "bienergy"]"#, r#"checks = ["classify", "ode"]"#);
        let rep = run_job(&JobConfig::parse(&text).unwrap(), RunOptions::default()).unwrap();
        let ode = rep.checks.iter().find(|c| c.name == "ode").unwrap();
        assert_eq!(ode.status, Status::Error);
        assert!(rep.checks.iter().any(|c| c.name == "classify" && c.status == Status::Pass));
    }

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(raw_number(0.1).get(), "1.0000000000000001e-1");
        assert_eq!(raw_number(f64::NAN).get(), "null");
    }

    #[test]
    fn zero_field_grid() {
        let geo = Geometry::new(ModelChart::euclidean(2));
        let csv = grid_csv(&geo, &crate::field::zero_field(2), &BoxDomain::unit(2, 4), &[3, 3]).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 10);
        for row in &lines[1..] {
            let vals: Vec<f64> = row.split(',').map(|v| v.parse().unwrap()).collect();
            assert!(vals[2..].iter().all(|v| *v == 0.0));
        }
        assert!(grid_csv(&geo, &crate::field::zero_field(2), &BoxDomain::unit(2, 4), &[1, 3]).is_err());
    }
}
