//! Job descriptions and their validation into runnable jobs.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use veronese_core::backlund::BacklundData;
use veronese_core::expr::parse_field;
use veronese_core::nijenhuis::{NormalFormSpec, NormalFormTag};
use veronese_core::sampling::Box3;
use veronese_core::solutions::{exact_solution, sample_box, ExactSolutionCase};
use veronese_core::webs::EquationSpec;
use veronese_core::{Point, ScalarField};

/// A job as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    /// Defaults to the equation of a builtin solution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionConfig>,
    #[serde(default)]
    pub domain: DomainConfig,
    #[serde(default)]
    pub checks: Vec<CheckKind>,
    /// Overrides of [`CheckKind::default_tolerance`].
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub tolerances: BTreeMap<CheckKind, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backlund: Option<BacklundConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub self_propelled: Option<SelfPropelledConfig>,
}

/// An equation family with parameter expressions, or a builtin tag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", deny_unknown_fields)]
pub enum EquationConfig {
    A {
        lambda: [String; 3],
    },
    B {
        lambda2: String,
        lambda3: String,
    },
    C {
        lambda3: String,
    },
    D {
        a: String,
        b: String,
        lambda3: String,
    },
    CNormal,
    HyperCr,
    Hirota {
        a: f64,
        b: f64,
        c: f64,
    },
    #[serde(rename = "builtin")]
    Builtin {
        tag: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        constants: Option<[f64; 3]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SolutionConfig {
    Expression(String),
    /// A library solution; probe points are then web coordinates, mapped
    /// into the solution's chart before evaluation.
    Builtin(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub lo: Point,
    pub hi: Point,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DomainConfig {
    #[serde(rename = "box")]
    pub bounds: BoxConfig,
    /// Points per axis of the regular grid.
    pub grid: usize,
    /// When set, this many seeded uniform samples replace the grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random: Option<usize>,
    /// Points where two spectral values are closer than this are excluded.
    pub margin: f64,
}

fn default_grid() -> usize {
    5
}

fn default_margin() -> f64 {
    1e-6
}

impl Default for DomainConfig {
    fn default() -> Self {
        let b = sample_box();
        DomainConfig {
            bounds: BoxConfig { lo: b.lo, hi: b.hi },
            grid: default_grid(),
            random: None,
            margin: default_margin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Residual,
    Nondegeneracy,
    Lax,
    EinsteinWeyl,
    Nijenhuis,
    Conjugation,
    Backlund,
    SelfPropelled,
}

impl CheckKind {
    pub fn name(self) -> &'static str {
        match self {
            CheckKind::Residual => "residual",
            CheckKind::Nondegeneracy => "nondegeneracy",
            CheckKind::Lax => "lax",
            CheckKind::EinsteinWeyl => "einstein_weyl",
            CheckKind::Nijenhuis => "nijenhuis",
            CheckKind::Conjugation => "conjugation",
            CheckKind::Backlund => "backlund",
            CheckKind::SelfPropelled => "self_propelled",
        }
    }

    pub fn default_tolerance(self) -> f64 {
        match self {
            CheckKind::Residual
            | CheckKind::Nijenhuis
            | CheckKind::Conjugation
            | CheckKind::Backlund => 1e-10,
            CheckKind::Nondegeneracy => 1e-8,
            CheckKind::Lax => 1e-9,
            CheckKind::EinsteinWeyl => 1e-7,
            CheckKind::SelfPropelled => 1e-8,
        }
    }

    /// Whether the check passes when its value is small (`max`) or large (`min`).
    pub fn criterion(self) -> Criterion {
        match self {
            CheckKind::Nondegeneracy => Criterion::Min,
            _ => Criterion::Max,
        }
    }
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    /// Pass when the largest value is at most the tolerance.
    Max,
    /// Pass when the smallest value is at least the tolerance.
    Min,
}

/// Constant-coefficient Bäcklund data. `transformed` is the expected partner
/// solution; `base`/`base_value` anchor the integrated transform.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BacklundConfig {
    pub lambda: [f64; 3],
    pub target: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transformed: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub base: Option<Point>,
    #[serde(default)]
    pub base_value: f64,
    #[serde(default = "default_steps")]
    pub steps: usize,
}

fn default_steps() -> usize {
    200
}

/// Self-propelled functions of the sl₂ web (first integral: the cross-ratio).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfPropelledConfig {
    /// Candidates tested by the `self_propelled` check.
    #[serde(default)]
    pub functions: Vec<String>,
    /// `f(λ)` written in `x1`, solved for by `solve-self-propelled`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Newton start as a function of the point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guess: Option<String>,
}

/// A validation failure at a JSON field path.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{path}: {message}")]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

/// Every problem found in a config, one per line.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("\n"))]
pub struct ConfigErrors(pub Vec<ConfigError>);

impl From<ConfigError> for ConfigErrors {
    fn from(e: ConfigError) -> Self {
        ConfigErrors(vec![e])
    }
}

/// A probe point: where it was requested and where functions are evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probe {
    pub point: Point,
    pub eval: Point,
}

pub struct BacklundJob {
    pub data: BacklundData,
    pub transformed: Option<ScalarField>,
    pub base: Point,
    pub base_value: f64,
    pub steps: usize,
}

pub struct SelfPropelledJob {
    pub functions: Vec<ScalarField>,
    pub target: Option<ScalarField>,
    pub guess: Option<ScalarField>,
}

/// A validated job.
pub struct Job {
    pub spec: Option<EquationSpec>,
    pub normal_form: Option<NormalFormSpec>,
    pub solution: Option<ScalarField>,
    /// The library case behind a builtin solution.
    pub case: Option<ExactSolutionCase>,
    pub bounds: Box3,
    pub margin: f64,
    pub probes: Vec<Probe>,
    pub excluded: usize,
    pub checks: Vec<(CheckKind, f64)>,
    pub backlund: Option<BacklundJob>,
    pub self_propelled: Option<SelfPropelledJob>,
}

/// Constants used by builtin tags when none are given.
pub const DEFAULT_CONSTANTS: [f64; 3] = [1.0, 2.0, -3.0];

struct Collector(Vec<ConfigError>);

impl Collector {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(ConfigError::new(path, message));
    }

    fn field(&mut self, path: &str, text: &str) -> Option<ScalarField> {
        match parse_field(text) {
            Ok(f) => Some(f),
            Err(e) => {
                self.push(path, e.to_string());
                None
            }
        }
    }

    fn tag(&mut self, path: &str, text: &str) -> Option<NormalFormTag> {
        match text.parse() {
            Ok(t) => Some(t),
            Err(e) => {
                self.push(path, format!("{e}"));
                None
            }
        }
    }
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<JobConfig, ConfigErrors> {
        serde_json::from_str(text).map_err(|e| {
            ConfigError::new(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
            .into()
        })
    }

    pub fn tolerance(&self, check: CheckKind) -> f64 {
        self.tolerances
            .get(&check)
            .copied()
            .unwrap_or(check.default_tolerance())
    }

    /// Resolves expressions, builtins and probe points. `seed` drives the
    /// random probe mode.
    pub fn validate(&self, seed: u64) -> Result<Job, ConfigErrors> {
        let mut errs = Collector(Vec::new());

        let (spec, normal_form) = match &self.equation {
            Some(eq) => resolve_equation(eq, &mut errs),
            None => (None, None),
        };

        let mut case: Option<ExactSolutionCase> = None;
        let solution = match &self.solution {
            Some(SolutionConfig::Expression(text)) => errs.field("solution.expression", text),
            Some(SolutionConfig::Builtin(name)) => {
                let found =
                    errs.tag("solution.builtin", name)
                        .and_then(|tag| match exact_solution(tag) {
                            Ok(c) => Some(c),
                            Err(_) => {
                                errs.push(
                                    "solution.builtin",
                                    format!(
                                    "no library solution for {tag} (available: A0, A1, B0, C0, D0)"
                                ),
                                );
                                None
                            }
                        });
                let f = found.as_ref().map(|c| c.solution.clone());
                case = found;
                f
            }
            None => None,
        };
        let spec = spec.or_else(|| {
            if self.equation.is_none() {
                case.as_ref().map(|c| c.spec.clone())
            } else {
                None
            }
        });

        let domain = &self.domain;
        let bounds = match Box3::new(domain.bounds.lo, domain.bounds.hi) {
            Ok(b) => Some(b),
            Err(e) => {
                errs.push("domain.box", e.to_string());
                None
            }
        };
        if domain.grid == 0 {
            errs.push("domain.grid", "must be at least 1");
        }
        if domain.random == Some(0) {
            errs.push("domain.random", "must be at least 1");
        }
        if !(domain.margin >= 0.0 && domain.margin.is_finite()) {
            errs.push("domain.margin", "must be finite and non-negative");
        }

        let mut checks = Vec::new();
        let mut positions = Vec::new();
        for (i, &check) in self.checks.iter().enumerate() {
            if checks.iter().any(|(c, _)| *c == check) {
                errs.push(format!("checks[{i}]"), format!("{check} listed twice"));
                continue;
            }
            checks.push((check, self.tolerance(check)));
            positions.push(i);
        }
        for (check, tol) in &self.tolerances {
            if !(*tol > 0.0 && tol.is_finite()) {
                errs.push(format!("tolerances.{check}"), "must be positive and finite");
            }
        }

        let backlund = self
            .backlund
            .as_ref()
            .and_then(|b| resolve_backlund(b, bounds, &mut errs));
        let self_propelled = self.self_propelled.as_ref().map(|s| SelfPropelledJob {
            functions: s
                .functions
                .iter()
                .enumerate()
                .filter_map(|(i, t)| errs.field(&format!("self_propelled.functions[{i}]"), t))
                .collect(),
            target: s
                .target
                .as_ref()
                .and_then(|t| errs.field("self_propelled.target", t)),
            guess: s
                .guess
                .as_ref()
                .and_then(|t| errs.field("self_propelled.guess", t)),
        });

        for (&i, (check, _)) in positions.iter().zip(&checks) {
            let path = format!("checks[{i}]");
            let needs_pair = matches!(
                check,
                CheckKind::Residual
                    | CheckKind::Nondegeneracy
                    | CheckKind::Lax
                    | CheckKind::EinsteinWeyl
            );
            if needs_pair && self.solution.is_none() {
                errs.push(&path, format!("{check} needs a solution"));
            }
            if needs_pair && self.equation.is_none() && self.solution.is_some() && case.is_none() {
                errs.push(&path, format!("{check} needs an equation"));
            }
            match check {
                CheckKind::EinsteinWeyl => {
                    if let Some(s) = &spec {
                        if !matches!(s, EquationSpec::A { .. } | EquationSpec::Hirota { .. }) {
                            errs.push(
                                &path,
                                format!("einstein_weyl applies to family A only, not {s}"),
                            );
                        }
                    }
                }
                CheckKind::Nijenhuis => {
                    if self.equation.is_none() && case.is_none() {
                        errs.push(&path, "nijenhuis needs an equation");
                    } else if let Some(Err(e)) = spec.as_ref().map(EquationSpec::operator) {
                        errs.push(&path, e.to_string());
                    }
                }
                CheckKind::Conjugation => {
                    if !matches!(self.equation, Some(EquationConfig::Builtin { .. })) {
                        errs.push(&path, "conjugation needs a builtin equation tag");
                    }
                }
                CheckKind::Backlund => {
                    if backlund.as_ref().is_none_or(|b| b.transformed.is_none()) {
                        errs.push(&path, "backlund needs backlund.transformed");
                    }
                    if self.solution.is_none() {
                        errs.push(&path, "backlund needs a solution");
                    }
                }
                CheckKind::SelfPropelled
                    if self
                        .self_propelled
                        .as_ref()
                        .is_none_or(|s| s.functions.is_empty()) =>
                {
                    errs.push(&path, "self_propelled needs self_propelled.functions");
                }
                _ => {}
            }
        }

        if !errs.0.is_empty() {
            return Err(ConfigErrors(errs.0));
        }
        let bounds = bounds.expect("validated box");
        let raw = match domain.random {
            Some(n) => bounds
                .random_points(seed, n, |_| true)
                .map_err(|e| ConfigError::new("domain.random", e.to_string()))?,
            None => bounds.grid(domain.grid),
        };
        let mut probes = Vec::with_capacity(raw.len());
        let mut excluded = 0;
        for point in raw {
            match probe(point, case.as_ref(), spec.as_ref(), domain.margin) {
                Ok(p) => probes.push(p),
                Err(reason) => {
                    log::debug!("excluding {point:?}: {reason}");
                    excluded += 1;
                }
            }
        }
        Ok(Job {
            spec,
            normal_form,
            solution,
            case,
            bounds,
            margin: domain.margin,
            probes,
            excluded,
            checks,
            backlund,
            self_propelled,
        })
    }
}

/// Maps `point` into the evaluation chart, rejecting points outside a
/// library domain or within `margin` of a spectral collision.
pub fn probe(
    point: Point,
    case: Option<&ExactSolutionCase>,
    spec: Option<&EquationSpec>,
    margin: f64,
) -> Result<Probe, String> {
    let eval = match case {
        Some(c) => c.chart_point(point).map_err(|e| e.to_string())?,
        None => point,
    };
    if spec.is_some_and(|s| near_spectral_collision(s, eval, margin)) {
        return Err("spectral values within margin".into());
    }
    Ok(Probe { point, eval })
}

fn near_spectral_collision(spec: &EquationSpec, p: Point, margin: f64) -> bool {
    let Ok(values) = spec.spectral_values(p) else {
        return false;
    };
    values
        .iter()
        .enumerate()
        .any(|(i, a)| values[i + 1..].iter().any(|b| (a.0 - b.0).abs() < margin))
}

fn resolve_equation(
    eq: &EquationConfig,
    errs: &mut Collector,
) -> (Option<EquationSpec>, Option<NormalFormSpec>) {
    let EquationConfig::Builtin { tag, constants } = eq else {
        return (resolve_family(eq, errs), None);
    };
    let Some(tag) = errs.tag("equation.tag", tag) else {
        return (None, None);
    };
    let c = constants.unwrap_or(DEFAULT_CONSTANTS);
    let nf = match NormalFormSpec::tabulated(tag, c) {
        Ok(nf) => Some(nf),
        Err(e) => {
            errs.push("equation.constants", e.to_string());
            None
        }
    };
    (Some(EquationSpec::from_tag(tag, c)), nf)
}

fn resolve_family(eq: &EquationConfig, errs: &mut Collector) -> Option<EquationSpec> {
    Some(match eq {
        EquationConfig::A { lambda } => {
            let [a, b, c] =
                [0, 1, 2].map(|i| errs.field(&format!("equation.lambda[{i}]"), &lambda[i]));
            EquationSpec::A {
                lambda: [a?, b?, c?],
            }
        }
        EquationConfig::B { lambda2, lambda3 } => {
            let l2 = errs.field("equation.lambda2", lambda2);
            let l3 = errs.field("equation.lambda3", lambda3);
            EquationSpec::B {
                lambda2: l2?,
                lambda3: l3?,
            }
        }
        EquationConfig::C { lambda3 } => EquationSpec::C {
            lambda3: errs.field("equation.lambda3", lambda3)?,
        },
        EquationConfig::D { a, b, lambda3 } => {
            let a = errs.field("equation.a", a);
            let b = errs.field("equation.b", b);
            let l3 = errs.field("equation.lambda3", lambda3);
            EquationSpec::D {
                a: a?,
                b: b?,
                lambda3: l3?,
            }
        }
        EquationConfig::CNormal => EquationSpec::CNormal,
        EquationConfig::HyperCr => EquationSpec::HyperCr,
        EquationConfig::Hirota { a, b, c } => match EquationSpec::hirota(*a, *b, *c) {
            Ok(s) => s,
            Err(e) => {
                errs.push("equation", e.to_string());
                return None;
            }
        },
        EquationConfig::Builtin { .. } => unreachable!("handled by resolve_equation"),
    })
}

fn resolve_backlund(
    b: &BacklundConfig,
    bounds: Option<Box3>,
    errs: &mut Collector,
) -> Option<BacklundJob> {
    let transformed = b
        .transformed
        .as_ref()
        .and_then(|t| errs.field("backlund.transformed", t));
    if b.steps == 0 {
        errs.push("backlund.steps", "must be at least 1");
    }
    let data = match BacklundData::constant(b.lambda, b.target) {
        Ok(d) => d,
        Err(e) => {
            errs.push("backlund", e.to_string());
            return None;
        }
    };
    let base = b
        .base
        .or_else(|| bounds.map(|bx| [0, 1, 2].map(|k| 0.5 * (bx.lo[k] + bx.hi[k]))))?;
    Some(BacklundJob {
        data,
        transformed,
        base,
        base_value: b.base_value,
        steps: b.steps,
    })
}
