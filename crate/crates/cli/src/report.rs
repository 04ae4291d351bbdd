//! The versioned JSON report.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use veronese_core::Point;

use crate::config::{Criterion, JobConfig};

pub const SCHEMA: &str = "veronese-report/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub config: JobConfig,
    pub points: PointSummary,
    pub checks: Vec<CheckReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Sample>,
    pub status: Status,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSummary {
    pub requested: usize,
    /// Outside a library domain or within the spectral margin.
    pub excluded: usize,
    pub probed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub criterion: Criterion,
    pub tolerance: f64,
    /// The largest value for `max` checks, the smallest for `min` checks.
    pub worst_value: Option<f64>,
    pub worst_point: Option<Point>,
    pub passed: bool,
    pub evaluated: usize,
    pub skipped: Vec<Skip>,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Skip {
    pub point: Point,
    /// `"skipped: <reason>"`.
    pub status: String,
}

/// A computed value at a probe point (transforms and solved functions).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub point: Point,
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// More than half of the points of some check were skipped.
    Skipped,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Skipped => 3,
        }
    }
}

impl CheckReport {
    /// Reduces per-point outcomes to the worst value and a verdict.
    pub fn from_outcomes(
        check: &str,
        criterion: Criterion,
        tolerance: f64,
        outcomes: &[(Point, Result<f64, String>)],
        runtime_ms: f64,
    ) -> CheckReport {
        let mut worst: Option<(f64, Point)> = None;
        let mut skipped = Vec::new();
        let mut nonfinite = false;
        for (p, r) in outcomes {
            match r {
                Ok(v) if v.is_finite() => {
                    let worse = match (worst, criterion) {
                        (None, _) => true,
                        (Some((w, _)), Criterion::Max) => *v > w,
                        (Some((w, _)), Criterion::Min) => *v < w,
                    };
                    if worse {
                        worst = Some((*v, *p));
                    }
                }
                Ok(v) => {
                    nonfinite = true;
                    skipped.push(Skip {
                        point: *p,
                        status: format!("skipped: non-finite value {v}"),
                    });
                }
                Err(reason) => skipped.push(Skip {
                    point: *p,
                    status: format!("skipped: {reason}"),
                }),
            }
        }
        let passed = !nonfinite
            && match (worst, criterion) {
                (None, _) => false,
                (Some((w, _)), Criterion::Max) => w <= tolerance,
                (Some((w, _)), Criterion::Min) => w >= tolerance,
            };
        CheckReport {
            check: check.to_string(),
            criterion,
            tolerance,
            worst_value: worst.map(|w| w.0),
            worst_point: worst.map(|w| w.1),
            passed,
            evaluated: outcomes.len() - skipped.len(),
            skipped,
            runtime_ms,
        }
    }

    pub fn mostly_skipped(&self) -> bool {
        let total = self.evaluated + self.skipped.len();
        total == 0 || 2 * self.skipped.len() > total
    }
}

/// `Skipped` if any check skipped more than half its points, else `Fail` if
/// any check failed.
pub fn overall_status(checks: &[CheckReport]) -> Status {
    if checks.iter().any(CheckReport::mostly_skipped) {
        Status::Skipped
    } else if checks.iter().all(|c| c.passed) {
        Status::Pass
    } else {
        Status::Fail
    }
}

/// JSON Schema of [`Report`].
pub fn schema() -> Value {
    let point = json!({"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3});
    let nullable_number = json!({"type": ["number", "null"]});
    json!({
        "$schema": "https://json-schema.org/draft/2020-12/schema",
        "$id": SCHEMA,
        "title": "Veronese web verification report",
        "type": "object",
        "required": ["schema", "command", "seed", "config", "points", "checks", "status", "runtime_ms"],
        "properties": {
            "schema": {"const": SCHEMA},
            "command": {"enum": ["verify", "backlund", "solve-self-propelled"]},
            "seed": {"type": "integer", "minimum": 0},
            "config": {"type": "object", "description": "the job configuration as parsed"},
            "points": {
                "type": "object",
                "required": ["requested", "excluded", "probed"],
                "properties": {
                    "requested": {"type": "integer"},
                    "excluded": {"type": "integer"},
                    "probed": {"type": "integer"}
                }
            },
            "checks": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["check", "criterion", "tolerance", "worst_value", "worst_point",
                                 "passed", "evaluated", "skipped", "runtime_ms"],
                    "properties": {
                        "check": {"type": "string"},
                        "criterion": {"enum": ["max", "min"]},
                        "tolerance": {"type": "number"},
                        "worst_value": nullable_number,
                        "worst_point": {"oneOf": [point, {"type": "null"}]},
                        "passed": {"type": "boolean"},
                        "evaluated": {"type": "integer"},
                        "skipped": {
                            "type": "array",
                            "items": {
                                "type": "object",
                                "required": ["point", "status"],
                                "properties": {"point": point, "status": {"type": "string", "pattern": "^skipped: "}}
                            }
                        },
                        "runtime_ms": {"type": "number"}
                    }
                }
            },
            "samples": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["point", "value"],
                    "properties": {"point": point, "value": nullable_number, "status": {"type": "string"}}
                }
            },
            "status": {"enum": ["pass", "fail", "skipped"]},
            "runtime_ms": {"type": "number"}
        }
    })
}
