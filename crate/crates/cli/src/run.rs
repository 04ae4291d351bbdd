//! The three batch commands.

use std::time::Instant;

use rayon::prelude::*;
use rayon::ThreadPool;
use thiserror::Error;
use veronese_core::backlund::integrate_transform;
use veronese_core::solutions::{
    self_propelled_field, self_propelled_residual, self_propelled_solve, sl2_frame, CrossRatio,
};
use veronese_core::Point;

use crate::checks::evaluate;
use crate::config::{CheckKind, ConfigError, ConfigErrors, Criterion, Job, JobConfig, Probe};
use crate::report::{overall_status, CheckReport, PointSummary, Report, Sample, SCHEMA};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid config:\n{0}")]
    Config(#[from] ConfigErrors),
    #[error("cannot start worker threads: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub seed: u64,
    /// Worker threads; `None` uses one per core.
    pub jobs: Option<usize>,
}

impl RunOptions {
    fn pool(&self) -> Result<ThreadPool, RunError> {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.jobs {
            b = b.num_threads(n);
        }
        Ok(b.build()?)
    }
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn fan_out<T: Send>(
    pool: &ThreadPool,
    probes: &[Probe],
    f: impl Fn(&Probe) -> T + Sync + Send,
) -> Vec<T> {
    pool.install(|| probes.par_iter().map(f).collect())
}

fn run_check(
    pool: &ThreadPool,
    probes: &[Probe],
    check: &str,
    criterion: Criterion,
    tolerance: f64,
    f: impl Fn(Point) -> Result<f64, String> + Sync + Send,
) -> CheckReport {
    let start = Instant::now();
    let outcomes = fan_out(pool, probes, |p| (p.point, f(p.eval)));
    let report =
        CheckReport::from_outcomes(check, criterion, tolerance, &outcomes, elapsed_ms(start));
    log::info!(
        "{check}: worst {:?} over {} points, {} skipped",
        report.worst_value,
        report.evaluated,
        report.skipped.len()
    );
    report
}

fn assemble(
    command: &str,
    config: &JobConfig,
    opts: RunOptions,
    job: &Job,
    checks: Vec<CheckReport>,
    samples: Vec<Sample>,
    start: Instant,
) -> Report {
    Report {
        schema: SCHEMA.to_string(),
        command: command.to_string(),
        seed: opts.seed,
        config: config.clone(),
        points: PointSummary {
            requested: job.probes.len() + job.excluded,
            excluded: job.excluded,
            probed: job.probes.len(),
        },
        status: overall_status(&checks),
        checks,
        samples,
        runtime_ms: elapsed_ms(start),
    }
}

/// Runs every configured check over the probe points.
pub fn verify(config: &JobConfig, opts: RunOptions) -> Result<Report, RunError> {
    let start = Instant::now();
    if config.checks.is_empty() {
        return Err(ConfigErrors::from(ConfigError::new(
            "checks",
            "at least one check is required",
        ))
        .into());
    }
    let job = config.validate(opts.seed)?;
    let pool = opts.pool()?;
    let checks = job
        .checks
        .iter()
        .map(|&(check, tol)| {
            run_check(
                &pool,
                &job.probes,
                check.name(),
                check.criterion(),
                tol,
                |q| evaluate(&job, check, q),
            )
        })
        .collect();
    Ok(assemble(
        "verify",
        config,
        opts,
        &job,
        checks,
        Vec::new(),
        start,
    ))
}

fn samples_from(outcomes: &[(Point, Result<f64, String>)]) -> Vec<Sample> {
    outcomes
        .iter()
        .map(|(p, r)| match r {
            Ok(v) => Sample {
                point: *p,
                value: Some(*v),
                status: None,
            },
            Err(e) => Sample {
                point: *p,
                value: None,
                status: Some(format!("skipped: {e}")),
            },
        })
        .collect()
}

/// Integrates the Bäcklund transform of the solution from `backlund.base` to
/// every probe point. With `backlund.transformed` the result is compared
/// against that function.
pub fn backlund(config: &JobConfig, opts: RunOptions) -> Result<Report, RunError> {
    let start = Instant::now();
    let mut missing = Vec::new();
    if config.backlund.is_none() {
        missing.push(ConfigError::new(
            "backlund",
            "the backlund command needs a backlund section",
        ));
    }
    if config.solution.is_none() {
        missing.push(ConfigError::new(
            "solution",
            "the backlund command needs a solution",
        ));
    }
    if !missing.is_empty() {
        return Err(ConfigErrors(missing).into());
    }
    let job = config.validate(opts.seed)?;
    let pool = opts.pool()?;
    let b = job.backlund.as_ref().expect("validated backlund section");
    let f = job.solution.as_ref().expect("validated solution");

    let t = Instant::now();
    let outcomes = fan_out(&pool, &job.probes, |p| {
        let v = integrate_transform(&b.data, f, b.base, p.eval, b.steps).map(|i| b.base_value + i);
        (p.point, v.map_err(|e| e.to_string()))
    });
    let integration_ms = elapsed_ms(t);
    let mut checks = Vec::new();
    match &b.transformed {
        Some(big) => {
            let anchor = big.value(b.base).map_err(|e| e.to_string());
            let compared: Vec<_> = outcomes
                .iter()
                .zip(&job.probes)
                .map(|((p, v), probe)| {
                    let d = match (v, &anchor) {
                        (Ok(v), Ok(a)) => big
                            .value(probe.eval)
                            .map(|fp| (v - b.base_value - (fp - a)).abs())
                            .map_err(|e| e.to_string()),
                        (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                    };
                    (*p, d)
                })
                .collect();
            checks.push(CheckReport::from_outcomes(
                CheckKind::Backlund.name(),
                Criterion::Max,
                config.tolerance(CheckKind::Backlund),
                &compared,
                integration_ms,
            ));
        }
        None => {
            let reached: Vec<_> = outcomes
                .iter()
                .map(|(p, v)| (*p, v.as_ref().map(|_| 0.0).map_err(Clone::clone)))
                .collect();
            checks.push(CheckReport::from_outcomes(
                "integration",
                Criterion::Max,
                f64::INFINITY,
                &reached,
                integration_ms,
            ));
        }
    }
    Ok(assemble(
        "backlund",
        config,
        opts,
        &job,
        checks,
        samples_from(&outcomes),
        start,
    ))
}

/// Solves `F(x, φ) = f(φ)` for the cross-ratio first integral at every probe
/// point and checks the self-propelled system of the implicit solution.
pub fn solve_self_propelled(config: &JobConfig, opts: RunOptions) -> Result<Report, RunError> {
    let start = Instant::now();
    if config
        .self_propelled
        .as_ref()
        .is_none_or(|s| s.target.is_none())
    {
        return Err(ConfigErrors::from(ConfigError::new(
            "self_propelled.target",
            "solve-self-propelled needs a target function",
        ))
        .into());
    }
    let job = config.validate(opts.seed)?;
    let pool = opts.pool()?;
    let s = job
        .self_propelled
        .as_ref()
        .expect("validated self_propelled section");
    let target = s.target.clone().expect("validated target");
    let guess = s
        .guess
        .clone()
        .unwrap_or_else(|| veronese_core::ScalarField::coordinate(0));

    let t = Instant::now();
    let outcomes = fan_out(&pool, &job.probes, |p| {
        let v = guess
            .value(p.eval)
            .and_then(|g| self_propelled_solve(&CrossRatio, &target, p.eval, g));
        (p.point, v.map_err(|e| e.to_string()))
    });
    let solve_ms = elapsed_ms(t);

    let start_at = guess.clone();
    let field = self_propelled_field(CrossRatio, target, move |q: Point| {
        start_at.value(q).unwrap_or(q[0])
    });
    let frame = sl2_frame();
    let system = run_check(
        &pool,
        &job.probes,
        CheckKind::SelfPropelled.name(),
        Criterion::Max,
        config.tolerance(CheckKind::SelfPropelled),
        |q| {
            self_propelled_residual(&frame, &field, q)
                .map(|r| r[0].abs().max(r[1].abs()))
                .map_err(|e| e.to_string())
        },
    );
    let solved: Vec<_> = outcomes
        .iter()
        .map(|(p, v)| (*p, v.as_ref().map(|_| 0.0).map_err(Clone::clone)))
        .collect();
    let checks = vec![
        CheckReport::from_outcomes("newton", Criterion::Max, f64::INFINITY, &solved, solve_ms),
        system,
    ];
    Ok(assemble(
        "solve-self-propelled",
        config,
        opts,
        &job,
        checks,
        samples_from(&outcomes),
        start,
    ))
}
