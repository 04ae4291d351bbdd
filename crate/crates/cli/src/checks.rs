//! Pointwise evaluation of each check.

use veronese_core::backlund::pair_residual;
use veronese_core::einstein_weyl::{assemble_weyl_a, einstein_weyl_residual};
use veronese_core::nijenhuis::{frobenius_conjugation_residual, nijenhuis_tensor};
use veronese_core::solutions::{self_propelled_residual, sl2_frame};
use veronese_core::webs::{
    lax_closure_residual, nondegeneracy_det, pde_residual, EquationSpec, LAMBDA_GRID,
};
use veronese_core::{Point, ScalarField, VectorField};

use crate::config::{CheckKind, Job};

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |a, b| a.max(b.abs()))
}

fn text<T>(r: veronese_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn required<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T, String> {
    v.as_ref().ok_or_else(|| format!("no {what} configured"))
}

/// The value of `check` at the evaluation point `q`: an absolute residual,
/// or `|det|` for nondegeneracy.
pub fn evaluate(job: &Job, check: CheckKind, q: Point) -> Result<f64, String> {
    let spec = || required(&job.spec, "equation");
    let solution = || required(&job.solution, "solution");
    match check {
        CheckKind::Residual => Ok(text(pde_residual(spec()?, solution()?, q))?.abs()),
        CheckKind::Nondegeneracy => Ok(text(nondegeneracy_det(spec()?, solution()?, q))?.abs()),
        CheckKind::Lax => {
            let (spec, f) = (spec()?, solution()?);
            let mut worst = 0.0f64;
            for l in LAMBDA_GRID {
                worst = worst.max(text(lax_closure_residual(spec, f, q, l))?.abs());
            }
            Ok(worst)
        }
        CheckKind::EinsteinWeyl => {
            let lambda: [ScalarField; 3] = match spec()? {
                EquationSpec::A { lambda } => lambda.clone(),
                EquationSpec::Hirota { a, b, c } => {
                    EquationSpec::hirota_lambdas(*a, *b, *c).map(ScalarField::constant)
                }
                other => return Err(format!("einstein_weyl does not apply to {other}")),
            };
            text(einstein_weyl_residual(
                &assemble_weyl_a(&lambda, solution()?),
                q,
            ))
        }
        CheckKind::Nijenhuis => {
            let j = text(spec()?.operator())?;
            let d = [0, 1, 2].map(VectorField::coordinate);
            let mut worst = 0.0f64;
            for (a, b) in [(0, 1), (0, 2), (1, 2)] {
                worst = worst.max(max_abs(&text(nijenhuis_tensor(&j, &d[a], &d[b], q))?));
            }
            Ok(worst)
        }
        CheckKind::Conjugation => text(frobenius_conjugation_residual(
            required(&job.normal_form, "builtin tag")?,
            q,
        )),
        CheckKind::Backlund => {
            let b = required(&job.backlund, "backlund section")?;
            let big = required(&b.transformed, "backlund.transformed")?;
            Ok(max_abs(&text(pair_residual(&b.data, solution()?, big, q))?))
        }
        CheckKind::SelfPropelled => {
            let s = required(&job.self_propelled, "self_propelled section")?;
            let frame = sl2_frame();
            let mut worst = 0.0f64;
            for f in &s.functions {
                worst = worst.max(max_abs(&text(self_propelled_residual(&frame, f, q))?));
            }
            Ok(worst)
        }
    }
}
