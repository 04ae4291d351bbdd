//! Scalar root finding: Newton's method safeguarded by bisection.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonOptions {
    pub max_iterations: usize,
    /// Convergence threshold on `|g(x)|`.
    pub tolerance: f64,
    /// Below this `|g'(x)|` at the root the derivative counts as degenerate.
    pub min_derivative: f64,
}

impl Default for NewtonOptions {
    fn default() -> Self {
        NewtonOptions {
            max_iterations: 100,
            tolerance: 1e-12,
            min_derivative: 1e-14,
        }
    }
}

/// Solves `g(x) = 0` starting from `guess`; `g` returns `(g(x), g'(x))`.
///
/// Newton steps are taken while they stay inside the current sign-change
/// bracket (once one is known) and reduce the defect; otherwise the step is
/// replaced by bisection of the bracket, or halved toward the last good
/// iterate when no bracket exists yet. Evaluation failures (poles) are
/// treated the same way as a rejected step.
pub fn safeguarded_newton(
    g: impl Fn(f64) -> Result<(f64, f64)>,
    guess: f64,
    opts: NewtonOptions,
) -> Result<f64> {
    let (mut x, (mut gx, mut dx)) = (guess, g(guess)?);
    let mut bracket: Option<(f64, f64)> = None;
    for _ in 0..opts.max_iterations {
        if !gx.is_finite() {
            return Err(Error::Domain {
                op: "root function",
                value: x,
            });
        }
        if gx.abs() < opts.tolerance {
            if dx.abs() < opts.min_derivative {
                return Err(Error::DerivativeDegenerate(dx));
            }
            return Ok(x);
        }
        let newton = if dx != 0.0 { x - gx / dx } else { f64::NAN };
        let inside = |t: f64| match bracket {
            Some((a, b)) => t > a.min(b) && t < a.max(b),
            None => true,
        };
        let mut candidate = newton;
        let mut accepted = None;
        if candidate.is_finite() && inside(candidate) {
            // Damp toward x while the step overshoots into a pole or grows the defect.
            for _ in 0..30 {
                match g(candidate) {
                    Ok((gc, dc))
                        if gc.is_finite() && (gc.abs() < gx.abs() || bracket.is_some()) =>
                    {
                        accepted = Some((candidate, gc, dc));
                        break;
                    }
                    _ => candidate = x + 0.5 * (candidate - x),
                }
            }
        }
        let (nx, ngx, ndx) = match accepted {
            Some(step) => step,
            None => match bracket {
                Some((a, b)) => {
                    let mid = 0.5 * (a + b);
                    let (gm, dm) = g(mid)?;
                    (mid, gm, dm)
                }
                None => {
                    return Err(Error::NoConvergence {
                        iterations: opts.max_iterations,
                        defect: gx.abs(),
                    })
                }
            },
        };
        bracket = match bracket {
            Some((a, b)) => {
                // Keep the endpoint whose residual sign differs from the new point.
                let ga = g(a).map(|v| v.0).unwrap_or(f64::NAN);
                if ga.signum() != ngx.signum() {
                    Some((a, nx))
                } else {
                    Some((nx, b))
                }
            }
            None if ngx.signum() != gx.signum() => Some((x, nx)),
            None => None,
        };
        x = nx;
        gx = ngx;
        dx = ndx;
    }
    if gx.abs() < opts.tolerance {
        return Ok(x);
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iterations,
        defect: gx.abs(),
    })
}
