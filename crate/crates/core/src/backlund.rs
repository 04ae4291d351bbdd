//! Bäcklund transformations between equations of type A.
//!
//! Two zero-mean eigenvalue triples `λ` and `Λ` define ratios `φ_i = λ_i/Λ_i`.
//! For a solution `f` of the `λ`-equation the one-form
//! `ω = φ₁f₁dx₁ + φ₂f₂dx₂ + φ₃f₃dx₃` is integrable, and any first integral `F`
//! of `ker ω` solves the `Λ`-equation.

use crate::fields::{frobenius_residual_scaled, OneFormField, Point, ScalarField};
use crate::webs::EquationSpec;
use crate::{Error, Result};

#[derive(Clone, Debug)]
pub struct BacklundData {
    pub source: [ScalarField; 3],
    pub target: [ScalarField; 3],
    /// Constants subtracted from the source and target triples to make them zero-mean.
    pub shifts: (f64, f64),
    pub caveats: Vec<String>,
}

fn check_distinct(t: [f64; 3], name: &str) -> Result<()> {
    if t[0] == t[1] || t[0] == t[2] || t[1] == t[2] || t.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!(
            "{name} must be finite and pairwise different, got {t:?}"
        )));
    }
    Ok(())
}

impl BacklundData {
    /// Constant triples; each is shifted to zero mean and the shifts are reported.
    pub fn constant(lambda: [f64; 3], big: [f64; 3]) -> Result<Self> {
        check_distinct(lambda, "λ")?;
        check_distinct(big, "Λ")?;
        let (ms, mt) = (
            lambda.iter().sum::<f64>() / 3.0,
            big.iter().sum::<f64>() / 3.0,
        );
        let l = lambda.map(|v| v - ms);
        let b = big.map(|v| v - mt);
        if let Some(i) = b.iter().position(|v| *v == 0.0) {
            return Err(Error::invalid(format!(
                "Λ{} vanishes after the zero-mean shift, so φ{} is undefined",
                i + 1,
                i + 1
            )));
        }
        let caveats = l
            .iter()
            .enumerate()
            .filter(|(_, v)| **v == 0.0)
            .map(|(i, _)| {
                format!(
                    "λ{0} vanishes after the zero-mean shift, so φ{0} ≡ 0 and the transform is constant along x{0}",
                    i + 1
                )
            })
            .collect();
        Ok(BacklundData {
            source: l.map(ScalarField::constant),
            target: b.map(ScalarField::constant),
            shifts: (ms, mt),
            caveats,
        })
    }

    /// Functional triples, which must already be zero-mean. The hypotheses are
    /// checked at the probe points: zero mean, nonvanishing entries, and
    /// `λ_j/Λ_j` depending on `x_j` only.
    pub fn functional(
        source: [ScalarField; 3],
        target: [ScalarField; 3],
        probes: &[Point],
    ) -> Result<Self> {
        let data = BacklundData {
            source,
            target,
            shifts: (0.0, 0.0),
            caveats: Vec::new(),
        };
        for &p in probes {
            for (name, t) in [("λ", &data.source), ("Λ", &data.target)] {
                let v = [t[0].value(p)?, t[1].value(p)?, t[2].value(p)?];
                let scale = v.iter().fold(1.0f64, |a, b| a.max(b.abs()));
                if (v[0] + v[1] + v[2]).abs() > 1e-12 * scale {
                    return Err(Error::invalid(format!("{name} is not zero-mean at {p:?}")));
                }
                if v.contains(&0.0) {
                    return Err(Error::invalid(format!(
                        "{name} has a vanishing entry at {p:?}"
                    )));
                }
                check_distinct(v, name)?;
            }
            for j in 0..3 {
                let g = data.ratio(j).gradient(p)?;
                if (0..3).any(|i| i != j && g[i].abs() > 1e-10) {
                    return Err(Error::invalid(format!(
                        "λ{0}/Λ{0} must depend on x{0} only (violated at {p:?})",
                        j + 1
                    )));
                }
            }
        }
        Ok(data)
    }

    /// `φ_i = λ_i/Λ_i`.
    pub fn ratio(&self, i: usize) -> ScalarField {
        self.source[i].try_div(&self.target[i])
    }

    /// The transformation in the opposite direction.
    pub fn inverse(&self) -> BacklundData {
        BacklundData {
            source: self.target.clone(),
            target: self.source.clone(),
            shifts: (self.shifts.1, self.shifts.0),
            caveats: self.caveats.clone(),
        }
    }

    pub fn source_spec(&self) -> EquationSpec {
        EquationSpec::A {
            lambda: self.source.clone(),
        }
    }

    pub fn target_spec(&self) -> EquationSpec {
        EquationSpec::A {
            lambda: self.target.clone(),
        }
    }

    /// `ω = Σ φ_i f_i dx_i`, whose first integrals are the transforms of `f`.
    pub fn omega(&self, f: &ScalarField) -> OneFormField {
        OneFormField([0, 1, 2].map(|i| &self.ratio(i) * &f.partial(i)))
    }
}

/// `(λ₁Λ₂f₁F₂ − λ₂Λ₁f₂F₁, λ₁Λ₃f₁F₃ − λ₃Λ₁f₃F₁)` at `p`.
pub fn pair_residual(
    data: &BacklundData,
    f: &ScalarField,
    big_f: &ScalarField,
    p: Point,
) -> Result<[f64; 2]> {
    let l = [
        data.source[0].value(p)?,
        data.source[1].value(p)?,
        data.source[2].value(p)?,
    ];
    let m = [
        data.target[0].value(p)?,
        data.target[1].value(p)?,
        data.target[2].value(p)?,
    ];
    let (df, dg) = (f.gradient(p)?, big_f.gradient(p)?);
    let term = |j: usize| l[0] * m[j] * df[0] * dg[j] - l[j] * m[0] * df[j] * dg[0];
    Ok([term(1), term(2)])
}

/// Tolerance on the scale-free Frobenius residual of `ω` before tracing.
pub const INTEGRABILITY_GATE: f64 = 1e-8;

/// The value at `p` of the first integral `F` of `ker ω` with `F(base) = 0`.
///
/// With `w = ω(base)` and `v = w/|w|²`, the transversal is the line
/// `base + t v`. Writing `p − base = t_p v + q` with `q ⊥ v`, the leaf through
/// `p` is followed along `x(s) = base + t(s) v + (1 − s) q`, where
/// `t' = ω(q)/ω(v)` keeps `x'` inside `ker ω`; `steps` fourth-order
/// Runge–Kutta steps reach the transversal at `t(1)`. The result is
/// `∫₀^{t(1)} ω(base + τv)(v) dτ` by composite Simpson quadrature, which equals
/// `t(1)` when `ω` is constant.
pub fn integrate_transform(
    data: &BacklundData,
    f: &ScalarField,
    base: Point,
    p: Point,
    steps: usize,
) -> Result<f64> {
    let steps = steps.max(2);
    let omega = data.omega(f);
    for q in [base, p] {
        let r = frobenius_residual_scaled(&omega, q)?;
        if r.abs() > INTEGRABILITY_GATE {
            return Err(Error::invalid(format!(
                "ω is not integrable at {q:?} (scaled residual {r:e}); f does not solve the source equation"
            )));
        }
    }
    let trace = |e: Error| Error::LeafTracing(e.to_string());
    let w = omega.value(base)?;
    let w2 = w[0] * w[0] + w[1] * w[1] + w[2] * w[2];
    if w2 == 0.0 {
        return Err(Error::RankCollapse {
            what: "ω",
            point: base,
        });
    }
    let v = w.map(|c| c / w2);
    let d = [p[0] - base[0], p[1] - base[1], p[2] - base[2]];
    let t_p = d[0] * w[0] + d[1] * w[1] + d[2] * w[2];
    let q = [0, 1, 2].map(|k| d[k] - t_p * v[k]);
    let at = |t: f64, s: f64| [0, 1, 2].map(|k| base[k] + t * v[k] + (1.0 - s) * q[k]);
    let dot = |a: [f64; 3], b: [f64; 3]| a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    let slope = |t: f64, s: f64| -> Result<f64> {
        let x = at(t, s);
        let o = omega.value(x).map_err(trace)?;
        let ov = dot(o, v);
        if ov.abs() < 1e-12 * (dot(o, o).sqrt() * dot(v, v).sqrt()).max(f64::MIN_POSITIVE)
            || ov == 0.0
        {
            return Err(Error::RankCollapse {
                what: "ω along the transversal direction",
                point: x,
            });
        }
        Ok(dot(o, q) / ov)
    };
    let h = 1.0 / steps as f64;
    let mut t = t_p;
    for i in 0..steps {
        let s = i as f64 * h;
        let k1 = slope(t, s)?;
        let k2 = slope(t + 0.5 * h * k1, s + 0.5 * h)?;
        let k3 = slope(t + 0.5 * h * k2, s + 0.5 * h)?;
        let k4 = slope(t + h * k3, s + h)?;
        t += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    }
    let n = if steps.is_multiple_of(2) {
        steps
    } else {
        steps + 1
    };
    let dt = t / n as f64;
    let integrand = |tau: f64| -> Result<f64> {
        let x = [0, 1, 2].map(|k| base[k] + tau * v[k]);
        Ok(dot(omega.value(x).map_err(trace)?, v))
    };
    let mut sum = integrand(0.0)? + integrand(t)?;
    for i in 1..n {
        let weight = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += weight * integrand(i as f64 * dt)?;
    }
    Ok(sum * dt / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::webs::pde_residual;

    fn x(k: usize) -> ScalarField {
        ScalarField::coordinate(k)
    }

    fn worked() -> BacklundData {
        BacklundData::constant([1.0, 2.0, -3.0], [3.0, -1.0, -2.0]).unwrap()
    }

    fn linear() -> ScalarField {
        &(&x(0) + &x(1)) + &x(2)
    }

    #[test]
    fn worked_pair() {
        let data = worked();
        assert_eq!(data.shifts, (0.0, 0.0));
        let big = &(&(&x(0) * (1.0 / 3.0)) - &(&x(1) * 2.0)) + &(&x(2) * 1.5);
        let r = pair_residual(&data, &linear(), &big, [0.4, 1.0, -2.0]).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-12));
        assert_eq!(
            pde_residual(&data.source_spec(), &linear(), [1.0; 3]).unwrap(),
            0.0
        );
        assert_eq!(
            pde_residual(&data.target_spec(), &big, [1.0; 3]).unwrap(),
            0.0
        );
        let r = pair_residual(&data, &linear(), &linear(), [0.4, 1.0, -2.0]).unwrap();
        assert!(r.iter().any(|v| v.abs() > 1.0));
    }

    #[test]
    fn identity_pair() {
        let data = BacklundData::constant([1.0, 2.0, -3.0], [1.0, 2.0, -3.0]).unwrap();
        let f = &(&x(0) * &x(1)) + &x(2).exp();
        assert_eq!(
            pair_residual(&data, &f, &f, [0.3, 0.2, 0.1]).unwrap(),
            [0.0, 0.0]
        );
    }

    #[test]
    fn line_integral_value() {
        let data = worked();
        let v = integrate_transform(&data, &linear(), [0.0; 3], [1.0; 3], 200).unwrap();
        assert!((v + 1.0 / 6.0).abs() < 1e-12, "{v}");
        assert_eq!(
            integrate_transform(&data, &linear(), [0.0; 3], [0.0; 3], 10).unwrap(),
            0.0
        );
    }

    #[test]
    fn shifts_and_caveats() {
        let d = BacklundData::constant([2.0, 3.0, -2.0], [4.0, 1.0, 0.0]).unwrap();
        assert_eq!(d.shifts.0, 1.0);
        assert_eq!(d.caveats.len(), 0);
        let d = BacklundData::constant([1.0, 2.0, 3.0], [1.0, 5.0, 9.0]);
        assert!(d.is_err());
        let d = BacklundData::constant([1.0, 2.0, 3.0], [1.0, 4.0, 10.0]).unwrap();
        assert_eq!(d.caveats.len(), 1);
        assert!(BacklundData::constant([1.0, 1.0, 3.0], [1.0, 4.0, 10.0]).is_err());
    }

    #[test]
    fn functional_hypotheses() {
        let l = [x(0), &x(1) * 2.0, &(&x(0) * -1.0) - &(&x(1) * 2.0)];
        let m = [x(0), x(1), &(&x(0) * -1.0) - &x(1)];
        assert!(BacklundData::functional(l, m, &[[1.0, 2.0, 3.0]]).is_err());
        let c = |v: f64| ScalarField::constant(v);
        let ok = BacklundData::functional(
            [c(1.0), c(2.0), c(-3.0)],
            [c(3.0), c(-1.0), c(-2.0)],
            &[[0.0; 3]],
        );
        assert!(ok.is_ok());
        let not_zero_mean = BacklundData::functional(
            [c(1.0), c(2.0), c(3.0)],
            [c(3.0), c(-1.0), c(-2.0)],
            &[[0.0; 3]],
        );
        assert!(not_zero_mean.is_err());
    }

    #[test]
    fn non_solution_is_gated() {
        let data = worked();
        let f = &(&x(0) * &x(1)) + &x(2).exp();
        assert!(integrate_transform(&data, &f, [0.5, 0.5, 0.5], [1.0, 1.0, 1.0], 20).is_err());
    }
}
