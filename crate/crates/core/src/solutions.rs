//! The sl₂ Veronese web, self-propelled functions and the library of exact
//! solutions with their adapted charts.

use nalgebra::{DMatrix, DVector, Vector3};

use crate::fields::{directional_derivative, lie_bracket, Chart, Point, ScalarField, VectorField};
use crate::jets::Jet3;
use crate::nijenhuis::NormalFormTag;
use crate::roots::{safeguarded_newton, NewtonOptions};
use crate::sampling::Box3;
use crate::webs::EquationSpec;
use crate::{Error, Result};

/// `X₀ = Σ∂_i`, `X₁ = Σx_i∂_i`, `X₂ = Σx_i²∂_i`, with
/// `[X₀,X₁] = X₀`, `[X₁,X₂] = X₂`, `[X₀,X₂] = 2X₁`.
pub fn sl2_frame() -> [VectorField; 3] {
    let x = ScalarField::coordinate;
    [
        VectorField::constant([1.0; 3]),
        VectorField::new(x(0), x(1), x(2)),
        VectorField::new(x(0).powi(2), x(1).powi(2), x(2).powi(2)),
    ]
}

/// A family of functions `F(x, λ)` whose level sets are the leaves of a web.
pub trait WebFirstIntegral: Send + Sync {
    /// `F` at jets of the point and of the parameter.
    fn eval(&self, x: &[Jet3; 3], lambda: Jet3) -> Result<Jet3>;

    fn value(&self, p: Point, lambda: f64) -> Result<f64> {
        Ok(self
            .eval(&p.map(Jet3::constant), Jet3::constant(lambda))?
            .value)
    }

    /// `(F, ∂F/∂λ)` at `(p, λ)`.
    fn value_and_lambda_derivative(&self, p: Point, lambda: f64) -> Result<(f64, f64)> {
        let j = self.eval(&p.map(Jet3::constant), Jet3::variable(0, lambda))?;
        Ok((j.value, j.grad[0]))
    }

    /// `F(·, λ)` as a field.
    fn at(&self, lambda: f64) -> ScalarField
    where
        Self: Clone + 'static,
    {
        let me = self.clone();
        ScalarField::new(move |x| me.eval(x, Jet3::constant(lambda)))
    }
}

/// `F(x, λ) = (x₃−x₂)(x₁−λ)/((x₁−x₂)(x₃−λ))`, a first integral of the sl₂ web.
#[derive(Debug, Clone, Copy, Default)]
pub struct CrossRatio;

impl WebFirstIntegral for CrossRatio {
    fn eval(&self, x: &[Jet3; 3], lambda: Jet3) -> Result<Jet3> {
        ((x[2] - x[1]) * (x[0] - lambda)).try_div(&((x[0] - x[1]) * (x[2] - lambda)))
    }
}

pub fn cross_ratio(p: Point, lambda: f64) -> Result<f64> {
    CrossRatio.value(p, lambda)
}

/// `F(x, ∞) = (x₃−x₂)/(x₁−x₂)`.
pub fn cross_ratio_at_infinity() -> ScalarField {
    let x = ScalarField::coordinate;
    (&x(2) - &x(1))
        .try_div(&(&x(0) - &x(1)))
        .with_source("(x3 - x2)/(x1 - x2)")
}

/// `(φX₀φ − X₁φ, φX₁φ − X₂φ)` at `p`.
pub fn self_propelled_residual(
    frame: &[VectorField; 3],
    phi: &ScalarField,
    p: Point,
) -> Result<[f64; 2]> {
    let v = phi.value(p)?;
    let d = |k: usize| directional_derivative(&frame[k], phi, p);
    let (d0, d1, d2) = (d(0)?, d(1)?, d(2)?);
    Ok([v * d0 - d1, v * d1 - d2])
}

/// The same system for the complex function `η + iζ`, split into real and
/// imaginary parts of both equations.
pub fn self_propelled_pair_residual(
    frame: &[VectorField; 3],
    eta: &ScalarField,
    zeta: &ScalarField,
    p: Point,
) -> Result<[f64; 4]> {
    let (e, z) = (eta.value(p)?, zeta.value(p)?);
    let de = |k: usize| directional_derivative(&frame[k], eta, p);
    let dz = |k: usize| directional_derivative(&frame[k], zeta, p);
    let (e0, e1, e2) = (de(0)?, de(1)?, de(2)?);
    let (z0, z1, z2) = (dz(0)?, dz(1)?, dz(2)?);
    Ok([
        e * e0 - z * z0 - e1,
        e * z0 + z * e0 - z1,
        e * e1 - z * z1 - e2,
        e * z1 + z * e1 - z2,
    ])
}

fn target_jet(target: &ScalarField, lambda: Jet3) -> Result<Jet3> {
    target.eval_jets(&[lambda, Jet3::ZERO, Jet3::ZERO])
}

/// Solves `F(p, φ) = f(φ)` for `φ` from `guess`. `target` is read as a
/// function of its first argument.
pub fn self_propelled_solve(
    first_integral: &dyn WebFirstIntegral,
    target: &ScalarField,
    p: Point,
    guess: f64,
) -> Result<f64> {
    let g = |l: f64| -> Result<(f64, f64)> {
        let (fv, fl) = first_integral.value_and_lambda_derivative(p, l)?;
        let t = target_jet(target, Jet3::variable(0, l))?;
        Ok((fv - t.value, fl - t.grad[0]))
    };
    safeguarded_newton(g, guess, NewtonOptions::default())
}

/// The self-propelled function `φ` defined implicitly by `F(x, φ(x)) = f(φ(x))`,
/// with the root selected by Newton from `guess(x)`. Derivatives come from
/// chord iterations in jet arithmetic, each of which gains one order.
pub fn self_propelled_field<F, G>(first_integral: F, target: ScalarField, guess: G) -> ScalarField
where
    F: WebFirstIntegral + 'static,
    G: Fn(Point) -> f64 + Send + Sync + 'static,
{
    ScalarField::new(move |x| {
        let base = [x[0].value, x[1].value, x[2].value];
        let root = self_propelled_solve(&first_integral, &target, base, guess(base))?;
        let (_, fl) = first_integral.value_and_lambda_derivative(base, root)?;
        let slope = fl - target_jet(&target, Jet3::variable(0, root))?.grad[0];
        let mut phi = Jet3::constant(root);
        for _ in 0..4 {
            let defect = first_integral.eval(x, phi)? - target_jet(&target, phi)?;
            phi -= defect.scale(1.0 / slope);
        }
        Ok(phi)
    })
}

/// `φ_c = (c x₃(x₁−x₂) + x₁(x₃−x₂))/(c(x₁−x₂) + (x₃−x₂))`, the self-propelled
/// function with `F(x, φ_c) = −c`; `c = ±∞` gives `x₃`.
pub fn phi_family(c: f64) -> ScalarField {
    let x = ScalarField::coordinate;
    if c.is_infinite() {
        return x(2);
    }
    let (d12, d32) = (&x(0) - &x(1), &x(2) - &x(1));
    let num = &(&(&x(2) * &d12) * c) + &(&x(0) * &d32);
    let den = &(&d12 * c) + &d32;
    num.try_div(&den)
}

/// The five `φ`-coefficients of the compatibility polynomial
/// `c₁₂⁰ + (c₁₂¹−c₀₂⁰)φ + (c₀₁⁰−c₀₂¹+c₁₂²)φ² + (c₀₁¹−c₀₂²)φ³ + c₀₁²φ⁴`,
/// where `[X_i, X_j] = c_ij^k X_k` at `p`.
///
/// When the frame is rank-deficient at `p` the structure functions are taken
/// over the longest independent prefix `X₀, …` (dependent vectors get zero
/// coefficients); a bracket outside that span is a rank collapse.
pub fn compatibility_polynomial(frame: &[VectorField; 3], p: Point) -> Result<[f64; 5]> {
    let cols = [frame[0].value(p)?, frame[1].value(p)?, frame[2].value(p)?].map(Vector3::from);
    let collapse = || Error::RankCollapse {
        what: "frame",
        point: p,
    };
    let mut basis: Vec<usize> = Vec::new();
    let mut ortho: Vec<Vector3<f64>> = Vec::new();
    for (k, v) in cols.iter().enumerate() {
        let mut r = *v;
        for q in &ortho {
            r -= q * q.dot(&r);
        }
        if r.norm() > 1e-12 * v.norm().max(1.0) {
            ortho.push(r.normalize());
            basis.push(k);
        }
    }
    if basis.is_empty() {
        return Err(collapse());
    }
    let m = DMatrix::from_fn(3, basis.len(), |i, j| cols[basis[j]][i]);
    let svd = m.clone().svd(true, true);
    let structure = |i: usize, j: usize| -> Result<[f64; 3]> {
        let b = DVector::from_column_slice(&lie_bracket(&frame[i], &frame[j], p)?);
        let x = svd.solve(&b, 1e-14).map_err(|_| collapse())?;
        if (&m * &x - &b).amax() > 1e-10 * b.amax().max(1.0) {
            return Err(collapse());
        }
        let mut c = [0.0; 3];
        for (slot, &k) in basis.iter().enumerate() {
            c[k] = x[slot];
        }
        Ok(c)
    };
    let (c01, c02, c12) = (structure(0, 1)?, structure(0, 2)?, structure(1, 2)?);
    Ok([
        c12[0],
        c12[1] - c02[0],
        c01[0] - c02[1] + c12[2],
        c01[1] - c02[2],
        c01[2],
    ])
}

/// `ψ₁ = ((x₁² + x₂x₃)(x₂ + x₃) − 4x₁x₂x₃)/((x₁−x₂)² + (x₁−x₃)²)`.
pub fn d0_psi1() -> ScalarField {
    let x = ScalarField::coordinate;
    let num = &(&(&x(0).powi(2) + &(&x(1) * &x(2))) * &(&x(1) + &x(2)))
        - &(&(&(&x(0) * &x(1)) * &x(2)) * 4.0);
    num.try_div(&d0_denominator())
}

/// `ψ₂ = (x₂−x₃)(x₁−x₃)(x₁−x₂)/((x₁−x₂)² + (x₁−x₃)²)`.
pub fn d0_psi2() -> ScalarField {
    let x = ScalarField::coordinate;
    let num = &(&(&x(1) - &x(2)) * &(&x(0) - &x(2))) * &(&x(0) - &x(1));
    num.try_div(&d0_denominator())
}

fn d0_denominator() -> ScalarField {
    let x = ScalarField::coordinate;
    &(&x(0) - &x(1)).powi(2) + &(&x(0) - &x(2)).powi(2)
}

/// A first integral of the sl₂ web in the spectral chart `y_i = F(x, c_i)`,
/// solving the constant-coefficient equation A with eigenvalues `c`:
/// `f = (a y₂ − k y₃)/(a − k)`, `a = (y₁−y₃)/(y₁−y₂)`, `k = (c₁−c₃)/(c₁−c₂)`.
pub fn spectral_chart_solution(c: [f64; 3]) -> ScalarField {
    let y = ScalarField::coordinate;
    let a = (&y(0) - &y(2)).try_div(&(&y(0) - &y(1)));
    let k = (c[0] - c[2]) / (c[0] - c[1]);
    let num = &(&a * &y(1)) - &(&y(2) * k);
    let den = a.map(move |j| Ok(j - k));
    num.try_div(&den)
}

/// An exact solution from the library, given in an adapted chart.
#[derive(Clone, Debug)]
pub struct ExactSolutionCase {
    pub tag: NormalFormTag,
    /// Maps the web coordinates `x` to the chart coordinates `x̄`.
    pub chart: Chart,
    /// The solution as a function of `x̄`.
    pub solution: ScalarField,
    pub spec: EquationSpec,
    /// A box inside the domain `x₁ > x₂ > x₃` used for sampling.
    pub sample_box: Box3,
}

/// The constant used for the `A1` case.
pub const A1_CONSTANT: f64 = -2.0;

impl ExactSolutionCase {
    pub fn in_domain(&self, p: Point) -> bool {
        self.check_domain(p).is_ok()
    }

    fn check_domain(&self, p: Point) -> Result<()> {
        if !(p[0] > p[1] && p[1] > p[2]) {
            return Err(Error::OutsideDomain {
                point: p,
                reason: "the library domain is x1 > x2 > x3".into(),
            });
        }
        if self.tag == NormalFormTag::A1 && p[2] == A1_CONSTANT {
            return Err(Error::OutsideDomain {
                point: p,
                reason: "cross-ratio pole x3 = c".into(),
            });
        }
        Ok(())
    }

    /// `x̄(p)`, failing outside the declared domain.
    pub fn chart_point(&self, p: Point) -> Result<Point> {
        self.check_domain(p)?;
        self.chart.apply(p)
    }

    /// The solution pulled back to the web coordinates.
    pub fn solution_in_web_coordinates(&self) -> ScalarField {
        self.chart.pull_back(&self.solution)
    }

    /// The value of the solution at the web point `p`.
    pub fn value_at(&self, p: Point) -> Result<f64> {
        self.solution.value(self.chart_point(p)?)
    }
}

pub fn sample_box() -> Box3 {
    Box3 {
        lo: [2.5, 1.5, 0.5],
        hi: [3.5, 2.5, 1.5],
    }
}

/// The library case for `tag` (one of `A0`, `A1`, `B0`, `C0`, `D0`).
pub fn exact_solution(tag: NormalFormTag) -> Result<ExactSolutionCase> {
    let x = ScalarField::coordinate;
    let (chart, solution, spec) = match tag {
        NormalFormTag::A0 => (
            Chart::identity(),
            cross_ratio_at_infinity(),
            EquationSpec::from_tag(NormalFormTag::A0, [0.0; 3]),
        ),
        NormalFormTag::A1 => {
            let c = A1_CONSTANT;
            (
                Chart::new(x(0), x(1), CrossRatio.at(c)),
                a1_solution(c, 1.0),
                EquationSpec::from_tag(NormalFormTag::A1, [0.0, 0.0, c]),
            )
        }
        NormalFormTag::B0 => {
            let arg = (&(&x(0) - &x(1)) * &(&x(1) - &x(2))).try_div(&(&x(0) - &x(2)));
            let e = (-&x(0)).exp();
            let f = &(&ScalarField::constant(1.0) - &(&x(1) * &e)) + &(&x(2) * &e);
            (
                Chart::new(arg.ln(), x(1), x(2)),
                f,
                EquationSpec::from_tag(NormalFormTag::B0, [0.0; 3]),
            )
        }
        NormalFormTag::C0 => {
            let arg = (&(&x(0) - &x(2)) * &(&x(1) - &x(2))).try_div(&(&x(0) - &x(1)));
            let inv = ScalarField::constant(1.0).try_div(&(&x(0) - &x(2)));
            (
                Chart::new(arg.ln(), inv, x(2)),
                &x(1) * &x(0).exp(),
                EquationSpec::CNormal,
            )
        }
        NormalFormTag::D0 => (
            Chart::new(d0_psi1(), d0_psi2(), x(2)),
            (&(&x(0) - &x(1)) - &x(2)).try_div(&x(1)),
            EquationSpec::from_tag(NormalFormTag::D0, [0.0; 3]),
        ),
        _ => return Err(Error::Unsupported("an exact library solution")),
    };
    Ok(ExactSolutionCase {
        tag,
        chart,
        solution,
        spec,
        sample_box: sample_box(),
    })
}

/// `(c−x₂)x̄₃/((x₁−x₂)x̄₃ + s(x₁−c))`; `s = 1` is the library form and `s = −1`
/// the form that equals `F(x, ∞)` after substituting `x̄₃ = F(x, c)`.
pub fn a1_solution(c: f64, s: f64) -> ScalarField {
    let x = ScalarField::coordinate;
    let num = &(&ScalarField::constant(c) - &x(1)) * &x(2);
    let den = &(&(&x(0) - &x(1)) * &x(2)) + &(&x(0).map(move |j| Ok(j - c)) * s);
    num.try_div(&den)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::lie_bracket;
    use crate::webs::{nondegeneracy_det, pde_residual};
    use approx::assert_relative_eq;
    use nalgebra::Matrix3;

    #[test]
    fn sl2_relations() {
        let [x0, x1, x2] = sl2_frame();
        let p = [1.0, 2.0, 3.0];
        assert_eq!(lie_bracket(&x0, &x1, p).unwrap(), [1.0, 1.0, 1.0]);
        assert_eq!(lie_bracket(&x0, &x2, p).unwrap(), [2.0, 4.0, 6.0]);
        assert_eq!(lie_bracket(&x1, &x2, p).unwrap(), x2.value(p).unwrap());
        let m = crate::nijenhuis::OperatorField::from_columns(&sl2_frame());
        assert_eq!(m.determinant().value(p).unwrap(), 2.0);
    }

    #[test]
    fn cross_ratio_examples() {
        assert_relative_eq!(cross_ratio([1.0, 2.0, 3.0], 0.0).unwrap(), -1.0 / 3.0);
        assert_eq!(cross_ratio([1.0, 2.0, 3.0], 1.0).unwrap(), 0.0);
        assert!(cross_ratio([1.0, 2.0, 3.0], 3.0).is_err());
        let [x0, x1, x2] = sl2_frame();
        let l = 0.5;
        let f = CrossRatio.at(l);
        let p = [1.0, 2.0, 3.0];
        let d = |v: &VectorField| directional_derivative(v, &f, p).unwrap();
        assert!((d(&x1) - l * d(&x0)).abs() < 1e-10);
        assert!((d(&x2) - l * d(&x1)).abs() < 1e-10);
    }

    #[test]
    fn self_propelled_examples() {
        let frame = sl2_frame();
        let x = ScalarField::coordinate;
        let p = [1.0, 2.0, 3.0];
        assert_eq!(
            self_propelled_residual(&frame, &ScalarField::constant(2.5), p).unwrap(),
            [0.0, 0.0]
        );
        for k in 0..3 {
            assert_eq!(
                self_propelled_residual(&frame, &x(k), [0.3, -1.2, 4.0]).unwrap(),
                [0.0, 0.0]
            );
        }
        assert_eq!(
            self_propelled_residual(&frame, &(&x(0) + &x(1)), p).unwrap()[0],
            3.0
        );
        let r = self_propelled_pair_residual(&frame, &d0_psi1(), &d0_psi2(), p).unwrap();
        assert!(r.iter().all(|v| v.abs() < 1e-9), "{r:?}");
    }

    #[test]
    fn newton_examples() {
        let p = [1.0, 2.0, 3.0];
        let phi = self_propelled_solve(&CrossRatio, &ScalarField::constant(-3.0), p, 3.5).unwrap();
        assert!((phi - 4.0).abs() < 1e-12);
        let phi = self_propelled_solve(&CrossRatio, &ScalarField::constant(0.0), p, 0.5).unwrap();
        assert!((phi - 1.0).abs() < 1e-12);
    }

    #[test]
    fn implicit_field_is_self_propelled() {
        let frame = sl2_frame();
        let target = ScalarField::coordinate(0).map(|l| Ok(l * 0.25 - 1.0));
        let phi = self_propelled_field(CrossRatio, target, |p: Point| p[1] + 0.3);
        for p in sample_box()
            .grid(3)
            .into_iter()
            .filter(|p| p[0] > p[1] && p[1] > p[2])
        {
            let r = self_propelled_residual(&frame, &phi, p).unwrap();
            assert!(r.iter().all(|v| v.abs() < 1e-8), "{p:?}: {r:?}");
        }
    }

    #[test]
    fn family_calibration_and_limits() {
        let p = [3.0, 2.0, 1.0];
        for c in [0.5, -0.2, 3.0] {
            let v = phi_family(c).value(p).unwrap();
            assert_relative_eq!(cross_ratio(p, v).unwrap(), -c, max_relative = 1e-12);
        }
        assert_eq!(phi_family(0.0).value(p).unwrap(), 3.0);
        assert_eq!(phi_family(-1.0).value(p).unwrap(), 2.0);
        assert_eq!(phi_family(f64::INFINITY).value(p).unwrap(), 1.0);
        assert!((phi_family(1e12).value(p).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn family_functions_are_independent() {
        let p = [3.0, 2.0, 1.0];
        let g = [0.3, 1.5, -4.0].map(|c| phi_family(c).gradient(p).unwrap());
        let m = Matrix3::from_fn(|i, j| g[i][j]);
        assert!(m.determinant().abs() > 1e-6);
    }

    fn close(a: [f64; 5], b: [f64; 5]) {
        assert!(
            a.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-12),
            "{a:?} vs {b:?}"
        );
    }

    #[test]
    fn compatibility_examples() {
        let p = [1.0, 2.0, 3.0];
        let c = compatibility_polynomial(&sl2_frame(), p).unwrap();
        assert!(c.iter().all(|v| v.abs() < 1e-12));
        let coords = [0, 1, 2].map(VectorField::coordinate);
        close(compatibility_polynomial(&coords, p).unwrap(), [0.0; 5]);
        let x2 = ScalarField::coordinate(1);
        let z = ScalarField::constant(0.0);
        let frame = [
            VectorField::coordinate(0),
            VectorField::coordinate(1),
            VectorField::new(x2, z.clone(), z),
        ];
        close(
            compatibility_polynomial(&frame, p).unwrap(),
            [1.0, 0.0, 0.0, 0.0, 0.0],
        );
        let lifted = [
            frame[0].clone(),
            frame[1].clone(),
            frame[2].add(&VectorField::coordinate(2)),
        ];
        close(
            compatibility_polynomial(&lifted, p).unwrap(),
            [1.0, 0.0, 0.0, 0.0, 0.0],
        );
        let twisted = [
            VectorField::coordinate(0),
            VectorField::new(
                ScalarField::constant(0.0),
                ScalarField::constant(1.0),
                ScalarField::coordinate(0),
            ),
            VectorField::coordinate(0),
        ];
        assert!(compatibility_polynomial(&twisted, p).is_err());
    }

    #[test]
    fn compatibility_verdict_survives_rescaling() {
        let s = &ScalarField::coordinate(0).exp() + &ScalarField::constant(1.0);
        let frame = sl2_frame().map(|v| v.scaled(&s));
        let c = compatibility_polynomial(&frame, [1.0, 2.0, 3.0]).unwrap();
        assert!(c.iter().all(|v| v.abs() < 1e-12), "{c:?}");
    }

    #[test]
    fn library_values() {
        let p = [3.0, 2.0, 1.0];
        let b0 = exact_solution(NormalFormTag::B0).unwrap();
        let xb = b0.chart_point(p).unwrap();
        assert_relative_eq!(xb[0], 0.5f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(b0.value_at(p).unwrap(), -1.0, max_relative = 1e-14);
        let c0 = exact_solution(NormalFormTag::C0).unwrap();
        assert_relative_eq!(c0.value_at(p).unwrap(), 1.0, max_relative = 1e-14);
        let q = [1.0, 2.0, 3.0];
        assert_relative_eq!(
            d0_psi1().value(q).unwrap(),
            11.0 / 5.0,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            d0_psi2().value(q).unwrap(),
            -2.0 / 5.0,
            max_relative = 1e-15
        );
        assert!(b0.chart_point([1.0, 2.0, 3.0]).is_err());
        assert!(exact_solution(NormalFormTag::A3).is_err());
    }

    #[test]
    fn library_cases_solve_their_equations() {
        let points = sample_box().random_points(11, 20, |_| true).unwrap();
        for tag in [
            NormalFormTag::A0,
            NormalFormTag::A1,
            NormalFormTag::B0,
            NormalFormTag::C0,
            NormalFormTag::D0,
        ] {
            let case = exact_solution(tag).unwrap();
            for &p in &points {
                let q = case.chart_point(p).unwrap();
                let r = pde_residual(&case.spec, &case.solution, q).unwrap();
                assert!(r.abs() < 1e-10, "{tag} at {p:?}: {r}");
                let d = nondegeneracy_det(&case.spec, &case.solution, q).unwrap();
                assert!(d.abs() > 1e-6, "{tag} at {p:?}: det {d}");
            }
        }
    }

    #[test]
    fn a1_chart_consistent_form_is_the_web_first_integral() {
        let case = exact_solution(NormalFormTag::A1).unwrap();
        let consistent = case.chart.pull_back(&a1_solution(A1_CONSTANT, -1.0));
        let f = cross_ratio_at_infinity();
        for p in [[3.0, 2.0, 1.0], [3.3, 1.7, 0.6]] {
            assert_relative_eq!(
                consistent.value(p).unwrap(),
                f.value(p).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn spectral_chart_solution_solves_constant_a() {
        let c = [1.0, 2.0, -3.0];
        let f = spectral_chart_solution(c);
        let spec = EquationSpec::A {
            lambda: c.map(ScalarField::constant),
        };
        assert_relative_eq!(
            f.value([3.0, 2.0, 1.0]).unwrap(),
            4.0 / 3.0,
            max_relative = 1e-14
        );
        for p in sample_box()
            .grid(3)
            .into_iter()
            .filter(|p| p[0] > p[1] && p[1] > p[2])
        {
            assert!(pde_residual(&spec, &f, p).unwrap().abs() < 1e-10);
        }
    }
}
