//! The second-order PDE families of Veronese webs.
//!
//! Each [`EquationSpec`] owns its residual, its Nijenhuis operator `J` and
//! through it the Veronese one-form `α^λ = adj(J − λ)ᵀ df`, whose kernel
//! distribution is the Lax pair of the equation.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Vector3};

use crate::fields::{bracket_from_jets, Chart, OneFormField, Point, ScalarField, VectorField};
use crate::jets::Jet3;
use crate::nijenhuis::{harmonic_conjugacy_residual, NormalFormTag, OperatorField};
use crate::{Error, Result};

/// Spectral parameters sampled by the "for all λ" checks.
pub const LAMBDA_GRID: [f64; 5] = [-4.0, -1.0, 0.0, 0.5, 1.7];

#[derive(Clone, Debug)]
pub enum EquationSpec {
    /// `λ_i` is a function of `x_i` alone.
    A { lambda: [ScalarField; 3] },
    /// `λ₂(x₂)`, `λ₃(x₃)`.
    B {
        lambda2: ScalarField,
        lambda3: ScalarField,
    },
    /// `λ₃(x₃)`; the operator carries `e^{λ₃'(x₃)x₂}`.
    C { lambda3: ScalarField },
    /// `a + ib` holomorphic in `x₁ + ix₂`, and `λ₃(x₃)`.
    D {
        a: ScalarField,
        b: ScalarField,
        lambda3: ScalarField,
    },
    /// The triple-eigenvalue normal form `C0` in its own chart.
    CNormal,
    /// `a f₁f₂₃ + b f₂f₁₃ + c f₃f₁₂ = 0` with `a + b + c = 0`.
    Hirota { a: f64, b: f64, c: f64 },
    /// `f_xz − f_yy + f_y f_xx − f_x f_xy = 0` in the chart `(x, y, z) = (x₁, x₂, x₃)`.
    HyperCr,
}

impl fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EquationSpec::A { .. } => "A",
            EquationSpec::B { .. } => "B",
            EquationSpec::C { .. } => "C",
            EquationSpec::D { .. } => "D",
            EquationSpec::CNormal => "C0",
            EquationSpec::Hirota { .. } => "Hirota",
            EquationSpec::HyperCr => "hyper-CR",
        })
    }
}

impl EquationSpec {
    pub fn hirota(a: f64, b: f64, c: f64) -> Result<Self> {
        let scale = a.abs().max(b.abs()).max(c.abs()).max(1.0);
        if (a + b + c).abs() > 1e-12 * scale {
            return Err(Error::invalid(format!(
                "Hirota constants must sum to zero, got {a} + {b} + {c}"
            )));
        }
        Ok(EquationSpec::Hirota { a, b, c })
    }

    /// The family equation whose Nijenhuis operator is the normal form `tag`
    /// with constants `c`.
    pub fn from_tag(tag: NormalFormTag, c: [f64; 3]) -> Self {
        use NormalFormTag::*;
        let x = ScalarField::coordinate;
        let k = |i: usize| ScalarField::constant(c[i]);
        match tag {
            A0 => EquationSpec::A {
                lambda: [x(0), x(1), x(2)],
            },
            A1 => EquationSpec::A {
                lambda: [x(0), x(1), k(2)],
            },
            A2 => EquationSpec::A {
                lambda: [x(0), k(1), k(2)],
            },
            A3 => EquationSpec::A {
                lambda: [k(0), k(1), k(2)],
            },
            B0 => EquationSpec::B {
                lambda2: x(1),
                lambda3: x(2),
            },
            B1 => EquationSpec::B {
                lambda2: x(1),
                lambda3: k(2),
            },
            B2 => EquationSpec::B {
                lambda2: k(1),
                lambda3: x(2),
            },
            B3 => EquationSpec::B {
                lambda2: k(1),
                lambda3: k(2),
            },
            C0 => EquationSpec::CNormal,
            C1 => EquationSpec::C { lambda3: k(2) },
            D0 => EquationSpec::D {
                a: x(0),
                b: x(1),
                lambda3: x(2),
            },
            D1 => EquationSpec::D {
                a: x(0),
                b: x(1),
                lambda3: k(2),
            },
            D2 => EquationSpec::D {
                a: k(0),
                b: k(1),
                lambda3: x(2),
            },
            D3 => EquationSpec::D {
                a: k(0),
                b: k(1),
                lambda3: k(2),
            },
        }
    }

    /// Checks the functional hypotheses at the probe points: each `λ_i`
    /// depends on `x_i` only, and `(a, b)` satisfy the Cauchy–Riemann equations.
    pub fn validate(&self, probes: &[Point]) -> Result<()> {
        let depends_only_on = |g: &ScalarField, k: usize, name: &str| -> Result<()> {
            for &p in probes {
                let grad = g.gradient(p)?;
                for (i, d) in grad.iter().enumerate() {
                    if i != k && d.abs() > 1e-10 {
                        return Err(Error::invalid(format!(
                            "{name} must depend on x{} only (∂{} = {d:e} at {p:?})",
                            k + 1,
                            i + 1
                        )));
                    }
                }
            }
            Ok(())
        };
        match self {
            EquationSpec::A { lambda } => {
                for (k, l) in lambda.iter().enumerate() {
                    depends_only_on(l, k, &format!("λ{}", k + 1))?;
                }
            }
            EquationSpec::B { lambda2, lambda3 } => {
                depends_only_on(lambda2, 1, "λ2")?;
                depends_only_on(lambda3, 2, "λ3")?;
            }
            EquationSpec::C { lambda3 } => depends_only_on(lambda3, 2, "λ3")?,
            EquationSpec::D { a, b, lambda3 } => {
                depends_only_on(lambda3, 2, "λ3")?;
                for &p in probes {
                    let r = harmonic_conjugacy_residual(a, b, p)?;
                    if r > 1e-8 {
                        return Err(Error::invalid(format!(
                            "(a, b) is not a harmonic pair at {p:?} (residual {r:e})"
                        )));
                    }
                    if a.gradient(p)?[2] != 0.0 || b.gradient(p)?[2] != 0.0 {
                        return Err(Error::invalid("a and b must not depend on x3"));
                    }
                }
            }
            EquationSpec::Hirota { a, b, c } => {
                EquationSpec::hirota(*a, *b, *c)?;
            }
            EquationSpec::CNormal | EquationSpec::HyperCr => {}
        }
        Ok(())
    }

    /// The zero-mean eigenvalues `(λ₁, λ₂, λ₃)` with `a = λ₂ − λ₃`,
    /// `b = λ₃ − λ₁`, `c = λ₁ − λ₂` of a Hirota equation.
    pub fn hirota_lambdas(a: f64, b: f64, c: f64) -> [f64; 3] {
        [(c - b) / 3.0, (a - c) / 3.0, (b - a) / 3.0]
    }

    /// The Nijenhuis operator of the family.
    pub fn operator(&self) -> Result<OperatorField> {
        let x = ScalarField::coordinate;
        let zero = || ScalarField::constant(0.0);
        let one = || ScalarField::constant(1.0);
        Ok(match self {
            EquationSpec::A { lambda } => OperatorField::diagonal(lambda.clone()),
            EquationSpec::B { lambda2, lambda3 } => OperatorField::new([
                [lambda2.clone(), one(), zero()],
                [zero(), lambda2.clone(), zero()],
                [zero(), zero(), lambda3.clone()],
            ]),
            EquationSpec::C { lambda3 } => OperatorField::new([
                [lambda3.clone(), c_exponential(lambda3, 1.0), zero()],
                [zero(), lambda3.clone(), one()],
                [zero(), zero(), lambda3.clone()],
            ]),
            EquationSpec::D { a, b, lambda3 } => OperatorField::new([
                [a.clone(), -b, zero()],
                [b.clone(), a.clone(), zero()],
                [zero(), zero(), lambda3.clone()],
            ]),
            EquationSpec::CNormal => OperatorField::new([
                [x(2), zero(), one()],
                [one(), x(2), -&x(1)],
                [zero(), zero(), x(2)],
            ]),
            EquationSpec::Hirota { a, b, c } => OperatorField::diagonal(
                EquationSpec::hirota_lambdas(*a, *b, *c).map(ScalarField::constant),
            ),
            EquationSpec::HyperCr => {
                return Err(Error::Unsupported("a Nijenhuis operator"));
            }
        })
    }

    /// The real eigenvalues of `J(p)`; `α^λ` at each of them is proportional
    /// to a coordinate covector.
    pub fn spectral_values(&self, p: Point) -> Result<Vec<(f64, usize)>> {
        Ok(match self {
            EquationSpec::A { lambda } => vec![
                (lambda[0].value(p)?, 0),
                (lambda[1].value(p)?, 1),
                (lambda[2].value(p)?, 2),
            ],
            EquationSpec::B { lambda2, lambda3 } => {
                vec![(lambda2.value(p)?, 0), (lambda3.value(p)?, 2)]
            }
            EquationSpec::C { lambda3 } | EquationSpec::D { lambda3, .. } => {
                vec![(lambda3.value(p)?, 2)]
            }
            EquationSpec::CNormal => vec![(p[2], 2)],
            EquationSpec::Hirota { a, b, c } => {
                let l = EquationSpec::hirota_lambdas(*a, *b, *c);
                vec![(l[0], 0), (l[1], 1), (l[2], 2)]
            }
            EquationSpec::HyperCr => return Err(Error::Unsupported("spectral values")),
        })
    }
}

/// `e^{s·λ₃'(x₃)·x₂}` as a field.
fn c_exponential(lambda3: &ScalarField, s: f64) -> ScalarField {
    let d = lambda3.partial(2);
    ScalarField::new(move |x| {
        let e = (d.eval_jets(x)? * x[1]).scale(s).exp();
        if !e.value.is_finite() {
            return Err(Error::Domain {
                op: "exp(λ3'·x2)",
                value: x[1].value,
            });
        }
        Ok(e)
    })
}

/// The left-hand side of the family equation for `f` at `p`.
pub fn pde_residual(spec: &EquationSpec, f: &ScalarField, p: Point) -> Result<f64> {
    let j = f.jet(p)?;
    let (f1, f2, f3) = (j.grad[0], j.grad[1], j.grad[2]);
    let d = |a: usize, b: usize| j.d2(a - 1, b - 1);
    Ok(match spec {
        EquationSpec::A { lambda } => {
            let l = [
                lambda[0].value(p)?,
                lambda[1].value(p)?,
                lambda[2].value(p)?,
            ];
            (l[1] - l[2]) * f1 * d(2, 3)
                + (l[2] - l[0]) * f2 * d(1, 3)
                + (l[0] - l[1]) * f3 * d(1, 2)
        }
        EquationSpec::B { lambda2, lambda3 } => {
            let l2 = lambda2.jet(p)?;
            let l3 = lambda3.value(p)?;
            f1 * d(1, 3) - f3 * d(1, 1)
                + (l2.value - l3) * (f1 * d(2, 3) - f2 * d(1, 3))
                + l2.grad[1] * f1 * f3
        }
        EquationSpec::C { lambda3 } => {
            let l3 = lambda3.jet(p)?;
            let e = (-l3.grad[2] * p[1]).exp();
            if !e.is_finite() {
                return Err(Error::Domain {
                    op: "exp(-λ3'·x2)",
                    value: p[1],
                });
            }
            f1 * d(1, 3) - f3 * d(1, 1)
                + e * (f2 * d(1, 2) - f1 * d(2, 2))
                + l3.d2(2, 2) * p[1] * f1 * f1
        }
        EquationSpec::D { a, b, lambda3 } => {
            let (a, b, l3) = (a.value(p)?, b.value(p)?, lambda3.value(p)?);
            a * (f1 * d(2, 3) - f2 * d(1, 3))
                + b * (f3 * d(1, 1) + f3 * d(2, 2) - f1 * d(1, 3) - f2 * d(2, 3))
                + l3 * (f2 * d(1, 3) - f1 * d(2, 3))
        }
        EquationSpec::CNormal => {
            f2 * d(1, 1) - f1 * d(1, 2) + f1 * f2 + f3 * d(2, 2) - f2 * d(2, 3)
                + p[1] * (f1 * d(2, 2) - f2 * d(1, 2))
        }
        EquationSpec::Hirota { a, b, c } => a * f1 * d(2, 3) + b * f2 * d(1, 3) + c * f3 * d(1, 2),
        EquationSpec::HyperCr => d(1, 3) - d(2, 2) + f2 * d(1, 1) - f1 * d(1, 2),
    })
}

/// The Veronese one-form `α^λ = adj(J − λ)ᵀ df` as a field.
pub fn veronese_form_field(
    spec: &EquationSpec,
    f: &ScalarField,
    lambda: f64,
) -> Result<OneFormField> {
    let cof = spec.operator()?.shifted(lambda).adjugate().transpose();
    let df = VectorField([0, 1, 2].map(|k| f.partial(k)));
    Ok(OneFormField(cof.apply(&df).0))
}

/// `α^λ(p)`.
pub fn veronese_form(
    spec: &EquationSpec,
    f: &ScalarField,
    p: Point,
    lambda: f64,
) -> Result<[f64; 3]> {
    veronese_form_field(spec, f, lambda)?.value(p)
}

/// The coefficients of `α^λ = α₀ + λα₁ + λ²α₂` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VeroneseCurve {
    pub alpha: [[f64; 3]; 3],
}

impl VeroneseCurve {
    pub fn at(&self, lambda: f64) -> [f64; 3] {
        let [a0, a1, a2] = self.alpha;
        [0, 1, 2].map(|k| a0[k] + lambda * a1[k] + lambda * lambda * a2[k])
    }

    /// `det(α₀; α₁; α₂)`; nonzero iff the curve spans the cotangent space.
    pub fn determinant(&self) -> f64 {
        Matrix3::from_fn(|i, j| self.alpha[i][j]).determinant()
    }
}

pub fn veronese_curve(spec: &EquationSpec, f: &ScalarField, p: Point) -> Result<VeroneseCurve> {
    let a = |l: f64| -> Result<[f64; 3]> { veronese_form_field(spec, f, l)?.value(p) };
    let (z, plus, minus) = (a(0.0)?, a(1.0)?, a(-1.0)?);
    let a1 = [0, 1, 2].map(|k| 0.5 * (plus[k] - minus[k]));
    let a2 = [0, 1, 2].map(|k| 0.5 * (plus[k] + minus[k]) - z[k]);
    Ok(VeroneseCurve { alpha: [z, a1, a2] })
}

pub fn nondegeneracy_det(spec: &EquationSpec, f: &ScalarField, p: Point) -> Result<f64> {
    Ok(veronese_curve(spec, f, p)?.determinant())
}

fn norm(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Vector fields `v^λ, w^λ` spanning `ker α^λ` near `p`.
///
/// Families A and Hirota use
/// `v^λ = (λ−λ₁)f₂∂₁ − (λ−λ₂)f₁∂₂`, `w^λ = (λ−λ₂)f₃∂₂ − (λ−λ₃)f₂∂₃`.
/// The others use `(α^λ × e_k)/|α^λ|` for the two coordinate directions `e_k`
/// along which `α^λ(p)` has the smallest components.
pub fn lax_pair_fields(
    spec: &EquationSpec,
    f: &ScalarField,
    p: Point,
    lambda: f64,
) -> Result<(VectorField, VectorField)> {
    let alpha = veronese_form_field(spec, f, lambda)?;
    let a = alpha.value(p)?;
    let scale = f
        .gradient(p)?
        .iter()
        .fold(0.0f64, |m, g| m.max(g.abs()))
        .max(1.0);
    if norm(a) <= 1e-14 * scale {
        return Err(Error::RankCollapse {
            what: "Veronese form",
            point: p,
        });
    }
    let lambdas: Option<[ScalarField; 3]> = match spec {
        EquationSpec::A { lambda } => Some(lambda.clone()),
        EquationSpec::Hirota { a, b, c } => {
            Some(EquationSpec::hirota_lambdas(*a, *b, *c).map(ScalarField::constant))
        }
        _ => None,
    };
    let (v, w) = match lambdas {
        Some(l) => {
            let m = l.map(|li| li.map(move |j| Ok(lambda - j)));
            let d = [0, 1, 2].map(|k| f.partial(k));
            let zero = ScalarField::constant(0.0);
            (
                VectorField::new(&m[0] * &d[1], -&(&m[1] * &d[0]), zero.clone()),
                VectorField::new(zero, &m[1] * &d[2], -&(&m[2] * &d[1])),
            )
        }
        None => {
            let mut order = [0usize, 1, 2];
            order.sort_by(|&i, &j| a[i].abs().total_cmp(&a[j].abs()).then(i.cmp(&j)));
            let n = {
                let c = alpha.0.clone();
                let sq = &(&(&c[0] * &c[0]) + &(&c[1] * &c[1])) + &(&c[2] * &c[2]);
                sq.map(|j| j.sqrt())
            };
            let cross = |k: usize| {
                let c = &alpha.0;
                let zero = ScalarField::constant(0.0);
                let e = [0, 1, 2].map(|i| {
                    if i == k {
                        ScalarField::constant(1.0)
                    } else {
                        zero.clone()
                    }
                });
                VectorField([0, 1, 2].map(|i| {
                    let (r, s) = ((i + 1) % 3, (i + 2) % 3);
                    (&(&c[r] * &e[s]) - &(&c[s] * &e[r])).try_div(&n)
                }))
            };
            (cross(order[0]), cross(order[1]))
        }
    };
    let (vp, wp) = (Vector3::from(v.value(p)?), Vector3::from(w.value(p)?));
    if vp.cross(&wp).norm() <= 1e-14 * scale * scale * scale.max(vp.norm() * wp.norm()) {
        return Err(Error::RankCollapse {
            what: "Lax pair",
            point: p,
        });
    }
    Ok((v, w))
}

/// `(v^λ(p), w^λ(p))`.
pub fn lax_pair(
    spec: &EquationSpec,
    f: &ScalarField,
    p: Point,
    lambda: f64,
) -> Result<([f64; 3], [f64; 3])> {
    let (v, w) = lax_pair_fields(spec, f, p, lambda)?;
    Ok((v.value(p)?, w.value(p)?))
}

/// `α^λ([v^λ, w^λ])(p)`: vanishes for every `λ` exactly when `f` solves the equation at `p`.
pub fn lax_closure_residual(
    spec: &EquationSpec,
    f: &ScalarField,
    p: Point,
    lambda: f64,
) -> Result<f64> {
    let (v, w) = lax_pair_fields(spec, f, p, lambda)?;
    let a = veronese_form_field(spec, f, lambda)?.value(p)?;
    let b = bracket_from_jets(&v.jets(p)?, &w.jets(p)?);
    Ok(a[0] * b[0] + a[1] * b[1] + a[2] * b[2])
}

type PostFn = dyn Fn(Jet3) -> Result<Jet3> + Send + Sync;

/// A finite point transformation `(x, f) ↦ (X(x), F(f))`, stored through the
/// inverse coordinate map `x = X⁻¹(x')` and the value map `F`.
#[derive(Clone)]
pub struct SymmetryDatum {
    pub inverse: Chart,
    pub post: Option<Arc<PostFn>>,
}

impl fmt::Debug for SymmetryDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymmetryDatum")
            .field("inverse", &self.inverse)
            .field("post", &self.post.as_ref().map(|_| "<fn>"))
            .finish()
    }
}

impl SymmetryDatum {
    pub fn coordinates(inverse: Chart) -> Self {
        SymmetryDatum {
            inverse,
            post: None,
        }
    }

    pub fn with_post(
        mut self,
        post: impl Fn(Jet3) -> Result<Jet3> + Send + Sync + 'static,
    ) -> Self {
        self.post = Some(Arc::new(post));
        self
    }
}

/// The transformed function `F ∘ f ∘ X⁻¹`, after checking that the inverse
/// coordinate map is a local diffeomorphism at every probe point.
pub fn apply_point_symmetry(
    f: &ScalarField,
    sym: &SymmetryDatum,
    probes: &[Point],
) -> Result<ScalarField> {
    for &p in probes {
        let det = sym.inverse.jacobian(p)?.determinant();
        if !det.is_finite() || det.abs() < 1e-12 {
            return Err(Error::Singular {
                what: "coordinate change",
                point: p,
            });
        }
    }
    let g = sym.inverse.pull_back(f);
    Ok(match &sym.post {
        Some(post) => {
            let post = Arc::clone(post);
            g.map(move |j| post(j))
        }
        None => g,
    })
}
