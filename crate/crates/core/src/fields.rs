//! Differentiable fields on a 3D chart.
//!
//! A [`ScalarField`] is a closure over jet arithmetic: it maps three input
//! jets to an output jet. Evaluating at the coordinate jets of a point yields
//! every derivative through order three; evaluating at arbitrary jets is
//! composition, which is how pullbacks through chart maps are realized.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use nalgebra::Matrix3;

use crate::error::Result;
use crate::jets::Jet3;

pub type Point = [f64; 3];

type JetFn = dyn Fn(&[Jet3; 3]) -> Result<Jet3> + Send + Sync;

#[derive(Clone)]
pub struct ScalarField {
    eval: Arc<JetFn>,
    source: Option<Arc<str>>,
}

impl fmt::Debug for ScalarField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            Some(s) => write!(f, "ScalarField({s})"),
            None => f.write_str("ScalarField(<closure>)"),
        }
    }
}

impl ScalarField {
    pub fn new(eval: impl Fn(&[Jet3; 3]) -> Result<Jet3> + Send + Sync + 'static) -> Self {
        ScalarField {
            eval: Arc::new(eval),
            source: None,
        }
    }

    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = Some(Arc::from(source.into()));
        self
    }

    pub fn source(&self) -> Option<&str> {
        self.source.as_deref()
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| Ok(Jet3::constant(c))).with_source(format!("{c}"))
    }

    /// The coordinate function `x_k` with 0-based `k`.
    pub fn coordinate(k: usize) -> Self {
        assert!(k < 3, "coordinate index {k} out of range");
        Self::new(move |x| Ok(x[k])).with_source(format!("x{}", k + 1))
    }

    /// A function of the single coordinate `x_k` given by `g`.
    pub fn univariate(k: usize, g: impl Fn(Jet3) -> Result<Jet3> + Send + Sync + 'static) -> Self {
        Self::new(move |x| g(x[k]))
    }

    pub fn eval_jets(&self, args: &[Jet3; 3]) -> Result<Jet3> {
        (self.eval)(args)
    }

    pub fn jet(&self, p: Point) -> Result<Jet3> {
        self.eval_jets(&Jet3::coordinates(p))
    }

    pub fn value(&self, p: Point) -> Result<f64> {
        Ok(self.jet(p)?.value)
    }

    pub fn gradient(&self, p: Point) -> Result<[f64; 3]> {
        Ok(self.jet(p)?.grad)
    }

    /// `self ∘ (m₁, m₂, m₃)`.
    pub fn compose(&self, maps: &[ScalarField; 3]) -> ScalarField {
        let outer = self.clone();
        let maps = maps.clone();
        ScalarField::new(move |x| {
            let inner = [
                maps[0].eval_jets(x)?,
                maps[1].eval_jets(x)?,
                maps[2].eval_jets(x)?,
            ];
            outer.eval_jets(&inner)
        })
    }

    /// Post-composition with a univariate jet function.
    pub fn map(&self, g: impl Fn(Jet3) -> Result<Jet3> + Send + Sync + 'static) -> ScalarField {
        let inner = self.clone();
        ScalarField::new(move |x| g(inner.eval_jets(x)?))
    }

    /// The derivative field `∂_k self`; its jets are exact through order 2.
    pub fn partial(&self, k: usize) -> ScalarField {
        let f = self.clone();
        ScalarField::new(move |x| {
            let base = [x[0].value, x[1].value, x[2].value];
            Ok(f.jet(base)?.partial(k).compose_with(x))
        })
    }

    pub fn try_div(&self, rhs: &ScalarField) -> ScalarField {
        let (a, b) = (self.clone(), rhs.clone());
        ScalarField::new(move |x| a.eval_jets(x)?.try_div(&b.eval_jets(x)?))
    }

    pub fn exp(&self) -> ScalarField {
        self.map(|j| Ok(j.exp()))
    }

    pub fn ln(&self) -> ScalarField {
        self.map(|j| j.ln())
    }

    pub fn powi(&self, n: i32) -> ScalarField {
        self.map(move |j| j.powi(n))
    }
}

fn binary(a: &ScalarField, b: &ScalarField, op: fn(Jet3, Jet3) -> Jet3) -> ScalarField {
    let (a, b) = (a.clone(), b.clone());
    ScalarField::new(move |x| Ok(op(a.eval_jets(x)?, b.eval_jets(x)?)))
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: &ScalarField) -> ScalarField {
        binary(self, rhs, |a, b| a + b)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: &ScalarField) -> ScalarField {
        binary(self, rhs, |a, b| a - b)
    }
}

impl Mul for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: &ScalarField) -> ScalarField {
        binary(self, rhs, |a, b| a * b)
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, c: f64) -> ScalarField {
        self.map(move |j| Ok(j * c))
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|j| Ok(-j))
    }
}

/// Components in the chart basis `∂₁, ∂₂, ∂₃`.
#[derive(Clone, Debug)]
pub struct VectorField(pub [ScalarField; 3]);

impl VectorField {
    pub fn new(c0: ScalarField, c1: ScalarField, c2: ScalarField) -> Self {
        VectorField([c0, c1, c2])
    }

    /// The coordinate field `∂_k` (0-based).
    pub fn coordinate(k: usize) -> Self {
        let mut c = [0.0; 3];
        c[k] = 1.0;
        Self::constant(c)
    }

    pub fn constant(c: [f64; 3]) -> Self {
        VectorField(c.map(ScalarField::constant))
    }

    pub fn jets(&self, p: Point) -> Result<[Jet3; 3]> {
        Ok([self.0[0].jet(p)?, self.0[1].jet(p)?, self.0[2].jet(p)?])
    }

    pub fn value(&self, p: Point) -> Result<[f64; 3]> {
        Ok(self.jets(p)?.map(|j| j.value))
    }

    pub fn scaled(&self, s: &ScalarField) -> VectorField {
        VectorField(self.0.clone().map(|c| &c * s))
    }

    pub fn add(&self, o: &VectorField) -> VectorField {
        VectorField([0, 1, 2].map(|i| &self.0[i] + &o.0[i]))
    }

    pub fn sub(&self, o: &VectorField) -> VectorField {
        VectorField([0, 1, 2].map(|i| &self.0[i] - &o.0[i]))
    }
}

/// Coefficients against `dx₁, dx₂, dx₃`.
#[derive(Clone, Debug)]
pub struct OneFormField(pub [ScalarField; 3]);

impl OneFormField {
    pub fn new(c0: ScalarField, c1: ScalarField, c2: ScalarField) -> Self {
        OneFormField([c0, c1, c2])
    }

    /// The exact form `df`.
    pub fn exact(f: &ScalarField) -> Self {
        OneFormField([0, 1, 2].map(|k| f.partial(k)))
    }

    pub fn jets(&self, p: Point) -> Result<[Jet3; 3]> {
        Ok([self.0[0].jet(p)?, self.0[1].jet(p)?, self.0[2].jet(p)?])
    }

    pub fn value(&self, p: Point) -> Result<[f64; 3]> {
        Ok(self.jets(p)?.map(|j| j.value))
    }

    pub fn scaled(&self, s: &ScalarField) -> OneFormField {
        OneFormField(self.0.clone().map(|c| &c * s))
    }
}

/// `[X,Y](p) = (X·∇)Y − (Y·∇)X`.
pub fn lie_bracket(x: &VectorField, y: &VectorField, p: Point) -> Result<[f64; 3]> {
    let (xj, yj) = (x.jets(p)?, y.jets(p)?);
    Ok(bracket_from_jets(&xj, &yj))
}

pub(crate) fn bracket_from_jets(x: &[Jet3; 3], y: &[Jet3; 3]) -> [f64; 3] {
    let mut out = [0.0; 3];
    for (k, o) in out.iter_mut().enumerate() {
        for i in 0..3 {
            *o += x[i].value * y[k].grad[i] - y[i].value * x[k].grad[i];
        }
    }
    out
}

/// The coefficient of `dω∧ω` against `dx₁∧dx₂∧dx₃`, i.e. `ω · curl ω`.
pub fn frobenius_residual(omega: &OneFormField, p: Point) -> Result<f64> {
    Ok(frobenius_from_jets(&omega.jets(p)?))
}

pub(crate) fn frobenius_from_jets(w: &[Jet3; 3]) -> f64 {
    let curl = [
        w[2].grad[1] - w[1].grad[2],
        w[0].grad[2] - w[2].grad[0],
        w[1].grad[0] - w[0].grad[1],
    ];
    w[0].value * curl[0] + w[1].value * curl[1] + w[2].value * curl[2]
}

/// Frobenius residual divided by the product of the coefficient norms
/// `|ω|·|∂ω|`, so that it does not change under rescaling of the chart.
pub fn frobenius_residual_scaled(omega: &OneFormField, p: Point) -> Result<f64> {
    let w = omega.jets(p)?;
    let raw = frobenius_from_jets(&w);
    let norm_w = w.iter().map(|j| j.value * j.value).sum::<f64>().sqrt();
    let norm_dw = w
        .iter()
        .flat_map(|j| j.grad)
        .map(|g| g * g)
        .sum::<f64>()
        .sqrt();
    let denom = norm_w * norm_dw;
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(raw / denom)
}

/// `X(p)·∇f(p)`.
pub fn directional_derivative(x: &VectorField, f: &ScalarField, p: Point) -> Result<f64> {
    let v = x.value(p)?;
    let g = f.gradient(p)?;
    Ok(v[0] * g[0] + v[1] * g[1] + v[2] * g[2])
}

/// `X f` as a field.
pub fn derivative_field(x: &VectorField, f: &ScalarField) -> ScalarField {
    let terms: Vec<ScalarField> = (0..3).map(|k| &x.0[k] * &f.partial(k)).collect();
    &(&terms[0] + &terms[1]) + &terms[2]
}

/// A smooth map between 3D charts, given by its component functions.
#[derive(Clone, Debug)]
pub struct Chart(pub [ScalarField; 3]);

impl Chart {
    pub fn new(c0: ScalarField, c1: ScalarField, c2: ScalarField) -> Self {
        Chart([c0, c1, c2])
    }

    pub fn identity() -> Self {
        Chart([0, 1, 2].map(ScalarField::coordinate))
    }

    pub fn apply(&self, p: Point) -> Result<Point> {
        Ok([
            self.0[0].value(p)?,
            self.0[1].value(p)?,
            self.0[2].value(p)?,
        ])
    }

    /// Row `i` holds the gradient of component `i`.
    pub fn jacobian(&self, p: Point) -> Result<Matrix3<f64>> {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            let g = self.0[i].gradient(p)?;
            for j in 0..3 {
                m[(i, j)] = g[j];
            }
        }
        Ok(m)
    }

    /// `f ∘ self`: a function on the source chart.
    pub fn pull_back(&self, f: &ScalarField) -> ScalarField {
        f.compose(&self.0)
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &Chart) -> Chart {
        Chart(self.0.clone().map(|c| c.compose(&inner.0)))
    }
}
