//! Nijenhuis operators in three dimensions.
//!
//! Operator fields are 3×3 matrices of [`ScalarField`]s acting on vectors in
//! the chart basis. The module builds the cyclic normal forms `A0…D3` together
//! with their Frobenius (companion) forms `F` and conjugating matrices `P`
//! (`P·J·P⁻¹ = F`), evaluates the Nijenhuis tensor by the bracket formula, and
//! builds operators from a frame and self-propelled functions.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, Matrix3, Vector3};

use crate::fields::{bracket_from_jets, Chart, Point, ScalarField, VectorField};
use crate::jets::Jet3;
use crate::solutions::{self_propelled_pair_residual, self_propelled_residual};
use crate::webs::EquationSpec;
use crate::{Error, Result};

/// Matrix entries indexed `[row][column]`.
#[derive(Clone, Debug)]
pub struct OperatorField(pub [[ScalarField; 3]; 3]);

fn sum3(a: ScalarField, b: ScalarField, c: ScalarField) -> ScalarField {
    ScalarField::new(move |x| Ok(a.eval_jets(x)? + b.eval_jets(x)? + c.eval_jets(x)?))
}

impl OperatorField {
    pub fn new(rows: [[ScalarField; 3]; 3]) -> Self {
        OperatorField(rows)
    }

    pub fn constant(m: Matrix3<f64>) -> Self {
        OperatorField([0, 1, 2].map(|i| [0, 1, 2].map(|j| ScalarField::constant(m[(i, j)]))))
    }

    pub fn identity() -> Self {
        Self::constant(Matrix3::identity())
    }

    pub fn diagonal(d: [ScalarField; 3]) -> Self {
        let zero = ScalarField::constant(0.0);
        let mut rows = [0, 1, 2].map(|_| [zero.clone(), zero.clone(), zero.clone()]);
        for (i, di) in d.into_iter().enumerate() {
            rows[i][i] = di;
        }
        OperatorField(rows)
    }

    pub fn entry(&self, i: usize, j: usize) -> &ScalarField {
        &self.0[i][j]
    }

    pub fn value(&self, p: Point) -> Result<Matrix3<f64>> {
        let mut m = Matrix3::zeros();
        for i in 0..3 {
            for j in 0..3 {
                m[(i, j)] = self.0[i][j].value(p)?;
            }
        }
        Ok(m)
    }

    /// The vector field `J X`.
    pub fn apply(&self, x: &VectorField) -> VectorField {
        VectorField([0, 1, 2].map(|i| {
            let row = &self.0[i];
            sum3(&row[0] * &x.0[0], &row[1] * &x.0[1], &row[2] * &x.0[2])
        }))
    }

    /// The matrix product `self · rhs`.
    pub fn compose(&self, rhs: &OperatorField) -> OperatorField {
        OperatorField([0, 1, 2].map(|i| {
            [0, 1, 2].map(|j| {
                sum3(
                    &self.0[i][0] * &rhs.0[0][j],
                    &self.0[i][1] * &rhs.0[1][j],
                    &self.0[i][2] * &rhs.0[2][j],
                )
            })
        }))
    }

    /// `J − λ·Id`.
    pub fn shifted(&self, lambda: f64) -> OperatorField {
        let mut rows = self.0.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = row[i].map(move |j| Ok(j - lambda));
        }
        OperatorField(rows)
    }

    pub fn transpose(&self) -> OperatorField {
        OperatorField([0, 1, 2].map(|i| [0, 1, 2].map(|j| self.0[j][i].clone())))
    }

    fn cofactor(&self, i: usize, j: usize) -> ScalarField {
        let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
        let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
        &(&self.0[r0][c0] * &self.0[r1][c1]) - &(&self.0[r0][c1] * &self.0[r1][c0])
    }

    /// The adjugate (transposed cofactor matrix), so `J·adj J = det J·Id`.
    pub fn adjugate(&self) -> OperatorField {
        OperatorField([0, 1, 2].map(|i| [0, 1, 2].map(|j| self.cofactor(j, i))))
    }

    pub fn determinant(&self) -> ScalarField {
        sum3(
            &self.0[0][0] * &self.cofactor(0, 0),
            &self.0[0][1] * &self.cofactor(0, 1),
            &self.0[0][2] * &self.cofactor(0, 2),
        )
    }

    /// Pointwise inverse; evaluation fails where the determinant vanishes.
    pub fn inverse(&self) -> OperatorField {
        let det = self.determinant();
        let adj = self.adjugate();
        OperatorField(adj.0.map(|row| row.map(|e| e.try_div(&det))))
    }

    /// The matrix whose columns are the given vector fields.
    pub fn from_columns(cols: &[VectorField; 3]) -> OperatorField {
        OperatorField([0, 1, 2].map(|i| [0, 1, 2].map(|k| cols[k].0[i].clone())))
    }
}

/// `N_J(X,Y) = [JX,JY] − J[JX,Y] − J[X,JY] + J²[X,Y]` at `p`.
pub fn nijenhuis_tensor(
    j: &OperatorField,
    x: &VectorField,
    y: &VectorField,
    p: Point,
) -> Result<[f64; 3]> {
    let b = Brackets::new(j, x, y, p)?;
    let jm = j.value(p)?;
    let n = b.jx_jy - jm * b.jx_y - jm * b.x_jy + jm * jm * b.x_y;
    Ok(n.into())
}

struct Brackets {
    jx_jy: Vector3<f64>,
    jx_y: Vector3<f64>,
    x_jy: Vector3<f64>,
    x_y: Vector3<f64>,
}

impl Brackets {
    fn new(j: &OperatorField, x: &VectorField, y: &VectorField, p: Point) -> Result<Self> {
        let (jx, jy) = (j.apply(x).jets(p)?, j.apply(y).jets(p)?);
        let (xj, yj) = (x.jets(p)?, y.jets(p)?);
        let v = |a: &[Jet3; 3], b: &[Jet3; 3]| Vector3::from(bracket_from_jets(a, b));
        Ok(Brackets {
            jx_jy: v(&jx, &jy),
            jx_y: v(&jx, &yj),
            x_jy: v(&xj, &jy),
            x_y: v(&xj, &yj),
        })
    }
}

/// Tolerance on `|df(X)|` for fields declared tangent to `{f = const}`.
pub const TANGENCY_TOLERANCE: f64 = 1e-10;

/// The two partial-Nijenhuis conditions for `J̄ = J|ker df` on fields tangent
/// to the level sets of `f`: returns `(df([X,Y]_J̄), N_J̄(X,Y))` at `p`, where
/// `[X,Y]_J̄ = [J̄X,Y] + [X,J̄Y] − J̄[X,Y]` and `N_J̄(X,Y) = [J̄X,J̄Y] − J̄[X,Y]_J̄`.
pub fn pno_residuals(
    j: &OperatorField,
    f: &ScalarField,
    x: &VectorField,
    y: &VectorField,
    p: Point,
) -> Result<(f64, [f64; 3])> {
    let df = Vector3::from(f.gradient(p)?);
    for v in [x, y] {
        let val = Vector3::from(v.value(p)?);
        let defect = df.dot(&val);
        if defect.abs() > TANGENCY_TOLERANCE * (1.0 + df.norm() * val.norm()) {
            return Err(Error::NotTangent { point: p, defect });
        }
    }
    let b = Brackets::new(j, x, y, p)?;
    let jm = j.value(p)?;
    let jbracket = b.jx_y + b.x_jy - jm * b.x_y;
    let n = b.jx_jy - jm * jbracket;
    Ok((df.dot(&jbracket), n.into()))
}

/// Two fields spanning the tangent planes of `{f = const}` wherever `∂₂f ≠ 0`:
/// `f₂∂₁ − f₁∂₂` and `f₃∂₂ − f₂∂₃`.
pub fn level_set_frame(f: &ScalarField) -> [VectorField; 2] {
    let zero = ScalarField::constant(0.0);
    let d: [ScalarField; 3] = [0, 1, 2].map(|k| f.partial(k));
    [
        VectorField::new(d[1].clone(), -&d[0], zero.clone()),
        VectorField::new(zero, d[2].clone(), -&d[1]),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NormalFormTag {
    A0,
    A1,
    A2,
    A3,
    B0,
    B1,
    B2,
    B3,
    C0,
    C1,
    D0,
    D1,
    D2,
    D3,
}

impl NormalFormTag {
    pub const ALL: [NormalFormTag; 14] = [
        NormalFormTag::A0,
        NormalFormTag::A1,
        NormalFormTag::A2,
        NormalFormTag::A3,
        NormalFormTag::B0,
        NormalFormTag::B1,
        NormalFormTag::B2,
        NormalFormTag::B3,
        NormalFormTag::C0,
        NormalFormTag::C1,
        NormalFormTag::D0,
        NormalFormTag::D1,
        NormalFormTag::D2,
        NormalFormTag::D3,
    ];

    pub fn name(self) -> &'static str {
        use NormalFormTag::*;
        match self {
            A0 => "A0",
            A1 => "A1",
            A2 => "A2",
            A3 => "A3",
            B0 => "B0",
            B1 => "B1",
            B2 => "B2",
            B3 => "B3",
            C0 => "C0",
            C1 => "C1",
            D0 => "D0",
            D1 => "D1",
            D2 => "D2",
            D3 => "D3",
        }
    }

    pub fn family(self) -> char {
        self.name().as_bytes()[0] as char
    }

    /// The arguments substituted into the generic `J`, `F`, `P` of the family:
    /// `(u₁,u₂,u₃)` for A and D, `(·,u₂,u₃)` for B and C.
    fn args<T: Copy>(self, x: [T; 3], c: [T; 3], one: T) -> [T; 3] {
        use NormalFormTag::*;
        match self {
            A0 | B0 | D0 => x,
            A1 | B1 | D1 => [x[0], x[1], c[2]],
            A2 => [x[0], c[1], c[2]],
            A3 | B3 | D3 => c,
            B2 | D2 => [c[0], c[1], x[2]],
            C0 => [x[0], x[1], x[2]],
            C1 => [x[0], one, c[2]],
        }
    }
}

impl fmt::Display for NormalFormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormalFormTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        NormalFormTag::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::invalid(format!("unknown normal-form tag `{s}`")))
    }
}

/// A normal-form operator: one of the fourteen cyclic forms with its
/// constants, or a general family with functional parameters.
#[derive(Clone, Debug)]
pub enum NormalFormSpec {
    Tabulated { tag: NormalFormTag, c: [f64; 3] },
    Family(EquationSpec),
}

impl NormalFormSpec {
    pub fn tabulated(tag: NormalFormTag, c: [f64; 3]) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("normal-form constants must be finite"));
        }
        if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
            return Err(Error::invalid(format!(
                "normal-form constants must be pairwise distinct, got {c:?}"
            )));
        }
        if matches!(tag, NormalFormTag::D2 | NormalFormTag::D3) && c[1] == 0.0 {
            return Err(Error::invalid("D2 and D3 require c2 ≠ 0"));
        }
        Ok(NormalFormSpec::Tabulated { tag, c })
    }
}

fn j_generic(family: char, u: [Jet3; 3]) -> [[Jet3; 3]; 3] {
    let (z, one) = (Jet3::ZERO, Jet3::constant(1.0));
    match family {
        'A' => [[u[0], z, z], [z, u[1], z], [z, z, u[2]]],
        'B' => [[u[1], one, z], [z, u[1], z], [z, z, u[2]]],
        'C' => [[u[2], z, one], [one, u[2], -u[1]], [z, z, u[2]]],
        _ => [[u[0], -u[1], z], [u[1], u[0], z], [z, z, u[2]]],
    }
}

/// The companion matrix `F(φ₁,φ₂,φ₃)` with first column `e₂`, second `e₃`
/// and third `(φ₁φ₂φ₃, −φ₁φ₂−φ₁φ₃−φ₂φ₃, φ₁+φ₂+φ₃)`.
pub fn companion_matrix(coefficients: [f64; 3]) -> Matrix3<f64> {
    let [f0, f1, f2] = coefficients;
    Matrix3::new(0.0, 0.0, f0, 1.0, 0.0, f1, 0.0, 1.0, f2)
}

fn elementary(phi: [f64; 3]) -> [f64; 3] {
    let [a, b, c] = phi;
    [a * b * c, -(a * b + a * c + b * c), a + b + c]
}

fn f_generic(family: char, u: [f64; 3]) -> Matrix3<f64> {
    let [u1, u2, u3] = u;
    match family {
        'A' => companion_matrix(elementary(u)),
        'B' => companion_matrix(elementary([u2, u2, u3])),
        'C' => companion_matrix(elementary([u3, u3, u3])),
        _ => {
            let m = u1 * u1 + u2 * u2;
            companion_matrix([m * u3, -m - 2.0 * u1 * u3, 2.0 * u1 + u3])
        }
    }
}

fn p_generic(family: char, u: [f64; 3]) -> Matrix3<f64> {
    let [u1, u2, u3] = u;
    match family {
        'A' => {
            let (d1, d2, d3) = (
                (u1 - u2) * (u1 - u3),
                (u2 - u1) * (u2 - u3),
                (u3 - u1) * (u3 - u2),
            );
            Matrix3::new(
                u2 * u3 / d1,
                u1 * u3 / d2,
                u1 * u2 / d3,
                -(u2 + u3) / d1,
                -(u1 + u3) / d2,
                -(u1 + u2) / d3,
                1.0 / d1,
                1.0 / d2,
                1.0 / d3,
            )
        }
        'B' => {
            let d = u2 - u3;
            let d2 = d * d;
            Matrix3::new(
                u2 * u3 / d,
                -u3 * (2.0 * u2 - u3) / d2,
                u2 * u2 / d2,
                -(u2 + u3) / d,
                2.0 * u2 / d2,
                -2.0 * u2 / d2,
                1.0 / d,
                -1.0 / d2,
                1.0 / d2,
            )
        }
        'C' => Matrix3::new(
            -u3,
            u3 * u3,
            u2 * u3 + 1.0,
            1.0,
            -2.0 * u3,
            -u2,
            0.0,
            1.0,
            0.0,
        ),
        _ => {
            let d = (u1 - u3) * (u1 - u3) + u2 * u2;
            let e = u2 * d;
            Matrix3::new(
                -u3 * (2.0 * u1 - u3) / d,
                u3 * (u1 * u1 - u1 * u3 - u2 * u2) / e,
                (u1 * u1 + u2 * u2) / d,
                2.0 * u1 / d,
                -(u1 * u1 - u2 * u2 - u3 * u3) / e,
                -2.0 * u1 / d,
                -1.0 / d,
                (u1 - u3) / e,
                1.0 / d,
            )
        }
    }
}

/// Distance-like measure of `p` from the pole locus of the tag's `P` matrix
/// (`∞` when there is none).
pub fn pole_distance(tag: NormalFormTag, c: [f64; 3], p: Point) -> f64 {
    let u = tag.args(p, c, 1.0);
    match tag.family() {
        'A' => (u[0] - u[1])
            .abs()
            .min((u[0] - u[2]).abs())
            .min((u[1] - u[2]).abs()),
        'B' => (u[1] - u[2]).abs(),
        'C' => f64::INFINITY,
        _ => u[1].abs(),
    }
}

pub fn normal_form_operator(spec: &NormalFormSpec) -> Result<OperatorField> {
    match spec {
        NormalFormSpec::Tabulated { tag, c } => {
            let (tag, c) = (*tag, *c);
            let family = tag.family();
            Ok(OperatorField([0, 1, 2].map(|i| {
                [0, 1, 2].map(|j| {
                    ScalarField::new(move |x| {
                        let cj = c.map(Jet3::constant);
                        let u = tag.args(*x, cj, Jet3::constant(1.0));
                        Ok(j_generic(family, u)[i][j])
                    })
                })
            })))
        }
        NormalFormSpec::Family(eq) => eq.operator(),
    }
}

/// `(J_X(p), F_X(p), P_X(p))` for a tabulated tag.
pub fn tabulated_matrices(
    tag: NormalFormTag,
    c: [f64; 3],
    p: Point,
) -> (Matrix3<f64>, Matrix3<f64>, Matrix3<f64>) {
    let family = tag.family();
    let u = tag.args(p, c, 1.0);
    let uj = u.map(Jet3::constant);
    let jm = j_generic(family, uj);
    let j = Matrix3::from_fn(|r, s| jm[r][s].value);
    (j, f_generic(family, u), p_generic(family, u))
}

/// `max |P·J·P⁻¹ − F|` at `p` for a tabulated form.
pub fn frobenius_conjugation_residual(spec: &NormalFormSpec, p: Point) -> Result<f64> {
    let NormalFormSpec::Tabulated { tag, c } = spec else {
        return Err(Error::Unsupported(
            "Frobenius conjugation tables exist only for the fourteen normal forms",
        ));
    };
    if pole_distance(*tag, *c, p) < 1e-12 {
        return Err(Error::Singular {
            what: "conjugating matrix P",
            point: p,
        });
    }
    let (j, f, pm) = tabulated_matrices(*tag, *c, p);
    let inv = pm.try_inverse().ok_or(Error::Singular {
        what: "conjugating matrix P",
        point: p,
    })?;
    let r = pm * j * inv - f;
    Ok(r.amax())
}

/// `max |DΦ·J_src·DΦ⁻¹ − J_dst(Φ(p))|`, the defect of `Φ_* J_src = J_dst` at `p`.
pub fn pushforward_residual(
    phi: &Chart,
    src: &OperatorField,
    dst: &OperatorField,
    p: Point,
) -> Result<f64> {
    let d = phi.jacobian(p)?;
    let inv = d.try_inverse().ok_or(Error::Singular {
        what: "chart Jacobian",
        point: p,
    })?;
    let q = phi.apply(p)?;
    Ok((d * src.value(p)? * inv - dst.value(q)?).amax())
}

/// Three self-propelled functions, or a self-propelled pair `(η, ζ)` standing
/// for the complex conjugate functions `η ± iζ` together with one real `φ₃`.
#[derive(Clone, Debug)]
pub enum SelfPropelledTriple {
    Real([ScalarField; 3]),
    ComplexPair {
        eta: ScalarField,
        zeta: ScalarField,
        phi3: ScalarField,
    },
}

impl SelfPropelledTriple {
    /// The third-column entries `(f₀, f₁, f₂)` of the companion matrix.
    pub fn companion_entries(&self) -> [ScalarField; 3] {
        match self {
            SelfPropelledTriple::Real(phi) => {
                let [a, b, c] = phi.clone();
                let f0 = &(&a * &b) * &c;
                let f1 = -&sum3(&a * &b, &a * &c, &b * &c);
                let f2 = sum3(a, b, c);
                [f0, f1, f2]
            }
            SelfPropelledTriple::ComplexPair { eta, zeta, phi3 } => {
                let m = &(eta * eta) + &(zeta * zeta);
                let f0 = &m * phi3;
                let f1 = -&(&m + &(&(eta * phi3) * 2.0));
                let f2 = &(eta * 2.0) + phi3;
                [f0, f1, f2]
            }
        }
    }
}

/// The operator whose matrix in the frame `X₀, X₁, X₂` is the companion
/// matrix of the triple, expressed in the chart basis: `J = M·F·M⁻¹` with `M`
/// the frame matrix.
///
/// At each probe point the frame must be nondegenerate and every function of
/// the triple must satisfy the self-propelled system to `tolerance`.
pub fn build_from_self_propelled(
    frame: &[VectorField; 3],
    triple: &SelfPropelledTriple,
    probes: &[Point],
    tolerance: f64,
) -> Result<OperatorField> {
    let m = OperatorField::from_columns(frame);
    let det = m.determinant();
    for &p in probes {
        let d = det.value(p)?;
        if d.abs() < 1e-12 {
            return Err(Error::RankCollapse {
                what: "frame",
                point: p,
            });
        }
        let worst = match triple {
            SelfPropelledTriple::Real(phi) => phi
                .iter()
                .map(|f| self_propelled_residual(frame, f, p))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .fold(0.0f64, |a, r| a.max(r.abs())),
            SelfPropelledTriple::ComplexPair { eta, zeta, phi3 } => {
                let pair = self_propelled_pair_residual(frame, eta, zeta, p)?;
                let single = self_propelled_residual(frame, phi3, p)?;
                pair.iter()
                    .chain(&single)
                    .fold(0.0f64, |a, r| a.max(r.abs()))
            }
        };
        if worst > tolerance {
            return Err(Error::invalid(format!(
                "function is not self-propelled at {p:?} (residual {worst:e})"
            )));
        }
    }
    let [f0, f1, f2] = triple.companion_entries();
    let last = VectorField([0, 1, 2].map(|i| {
        sum3(
            &f0 * &frame[0].0[i],
            &f1 * &frame[1].0[i],
            &f2 * &frame[2].0[i],
        )
    }));
    let mf = OperatorField::from_columns(&[frame[1].clone(), frame[2].clone(), last]);
    Ok(mf.compose(&m.inverse()))
}

/// `max(|a₁ − b₂|, |a₂ + b₁|)`: the Cauchy–Riemann defect of the pair `(a, b)`.
pub fn harmonic_conjugacy_residual(a: &ScalarField, b: &ScalarField, p: Point) -> Result<f64> {
    let (ga, gb) = (a.gradient(p)?, b.gradient(p)?);
    Ok((ga[0] - gb[1]).abs().max((ga[1] + gb[0]).abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// Three pairwise distinct real eigenvalues (types A).
    DistinctReal,
    /// A real double eigenvalue and a simple one (type B).
    DoubleReal,
    /// A real triple eigenvalue (type C).
    TripleReal,
    /// A complex-conjugate pair and a real eigenvalue (type D).
    ComplexPair,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDiagnostics {
    pub eigenvalues: [Complex<f64>; 3],
    pub kind: SpectrumKind,
}

/// Eigenvalues of `J(p)` and their multiplicity pattern; values closer than
/// `tol` (relative to the spectral radius) count as equal.
pub fn spectrum(j: &OperatorField, p: Point, tol: f64) -> Result<SpectrumDiagnostics> {
    let m = j.value(p)?;
    let ev = m.complex_eigenvalues();
    let mut e = [ev[0], ev[1], ev[2]];
    e.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = e.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let close = |a: Complex<f64>, b: Complex<f64>| (a - b).norm() <= tol * scale;
    let kind = if e.iter().any(|z| z.im.abs() > tol * scale) {
        SpectrumKind::ComplexPair
    } else {
        match (close(e[0], e[1]), close(e[1], e[2]), close(e[0], e[2])) {
            (true, true, _) => SpectrumKind::TripleReal,
            (true, _, _) | (_, true, _) | (_, _, true) => SpectrumKind::DoubleReal,
            _ => SpectrumKind::DistinctReal,
        }
    };
    Ok(SpectrumDiagnostics {
        eigenvalues: e,
        kind,
    })
}
