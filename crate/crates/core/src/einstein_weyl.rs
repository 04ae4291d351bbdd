//! Einstein–Weyl structures on solutions of equation A.
//!
//! A Weyl structure is a metric `g` with a one-form `ω`; its connection is the
//! torsion-free `∇` with `∇g = ω⊗g`. The structure is Einstein–Weyl when the
//! symmetrized Ricci tensor of `∇` is proportional to `g`.

use crate::fields::{OneFormField, Point, ScalarField};
use crate::jets::Jet3;
use crate::{Error, Result};

/// Symmetric matrix of component fields `g_ij`.
pub type MetricField = [[ScalarField; 3]; 3];

#[derive(Clone, Debug)]
pub struct WeylStructure {
    pub g: MetricField,
    pub omega: OneFormField,
}

type Tensor3 = [[[Jet3; 3]; 3]; 3];

fn others(i: usize) -> (usize, usize) {
    ((i + 1) % 3, (i + 2) % 3)
}

fn nonzero(j: Jet3, what: &'static str, x: &[Jet3; 3]) -> Result<Jet3> {
    if j.value == 0.0 || !j.value.is_finite() {
        return Err(Error::Singular {
            what,
            point: [x[0].value, x[1].value, x[2].value],
        });
    }
    Ok(j)
}

/// The metric and one-form attached to a solution `f` of equation A with
/// eigenvalue functions `λ_i(x_i)`:
/// `g = Σ (λ_j−λ_k)² f_i/(f_j f_k) dx_i² + 2 Σ_{i<j} (λ_i−λ_k)(λ_j−λ_k)/f_k dx_i dx_j`
/// and `ω_i = (1/(λ_i−λ_j) + 1/(λ_i−λ_k))λ_i' − (f_i/f_j)λ_j'/(λ_i−λ_j)
/// − (f_i/f_k)λ_k'/(λ_i−λ_k) − f_ii/f_i`.
/// Evaluation fails where some `f_i` vanishes or two `λ`'s coincide.
pub fn assemble_weyl_a(lambda: &[ScalarField; 3], f: &ScalarField) -> WeylStructure {
    let df: [ScalarField; 3] = [0, 1, 2].map(|k| f.partial(k));
    let dl: [ScalarField; 3] = [0, 1, 2].map(|k| lambda[k].partial(k));
    let lambda = lambda.clone();
    let g = [0, 1, 2].map(|i| {
        [0, 1, 2].map(|j| {
            let (df, lambda) = (df.clone(), lambda.clone());
            ScalarField::new(move |x| {
                let mut fd = [Jet3::ZERO; 3];
                for (k, d) in fd.iter_mut().enumerate() {
                    *d = nonzero(df[k].eval_jets(x)?, "metric (vanishing f_xi)", x)?;
                }
                let l = [
                    lambda[0].eval_jets(x)?,
                    lambda[1].eval_jets(x)?,
                    lambda[2].eval_jets(x)?,
                ];
                if i == j {
                    let (a, b) = others(i);
                    let d = l[a] - l[b];
                    (d * d * fd[i]).try_div(&(fd[a] * fd[b]))
                } else {
                    let k = 3 - i - j;
                    ((l[i] - l[k]) * (l[j] - l[k])).try_div(&fd[k])
                }
            })
        })
    });
    let omega = OneFormField([0, 1, 2].map(|i| {
        let (df, dl, lambda) = (df.clone(), dl.clone(), lambda.clone());
        let fii = f.partial(i).partial(i);
        ScalarField::new(move |x| {
            let (j, k) = others(i);
            let l = [
                lambda[0].eval_jets(x)?,
                lambda[1].eval_jets(x)?,
                lambda[2].eval_jets(x)?,
            ];
            let d = [
                dl[0].eval_jets(x)?,
                dl[1].eval_jets(x)?,
                dl[2].eval_jets(x)?,
            ];
            let fd = [
                df[0].eval_jets(x)?,
                df[1].eval_jets(x)?,
                df[2].eval_jets(x)?,
            ];
            let lij = nonzero(l[i] - l[j], "Weyl form (coincident eigenvalues)", x)?;
            let lik = nonzero(l[i] - l[k], "Weyl form (coincident eigenvalues)", x)?;
            let fi = nonzero(fd[i], "Weyl form (vanishing f_xi)", x)?;
            let fj = nonzero(fd[j], "Weyl form (vanishing f_xi)", x)?;
            let fk = nonzero(fd[k], "Weyl form (vanishing f_xi)", x)?;
            let first = (lij.recip()? + lik.recip()?) * d[i];
            let second = (fi * d[j]).try_div(&(fj * lij))?;
            let third = (fi * d[k]).try_div(&(fk * lik))?;
            let fourth = fii.eval_jets(x)?.try_div(&fi)?;
            Ok(first - second - third - fourth)
        })
    }));
    WeylStructure { g, omega }
}

fn metric_jets(g: &MetricField, x: &[Jet3; 3]) -> Result<[[Jet3; 3]; 3]> {
    let mut out = [[Jet3::ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = g[i][j].eval_jets(x)?;
        }
    }
    Ok(out)
}

fn determinant(m: &[[Jet3; 3]; 3]) -> Jet3 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn inverse(m: &[[Jet3; 3]; 3], x: &[Jet3; 3]) -> Result<[[Jet3; 3]; 3]> {
    let det = nonzero(determinant(m), "metric", x)?;
    let inv_det = det.recip()?;
    let mut out = [[Jet3::ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            *e = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * inv_det;
        }
    }
    Ok(out)
}

/// `∂_l g_ij` as fields, indexed `[l][i][j]`.
fn metric_derivatives(g: &MetricField) -> [[[ScalarField; 3]; 3]; 3] {
    [0, 1, 2].map(|l| [0, 1, 2].map(|i| [0, 1, 2].map(|j| g[i][j].partial(l))))
}

fn tensor_jets(t: &[[[ScalarField; 3]; 3]; 3], x: &[Jet3; 3]) -> Result<Tensor3> {
    let mut out = [[[Jet3::ZERO; 3]; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                out[a][b][c] = t[a][b][c].eval_jets(x)?;
            }
        }
    }
    Ok(out)
}

/// `ω_k = 2 g_kj ∂_l g^{lj} + ∂_k ln det g`, written as
/// `−2 g^{la} ∂_l g_ak + g^{ab} ∂_k g_ab`.
pub fn universal_omega_field(g: &MetricField) -> OneFormField {
    let dg = metric_derivatives(g);
    OneFormField([0, 1, 2].map(|k| {
        let (g, dg) = (g.clone(), dg.clone());
        ScalarField::new(move |x| {
            let gm = metric_jets(&g, x)?;
            let gi = inverse(&gm, x)?;
            let d = tensor_jets(&dg, x)?;
            let mut acc = Jet3::ZERO;
            for a in 0..3 {
                for b in 0..3 {
                    acc += gi[a][b] * d[k][a][b] - (gi[a][b] * d[a][b][k]).scale(2.0);
                }
            }
            Ok(acc)
        })
    }))
}

pub fn universal_omega(g: &MetricField, p: Point) -> Result<[f64; 3]> {
    universal_omega_field(g).value(p)
}

impl WeylStructure {
    /// A user-supplied candidate; `g` must be symmetric.
    pub fn new(g: MetricField, omega: OneFormField) -> Self {
        WeylStructure { g, omega }
    }

    /// `g` with the one-form given by [`universal_omega_field`].
    pub fn with_universal_omega(g: MetricField) -> Self {
        let omega = universal_omega_field(&g);
        WeylStructure { g, omega }
    }

    pub fn metric_at(&self, p: Point) -> Result<[[f64; 3]; 3]> {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.g[i][j].value(p)?;
            }
        }
        Ok(m)
    }

    /// The same structure in the gauge `g ↦ s²g`, `ω ↦ ω + 2 d ln s`.
    pub fn rescaled(&self, s: &ScalarField) -> WeylStructure {
        let s2 = s * s;
        let g = self.g.clone().map(|row| row.map(|e| &e * &s2));
        let omega = OneFormField([0, 1, 2].map(|k| {
            let shift = &s.partial(k).try_div(s) * 2.0;
            &self.omega.0[k] + &shift
        }));
        WeylStructure { g, omega }
    }

    /// Christoffel symbols `Γ^k_ij` of the Weyl connection, indexed `[k][i][j]`,
    /// as jets exact through first order.
    pub fn christoffel(&self, p: Point) -> Result<Tensor3> {
        let x = Jet3::coordinates(p);
        self.christoffel_at(&x, &metric_derivatives(&self.g))
    }

    fn christoffel_at(&self, x: &[Jet3; 3], dg: &[[[ScalarField; 3]; 3]; 3]) -> Result<Tensor3> {
        let gm = metric_jets(&self.g, x)?;
        let gi = inverse(&gm, x)?;
        let d = tensor_jets(dg, x)?;
        let w = self.omega.jets_at(x)?;
        let mut w_up = [Jet3::ZERO; 3];
        for (k, wk) in w_up.iter_mut().enumerate() {
            for l in 0..3 {
                *wk += gi[k][l] * w[l];
            }
        }
        let mut out = [[[Jet3::ZERO; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut lc = Jet3::ZERO;
                    for l in 0..3 {
                        lc += gi[k][l] * (d[i][j][l] + d[j][i][l] - d[l][i][j]);
                    }
                    let mut weyl = gm[i][j] * w_up[k] * -1.0;
                    if k == j {
                        weyl += w[i];
                    }
                    if k == i {
                        weyl += w[j];
                    }
                    out[k][i][j] = (lc - weyl).scale(0.5);
                }
            }
        }
        Ok(out)
    }

    /// `∇_k g_ij` at `p`, indexed `[k][i][j]`.
    pub fn covariant_derivative_of_metric(&self, p: Point) -> Result<[[[f64; 3]; 3]; 3]> {
        let gamma = self.christoffel(p)?;
        let x = Jet3::coordinates(p);
        let gm = metric_jets(&self.g, &x)?;
        let mut out = [[[0.0; 3]; 3]; 3];
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    let mut v = gm[i][j].grad[k];
                    for l in 0..3 {
                        v -= gamma[l][k][i].value * gm[l][j].value
                            + gamma[l][k][j].value * gm[i][l].value;
                    }
                    out[k][i][j] = v;
                }
            }
        }
        Ok(out)
    }

    /// `max |∇_k g_ij − ω_k g_ij|` at `p`.
    pub fn nonmetricity_residual(&self, p: Point) -> Result<f64> {
        let ng = self.covariant_derivative_of_metric(p)?;
        let w = self.omega.value(p)?;
        let g = self.metric_at(p)?;
        let mut worst = 0.0f64;
        for k in 0..3 {
            for i in 0..3 {
                for j in 0..3 {
                    worst = worst.max((ng[k][i][j] - w[k] * g[i][j]).abs());
                }
            }
        }
        Ok(worst)
    }

    /// The Ricci tensor `R_jk = ∂_lΓ^l_jk − ∂_kΓ^l_lj + Γ^l_lm Γ^m_jk − Γ^l_km Γ^m_lj`.
    pub fn ricci(&self, p: Point) -> Result<[[f64; 3]; 3]> {
        let gamma = self.christoffel(p)?;
        let mut r = [[0.0; 3]; 3];
        for (j, row) in r.iter_mut().enumerate() {
            for (k, e) in row.iter_mut().enumerate() {
                let mut v = 0.0;
                for l in 0..3 {
                    v += gamma[l][j][k].grad[l] - gamma[l][l][j].grad[k];
                    for m in 0..3 {
                        v += gamma[l][l][m].value * gamma[m][j][k].value
                            - gamma[l][k][m].value * gamma[m][l][j].value;
                    }
                }
                *e = v;
            }
        }
        Ok(r)
    }
}

/// `max |S − (tr_g S / 3) g|` for the symmetrized Ricci tensor `S` of the
/// Weyl connection at `p`; zero exactly when the structure is Einstein–Weyl.
pub fn einstein_weyl_residual(w: &WeylStructure, p: Point) -> Result<f64> {
    let r = w.ricci(p)?;
    let g = w.metric_at(p)?;
    let gm = nalgebra::Matrix3::from_fn(|i, j| g[i][j]);
    let gi = gm.try_inverse().ok_or(Error::Singular {
        what: "metric",
        point: p,
    })?;
    let s = nalgebra::Matrix3::from_fn(|i, j| 0.5 * (r[i][j] + r[j][i]));
    let trace = (gi.transpose().component_mul(&s)).sum();
    Ok((s - gm * (trace / 3.0)).amax())
}

trait JetsAt {
    fn jets_at(&self, x: &[Jet3; 3]) -> Result<[Jet3; 3]>;
}

impl JetsAt for OneFormField {
    fn jets_at(&self, x: &[Jet3; 3]) -> Result<[Jet3; 3]> {
        Ok([
            self.0[0].eval_jets(x)?,
            self.0[1].eval_jets(x)?,
            self.0[2].eval_jets(x)?,
        ])
    }
}
