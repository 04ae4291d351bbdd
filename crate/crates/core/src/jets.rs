//! Truncated Taylor arithmetic in three variables through total degree 3.
//!
//! A [`Jet3`] stores the value of a function together with every partial
//! derivative up to order three at one point. Symmetric derivatives are kept
//! once per unordered multi-index, so a jet is exactly 1 + 3 + 6 + 10 = 20
//! numbers. Arithmetic on jets is exact up to floating-point rounding: the
//! product follows the truncated Leibniz rule and univariate functions are
//! applied by Faà di Bruno composition.

use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Slot of `∂_i∂_j` in [`Jet3::hess`].
pub const HESS_INDEX: [[usize; 3]; 3] = [[0, 1, 2], [1, 3, 4], [2, 4, 5]];

/// Slot of `∂_i∂_j∂_k` in [`Jet3::third`].
pub const THIRD_INDEX: [[[usize; 3]; 3]; 3] = [
    [[0, 1, 2], [1, 3, 4], [2, 4, 5]],
    [[1, 3, 4], [3, 6, 7], [4, 7, 8]],
    [[2, 4, 5], [4, 7, 8], [5, 8, 9]],
];

/// Sorted multi-indices, in storage order.
pub const HESS_PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
pub const THIRD_TRIPLES: [(usize, usize, usize); 10] = [
    (0, 0, 0),
    (0, 0, 1),
    (0, 0, 2),
    (0, 1, 1),
    (0, 1, 2),
    (0, 2, 2),
    (1, 1, 1),
    (1, 1, 2),
    (1, 2, 2),
    (2, 2, 2),
];

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Jet3 {
    pub value: f64,
    pub grad: [f64; 3],
    pub hess: [f64; 6],
    pub third: [f64; 10],
}

impl Jet3 {
    pub const ZERO: Jet3 = Jet3 {
        value: 0.0,
        grad: [0.0; 3],
        hess: [0.0; 6],
        third: [0.0; 10],
    };

    pub fn constant(value: f64) -> Self {
        Jet3 {
            value,
            ..Self::ZERO
        }
    }

    /// The coordinate function `x_axis` at `p`; `axis` is 1-based.
    pub fn coordinate(axis: usize, p: [f64; 3]) -> Result<Self> {
        if !(1..=3).contains(&axis) {
            return Err(Error::AxisOutOfRange(axis));
        }
        Ok(Self::variable(axis - 1, p[axis - 1]))
    }

    /// Independent variable with 0-based index `k` and value `value`.
    pub fn variable(k: usize, value: f64) -> Self {
        let mut j = Self::constant(value);
        j.grad[k] = 1.0;
        j
    }

    /// The three coordinate jets at `p`.
    pub fn coordinates(p: [f64; 3]) -> [Jet3; 3] {
        [
            Self::variable(0, p[0]),
            Self::variable(1, p[1]),
            Self::variable(2, p[2]),
        ]
    }

    #[inline]
    pub fn d2(&self, i: usize, j: usize) -> f64 {
        self.hess[HESS_INDEX[i][j]]
    }

    #[inline]
    pub fn d3(&self, i: usize, j: usize, k: usize) -> f64 {
        self.third[THIRD_INDEX[i][j][k]]
    }

    /// The partial derivative `∂_k` of this jet.
    ///
    /// The result is exact through total degree 2 only; its third-order
    /// slots are zero because the source carries no fourth derivatives.
    pub fn partial(&self, k: usize) -> Jet3 {
        let mut out = Jet3::constant(self.grad[k]);
        for i in 0..3 {
            out.grad[i] = self.d2(k, i);
        }
        for (s, &(i, j)) in HESS_PAIRS.iter().enumerate() {
            out.hess[s] = self.d3(k, i, j);
        }
        out
    }

    fn map_slots(&self, f: impl Fn(f64) -> f64) -> Jet3 {
        Jet3 {
            value: f(self.value),
            grad: self.grad.map(&f),
            hess: self.hess.map(&f),
            third: self.third.map(&f),
        }
    }

    fn zip_slots(&self, o: &Jet3, f: impl Fn(f64, f64) -> f64) -> Jet3 {
        let mut out = *self;
        out.value = f(self.value, o.value);
        for i in 0..3 {
            out.grad[i] = f(self.grad[i], o.grad[i]);
        }
        for i in 0..6 {
            out.hess[i] = f(self.hess[i], o.hess[i]);
        }
        for i in 0..10 {
            out.third[i] = f(self.third[i], o.third[i]);
        }
        out
    }

    pub fn scale(&self, s: f64) -> Jet3 {
        self.map_slots(|v| v * s)
    }

    /// Composes the univariate function with derivatives `g = [g, g', g'', g''']`
    /// (taken at `self.value`) with this jet.
    pub fn compose_univariate(&self, g: [f64; 4]) -> Jet3 {
        let a = self;
        let mut out = Jet3::constant(g[0]);
        for i in 0..3 {
            out.grad[i] = g[1] * a.grad[i];
        }
        for (s, &(i, j)) in HESS_PAIRS.iter().enumerate() {
            out.hess[s] = g[1] * a.d2(i, j) + g[2] * a.grad[i] * a.grad[j];
        }
        for (s, &(i, j, k)) in THIRD_TRIPLES.iter().enumerate() {
            out.third[s] = g[1] * a.d3(i, j, k)
                + g[2] * (a.d2(i, j) * a.grad[k] + a.d2(i, k) * a.grad[j] + a.d2(j, k) * a.grad[i])
                + g[3] * a.grad[i] * a.grad[j] * a.grad[k];
        }
        out
    }

    /// Substitutes jets for the three variables of the Taylor polynomial
    /// represented by `self` (expanded around the values of `args`).
    ///
    /// When `args` are the coordinate jets at the expansion point this is the
    /// identity; in general it is the truncated composition `self ∘ args`.
    pub fn compose_with(&self, args: &[Jet3; 3]) -> Jet3 {
        let d: [Jet3; 3] = args.map(|a| Jet3 { value: 0.0, ..a });
        let mut out = Jet3::constant(self.value);
        for i in 0..3 {
            out += d[i].scale(self.grad[i]);
        }
        for i in 0..3 {
            for j in 0..3 {
                let c = 0.5 * self.d2(i, j);
                if c != 0.0 {
                    out += (d[i] * d[j]).scale(c);
                }
            }
        }
        for &(i, j, k) in THIRD_TRIPLES.iter() {
            let c = self.d3(i, j, k);
            if c != 0.0 {
                // Each sorted triple stands for its distinct permutations.
                let perms = match (i == j, j == k) {
                    (true, true) => 1.0,
                    (false, false) => 6.0,
                    _ => 3.0,
                };
                out += (d[i] * d[j] * d[k]).scale(c * perms / 6.0);
            }
        }
        out
    }

    pub fn exp(&self) -> Jet3 {
        let e = self.value.exp();
        self.compose_univariate([e, e, e, e])
    }

    pub fn ln(&self) -> Result<Jet3> {
        let x = self.value;
        if x.is_nan() || x <= 0.0 {
            return Err(Error::Domain { op: "ln", value: x });
        }
        Ok(self.compose_univariate([x.ln(), 1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x)]))
    }

    pub fn recip(&self) -> Result<Jet3> {
        let x = self.value;
        if x == 0.0 || !x.is_finite() {
            return Err(Error::Domain {
                op: "reciprocal",
                value: x,
            });
        }
        let r = 1.0 / x;
        Ok(self.compose_univariate([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r]))
    }

    pub fn sqrt(&self) -> Result<Jet3> {
        let x = self.value;
        if x.is_nan() || x <= 0.0 {
            return Err(Error::Domain {
                op: "sqrt",
                value: x,
            });
        }
        let s = x.sqrt();
        Ok(self.compose_univariate([s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)]))
    }

    /// Integer power; negative exponents require a nonzero value.
    pub fn powi(&self, n: i32) -> Result<Jet3> {
        let x = self.value;
        if n < 0 && x == 0.0 {
            return Err(Error::Domain {
                op: "powi",
                value: x,
            });
        }
        let nf = n as f64;
        let term = |k: i32, c: f64| {
            if c == 0.0 {
                0.0
            } else {
                c * x.powi(n - k)
            }
        };
        Ok(self.compose_univariate([
            x.powi(n),
            term(1, nf),
            term(2, nf * (nf - 1.0)),
            term(3, nf * (nf - 1.0) * (nf - 2.0)),
        ]))
    }

    pub fn try_div(&self, rhs: &Jet3) -> Result<Jet3> {
        Ok(*self * rhs.recip()?)
    }
}

impl From<f64> for Jet3 {
    fn from(v: f64) -> Self {
        Jet3::constant(v)
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, o: Jet3) -> Jet3 {
        self.zip_slots(&o, |a, b| a + b)
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, o: Jet3) -> Jet3 {
        self.zip_slots(&o, |a, b| a - b)
    }
}

impl AddAssign for Jet3 {
    fn add_assign(&mut self, o: Jet3) {
        *self = *self + o;
    }
}

impl SubAssign for Jet3 {
    fn sub_assign(&mut self, o: Jet3) {
        *self = *self - o;
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Jet3 {
        self.map_slots(|v| -v)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, b: Jet3) -> Jet3 {
        let a = self;
        let mut out = Jet3::constant(a.value * b.value);
        for i in 0..3 {
            out.grad[i] = a.grad[i] * b.value + a.value * b.grad[i];
        }
        for (s, &(i, j)) in HESS_PAIRS.iter().enumerate() {
            out.hess[s] = a.d2(i, j) * b.value
                + a.grad[i] * b.grad[j]
                + a.grad[j] * b.grad[i]
                + a.value * b.d2(i, j);
        }
        for (s, &(i, j, k)) in THIRD_TRIPLES.iter().enumerate() {
            out.third[s] = a.d3(i, j, k) * b.value
                + a.d2(i, j) * b.grad[k]
                + a.d2(i, k) * b.grad[j]
                + a.d2(j, k) * b.grad[i]
                + a.grad[i] * b.d2(j, k)
                + a.grad[j] * b.d2(i, k)
                + a.grad[k] * b.d2(i, j)
                + a.value * b.d3(i, j, k);
        }
        out
    }
}

/// Division by host arithmetic; use [`Jet3::try_div`] to get a domain error instead.
impl Div for Jet3 {
    type Output = Jet3;
    fn div(self, b: Jet3) -> Jet3 {
        let r = 1.0 / b.value;
        self * b.compose_univariate([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }
}

impl Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(mut self, c: f64) -> Jet3 {
        self.value += c;
        self
    }
}

impl Sub<f64> for Jet3 {
    type Output = Jet3;
    fn sub(mut self, c: f64) -> Jet3 {
        self.value -= c;
        self
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, c: f64) -> Jet3 {
        self.scale(c)
    }
}

impl Add<Jet3> for f64 {
    type Output = Jet3;
    fn add(self, j: Jet3) -> Jet3 {
        j + self
    }
}

impl Sub<Jet3> for f64 {
    type Output = Jet3;
    fn sub(self, j: Jet3) -> Jet3 {
        -j + self
    }
}

impl Mul<Jet3> for f64 {
    type Output = Jet3;
    fn mul(self, j: Jet3) -> Jet3 {
        j.scale(self)
    }
}
