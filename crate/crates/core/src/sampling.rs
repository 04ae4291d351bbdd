//! Deterministic probe-point generation: regular grids and seeded random samples.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fields::Point;
use crate::{Error, Result};

/// An axis-aligned box `[lo₁,hi₁]×[lo₂,hi₂]×[lo₃,hi₃]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Box3 {
    pub lo: Point,
    pub hi: Point,
}

impl Box3 {
    pub fn new(lo: Point, hi: Point) -> Result<Self> {
        for k in 0..3 {
            if !(lo[k].is_finite() && hi[k].is_finite() && lo[k] < hi[k]) {
                return Err(Error::invalid(format!(
                    "empty box along axis {}: [{}, {}]",
                    k + 1,
                    lo[k],
                    hi[k]
                )));
            }
        }
        Ok(Box3 { lo, hi })
    }

    pub fn contains(&self, p: Point) -> bool {
        (0..3).all(|k| p[k] >= self.lo[k] && p[k] <= self.hi[k])
    }

    /// `n` points per axis including both endpoints (`n = 1` gives the centre),
    /// ordered with the first coordinate varying slowest.
    pub fn grid(&self, n: usize) -> Vec<Point> {
        let axis = |k: usize| -> Vec<f64> {
            if n <= 1 {
                return vec![0.5 * (self.lo[k] + self.hi[k])];
            }
            (0..n)
                .map(|i| self.lo[k] + (self.hi[k] - self.lo[k]) * i as f64 / (n - 1) as f64)
                .collect()
        };
        let (a, b, c) = (axis(0), axis(1), axis(2));
        let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
        for &x in &a {
            for &y in &b {
                for &z in &c {
                    out.push([x, y, z]);
                }
            }
        }
        out
    }

    /// `count` uniform samples accepted by `keep`, reproducible from `seed`.
    pub fn random_points(
        &self,
        seed: u64,
        count: usize,
        keep: impl Fn(Point) -> bool,
    ) -> Result<Vec<Point>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(count);
        let budget = 1000 * count.max(1);
        for _ in 0..budget {
            if out.len() == count {
                break;
            }
            let p = [0, 1, 2].map(|k| rng.gen_range(self.lo[k]..=self.hi[k]));
            if keep(p) {
                out.push(p);
            }
        }
        if out.len() < count {
            return Err(Error::invalid(format!(
                "only {} of {count} probe points satisfy the domain filter",
                out.len()
            )));
        }
        Ok(out)
    }
}
