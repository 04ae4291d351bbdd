//! Residual heat slices as grayscale PNG images.

use std::path::{Path, PathBuf};

use image::{GrayImage, Luma};

use crate::checks::evaluate;
use crate::config::{probe, CheckKind, Job};

/// `log₁₀` of the check value on an `n×n` slice of the domain box at the
/// middle of the third axis, scaled to the full gray range. Points that are
/// excluded or fail to evaluate are black.
pub fn heat_slice(job: &Job, check: CheckKind, n: usize) -> GrayImage {
    let b = job.bounds;
    let x3 = 0.5 * (b.lo[2] + b.hi[2]);
    let at = |i: u32, n: usize| i as f64 / (n.max(2) - 1) as f64;
    let mut values = vec![None; n * n];
    for row in 0..n as u32 {
        for col in 0..n as u32 {
            let p = [
                b.lo[0] + (b.hi[0] - b.lo[0]) * at(col, n),
                b.hi[1] - (b.hi[1] - b.lo[1]) * at(row, n),
                x3,
            ];
            values[row as usize * n + col as usize] =
                probe(p, job.case.as_ref(), job.spec.as_ref(), job.margin)
                    .ok()
                    .and_then(|q| evaluate(job, check, q.eval).ok())
                    .filter(|v| v.is_finite())
                    .map(|v| v.max(f64::MIN_POSITIVE).log10());
        }
    }
    let (lo, hi) = values
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
            (a.min(v), b.max(v))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    GrayImage::from_fn(n as u32, n as u32, |col, row| {
        let shade = match values[row as usize * n + col as usize] {
            Some(v) => 1.0 + 254.0 * (v - lo) / span,
            None => 0.0,
        };
        Luma([shade.round() as u8])
    })
}

/// Writes `<dir>/<check>.png` for every check of the job.
pub fn write_slices(job: &Job, dir: &Path, n: usize) -> Result<Vec<PathBuf>, image::ImageError> {
    std::fs::create_dir_all(dir)?;
    let mut out = Vec::new();
    for &(check, _) in &job.checks {
        let path = dir.join(format!("{check}.png"));
        heat_slice(job, check, n).save(&path)?;
        out.push(path);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::JobConfig;

    #[test]
    fn slice_has_requested_size_and_marks_excluded_points() {
        let job =
            JobConfig::from_json(r#"{"solution": {"builtin": "A0"}, "checks": ["residual"]}"#)
                .unwrap()
                .validate(0)
                .unwrap();
        let img = heat_slice(&job, CheckKind::Residual, 16);
        assert_eq!(img.dimensions(), (16, 16));
        // Bottom-left corner has x1 = 2.5 > x2 = 1.5 > x3 = 1.0; top-left has x2 = 2.5 = x1.
        assert!(img.get_pixel(0, 15)[0] > 0);
        assert_eq!(img.get_pixel(0, 0)[0], 0);
    }
}
