use super::MatrixSet;
use crate::linalg::Matrix;
use crate::par::map_range;
use crate::{Error, Exec, Options, Result};

/// `sup_{A ∈ from} inf_{B ∈ to} ‖A − B‖∞` over vectorized matrices.
pub fn directed_hausdorff(from: &[Matrix], to: &[Matrix], exec: Exec) -> f64 {
    map_range(exec, from.len(), |i| {
        to.iter()
            .map(|b| from[i].max_abs_diff_unchecked(b))
            .fold(f64::INFINITY, f64::min)
    })
    .into_iter()
    .fold(0.0, f64::max)
}

/// Hausdorff distance between two finite lists of same-shape matrices.
pub fn hausdorff_finite(a: &[Matrix], b: &[Matrix], exec: Exec) -> Result<f64> {
    let (Some(x), Some(y)) = (a.first(), b.first()) else {
        return Err(Error::EmptySet);
    };
    if let Some(bad) = a.iter().chain(b).find(|m| m.shape() != x.shape()) {
        return Err(Error::mismatch("hausdorff_distance", x.shape(), bad.shape()));
    }
    if y.shape() != x.shape() {
        return Err(Error::mismatch("hausdorff_distance", x.shape(), y.shape()));
    }
    Ok(directed_hausdorff(a, b, exec).max(directed_hausdorff(b, a, exec)))
}

/// Hausdorff distance under the entrywise max norm.
pub fn hausdorff_distance(a: &MatrixSet, b: &MatrixSet, opts: &Options) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::mismatch("hausdorff_distance", a.shape(), b.shape()));
    }
    hausdorff_finite(&a.enumerate_with(opts)?, &b.enumerate_with(opts)?, opts.exec)
}
