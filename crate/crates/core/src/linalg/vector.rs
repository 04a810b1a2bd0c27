//! Entrywise vector orders with a tolerance band.
//!
//! `x ≥ y` holds when `x_i ≥ y_i − tol` for every `i`, and `x ≠ y` when
//! `‖x − y‖∞ > tol`. With `tol = 0` these are the exact partial orders.

use crate::{Error, Result};

#[inline]
pub fn geq(x: &[f64], y: &[f64], tol: f64) -> bool {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).all(|(a, b)| *a >= *b - tol)
}

#[inline]
pub fn leq(x: &[f64], y: &[f64], tol: f64) -> bool {
    geq(y, x, tol)
}

#[inline]
pub fn differs(x: &[f64], y: &[f64], tol: f64) -> bool {
    max_abs_diff(x, y) > tol
}

#[inline]
pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .fold(0.0, |acc, (a, b)| f64::max(acc, (a - b).abs()))
}

/// Accepts only finite vectors with every entry `> 0`.
pub fn ensure_positive(u: &[f64]) -> Result<()> {
    if u.is_empty() {
        return Err(Error::InvalidVector("vector is empty".into()));
    }
    match u.iter().position(|&x| !(x.is_finite() && x > 0.0)) {
        None => Ok(()),
        Some(i) => Err(Error::InvalidVector(format!(
            "entry {i} = {} is not strictly positive",
            u[i]
        ))),
    }
}

/// Accepts finite vectors with every entry `≥ 0` and at least one `> 0`.
pub fn ensure_nonneg_nonzero(u: &[f64]) -> Result<()> {
    if let Some(i) = u.iter().position(|&x| !(x.is_finite() && x >= 0.0)) {
        return Err(Error::InvalidVector(format!(
            "entry {i} = {} is negative or not finite",
            u[i]
        )));
    }
    if !u.iter().any(|&x| x > 0.0) {
        return Err(Error::InvalidVector("vector is zero".into()));
    }
    Ok(())
}

pub(crate) fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_semantics() {
        let x = [1.0, 2.0];
        assert!(geq(&x, &[1.0 + 5e-11, 2.0], 1e-10));
        assert!(!geq(&x, &[1.0 + 2e-10, 2.0], 1e-10));
        assert!(!differs(&x, &[1.0 + 5e-11, 2.0], 1e-10));
        assert!(differs(&x, &[1.0, 2.0 - 2e-10], 1e-10));
        assert!(leq(&[0.0, 1.0], &[1.0, 1.0], 0.0));
        assert!(!leq(&[0.0, 1.0], &[1.0, 0.0], 0.0) && !geq(&[0.0, 1.0], &[1.0, 0.0], 0.0));
    }

    #[test]
    fn vector_validation() {
        assert!(ensure_positive(&[1.0, 2.0]).is_ok());
        assert!(ensure_positive(&[1.0, 0.0]).is_err());
        assert!(ensure_positive(&[]).is_err());
        assert!(ensure_nonneg_nonzero(&[0.0, 1.0]).is_ok());
        assert!(ensure_nonneg_nonzero(&[0.0, 0.0]).is_err());
        assert!(ensure_nonneg_nonzero(&[-1.0, 2.0]).is_err());
    }
}
