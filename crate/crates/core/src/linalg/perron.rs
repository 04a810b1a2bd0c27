use serde::{Deserialize, Serialize};

use super::vector::{ensure_nonneg_nonzero, ensure_positive};
use super::Matrix;
use crate::{Error, Result, DEFAULT_MAX_ITER, DEFAULT_TOL};

/// Base diagonal shift of the power method.
const SHIFT_EPS: f64 = 1e-9;

/// Perron root of a square non-negative matrix together with a non-negative
/// eigenvector normalized to unit sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerronData {
    pub rho: f64,
    pub vector: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
}

impl PerronData {
    fn uniform(n: usize, rho: f64) -> Self {
        PerronData {
            rho,
            vector: vec![1.0 / n as f64; n],
            iterations: 0,
            converged: true,
        }
    }

    /// `‖A v − ρ v‖∞` for the stored pair.
    pub fn residual(&self, a: &Matrix) -> f64 {
        a.mul_vec_unchecked(&self.vector)
            .iter()
            .zip(&self.vector)
            .fold(0.0, |acc, (av, v)| f64::max(acc, (av - self.rho * v).abs()))
    }

    pub fn is_vector_positive(&self) -> bool {
        self.vector.iter().all(|&x| x > 0.0)
    }
}

/// Spectral radius and Perron vector of a non-negative square matrix.
///
/// Irreducible matrices go through a shifted power iteration; reducible ones
/// are split into strongly connected classes, the root is the largest class
/// root, and the eigenvector is assembled from a basic class and the classes
/// upstream of it. `converged` is false when some power iteration exhausted
/// `max_iter` before both its quotient and its residual settled within `tol`
/// (relative to `max(1, ρ)`).
pub fn spectral_radius(a: &Matrix, tol: f64, max_iter: usize) -> Result<PerronData> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let n = a.rows();
    if a.is_zero() {
        return Ok(PerronData::uniform(n, 0.0));
    }
    if n == 1 {
        return Ok(PerronData::uniform(1, a.get(0, 0)));
    }
    if a.is_positive() {
        return Ok(power_iterate(a.as_slice(), n, tol, max_iter));
    }
    let reach = reachability(a);
    let classes = classes(&reach);
    if classes.len() == 1 {
        return Ok(power_iterate(a.as_slice(), n, tol, max_iter));
    }
    Ok(reducible(a, &reach, &classes, tol, max_iter))
}

/// [`spectral_radius`] with the default tolerance and iteration budget.
pub fn spectral_radius_default(a: &Matrix) -> Result<PerronData> {
    spectral_radius(a, DEFAULT_TOL, DEFAULT_MAX_ITER)
}

/// Perron root that treats non-convergence as an error.
pub(crate) fn perron_root(a: &Matrix) -> Result<f64> {
    let p = spectral_radius_default(a)?;
    if p.converged {
        Ok(p.rho)
    } else {
        Err(Error::NoConvergence {
            iterations: p.iterations,
            estimate: p.rho,
        })
    }
}

pub(crate) fn perron_checked(a: &Matrix) -> Result<PerronData> {
    let p = spectral_radius_default(a)?;
    if p.converged {
        Ok(p)
    } else {
        Err(Error::NoConvergence {
            iterations: p.iterations,
            estimate: p.rho,
        })
    }
}

/// `max_i (A u)_i / u_i`, an upper bound on `ρ(A)` for any `u > 0`.
pub fn collatz_wielandt_upper(a: &Matrix, u: &[f64]) -> Result<f64> {
    check_square_len(a, u)?;
    ensure_positive(u)?;
    let au = a.mul_vec_unchecked(u);
    Ok(au
        .iter()
        .zip(u)
        .map(|(x, y)| x / y)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// `min_{u_i > 0} (A u)_i / u_i`, a lower bound on `ρ(A)` for any
/// non-zero `u ≥ 0`.
pub fn collatz_wielandt_lower(a: &Matrix, u: &[f64]) -> Result<f64> {
    check_square_len(a, u)?;
    ensure_nonneg_nonzero(u)?;
    let au = a.mul_vec_unchecked(u);
    Ok(au
        .iter()
        .zip(u)
        .filter(|(_, y)| **y > 0.0)
        .map(|(x, y)| x / y)
        .fold(f64::INFINITY, f64::min))
}

fn check_square_len(a: &Matrix, u: &[f64]) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if u.len() != a.rows() {
        return Err(Error::mismatch("collatz_wielandt", a.shape(), (u.len(), 1)));
    }
    Ok(())
}

/// Power method on `A + sI` for a row-major `n x n` block.
///
/// The shift `s` is `SHIFT_EPS` plus half the largest row sum, which keeps
/// the iteration contracting on imprimitive matrices (eigenvalues `ρ·ω^k`
/// of equal modulus) where an infinitesimal shift would stall.
fn power_iterate(a: &[f64], n: usize, tol: f64, max_iter: usize) -> PerronData {
    let max_row_sum = a
        .chunks(n)
        .map(|r| r.iter().sum::<f64>())
        .fold(0.0, f64::max);
    let shift = SHIFT_EPS + 0.5 * max_row_sum;

    let mut v = vec![1.0 / n as f64; n];
    let mut y = vec![0.0; n];
    let mut prev = f64::NAN;
    let mut q = 0.0;
    for k in 1..=max_iter {
        for (yi, row) in y.iter_mut().zip(a.chunks(n)) {
            *yi = row.iter().zip(&v).map(|(x, z)| x * z).sum();
        }
        // v sums to one, so this is the l1 Rayleigh quotient
        q = y.iter().sum::<f64>();
        let band = tol * q.max(1.0);

        if v.iter().all(|&x| x > 0.0) {
            let (lo, hi) = y
                .iter()
                .zip(&v)
                .map(|(yi, vi)| yi / vi)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                    (lo.min(r), hi.max(r))
                });
            if hi - lo <= band {
                return finish(q.clamp(lo, hi), v, k, true);
            }
        }
        let residual = y
            .iter()
            .zip(&v)
            .fold(0.0, |acc, (yi, vi)| f64::max(acc, (yi - q * vi).abs()));
        if (q - prev).abs() <= band && residual <= band {
            return finish(q, v, k, true);
        }
        prev = q;

        let mut total = 0.0;
        for (vi, yi) in v.iter_mut().zip(&y) {
            *vi = yi + shift * *vi;
            total += *vi;
        }
        v.iter_mut().for_each(|x| *x /= total);
    }
    finish(q, v, max_iter, false)
}

fn finish(rho: f64, mut v: Vec<f64>, iterations: usize, converged: bool) -> PerronData {
    let s: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= s);
    PerronData {
        rho: rho.max(0.0),
        vector: v,
        iterations,
        converged,
    }
}

/// `reach[i][j]`: a path of length `≥ 1` leads from `i` to `j` along
/// positive entries `a_ij > 0`.
fn reachability(a: &Matrix) -> Vec<Vec<bool>> {
    let n = a.rows();
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j) > 0.0).collect())
        .collect();
    for k in 0..n {
        let row_k = reach[k].clone();
        for row in reach.iter_mut() {
            if row[k] {
                for (dst, &src) in row.iter_mut().zip(&row_k) {
                    *dst |= src;
                }
            }
        }
    }
    reach
}

/// Strongly connected classes, each listed in increasing index order.
fn classes(reach: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = reach.len();
    let mut assigned = vec![false; n];
    let mut out = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let class: Vec<usize> = (i..n)
            .filter(|&j| j == i || (reach[i][j] && reach[j][i]))
            .collect();
        for &j in &class {
            assigned[j] = true;
        }
        out.push(class);
    }
    out
}

fn reducible(
    a: &Matrix,
    reach: &[Vec<bool>],
    classes: &[Vec<usize>],
    tol: f64,
    max_iter: usize,
) -> PerronData {
    let n = a.rows();
    let blocks: Vec<PerronData> = classes
        .iter()
        .map(|c| {
            if c.len() == 1 {
                PerronData::uniform(1, a.get(c[0], c[0]))
            } else {
                let sub = submatrix(a, c, c);
                if sub.iter().all(|&x| x == 0.0) {
                    PerronData::uniform(c.len(), 0.0)
                } else {
                    power_iterate(&sub, c.len(), tol, max_iter)
                }
            }
        })
        .collect();
    let rho = blocks.iter().map(|b| b.rho).fold(0.0, f64::max);
    let iterations = blocks.iter().map(|b| b.iterations).sum();
    let converged = blocks.iter().all(|b| b.converged);
    let band = tol * rho.max(1.0);

    let class_reaches = |d: usize, c: usize| {
        classes[d]
            .iter()
            .any(|&i| classes[c].iter().any(|&j| reach[i][j]))
    };
    let basic: Vec<usize> = (0..classes.len())
        .filter(|&c| blocks[c].rho >= rho - band)
        .collect();
    // basic classes with no other basic class upstream; their eigenvectors
    // are independent and the sum keeps as many coordinates positive as possible
    let heads: Vec<usize> = basic
        .iter()
        .copied()
        .filter(|&c| !basic.iter().any(|&d| d != c && class_reaches(d, c)))
        .collect();

    let mut v = vec![0.0; n];
    for &head in &heads {
        for (i, x) in class_vector(a, reach, &classes[head], &blocks[head].vector, rho)
            .into_iter()
            .enumerate()
        {
            v[i] += x;
        }
    }
    let mut out = finish(rho, v, iterations, converged);
    out.rho = rho;
    out
}

/// Eigenvector for `rho` supported on `core` and the nodes upstream of it.
fn class_vector(a: &Matrix, reach: &[Vec<bool>], core: &[usize], core_vec: &[f64], rho: f64) -> Vec<f64> {
    let n = a.rows();
    let upstream: Vec<usize> = (0..n)
        .filter(|i| !core.contains(i) && core.iter().any(|&j| reach[*i][j]))
        .collect();
    let mut v = vec![0.0; n];
    for (&i, &x) in core.iter().zip(core_vec) {
        v[i] = x;
    }
    if !upstream.is_empty() {
        // (ρI − A_UU) v_U = A_UC v_C
        let m = upstream.len();
        let mut lhs = submatrix(a, &upstream, &upstream);
        for x in lhs.iter_mut() {
            *x = -*x;
        }
        for k in 0..m {
            lhs[k * m + k] += rho;
        }
        let rhs: Vec<f64> = upstream
            .iter()
            .map(|&i| core.iter().map(|&j| a.get(i, j) * v[j]).sum())
            .collect();
        if let Some(x) = solve_dense(lhs, m, rhs) {
            for (&i, xi) in upstream.iter().zip(x) {
                v[i] = xi.max(0.0);
            }
        }
    }
    v
}

fn submatrix(a: &Matrix, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    rows.iter()
        .flat_map(|&i| cols.iter().map(move |&j| a.get(i, j)))
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` on a singular system.
fn solve_dense(mut m: Vec<f64>, n: usize, mut b: Vec<f64>) -> Option<Vec<f64>> {
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| m[i * n + col].abs().total_cmp(&m[j * n + col].abs()))?;
        if m[pivot * n + col].abs() < f64::MIN_POSITIVE {
            return None;
        }
        if pivot != col {
            for k in 0..n {
                m.swap(pivot * n + k, col * n + k);
            }
            b.swap(pivot, col);
        }
        for r in col + 1..n {
            let f = m[r * n + col] / m[col * n + col];
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                m[r * n + k] -= f * m[col * n + k];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| m[r * n + k] * x[k]).sum();
        x[r] = (b[r] - s) / m[r * n + r];
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: Vec<Vec<f64>>) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    fn sr(a: &Matrix) -> PerronData {
        spectral_radius_default(a).unwrap()
    }

    /// Larger root of λ² − tr·λ + det, the oracle for 2x2 inputs.
    fn closed_form_2x2(a: &Matrix) -> f64 {
        let (p, q, r, s) = (a.get(0, 0), a.get(0, 1), a.get(1, 0), a.get(1, 1));
        let disc = (p - s) * (p - s) + 4.0 * q * r;
        0.5 * (p + s + disc.sqrt())
    }

    #[test]
    fn identity() {
        let p = sr(&Matrix::identity(2));
        assert!(p.converged);
        assert!((p.rho - 1.0).abs() < 1e-12);
        assert!((p.vector[0] - 0.5).abs() < 1e-12 && (p.vector[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn reducible_diagonal() {
        let p = sr(&Matrix::diag(&[1.0, 0.0]).unwrap());
        assert!(p.converged);
        assert!((p.rho - 1.0).abs() < 1e-12);
        assert!((p.vector[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn two_by_two_characteristic_root() {
        let a = m(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let p = sr(&a);
        let expected = (5.0 + 33f64.sqrt()) / 2.0;
        assert!((expected - 5.372281323269014).abs() < 1e-12);
        assert!((p.rho - expected).abs() < 1e-10);
        assert!(p.residual(&a) <= 1e-11);
        assert!(p.is_vector_positive());
    }

    #[test]
    fn zero_matrix_is_uniform() {
        let p = sr(&Matrix::zeros(3, 3));
        assert_eq!(p.rho, 0.0);
        assert_eq!(p.vector, vec![1.0 / 3.0; 3]);
        assert!(p.converged);
    }

    #[test]
    fn imprimitive_cycles() {
        // eigenvalues ±√2
        let a = m(vec![vec![0.0, 2.0], vec![1.0, 0.0]]);
        let p = sr(&a);
        assert!(p.converged);
        assert!((p.rho - 2f64.sqrt()).abs() < 1e-10);
        // 3-cycle with weights, ρ = (2·3·5)^(1/3)
        let c = m(vec![
            vec![0.0, 2.0, 0.0],
            vec![0.0, 0.0, 3.0],
            vec![5.0, 0.0, 0.0],
        ]);
        let p = sr(&c);
        assert!(p.converged);
        assert!((p.rho - 30f64.cbrt()).abs() < 1e-10);
        assert!(p.residual(&c) < 1e-10);
    }

    #[test]
    fn defective_reducible_blocks() {
        // Jordan-like upper triangular: ρ = 0.3 with eigenvector e1
        let a = m(vec![vec![0.3, 0.5], vec![0.0, 0.3]]);
        let p = sr(&a);
        assert!(p.converged);
        assert!((p.rho - 0.3).abs() < 1e-15);
        assert!(p.residual(&a) < 1e-12);
        // nilpotent
        let a = m(vec![vec![0.0, 0.7], vec![0.0, 0.0]]);
        let p = sr(&a);
        assert_eq!(p.rho, 0.0);
        assert!(p.residual(&a) < 1e-15);
    }

    #[test]
    fn upstream_classes_enter_the_vector() {
        // class {1} (ρ = 2) is reached from class {0} (ρ = 1)
        let a = m(vec![vec![1.0, 1.0], vec![0.0, 2.0]]);
        let p = sr(&a);
        assert!((p.rho - 2.0).abs() < 1e-12);
        assert!(p.residual(&a) < 1e-12);
        assert!(p.is_vector_positive());
        for w in p.vector.windows(2) {
            assert!((w[0] - w[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_block_structure() {
        let a = m(vec![
            vec![0.0, 1.0, 0.0, 0.0],
            vec![4.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0, 2.0],
            vec![0.0, 0.0, 3.0, 1.0],
        ]);
        let p = sr(&a);
        // blocks: [[0,1],[4,0]] -> 2, [[1,2],[3,1]] -> 1+√6
        assert!((p.rho - (1.0 + 6f64.sqrt())).abs() < 1e-10);
        assert!(p.residual(&a) < 1e-9);
        assert!((p.vector.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_2x2_against_closed_form() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let data: Vec<f64> = (0..4)
                .map(|_| if rng.random_bool(0.25) { 0.0 } else { rng.random::<f64>() })
                .collect();
            let a = Matrix::new(2, 2, data).unwrap();
            let p = sr(&a);
            assert!(p.converged, "{a:?}");
            assert!((p.rho - closed_form_2x2(&a)).abs() < 1e-9, "{a:?}");
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let a = m(vec![vec![1.0, 1e-3], vec![1e-3, 1.0 - 1e-9]]);
        let p = spectral_radius(&a, 1e-15, 1).unwrap();
        assert!(!p.converged);
        assert_eq!(p.iterations, 1);
    }

    #[test]
    fn rejects_invalid_input() {
        assert!(matches!(
            spectral_radius_default(&Matrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
        assert!(spectral_radius(&Matrix::identity(2), 0.0, 10).is_err());
    }

    #[test]
    fn collatz_wielandt_examples() {
        let i2 = Matrix::identity(2);
        assert_eq!(collatz_wielandt_upper(&i2, &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(collatz_wielandt_lower(&i2, &[1.0, 1.0]).unwrap(), 1.0);
        let a = m(vec![vec![1.0, 2.0], vec![3.0, 4.0]]);
        let rho = closed_form_2x2(&a);
        let hi = collatz_wielandt_upper(&a, &[1.0, 1.0]).unwrap();
        let lo = collatz_wielandt_lower(&a, &[1.0, 1.0]).unwrap();
        assert_eq!((lo, hi), (3.0, 7.0));
        assert!(lo <= rho && rho <= hi);
        let d = Matrix::diag(&[1.0, 0.0]).unwrap();
        assert_eq!(collatz_wielandt_upper(&d, &[1.0, 1.0]).unwrap(), 1.0);
        assert_eq!(collatz_wielandt_lower(&d, &[1.0, 0.0]).unwrap(), 1.0);
    }

    #[test]
    fn collatz_wielandt_errors() {
        let a = Matrix::identity(2);
        assert!(matches!(
            collatz_wielandt_upper(&a, &[1.0, 0.0]),
            Err(Error::InvalidVector(_))
        ));
        assert!(matches!(
            collatz_wielandt_lower(&a, &[0.0, 0.0]),
            Err(Error::InvalidVector(_))
        ));
        assert!(matches!(
            collatz_wielandt_upper(&a, &[1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn dense_solver() {
        let x = solve_dense(vec![0.0, 2.0, 1.0, 1.0], 2, vec![4.0, 3.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14 && (x[1] - 2.0).abs() < 1e-14);
        assert!(solve_dense(vec![1.0, 2.0, 2.0, 4.0], 2, vec![1.0, 1.0]).is_none());
    }
}
