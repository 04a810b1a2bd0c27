//! Seeded random instances for tests, sweeps and benchmarks.

use rand::Rng;

use crate::linalg::Matrix;
use crate::sets::MatrixSet;
use crate::Result;

/// Entry drawn from `[0.05, 1)`, or zero with probability `zero_prob`.
fn entry<R: Rng + ?Sized>(rng: &mut R, zero_prob: f64) -> f64 {
    if zero_prob > 0.0 && rng.random_bool(zero_prob.min(1.0)) {
        0.0
    } else {
        rng.random_range(0.05..1.0)
    }
}

fn row<R: Rng + ?Sized>(rng: &mut R, len: usize, zero_prob: f64) -> Vec<f64> {
    (0..len).map(|_| entry(rng, zero_prob)).collect()
}

/// Non-negative `rows x cols` matrix.
pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, zero_prob: f64) -> Matrix {
    Matrix::new(rows, cols, row(rng, rows * cols, zero_prob)).expect("valid random matrix")
}

/// IRU set with `1..=max_choices` rows per row set.
pub fn random_iru<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_choices: usize,
    zero_prob: f64,
) -> Result<MatrixSet> {
    let row_sets = (0..rows)
        .map(|_| {
            let k = rng.random_range(1..=max_choices.max(1));
            (0..k).map(|_| row(rng, cols, zero_prob)).collect()
        })
        .collect();
    MatrixSet::iru(row_sets)
}

/// Finite set of `1..=max_size` matrices.
pub fn random_finite<R: Rng + ?Sized>(
    rng: &mut R,
    rows: usize,
    cols: usize,
    max_size: usize,
    zero_prob: f64,
) -> Result<MatrixSet> {
    let k = rng.random_range(1..=max_size.max(1));
    MatrixSet::finite((0..k).map(|_| random_matrix(rng, rows, cols, zero_prob)).collect())
}

/// Linearly ordered chain of `len` positive matrices, each the previous
/// plus a positive random increment.
pub fn random_chain<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, len: usize) -> Result<MatrixSet> {
    let mut current = random_matrix(rng, rows, cols, 0.0);
    let mut chain = vec![current.clone()];
    for _ in 1..len.max(1) {
        current = current.add(&random_matrix(rng, rows, cols, 0.0))?;
        chain.push(current.clone());
    }
    MatrixSet::linearly_ordered(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generators_respect_shapes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let m = random_matrix(&mut rng, 2, 3, 0.3);
            assert_eq!(m.shape(), (2, 3));
            let s = random_iru(&mut rng, 3, 2, 3, 0.0).unwrap();
            assert_eq!(s.shape(), (3, 2));
            assert!(s.cardinality_bound() <= 27);
            let f = random_finite(&mut rng, 2, 2, 4, 0.5).unwrap();
            assert!(f.cardinality_bound() <= 4);
            let c = random_chain(&mut rng, 2, 2, 4).unwrap();
            assert_eq!(c.cardinality_bound(), 4);
        }
    }

    #[test]
    fn zero_probability_one_gives_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert!(random_matrix(&mut rng, 3, 3, 1.0).is_zero());
    }
}
