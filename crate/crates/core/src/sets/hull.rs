use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;

use super::{MatrixSet, Repr};
use crate::linalg::Matrix;
use crate::{Error, Options, Result};

/// `Σ λ_i A_i` for non-negative weights summing to one.
pub fn convex_combination(members: &[Matrix], weights: &[f64]) -> Result<Matrix> {
    let first = members.first().ok_or(Error::EmptySet)?;
    if members.len() != weights.len() {
        return Err(Error::InvalidArgument(format!(
            "{} members but {} weights",
            members.len(),
            weights.len()
        )));
    }
    if weights.iter().any(|&w| !(w.is_finite() && w >= 0.0)) {
        return Err(Error::InvalidArgument("weights must be non-negative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!("weights sum to {total}, not 1")));
    }
    let mut acc = vec![0.0; first.as_slice().len()];
    for (m, &w) in members.iter().zip(weights) {
        if m.shape() != first.shape() {
            return Err(Error::mismatch("convex_combination", first.shape(), m.shape()));
        }
        for (a, x) in acc.iter_mut().zip(m.as_slice()) {
            *a += w * x;
        }
    }
    Matrix::new(first.rows(), first.cols(), acc)
}

/// A random point of `co(members)`: `r` members drawn uniformly with
/// replacement, mixed with weights from normalized exponentials (a flat
/// Dirichlet draw).
pub fn sample_hull_point<R: Rng + ?Sized>(members: &[Matrix], r: usize, rng: &mut R) -> Result<Matrix> {
    if members.is_empty() {
        return Err(Error::EmptySet);
    }
    if r == 0 {
        return Err(Error::InvalidArgument("need at least one hull vertex".into()));
    }
    if r == 1 || members.len() == 1 {
        return Ok(members[rng.random_range(0..members.len())].clone());
    }
    let picks: Vec<&Matrix> = (0..r).map(|_| &members[rng.random_range(0..members.len())]).collect();
    let mut weights: Vec<f64> = (0..r).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= total);
    let (rows, cols) = picks[0].shape();
    let mut acc = vec![0.0; rows * cols];
    for (m, w) in picks.iter().zip(&weights) {
        for (a, x) in acc.iter_mut().zip(m.as_slice()) {
            *a += w * x;
        }
    }
    Matrix::new(rows, cols, acc)
}

/// [`sample_hull_point`] over the members of `a`, seeded deterministically.
pub fn convex_hull_sample(a: &MatrixSet, r: usize, seed: u64, opts: &Options) -> Result<Matrix> {
    let members = a.enumerate_with(opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    sample_hull_point(&members, r, &mut rng)
}

/// IRU set generated by the convex hulls of the row sets.
///
/// For rows of length one or two the row sets are cut down to their
/// extreme points (kept in their original order). Longer rows are returned
/// unchanged, which spans the same hull.
pub fn convex_hull_iru(a: &MatrixSet) -> Result<MatrixSet> {
    let Repr::Iru(row_sets) = &a.repr else {
        return Err(Error::NotIru(a.kind().name()));
    };
    let cols = a.shape().1;
    let reduced: Vec<Vec<Vec<f64>>> = match cols {
        1 => row_sets.iter().map(|rs| extreme_1d(rs)).collect(),
        2 => row_sets.iter().map(|rs| extreme_2d(rs)).collect(),
        _ => row_sets.clone(),
    };
    MatrixSet::iru(reduced)
}

fn extreme_1d(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let lo = rows.iter().map(|r| r[0]).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r[0]).fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        if (r[0] == lo || r[0] == hi) && !out.iter().any(|o| o[0] == r[0]) {
            out.push(r.clone());
        }
    }
    out
}

fn cross(o: &[f64], a: &[f64], b: &[f64]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Vertices of the planar hull by the monotone chain, collinear points
/// dropped.
fn extreme_2d(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts: Vec<&Vec<f64>> = rows.iter().collect();
    pts.sort_by(|p, q| match p[0].total_cmp(&q[0]) {
        Ordering::Equal => p[1].total_cmp(&q[1]),
        o => o,
    });
    pts.dedup();
    if pts.len() <= 2 {
        return keep_in_order(rows, &pts);
    }
    let mut hull: Vec<&Vec<f64>> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &&Vec<f64>>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    keep_in_order(rows, &hull)
}

fn keep_in_order(rows: &[Vec<f64>], vertices: &[&Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for r in rows {
        if vertices.contains(&r) && !out.contains(r) {
            out.push(r.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::tests::split_diagonals;

    #[test]
    fn midpoint_of_split_diagonals() {
        let a = split_diagonals();
        let m = convex_combination(a.matrices().unwrap(), &[0.5, 0.5]).unwrap();
        assert_eq!(m, Matrix::diag(&[0.5, 0.5]).unwrap());
        assert!(convex_combination(a.matrices().unwrap(), &[0.5, 0.6]).is_err());
        assert!(convex_combination(&[], &[]).is_err());
    }

    #[test]
    fn single_vertex_samples() {
        let opts = Options::default();
        let a = split_diagonals();
        for seed in 0..20 {
            let m = convex_hull_sample(&a, 1, seed, &opts).unwrap();
            assert!(a.contains(&m, 0.0, &opts).unwrap());
        }
        let one = MatrixSet::singleton(Matrix::identity(3));
        for r in 1..6 {
            assert_eq!(convex_hull_sample(&one, r, 9, &opts).unwrap(), Matrix::identity(3));
        }
        assert!(convex_hull_sample(&a, 0, 1, &opts).is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let opts = Options::default();
        let a = split_diagonals();
        let x = convex_hull_sample(&a, 5, 42, &opts).unwrap();
        let y = convex_hull_sample(&a, 5, 42, &opts).unwrap();
        assert_eq!(x, y);
        assert!((x.get(0, 0) + x.get(1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn hull_of_singletons_is_unchanged() {
        let s = MatrixSet::iru(vec![vec![vec![1.0, 2.0, 3.0]], vec![vec![0.5, 0.0, 1.0]]]).unwrap();
        assert_eq!(convex_hull_iru(&s).unwrap(), s);
    }

    #[test]
    fn midpoint_row_is_dropped() {
        let s = MatrixSet::iru(vec![vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]]]).unwrap();
        let h = convex_hull_iru(&s).unwrap();
        assert_eq!(h.row_sets().unwrap()[0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn split_diagonal_rows_are_extreme() {
        let s = MatrixSet::iru(vec![
            vec![vec![1.0, 0.0], vec![0.0, 0.0]],
            vec![vec![0.0, 0.0], vec![0.0, 1.0]],
        ])
        .unwrap();
        assert_eq!(convex_hull_iru(&s).unwrap(), s);
    }

    #[test]
    fn planar_hull_drops_interior_and_duplicates() {
        let rows = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.5],
            vec![2.0, 0.0],
            vec![2.0, 2.0],
            vec![0.0, 2.0],
            vec![2.0, 2.0],
            vec![1.0, 2.0],
        ];
        let h = extreme_2d(&rows);
        assert_eq!(
            h,
            vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![2.0, 2.0], vec![0.0, 2.0]]
        );
        assert_eq!(extreme_2d(&[vec![1.0, 1.0], vec![1.0, 1.0]]), vec![vec![1.0, 1.0]]);
        assert_eq!(
            extreme_1d(&[vec![2.0], vec![1.0], vec![3.0], vec![1.0]]),
            vec![vec![1.0], vec![3.0]]
        );
    }

    #[test]
    fn hull_requires_iru() {
        assert_eq!(convex_hull_iru(&split_diagonals()), Err(Error::NotIru("finite")));
    }
}
