//! Reference implementations that share no code with the library.

#![allow(dead_code)]

use rho_minimax::Matrix;

/// Largest root of `x² − tr x + det`.
pub fn rho_2x2(a: [[f64; 2]; 2]) -> f64 {
    let tr = a[0][0] + a[1][1];
    let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    let disc = (tr * tr - 4.0 * det).max(0.0);
    0.5 * (tr + disc.sqrt())
}

/// Perron root of a non-negative matrix of order at most 3 as the largest
/// real root of its characteristic polynomial, by Newton's method started
/// above every root (the iteration is monotone there).
pub fn rho_small(m: &Matrix) -> f64 {
    let n = m.rows();
    assert!(m.is_square() && n <= 3);
    let a = |i: usize, j: usize| m.get(i, j);
    match n {
        1 => a(0, 0),
        2 => rho_2x2([[a(0, 0), a(0, 1)], [a(1, 0), a(1, 1)]]),
        _ => {
            let tr = a(0, 0) + a(1, 1) + a(2, 2);
            let minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)
                + a(1, 1) * a(2, 2)
                - a(1, 2) * a(2, 1);
            let det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
            let p = |x: f64| ((x - tr) * x + minors) * x - det;
            let dp = |x: f64| (3.0 * x - 2.0 * tr) * x + minors;
            let mut x = (0..3)
                .map(|i| (0..3).map(|j| a(i, j)).sum::<f64>())
                .fold(0.0, f64::max)
                + 1.0;
            for _ in 0..500 {
                let d = dp(x);
                if d <= 0.0 {
                    break;
                }
                let next = x - p(x) / d;
                if next.partial_cmp(&x) != Some(std::cmp::Ordering::Less) {
                    break;
                }
                x = next;
            }
            x.max(0.0)
        }
    }
}

pub fn naive_product(a: &Matrix, b: &Matrix) -> Matrix {
    let (n, k, m) = (a.rows(), a.cols(), b.cols());
    let mut out = vec![vec![0.0; m]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = (0..k).map(|t| a.get(i, t) * b.get(t, j)).sum();
        }
    }
    Matrix::from_rows(out).unwrap()
}

/// Every member of an IRU set, by cartesian product of rows.
pub fn naive_iru_members(row_sets: &[Vec<Vec<f64>>]) -> Vec<Matrix> {
    let mut acc: Vec<Vec<Vec<f64>>> = vec![Vec::new()];
    for rs in row_sets {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                rs.iter().map(move |r| {
                    let mut p = prefix.clone();
                    p.push(r.clone());
                    p
                })
            })
            .collect();
    }
    acc.into_iter().map(|rows| Matrix::from_rows(rows).unwrap()).collect()
}

/// `(min_i max_j, max_j min_i)` of `ρ(A_i B_j)` with the reference root.
pub fn naive_minimax(xs: &[Matrix], ys: &[Matrix]) -> (f64, f64) {
    let t: Vec<Vec<f64>> = xs
        .iter()
        .map(|a| ys.iter().map(|b| rho_small(&naive_product(a, b))).collect())
        .collect();
    let minmax = t
        .iter()
        .map(|r| r.iter().copied().fold(f64::NEG_INFINITY, f64::max))
        .fold(f64::INFINITY, f64::min);
    let maxmin = (0..ys.len())
        .map(|j| t.iter().map(|r| r[j]).fold(f64::INFINITY, f64::min))
        .fold(f64::NEG_INFINITY, f64::max);
    (minmax, maxmin)
}

/// Hausdorff distance by the definition.
pub fn naive_hausdorff(a: &[Matrix], b: &[Matrix]) -> f64 {
    let d = |x: &Matrix, y: &Matrix| {
        x.as_slice()
            .iter()
            .zip(y.as_slice())
            .map(|(p, q)| (p - q).abs())
            .fold(0.0, f64::max)
    };
    let one = |p: &[Matrix], q: &[Matrix]| {
        p.iter()
            .map(|x| q.iter().map(|y| d(x, y)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(a, b).max(one(b, a))
}

#[test]
fn oracle_root_matches_known_values() {
    let m = Matrix::from_rows(vec![vec![2.0, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![0.0, 0.0, 1.0]]).unwrap();
    assert!((rho_small(&m) - 3.0).abs() < 1e-12);
    let cycle = Matrix::from_rows(vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0], vec![8.0, 0.0, 0.0]]).unwrap();
    assert!((rho_small(&cycle) - 2.0).abs() < 1e-9);
    assert!((rho_2x2([[1.0, 2.0], [3.0, 4.0]]) - 5.372281323269014).abs() < 1e-12);
}
