use std::collections::BTreeMap;

use ordered_float::OrderedFloat;

use super::{MatrixSet, PolyExpr, Repr};
use crate::linalg::{mat_mul_unchecked, Matrix};
use crate::par::map_range;
use crate::{Error, Options, Result, DEDUP_TOL};

/// `{A + B : A ∈ a, B ∈ b}` as a deduplicated finite set.
pub fn minkowski_sum(a: &MatrixSet, b: &MatrixSet, opts: &Options) -> Result<MatrixSet> {
    if a.shape() != b.shape() {
        return Err(Error::mismatch("minkowski_sum", a.shape(), b.shape()));
    }
    let (xs, ys) = (a.enumerate_with(opts)?, b.enumerate_with(opts)?);
    pairwise(&xs, &ys, opts, |x, y| x.add(y).expect("shapes checked"))
}

/// `{A B : A ∈ a, B ∈ b}` as a deduplicated finite set.
pub fn minkowski_product(a: &MatrixSet, b: &MatrixSet, opts: &Options) -> Result<MatrixSet> {
    if a.shape().1 != b.shape().0 {
        return Err(Error::mismatch("minkowski_product", a.shape(), b.shape()));
    }
    let (xs, ys) = (a.enumerate_with(opts)?, b.enumerate_with(opts)?);
    pairwise(&xs, &ys, opts, mat_mul_unchecked)
}

fn pairwise<F>(xs: &[Matrix], ys: &[Matrix], opts: &Options, op: F) -> Result<MatrixSet>
where
    F: Fn(&Matrix, &Matrix) -> Matrix + Sync + Send,
{
    let total = xs.len() as u128 * ys.len() as u128;
    if total > opts.cap as u128 {
        return Err(Error::CapExceeded {
            cardinality: total,
            cap: opts.cap,
        });
    }
    let rows = map_range(opts.exec, xs.len(), |i| {
        ys.iter().map(|y| op(&xs[i], y)).collect::<Vec<_>>()
    });
    MatrixSet::finite(dedup(rows.into_iter().flatten().collect(), DEDUP_TOL))
}

/// `{t A : A ∈ a}` for `t > 0`, keeping the representation of `a`.
pub fn scale_set(t: f64, a: &MatrixSet) -> Result<MatrixSet> {
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::InvalidScale(t));
    }
    let scale_all = |ms: &[Matrix]| -> Result<Vec<Matrix>> { ms.iter().map(|m| m.scale(t)).collect() };
    let repr = match &a.repr {
        Repr::Finite(ms) => Repr::Finite(scale_all(ms)?),
        Repr::Ordered(ms) => Repr::Ordered(scale_all(ms)?),
        Repr::Iru(rs) => Repr::Iru(
            rs.iter()
                .map(|rows| {
                    rows.iter()
                        .map(|r| r.iter().map(|x| x * t).collect())
                        .collect()
                })
                .collect(),
        ),
        Repr::Expr(e) => Repr::Expr(Box::new(PolyExpr::Scale {
            factor: t,
            child: e.clone(),
        })),
    };
    Ok(MatrixSet {
        repr,
        shape: a.shape,
    })
}

/// Materializes an expression bottom-up into a finite set.
pub fn eval_expr(e: &PolyExpr, opts: &Options) -> Result<MatrixSet> {
    e.shape()?;
    eval_node(e, opts)
}

fn eval_node(e: &PolyExpr, opts: &Options) -> Result<MatrixSet> {
    match e {
        PolyExpr::Leaf { set } => MatrixSet::finite(set.enumerate_with(opts)?),
        PolyExpr::Sum { left, right } => {
            minkowski_sum(&eval_node(left, opts)?, &eval_node(right, opts)?, opts)
        }
        PolyExpr::Product { left, right } => {
            minkowski_product(&eval_node(left, opts)?, &eval_node(right, opts)?, opts)
        }
        PolyExpr::Scale { factor, child } => scale_set(*factor, &eval_node(child, opts)?),
    }
}

/// Drops every matrix that lies within `tol` (entrywise) of an earlier kept
/// one. First occurrences keep their relative order.
pub fn dedup(matrices: Vec<Matrix>, tol: f64) -> Vec<Matrix> {
    let Some(first) = matrices.first() else {
        return matrices;
    };
    // project onto a fixed positive direction; near-equal matrices have
    // near-equal projections, so candidates come from a narrow key window
    let k = first.as_slice().len();
    let weights: Vec<f64> = (0..k).map(|i| 1.0 + (i as f64 * 0.618_033_988_75).fract()).collect();
    let radius = tol * weights.iter().sum::<f64>();
    let key = |m: &Matrix| -> f64 { m.as_slice().iter().zip(&weights).map(|(x, w)| x * w).sum() };

    let mut index: BTreeMap<OrderedFloat<f64>, Vec<usize>> = BTreeMap::new();
    let mut kept: Vec<Matrix> = Vec::with_capacity(matrices.len());
    for m in matrices {
        let kv = key(&m);
        let lo = OrderedFloat(kv - radius * 1.000_001 - f64::EPSILON * kv.abs());
        let hi = OrderedFloat(kv + radius * 1.000_001 + f64::EPSILON * kv.abs());
        let duplicate = index
            .range(lo..=hi)
            .flat_map(|(_, ids)| ids)
            .any(|&j| kept[j].shape() == m.shape() && kept[j].max_abs_diff_unchecked(&m) <= tol);
        if !duplicate {
            index.entry(OrderedFloat(kv)).or_default().push(kept.len());
            kept.push(m);
        }
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::tests::split_diagonals;

    fn d(v: &[f64]) -> Matrix {
        Matrix::diag(v).unwrap()
    }

    fn same_members(a: &[Matrix], b: &[Matrix]) -> bool {
        a.len() == b.len()
            && a.iter().all(|x| b.iter().any(|y| x.max_abs_diff(y).unwrap() <= 1e-12))
            && b.iter().all(|y| a.iter().any(|x| x.max_abs_diff(y).unwrap() <= 1e-12))
    }

    #[test]
    fn singleton_sum() {
        let i2 = MatrixSet::singleton(Matrix::identity(2));
        let s = minkowski_sum(&i2, &i2, &Options::default()).unwrap();
        assert_eq!(s.matrices().unwrap(), &[d(&[2.0, 2.0])]);
    }

    #[test]
    fn self_sum_is_not_double() {
        let opts = Options::default();
        let a = split_diagonals();
        let s = minkowski_sum(&a, &a, &opts).unwrap();
        assert!(same_members(
            s.matrices().unwrap(),
            &[d(&[2.0, 0.0]), d(&[1.0, 1.0]), d(&[0.0, 2.0])]
        ));
        let doubled = scale_set(2.0, &a).unwrap();
        assert_eq!(doubled.enumerate(10).unwrap().len(), 2);
    }

    #[test]
    fn zero_is_additive_identity() {
        let a = split_diagonals();
        let zero = MatrixSet::singleton(Matrix::zeros(2, 2));
        let s = minkowski_sum(&zero, &a, &Options::default()).unwrap();
        assert!(same_members(s.matrices().unwrap(), a.matrices().unwrap()));
    }

    #[test]
    fn products() {
        let opts = Options::default();
        let a = split_diagonals();
        let i2 = MatrixSet::singleton(Matrix::identity(2));
        let p = minkowski_product(&i2, &a, &opts).unwrap();
        assert!(same_members(p.matrices().unwrap(), a.matrices().unwrap()));
        // four products, two of them collide at zero
        let p = minkowski_product(&a, &a, &opts).unwrap();
        assert!(same_members(
            p.matrices().unwrap(),
            &[d(&[1.0, 0.0]), d(&[0.0, 1.0]), Matrix::zeros(2, 2)]
        ));
        let x = Matrix::from_rows(vec![vec![1.0, 2.0]]).unwrap();
        let y = Matrix::from_rows(vec![vec![3.0], vec![4.0]]).unwrap();
        let p = minkowski_product(&MatrixSet::singleton(x), &MatrixSet::singleton(y), &opts).unwrap();
        assert_eq!(p.matrices().unwrap(), &[Matrix::new(1, 1, vec![11.0]).unwrap()]);
    }

    #[test]
    fn shape_errors() {
        let opts = Options::default();
        let a = MatrixSet::singleton(Matrix::zeros(2, 3));
        assert!(matches!(minkowski_sum(&a, &split_diagonals(), &opts), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(minkowski_product(&a, &a, &opts), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn product_respects_cap() {
        let a = MatrixSet::iru(vec![vec![vec![1.0], vec![2.0], vec![3.0]]]).unwrap();
        let err = minkowski_product(&a, &a, &Options::default().with_cap(8)).unwrap_err();
        assert_eq!(err, Error::CapExceeded { cardinality: 9, cap: 8 });
    }

    #[test]
    fn scaling() {
        let a = split_diagonals();
        assert_eq!(scale_set(1.0, &a).unwrap(), a);
        let s = scale_set(2.0, &MatrixSet::singleton(d(&[1.0, 0.0]))).unwrap();
        assert_eq!(s.matrices().unwrap(), &[d(&[2.0, 0.0])]);
        let five = MatrixSet::finite((1..=5).map(|k| d(&[k as f64, 1.0])).collect()).unwrap();
        assert_eq!(scale_set(0.5, &five).unwrap().enumerate(10).unwrap().len(), 5);
        assert_eq!(scale_set(0.0, &a), Err(Error::InvalidScale(0.0)));
        assert!(scale_set(f64::NAN, &a).is_err());
        let iru = MatrixSet::iru(vec![vec![vec![1.0, 2.0]], vec![vec![3.0, 4.0]]]).unwrap();
        let scaled = scale_set(3.0, &iru).unwrap();
        assert_eq!(scaled.row_sets().unwrap()[1][0], vec![9.0, 12.0]);
    }

    #[test]
    fn expression_evaluation() {
        let opts = Options::default();
        let a = split_diagonals();
        let leaf = PolyExpr::leaf(a.clone());
        assert!(same_members(
            eval_expr(&leaf, &opts).unwrap().matrices().unwrap(),
            a.matrices().unwrap()
        ));
        let sum = PolyExpr::sum(leaf.clone(), leaf.clone()).unwrap();
        assert_eq!(eval_expr(&sum, &opts).unwrap().enumerate(10).unwrap().len(), 3);
        let twice = PolyExpr::scale(2.0, leaf).unwrap();
        assert_eq!(eval_expr(&twice, &opts).unwrap().enumerate(10).unwrap().len(), 2);
        let one = PolyExpr::scale(3.0, PolyExpr::leaf(MatrixSet::singleton(d(&[1.0, 2.0])))).unwrap();
        assert_eq!(eval_expr(&one, &opts).unwrap().matrices().unwrap(), &[d(&[3.0, 6.0])]);
    }

    #[test]
    fn products_do_not_distribute() {
        let opts = Options::default();
        let a = split_diagonals();
        let (b1, b2) = (
            MatrixSet::singleton(d(&[1.0, 0.0])),
            MatrixSet::singleton(d(&[0.0, 1.0])),
        );
        let lhs = minkowski_product(&a, &minkowski_sum(&b1, &b2, &opts).unwrap(), &opts).unwrap();
        let rhs = minkowski_sum(
            &minkowski_product(&a, &b1, &opts).unwrap(),
            &minkowski_product(&a, &b2, &opts).unwrap(),
            &opts,
        )
        .unwrap();
        // 𝒜(ℬ₁+ℬ₂) = 𝒜, while 𝒜ℬ₁+𝒜ℬ₂ = {I, diag(1,0), diag(0,1), 0}
        assert_eq!(lhs.enumerate(10).unwrap().len(), 2);
        assert_eq!(rhs.enumerate(10).unwrap().len(), 4);
        assert!(!same_members(&lhs.enumerate(10).unwrap(), &rhs.enumerate(10).unwrap()));
    }

    #[test]
    fn dedup_keeps_first_occurrences() {
        let a = d(&[1.0, 2.0]);
        let b = d(&[1.0 + 5e-13, 2.0]);
        let c = d(&[3.0, 0.0]);
        let out = dedup(vec![c.clone(), a.clone(), b, c.clone(), a.clone()], 1e-12);
        assert_eq!(out, vec![c, a]);
        let far = d(&[1.0 + 1e-9, 2.0]);
        assert_eq!(dedup(vec![d(&[1.0, 2.0]), far], 1e-12).len(), 2);
    }
}
