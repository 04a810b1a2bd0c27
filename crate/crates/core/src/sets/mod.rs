//! Finitely described compact sets of non-negative matrices.
//!
//! A [`MatrixSet`] is one of
//!
//! * a finite list of same-shape matrices,
//! * a linearly ordered chain `0 < A₁ < A₂ < ⋯ < Aₙ`,
//! * an IRU (independent row uncertainty) set: every matrix whose `i`-th
//!   row is picked from a finite row set `𝒜ᵢ`,
//! * a [`PolyExpr`] built from other sets with Minkowski sums, Minkowski
//!   products and positive scalings.
//!
//! Every set can be materialized with [`MatrixSet::enumerate`], subject to
//! an explicit cardinality cap.

mod algebra;
mod hausdorff;
mod hull;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::{Error, Options, Result, DEDUP_TOL};

pub use algebra::{dedup, eval_expr, minkowski_product, minkowski_sum, scale_set};
pub use hausdorff::{directed_hausdorff, hausdorff_distance, hausdorff_finite};
pub use hull::{convex_combination, convex_hull_iru, convex_hull_sample, sample_hull_point};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SetKind {
    Finite,
    LinearlyOrdered,
    Iru,
    Expr,
}

impl SetKind {
    pub fn name(self) -> &'static str {
        match self {
            SetKind::Finite => "finite",
            SetKind::LinearlyOrdered => "ordered",
            SetKind::Iru => "iru",
            SetKind::Expr => "expr",
        }
    }
}

/// A validated matrix set. All members share [`MatrixSet::shape`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SetJson", into = "SetJson")]
pub struct MatrixSet {
    repr: Repr,
    shape: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
enum Repr {
    Finite(Vec<Matrix>),
    Ordered(Vec<Matrix>),
    Iru(Vec<Vec<Vec<f64>>>),
    Expr(Box<PolyExpr>),
}

/// Minkowski polynomial over matrix sets.
///
/// Evaluation is bottom-up and never distributes a product over a sum:
/// `𝒜(ℬ₁ + ℬ₂)` and `𝒜ℬ₁ + 𝒜ℬ₂` are different sets in general.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum PolyExpr {
    Leaf {
        set: MatrixSet,
    },
    Sum {
        left: Box<PolyExpr>,
        right: Box<PolyExpr>,
    },
    #[serde(rename = "prod")]
    Product {
        left: Box<PolyExpr>,
        right: Box<PolyExpr>,
    },
    Scale {
        factor: f64,
        child: Box<PolyExpr>,
    },
}

impl PolyExpr {
    pub fn leaf(set: MatrixSet) -> Self {
        PolyExpr::Leaf { set }
    }

    pub fn sum(left: PolyExpr, right: PolyExpr) -> Result<Self> {
        let e = PolyExpr::Sum {
            left: Box::new(left),
            right: Box::new(right),
        };
        e.shape()?;
        Ok(e)
    }

    pub fn product(left: PolyExpr, right: PolyExpr) -> Result<Self> {
        let e = PolyExpr::Product {
            left: Box::new(left),
            right: Box::new(right),
        };
        e.shape()?;
        Ok(e)
    }

    pub fn scale(factor: f64, child: PolyExpr) -> Result<Self> {
        let e = PolyExpr::Scale {
            factor,
            child: Box::new(child),
        };
        e.shape()?;
        Ok(e)
    }

    /// Shape of every member, validating the whole tree on the way.
    pub fn shape(&self) -> Result<(usize, usize)> {
        match self {
            PolyExpr::Leaf { set } => Ok(set.shape()),
            PolyExpr::Sum { left, right } => {
                let (l, r) = (left.shape()?, right.shape()?);
                if l != r {
                    return Err(Error::mismatch("minkowski_sum", l, r));
                }
                Ok(l)
            }
            PolyExpr::Product { left, right } => {
                let (l, r) = (left.shape()?, right.shape()?);
                if l.1 != r.0 {
                    return Err(Error::mismatch("minkowski_product", l, r));
                }
                Ok((l.0, r.1))
            }
            PolyExpr::Scale { factor, child } => {
                if !(factor.is_finite() && *factor > 0.0) {
                    return Err(Error::InvalidScale(*factor));
                }
                child.shape()
            }
        }
    }

    /// Upper bound on the number of members before deduplication.
    pub fn cardinality_bound(&self) -> u128 {
        match self {
            PolyExpr::Leaf { set } => set.cardinality_bound(),
            PolyExpr::Sum { left, right } | PolyExpr::Product { left, right } => left
                .cardinality_bound()
                .saturating_mul(right.cardinality_bound()),
            PolyExpr::Scale { child, .. } => child.cardinality_bound(),
        }
    }
}

impl MatrixSet {
    /// A non-empty list of same-shape matrices. Duplicates are kept; see
    /// [`MatrixSet::duplicate_count`].
    pub fn finite(matrices: Vec<Matrix>) -> Result<Self> {
        let shape = common_shape(&matrices)?;
        Ok(MatrixSet {
            repr: Repr::Finite(matrices),
            shape,
        })
    }

    /// A chain of positive matrices, each strictly entrywise below the next.
    pub fn linearly_ordered(matrices: Vec<Matrix>) -> Result<Self> {
        let shape = common_shape(&matrices)?;
        matrices[0].ensure_positive()?;
        for (k, w) in matrices.windows(2).enumerate() {
            let increasing = w[0].as_slice().iter().zip(w[1].as_slice()).all(|(a, b)| a < b);
            if !increasing {
                return Err(Error::NotLinearlyOrdered { index: k, next: k + 1 });
            }
        }
        Ok(MatrixSet {
            repr: Repr::Ordered(matrices),
            shape,
        })
    }

    /// The IRU set whose `i`-th row ranges over `row_sets[i]`.
    pub fn iru(row_sets: Vec<Vec<Vec<f64>>>) -> Result<Self> {
        if row_sets.is_empty() || row_sets.iter().any(Vec::is_empty) {
            return Err(Error::EmptySet);
        }
        let cols = row_sets[0][0].len();
        if cols == 0 {
            return Err(Error::EmptyMatrix {
                rows: row_sets.len(),
                cols,
            });
        }
        for (i, rows) in row_sets.iter().enumerate() {
            for row in rows {
                if row.len() != cols {
                    return Err(Error::RaggedRows {
                        row: i,
                        expected: cols,
                        actual: row.len(),
                    });
                }
                for (j, &value) in row.iter().enumerate() {
                    if !value.is_finite() {
                        return Err(Error::NonFiniteEntry { row: i, col: j, value });
                    }
                    if value < 0.0 {
                        return Err(Error::NegativeEntry { row: i, col: j, value });
                    }
                }
            }
        }
        let shape = (row_sets.len(), cols);
        let row_sets = row_sets
            .into_iter()
            .map(|rs| rs.into_iter().map(|r| r.into_iter().map(|x| x + 0.0).collect()).collect())
            .collect();
        Ok(MatrixSet {
            repr: Repr::Iru(row_sets),
            shape,
        })
    }

    pub fn expr(e: PolyExpr) -> Result<Self> {
        let shape = e.shape()?;
        Ok(MatrixSet {
            repr: Repr::Expr(Box::new(e)),
            shape,
        })
    }

    pub fn singleton(m: Matrix) -> Self {
        let shape = m.shape();
        MatrixSet {
            repr: Repr::Finite(vec![m]),
            shape,
        }
    }

    pub fn kind(&self) -> SetKind {
        match self.repr {
            Repr::Finite(_) => SetKind::Finite,
            Repr::Ordered(_) => SetKind::LinearlyOrdered,
            Repr::Iru(_) => SetKind::Iru,
            Repr::Expr(_) => SetKind::Expr,
        }
    }

    /// `(rows, cols)` of every member.
    pub fn shape(&self) -> (usize, usize) {
        self.shape
    }

    /// Stored matrices of a finite or linearly ordered set.
    pub fn matrices(&self) -> Option<&[Matrix]> {
        match &self.repr {
            Repr::Finite(m) | Repr::Ordered(m) => Some(m),
            _ => None,
        }
    }

    pub fn row_sets(&self) -> Option<&[Vec<Vec<f64>>]> {
        match &self.repr {
            Repr::Iru(rs) => Some(rs),
            _ => None,
        }
    }

    pub fn as_expr(&self) -> Option<&PolyExpr> {
        match &self.repr {
            Repr::Expr(e) => Some(e),
            _ => None,
        }
    }

    /// Exact member count for finite, ordered and IRU sets (counting
    /// duplicates of a finite list); an upper bound for expressions.
    pub fn cardinality_bound(&self) -> u128 {
        match &self.repr {
            Repr::Finite(m) | Repr::Ordered(m) => m.len() as u128,
            Repr::Iru(rs) => rs
                .iter()
                .fold(1u128, |acc, r| acc.saturating_mul(r.len() as u128)),
            Repr::Expr(e) => e.cardinality_bound(),
        }
    }

    /// Number of members of a finite list that repeat an earlier member
    /// within the deduplication tolerance. Zero for other kinds.
    pub fn duplicate_count(&self) -> usize {
        match &self.repr {
            Repr::Finite(m) => m.len() - dedup(m.clone(), DEDUP_TOL).len(),
            _ => 0,
        }
    }

    /// Every member, in a deterministic order.
    ///
    /// IRU sets are listed in row-major choice order: the choice index of
    /// the last row varies fastest, that of the first row slowest.
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Matrix>> {
        self.enumerate_with(&Options::default().with_cap(cap))
    }

    pub fn enumerate_with(&self, opts: &Options) -> Result<Vec<Matrix>> {
        let cap = opts.cap;
        let check = |n: u128| {
            if n > cap as u128 {
                Err(Error::CapExceeded { cardinality: n, cap })
            } else {
                Ok(())
            }
        };
        match &self.repr {
            Repr::Finite(m) | Repr::Ordered(m) => {
                check(m.len() as u128)?;
                Ok(m.clone())
            }
            Repr::Iru(rs) => {
                check(self.cardinality_bound())?;
                Ok(enumerate_iru(rs, self.shape.1))
            }
            Repr::Expr(e) => {
                let set = eval_expr(e, opts)?;
                Ok(set.matrices().map(<[Matrix]>::to_vec).unwrap_or_default())
            }
        }
    }

    /// Some member lies within `tol` of `m` in the entrywise max norm.
    pub fn contains(&self, m: &Matrix, tol: f64, opts: &Options) -> Result<bool> {
        if m.shape() != self.shape {
            return Ok(false);
        }
        if let Repr::Iru(rs) = &self.repr {
            return Ok(rs.iter().enumerate().all(|(i, rows)| {
                rows.iter().any(|r| {
                    r.iter()
                        .zip(m.row(i))
                        .all(|(a, b)| (a - b).abs() <= tol)
                })
            }));
        }
        Ok(self
            .enumerate_with(opts)?
            .iter()
            .any(|x| x.max_abs_diff_unchecked(m) <= tol))
    }

    /// Set of transposes. IRU structure is not preserved by transposition,
    /// so the result is a finite list (or, for expressions, an evaluated
    /// finite list).
    pub fn transpose(&self, opts: &Options) -> Result<MatrixSet> {
        let members = self.enumerate_with(opts)?;
        MatrixSet::finite(members.iter().map(Matrix::transpose).collect())
    }

    /// Finite set holding the members of `self` followed by `extra`.
    pub fn union_with(&self, extra: Vec<Matrix>, opts: &Options) -> Result<MatrixSet> {
        let mut members = self.enumerate_with(opts)?;
        for m in &extra {
            if m.shape() != self.shape {
                return Err(Error::mismatch("union", self.shape, m.shape()));
            }
        }
        members.extend(extra);
        MatrixSet::finite(members)
    }
}

fn common_shape(matrices: &[Matrix]) -> Result<(usize, usize)> {
    let first = matrices.first().ok_or(Error::EmptySet)?.shape();
    if let Some(bad) = matrices.iter().find(|m| m.shape() != first) {
        return Err(Error::mismatch("matrix_set", first, bad.shape()));
    }
    Ok(first)
}

fn enumerate_iru(row_sets: &[Vec<Vec<f64>>], cols: usize) -> Vec<Matrix> {
    let n = row_sets.len();
    let total: usize = row_sets.iter().map(Vec::len).product();
    let mut out = Vec::with_capacity(total);
    let mut choice = vec![0usize; n];
    loop {
        let mut data = Vec::with_capacity(n * cols);
        for (rs, &c) in row_sets.iter().zip(&choice) {
            data.extend_from_slice(&rs[c]);
        }
        out.push(Matrix::from_raw(n, cols, data));
        // odometer, last row fastest
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < row_sets[i].len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum SetJson {
    Finite { matrices: Vec<Matrix> },
    Ordered { matrices: Vec<Matrix> },
    Iru { row_sets: Vec<Vec<Vec<f64>>> },
    Expr { expr: PolyExpr },
}

impl TryFrom<SetJson> for MatrixSet {
    type Error = Error;

    fn try_from(raw: SetJson) -> Result<Self> {
        match raw {
            SetJson::Finite { matrices } => MatrixSet::finite(matrices),
            SetJson::Ordered { matrices } => MatrixSet::linearly_ordered(matrices),
            SetJson::Iru { row_sets } => MatrixSet::iru(row_sets),
            SetJson::Expr { expr } => MatrixSet::expr(expr),
        }
    }
}

impl From<MatrixSet> for SetJson {
    fn from(s: MatrixSet) -> Self {
        match s.repr {
            Repr::Finite(matrices) => SetJson::Finite { matrices },
            Repr::Ordered(matrices) => SetJson::Ordered { matrices },
            Repr::Iru(row_sets) => SetJson::Iru { row_sets },
            Repr::Expr(e) => SetJson::Expr { expr: *e },
        }
    }
}
