//! Saddle points of `ρ(AB)` over `𝒜 × ℬ`.
//!
//! [`solve_saddle`] follows the constructive argument: for every `B` find
//! the minimizing response `A_B`, take `B̃` maximizing `ρ(A_B B)` and set
//! `Ã = A_B̃`. With `v` the Perron vector of `ÃB̃` and `w = B̃v`, the pair is
//! certified by the vector inequalities
//!
//! ```text
//! ρ(ÃB̃)·v ≤ A w   for every A ∈ 𝒜,
//!       w ≥ B v   for every B ∈ ℬ,
//! ```
//!
//! which are affine in `A` (resp. `B`), hence hold on the convex hulls as
//! soon as they hold at the members, and give `ρ(ÃB) ≤ ρ(ÃB̃) ≤ ρ(AB̃)`
//! through the Collatz–Wielandt bounds.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::perron::{perron_checked, perron_root};
use crate::linalg::vector::dot;
use crate::linalg::{mat_mul_unchecked, Matrix, PerronData};
use crate::par::try_map_range;
use crate::sets::{sample_hull_point, MatrixSet};
use crate::{Error, Options, Result};

/// Relative band within which two spectral radii count as tied; ties go to
/// the earliest enumeration index.
const TIE_TOL: f64 = 1e-12;

#[inline]
fn strictly_below(x: f64, best: f64) -> bool {
    x < best - TIE_TOL * best.abs().max(1.0)
}

/// Which of the four products with equal spectral radius is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Pairing {
    /// `ρ(AB)`, an `N x N` product.
    #[default]
    AB,
    /// `ρ(BA)`, an `M x M` product.
    BA,
    /// `ρ(AᵀBᵀ)`.
    AtBt,
    /// `ρ(BᵀAᵀ)`.
    BtAt,
}

impl Pairing {
    pub fn product(self, a: &Matrix, b: &Matrix) -> Matrix {
        match self {
            Pairing::AB => mat_mul_unchecked(a, b),
            Pairing::BA => mat_mul_unchecked(b, a),
            Pairing::AtBt => mat_mul_unchecked(&a.transpose(), &b.transpose()),
            Pairing::BtAt => mat_mul_unchecked(&b.transpose(), &a.transpose()),
        }
    }
}

fn rho_pair(a: &Matrix, b: &Matrix, pairing: Pairing) -> Result<f64> {
    perron_root(&pairing.product(a, b))
}

fn check_pair_shapes(op: &'static str, a: (usize, usize), b: (usize, usize)) -> Result<()> {
    if a.1 != b.0 || a.0 != b.1 {
        return Err(Error::mismatch(op, a, b));
    }
    Ok(())
}

/// Index of the smallest (or largest) entry, earliest index on ties.
fn arg_extreme(values: impl Iterator<Item = f64>, minimize: bool) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in values.enumerate() {
        best = match best {
            None => Some((i, x)),
            Some((_, b)) if minimize && strictly_below(x, b) => Some((i, x)),
            Some((_, b)) if !minimize && strictly_below(b, x) => Some((i, x)),
            keep => keep,
        };
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestResponse {
    pub index: usize,
    pub matrix: Matrix,
    pub rho: f64,
}

/// `argmin_{A ∈ a_set} ρ(A b)` by exhaustive scan.
pub fn best_response_min(b: &Matrix, a_set: &MatrixSet, opts: &Options) -> Result<BestResponse> {
    check_pair_shapes("best_response_min", a_set.shape(), b.shape())?;
    best_response(a_set, opts, true, |a| rho_pair(a, b, Pairing::AB))
}

/// `argmax_{B ∈ b_set} ρ(a B)` by exhaustive scan.
pub fn best_response_max(a: &Matrix, b_set: &MatrixSet, opts: &Options) -> Result<BestResponse> {
    check_pair_shapes("best_response_max", a.shape(), b_set.shape())?;
    best_response(b_set, opts, false, |b| rho_pair(a, b, Pairing::AB))
}

fn best_response<F>(set: &MatrixSet, opts: &Options, minimize: bool, f: F) -> Result<BestResponse>
where
    F: Fn(&Matrix) -> Result<f64> + Sync + Send,
{
    let members = set.enumerate_with(opts)?;
    let rhos = try_map_range(opts.exec, members.len(), |i| f(&members[i]))?;
    let (index, rho) = arg_extreme(rhos.into_iter(), minimize).ok_or(Error::EmptySet)?;
    Ok(BestResponse {
        index,
        matrix: members[index].clone(),
        rho,
    })
}

/// Local search for `min_{A ∈ a_set} ρ(A b)` over an IRU set.
///
/// Starts from the first choice in every row set. A round visits each row,
/// ranks the alternative rows by the first-order change of the Perron root
/// (from the left and right Perron vectors of the current `Ab`), and takes
/// the first alternative whose exact `ρ` is lower. Stops after a round
/// without change or after `max_rounds` rounds. The result never has a
/// larger `ρ` than the start; it is not guaranteed to be the global
/// minimum, [`best_response_min`] is.
pub fn best_response_min_iru(b: &Matrix, a_set: &MatrixSet, max_rounds: usize) -> Result<BestResponse> {
    let row_sets = a_set.row_sets().ok_or(Error::NotIru(a_set.kind().name()))?;
    check_pair_shapes("best_response_min_iru", a_set.shape(), b.shape())?;
    let n = row_sets.len();
    let mut choice = vec![0usize; n];
    let mut current = Matrix::from_rows(row_sets.iter().map(|rs| rs[0].clone()).collect())?;
    let mut rho = rho_pair(&current, b, Pairing::AB)?;

    for _ in 0..max_rounds {
        let mut changed = false;
        for i in 0..n {
            if row_sets[i].len() < 2 {
                continue;
            }
            let ab = mat_mul_unchecked(&current, b);
            let right = perron_checked(&ab)?.vector;
            let left = perron_checked(&ab.transpose())?.vector;
            let w = b.mul_vec_unchecked(&right);
            let norm = dot(&left, &right).max(f64::MIN_POSITIVE);
            let base = dot(current.row(i), &w);
            let mut candidates: Vec<(usize, f64)> = (0..row_sets[i].len())
                .filter(|&c| c != choice[i])
                .map(|c| (c, left[i] * (dot(&row_sets[i][c], &w) - base) / norm))
                .collect();
            candidates.sort_by(|x, y| x.1.total_cmp(&y.1));
            for (c, _) in candidates {
                let trial = current.with_row(i, row_sets[i][c].as_slice())?;
                let trial_rho = rho_pair(&trial, b, Pairing::AB)?;
                if strictly_below(trial_rho, rho) {
                    current = trial;
                    rho = trial_rho;
                    choice[i] = c;
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let index = choice
        .iter()
        .zip(row_sets)
        .fold(0usize, |acc, (&c, rs)| acc * rs.len() + c);
    Ok(BestResponse {
        index,
        matrix: current,
        rho,
    })
}

/// `values[i][j] = ρ(A_i B_j)` over the enumerations of both sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimaxTable {
    pub values: Vec<Vec<f64>>,
}

impl MinimaxTable {
    pub fn rows(&self) -> usize {
        self.values.len()
    }

    pub fn cols(&self) -> usize {
        self.values.first().map_or(0, Vec::len)
    }

    /// Best response of the minimizer to column `j`.
    pub fn column_min(&self, j: usize) -> (usize, f64) {
        arg_extreme(self.values.iter().map(|r| r[j]), true).expect("non-empty table")
    }

    /// Best response of the maximizer to row `i`.
    pub fn row_max(&self, i: usize) -> (usize, f64) {
        arg_extreme(self.values[i].iter().copied(), false).expect("non-empty table")
    }

    /// `(i, min_i max_j ρ)`.
    pub fn minmax(&self) -> (usize, f64) {
        arg_extreme((0..self.rows()).map(|i| self.row_max(i).1), true).expect("non-empty table")
    }

    /// `(j, max_j min_i ρ)`.
    pub fn maxmin(&self) -> (usize, f64) {
        arg_extreme((0..self.cols()).map(|j| self.column_min(j).1), false).expect("non-empty table")
    }

    pub fn gap(&self) -> f64 {
        self.minmax().1 - self.maxmin().1
    }
}

pub fn minimax_table(a_set: &MatrixSet, b_set: &MatrixSet, opts: &Options) -> Result<MinimaxTable> {
    minimax_table_with(a_set, b_set, Pairing::AB, opts)
}

pub fn minimax_table_with(
    a_set: &MatrixSet,
    b_set: &MatrixSet,
    pairing: Pairing,
    opts: &Options,
) -> Result<MinimaxTable> {
    check_pair_shapes("minimax_table", a_set.shape(), b_set.shape())?;
    let (xs, ys) = (a_set.enumerate_with(opts)?, b_set.enumerate_with(opts)?);
    table_from_members(&xs, &ys, pairing, opts)
}

fn table_from_members(xs: &[Matrix], ys: &[Matrix], pairing: Pairing, opts: &Options) -> Result<MinimaxTable> {
    let total = xs.len() as u128 * ys.len() as u128;
    if total > opts.cap as u128 {
        return Err(Error::CapExceeded {
            cardinality: total,
            cap: opts.cap,
        });
    }
    let m = ys.len();
    let flat = try_map_range(opts.exec, xs.len() * m, |k| rho_pair(&xs[k / m], &ys[k % m], pairing))?;
    Ok(MinimaxTable {
        values: flat.chunks(m).map(<[f64]>::to_vec).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SaddleResult {
    pub a_tilde: Matrix,
    pub a_index: usize,
    pub b_tilde: Matrix,
    pub b_index: usize,
    /// `ρ(ÃB̃)`.
    pub value: f64,
    /// Perron data of `ÃB̃`.
    pub perron: PerronData,
    /// `B̃ v`.
    pub w: Vec<f64>,
    pub minmax: f64,
    pub maxmin: f64,
    pub gap: f64,
}

pub fn solve_saddle(a_set: &MatrixSet, b_set: &MatrixSet, opts: &Options) -> Result<SaddleResult> {
    solve_saddle_with(a_set, b_set, Pairing::AB, opts)
}

/// Exhaustive saddle construction; `pairing` picks which product the table
/// is built from, the Perron data always belongs to `ÃB̃`.
pub fn solve_saddle_with(
    a_set: &MatrixSet,
    b_set: &MatrixSet,
    pairing: Pairing,
    opts: &Options,
) -> Result<SaddleResult> {
    check_pair_shapes("solve_saddle", a_set.shape(), b_set.shape())?;
    let (xs, ys) = (a_set.enumerate_with(opts)?, b_set.enumerate_with(opts)?);
    let table = table_from_members(&xs, &ys, pairing, opts)?;
    let (b_index, maxmin) = table.maxmin();
    let (a_index, _) = table.column_min(b_index);
    let (_, minmax) = table.minmax();
    let (a_tilde, b_tilde) = (xs[a_index].clone(), ys[b_index].clone());
    let perron = perron_checked(&mat_mul_unchecked(&a_tilde, &b_tilde))?;
    let w = b_tilde.mul_vec_unchecked(&perron.vector);
    Ok(SaddleResult {
        a_tilde,
        a_index,
        b_tilde,
        b_index,
        value: perron.rho,
        perron,
        w,
        minmax,
        maxmin,
        gap: minmax - maxmin,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateStatus {
    Valid,
    Invalid,
    /// The Perron vector of `ÃB̃` has a zero coordinate.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    /// `min_A min_i (A w − ρ* v)_i`.
    pub a_residual: f64,
    /// `min_B min_i (w − B v)_i`.
    pub b_residual: f64,
    pub status: CertificateStatus,
    pub valid: bool,
}

/// Checks the two certifying vector inequalities at every member of both
/// sets. IRU sets are checked row by row without enumeration.
pub fn certify_saddle(
    result: &SaddleResult,
    a_set: &MatrixSet,
    b_set: &MatrixSet,
    tol: f64,
    opts: &Options,
) -> Result<Certificate> {
    check_pair_shapes("certify_saddle", a_set.shape(), b_set.shape())?;
    let v = &result.perron.vector;
    let w = &result.w;
    let rho = result.value;
    if v.len() != a_set.shape().0 || w.len() != a_set.shape().1 {
        return Err(Error::InvalidArgument(
            "saddle result does not match the given sets".into(),
        ));
    }
    // (A w)_i − ρ v_i
    let a_residual = row_residual(a_set, opts, w, |i, x| x - rho * v[i])?;
    // w_i − (B v)_i
    let b_residual = row_residual(b_set, opts, v, |i, x| w[i] - x)?;
    let status = if !result.perron.is_vector_positive() {
        CertificateStatus::Inconclusive
    } else if a_residual >= -tol && b_residual >= -tol {
        CertificateStatus::Valid
    } else {
        CertificateStatus::Invalid
    };
    Ok(Certificate {
        a_residual,
        b_residual,
        status,
        valid: status == CertificateStatus::Valid,
    })
}

/// `min` over members `X` and rows `i` of `f(i, (X x)_i)`.
fn row_residual<F>(set: &MatrixSet, opts: &Options, x: &[f64], f: F) -> Result<f64>
where
    F: Fn(usize, f64) -> f64,
{
    if let Some(row_sets) = set.row_sets() {
        return Ok(row_sets
            .iter()
            .enumerate()
            .flat_map(|(i, rs)| rs.iter().map(move |r| (i, r)))
            .map(|(i, r)| f(i, dot(r, x)))
            .fold(f64::INFINITY, f64::min));
    }
    Ok(set
        .enumerate_with(opts)?
        .iter()
        .flat_map(|m| m.mul_vec_unchecked(x).into_iter().enumerate())
        .map(|(i, y)| f(i, y))
        .fold(f64::INFINITY, f64::min))
}

/// Outcome of the random convex-hull spot check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullCheck {
    pub passed: bool,
    pub samples: usize,
    /// Largest `ρ(ÃB) − ρ*` seen.
    pub worst_b_excess: f64,
    /// Largest `ρ* − ρ(AB̃)` seen.
    pub worst_a_deficit: f64,
}

/// Draws `n` points `A ∈ co(𝒜)`, `B ∈ co(ℬ)` and checks
/// `ρ(ÃB) ≤ ρ* + tol` and `ρ* ≤ ρ(AB̃) + tol`.
pub fn check_saddle_hull_samples(
    result: &SaddleResult,
    a_set: &MatrixSet,
    b_set: &MatrixSet,
    n: usize,
    seed: u64,
    tol: f64,
    opts: &Options,
) -> Result<bool> {
    Ok(hull_spot_check(result, a_set, b_set, n, seed, tol, opts)?.passed)
}

pub fn hull_spot_check(
    result: &SaddleResult,
    a_set: &MatrixSet,
    b_set: &MatrixSet,
    n: usize,
    seed: u64,
    tol: f64,
    opts: &Options,
) -> Result<HullCheck> {
    check_pair_shapes("check_saddle_hull_samples", a_set.shape(), b_set.shape())?;
    if n == 0 {
        return Ok(HullCheck {
            passed: true,
            samples: 0,
            worst_b_excess: f64::NEG_INFINITY,
            worst_a_deficit: f64::NEG_INFINITY,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (xs, ys) = (a_set.enumerate_with(opts)?, b_set.enumerate_with(opts)?);
    let mut pairs = Vec::with_capacity(n);
    for k in 0..n {
        let a = sample_in_hull(a_set, &xs, k, &mut rng)?;
        let b = sample_in_hull(b_set, &ys, k, &mut rng)?;
        pairs.push((a, b));
    }
    let rho = result.value;
    let margins = try_map_range(opts.exec, n, |k| {
        let (a, b) = &pairs[k];
        let upper = rho_pair(&result.a_tilde, b, Pairing::AB)?;
        let lower = rho_pair(a, &result.b_tilde, Pairing::AB)?;
        Ok((upper - rho, rho - lower))
    })?;
    let worst_b_excess = margins.iter().map(|m| m.0).fold(f64::NEG_INFINITY, f64::max);
    let worst_a_deficit = margins.iter().map(|m| m.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(HullCheck {
        passed: worst_b_excess <= tol && worst_a_deficit <= tol,
        samples: n,
        worst_b_excess,
        worst_a_deficit,
    })
}

/// Alternates mixtures of whole members with, for IRU sets, row-wise
/// mixtures; both land in the convex hull.
fn sample_in_hull<R: Rng>(set: &MatrixSet, members: &[Matrix], k: usize, rng: &mut R) -> Result<Matrix> {
    match set.row_sets() {
        Some(row_sets) if k % 2 == 1 => {
            let mut rows = Vec::with_capacity(row_sets.len());
            for rs in row_sets {
                let pts: Vec<Matrix> = rs
                    .iter()
                    .map(|r| Matrix::new(1, r.len(), r.clone()))
                    .collect::<Result<_>>()?;
                let r = rng.random_range(1..=2 * pts.len());
                rows.push(sample_hull_point(&pts, r, rng)?.as_slice().to_vec());
            }
            Matrix::from_rows(rows)
        }
        _ => {
            let r = rng.random_range(1..=2 * members.len());
            sample_hull_point(members, r, rng)
        }
    }
}
