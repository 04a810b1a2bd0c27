//! The hourglass alternative.
//!
//! For a set `𝒜`, a member `Ã` and a vector `u > 0`:
//!
//! * H1: either `Au ≥ Ãu` for every `A ∈ 𝒜`, or some `Ā ∈ 𝒜` has
//!   `Āu ≤ Ãu` and `Āu ≠ Ãu`;
//! * H2: either `Au ≤ Ãu` for every `A ∈ 𝒜`, or some `Ā ∈ 𝒜` has
//!   `Āu ≥ Ãu` and `Āu ≠ Ãu`.
//!
//! A set satisfying both at every pair is an H-set. The quantifier over all
//! `u > 0` cannot be checked exactly, so [`check_hset_sampled`] draws probe
//! vectors at random: a failure is conclusive, a pass is evidence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::vector::{differs, ensure_positive, geq, leq};
use crate::linalg::Matrix;
use crate::par::map_range;
use crate::sets::MatrixSet;
use crate::{Error, Options, Result};

/// A member of the enumerated set, with its enumeration index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Member {
    pub index: usize,
    pub matrix: Matrix,
}

/// One side of the alternative.
///
/// `in_cone` is the first branch (all images in the upper cone for H1, in
/// the lower cone for H2). `witness` is the first member strictly on the
/// opposite side. `violator` is the first member that breaks the first
/// branch, reported for diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlternativeReport {
    pub in_cone: bool,
    pub witness: Option<Member>,
    pub violator: Option<Member>,
}

impl AlternativeReport {
    pub fn satisfied(&self) -> bool {
        self.in_cone || self.witness.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HourglassReport {
    pub probe_matrix: Matrix,
    pub probe_index: usize,
    pub probe_vector: Vec<f64>,
    /// Upper cone first branch, lower witness.
    pub h1: AlternativeReport,
    /// Lower cone first branch, upper witness.
    pub h2: AlternativeReport,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsetCheck {
    pub passed: bool,
    pub members: usize,
    pub probes_per_member: usize,
    pub reports_checked: usize,
    /// First failing report of each failing probe matrix, in probe order.
    pub failures: Vec<HourglassReport>,
}

/// Decides H1 and H2 at `(probe, u)` with comparison band `tol`.
pub fn check_hourglass_at(
    set: &MatrixSet,
    probe: &Matrix,
    u: &[f64],
    tol: f64,
    opts: &Options,
) -> Result<HourglassReport> {
    ensure_positive(u)?;
    if u.len() != set.shape().1 {
        return Err(Error::mismatch("check_hourglass_at", set.shape(), (u.len(), 1)));
    }
    let members = set.enumerate_with(opts)?;
    let probe_index = members
        .iter()
        .position(|m| m.shape() == probe.shape() && m.max_abs_diff_unchecked(probe) <= tol)
        .ok_or(Error::ProbeNotInSet)?;
    let images: Vec<Vec<f64>> = members.iter().map(|m| m.mul_vec_unchecked(u)).collect();
    Ok(report_at(&members, &images, probe_index, probe, u, tol))
}

fn report_at(
    members: &[Matrix],
    images: &[Vec<f64>],
    probe_index: usize,
    probe: &Matrix,
    u: &[f64],
    tol: f64,
) -> HourglassReport {
    let centre = probe.mul_vec_unchecked(u);
    let member = |i: usize| Member {
        index: i,
        matrix: members[i].clone(),
    };
    let first = |pred: &dyn Fn(&[f64]) -> bool| images.iter().position(|x| pred(x));

    let up_violator = first(&|x| !geq(x, &centre, tol));
    let down_witness = first(&|x| leq(x, &centre, tol) && differs(x, &centre, tol));
    let h1 = AlternativeReport {
        in_cone: up_violator.is_none(),
        witness: down_witness.map(member),
        violator: up_violator.map(member),
    };

    let down_violator = first(&|x| !leq(x, &centre, tol));
    let up_witness = first(&|x| geq(x, &centre, tol) && differs(x, &centre, tol));
    let h2 = AlternativeReport {
        in_cone: down_violator.is_none(),
        witness: up_witness.map(member),
        violator: down_violator.map(member),
    };

    let holds = h1.satisfied() && h2.satisfied();
    HourglassReport {
        probe_matrix: probe.clone(),
        probe_index,
        probe_vector: u.to_vec(),
        h1,
        h2,
        holds,
    }
}

/// Probe vector with coordinates log-uniform on `[1e-2, 1e2]`.
pub fn random_probe_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<f64> {
    (0..len)
        .map(|_| 10f64.powf(rng.random_range(-2.0..=2.0)))
        .collect()
}

/// Checks the alternative at every member of `set` against `n_probes`
/// random vectors each.
///
/// Probe matrix `p` draws its vectors from the ChaCha stream `p` of `seed`,
/// so the outcome does not depend on the evaluation order.
pub fn check_hset_sampled(
    set: &MatrixSet,
    n_probes: usize,
    seed: u64,
    tol: f64,
    opts: &Options,
) -> Result<HsetCheck> {
    let members = set.enumerate_with(opts)?;
    let cols = set.shape().1;
    let per_probe = map_range(opts.exec, members.len(), |p| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(p as u64);
        for _ in 0..n_probes {
            let u = random_probe_vector(&mut rng, cols);
            let images: Vec<Vec<f64>> = members.iter().map(|m| m.mul_vec_unchecked(&u)).collect();
            let report = report_at(&members, &images, p, &members[p], &u, tol);
            if !report.holds {
                return Some(report);
            }
        }
        None
    });
    let failures: Vec<HourglassReport> = per_probe.into_iter().flatten().collect();
    Ok(HsetCheck {
        passed: failures.is_empty(),
        members: members.len(),
        probes_per_member: n_probes,
        reports_checked: members.len() * n_probes,
        failures,
    })
}
