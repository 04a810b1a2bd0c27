//! Seeded sweep over random positive IRU pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::gen::random_iru;
use crate::saddle::{certify_saddle, hull_spot_check, solve_saddle};
use crate::sets::MatrixSet;
use crate::{Options, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub trials: usize,
    pub seed: u64,
    /// Upper bound on the row-set sizes.
    pub max_choices: usize,
    /// Hull points sampled per trial; zero skips the spot check.
    pub hull_samples: usize,
    pub cert_tol: f64,
    pub hull_tol: f64,
}

impl SweepConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        SweepConfig {
            trials,
            seed,
            max_choices: 3,
            hull_samples: 200,
            cert_tol: 1e-10,
            hull_tol: 1e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    /// Rows of `A` (`N`) and of `B` (`M`).
    pub n: usize,
    pub m: usize,
    pub minmax: f64,
    pub maxmin: f64,
    pub gap: f64,
    pub certificate_valid: bool,
    pub a_residual: f64,
    pub b_residual: f64,
    pub hull_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: SweepConfig,
    pub max_gap: f64,
    pub min_residual: f64,
    pub certificates_valid: usize,
    pub hull_checks_passed: usize,
    pub trials: Vec<TrialOutcome>,
}

impl SweepReport {
    /// All gaps within `gap_tol`, all certificates valid, all hull checks passed.
    pub fn passed(&self, gap_tol: f64) -> bool {
        self.trials
            .iter()
            .all(|t| t.gap.abs() <= gap_tol && t.certificate_valid && t.hull_passed)
    }
}

/// The pair of trial `k`: stream `k` of `seed`, `N, M ∈ {2, 3}`, positive
/// entries.
pub fn trial_pair(seed: u64, k: usize, max_choices: usize) -> Result<(MatrixSet, MatrixSet)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k as u64);
    let n = rng.random_range(2..=3);
    let m = rng.random_range(2..=3);
    let a = random_iru(&mut rng, n, m, max_choices, 0.0)?;
    let b = random_iru(&mut rng, m, n, max_choices, 0.0)?;
    Ok((a, b))
}

pub fn equality_sweep(config: &SweepConfig, opts: &Options) -> Result<SweepReport> {
    let mut trials = Vec::with_capacity(config.trials);
    for k in 0..config.trials {
        let (a, b) = trial_pair(config.seed, k, config.max_choices)?;
        let result = solve_saddle(&a, &b, opts)?;
        let cert = certify_saddle(&result, &a, &b, config.cert_tol, opts)?;
        let hull = hull_spot_check(
            &result,
            &a,
            &b,
            config.hull_samples,
            config.seed ^ k as u64,
            config.hull_tol,
            opts,
        )?;
        trials.push(TrialOutcome {
            trial: k,
            n: a.shape().0,
            m: a.shape().1,
            minmax: result.minmax,
            maxmin: result.maxmin,
            gap: result.gap,
            certificate_valid: cert.valid,
            a_residual: cert.a_residual,
            b_residual: cert.b_residual,
            hull_passed: hull.passed,
        });
    }
    Ok(SweepReport {
        config: *config,
        max_gap: trials.iter().map(|t| t.gap.abs()).fold(0.0, f64::max),
        min_residual: trials
            .iter()
            .map(|t| t.a_residual.min(t.b_residual))
            .fold(f64::INFINITY, f64::min),
        certificates_valid: trials.iter().filter(|t| t.certificate_valid).count(),
        hull_checks_passed: trials.iter().filter(|t| t.hull_passed).count(),
        trials,
    })
}
