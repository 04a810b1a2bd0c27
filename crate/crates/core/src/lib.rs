//! Saddle points of the spectral radius `ρ(AB)` over compact sets of
//! non-negative matrices.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] holds the dense [`Matrix`] type, the Perron root solver and
//!   Collatz–Wielandt bounds.
//! * [`sets`] represents finitely described matrix sets (finite lists,
//!   linearly ordered chains, independent-row-uncertainty sets and
//!   Minkowski polynomial expressions) together with their algebra, convex
//!   hulls and the Hausdorff metric.
//! * [`hourglass`] checks the hourglass alternative at probe pairs and
//!   stress-tests the H-set property by sampling.
//! * [`saddle`] computes saddle points by exhaustive best responses,
//!   certifies them with eigenvector inequalities and spot-checks convex
//!   hulls.
//!
//! Heavy loops run on rayon when the `parallel` feature is enabled (the
//! default); [`Exec`] selects the strategy per call and results are always
//! reduced in index order, so both strategies return identical values.

pub mod error;
pub mod gen;
pub mod hourglass;
pub mod linalg;
mod par;
pub mod saddle;
pub mod sets;
pub mod sweep;

pub use error::{Error, Result};
pub use hourglass::{check_hourglass_at, check_hset_sampled, AlternativeReport, HourglassReport, HsetCheck};
pub use linalg::{
    collatz_wielandt_lower, collatz_wielandt_upper, mat_mul, spectral_radius, Matrix, PerronData,
};
pub use par::Exec;
pub use saddle::{
    best_response_max, best_response_min, best_response_min_iru, certify_saddle,
    check_saddle_hull_samples, minimax_table, solve_saddle, Certificate, CertificateStatus,
    MinimaxTable, Pairing, SaddleResult,
};
pub use sets::{MatrixSet, PolyExpr};

/// Default tolerance on successive Perron root estimates.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default iteration budget of the power method.
pub const DEFAULT_MAX_ITER: usize = 100_000;
/// Tolerance band used for every entrywise vector comparison.
pub const COMPARE_TOL: f64 = 1e-10;
/// Entrywise tolerance under which two matrices count as the same set member.
pub const DEDUP_TOL: f64 = 1e-12;
/// Default tolerance on certificate residuals and hull spot checks.
pub const CERT_TOL: f64 = 1e-9;
/// Default bound on the number of matrices a set may enumerate to.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Knobs shared by every operation that materializes a set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    /// Maximum number of matrices any single enumeration may produce.
    pub cap: usize,
    /// Sequential or rayon-backed evaluation of the inner loops.
    pub exec: Exec,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_CAP,
            exec: Exec::default(),
        }
    }
}

impl Options {
    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }
}
