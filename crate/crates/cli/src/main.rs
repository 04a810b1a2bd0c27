//! `rho-minimax` command-line tool. Every command prints one JSON document.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 bad input,
//! 3 numerical non-convergence.

mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use rho_minimax::saddle::{hull_spot_check, minimax_table_with, HullCheck};
use rho_minimax::sets::{
    convex_hull_iru, convex_hull_sample, eval_expr, hausdorff_distance, minkowski_product, minkowski_sum,
    scale_set,
};
use rho_minimax::sweep::{equality_sweep, SweepConfig};
use rho_minimax::{
    certify_saddle, check_hset_sampled, solve_saddle, spectral_radius, Certificate, Exec, Matrix, MatrixSet,
    Options, Pairing, PolyExpr, CERT_TOL, COMPARE_TOL, DEFAULT_CAP, DEFAULT_MAX_ITER, DEFAULT_TOL,
};

use io::{read_json, write_report, Failure};

#[derive(Parser)]
#[command(name = "rho-minimax", version, about = "Minimax and saddle points of ρ(AB) over non-negative matrix sets")]
struct Cli {
    /// Largest number of matrices a set may enumerate to.
    #[arg(long, global = true, env = "HOURGLASS_CAP", default_value_t = DEFAULT_CAP, value_parser = parse_cap)]
    cap: usize,

    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Run every loop on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Perron root and vector of a square matrix.
    Spectral {
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_TOL, value_parser = parse_tol)]
        tol: f64,
        #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
        max_iter: usize,
    },
    /// Saddle point of ρ(AB) over A ∈ 𝒜, B ∈ ℬ.
    Saddle(SaddleArgs),
    /// min max and max min of ρ(AB).
    Minimax(MinimaxArgs),
    /// Sampled test of the hourglass alternative at every member.
    HsetCheck {
        set: PathBuf,
        #[arg(long, default_value_t = 50)]
        probes: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = COMPARE_TOL, value_parser = parse_tol)]
        tol: f64,
    },
    /// Hausdorff distance between two sets.
    Hausdorff { left: PathBuf, right: PathBuf },
    /// Minkowski operations and convex hulls.
    Algebra {
        #[command(subcommand)]
        op: AlgebraOp,
    },
    /// Equality sweep over seeded random positive IRU pairs.
    Batch {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        hull_samples: usize,
        /// Largest allowed |minmax − maxmin|.
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tol)]
        tol: f64,
    },
}

#[derive(Args)]
struct SaddleArgs {
    a: PathBuf,
    b: PathBuf,
    /// Check the eigenvector certificate at every member.
    #[arg(long)]
    certify: bool,
    /// Spot-check this many random points of the convex hulls.
    #[arg(long, default_value_t = 0)]
    hull_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = CERT_TOL, value_parser = parse_tol)]
    tol: f64,
    /// Exit 1 unless the gap is within tol and every requested check passes.
    #[arg(long)]
    require_equality: bool,
}

#[derive(Args)]
struct MinimaxArgs {
    a: PathBuf,
    b: PathBuf,
    /// Include the full table of ρ(A_i B_j).
    #[arg(long)]
    table: bool,
    #[arg(long, value_enum, default_value_t = PairingArg::Ab)]
    pairing: PairingArg,
    #[arg(long, default_value_t = CERT_TOL, value_parser = parse_tol)]
    tol: f64,
    /// Exit 1 unless the gap is within tol.
    #[arg(long)]
    require_equality: bool,
}

#[derive(Subcommand)]
enum AlgebraOp {
    /// 𝒜 + ℬ.
    Sum { left: PathBuf, right: PathBuf },
    /// 𝒜ℬ.
    Prod { left: PathBuf, right: PathBuf },
    /// t𝒜 for t > 0.
    Scale { factor: f64, set: PathBuf },
    /// Evaluate a polynomial expression file.
    Eval { expr: PathBuf },
    /// Extreme rows of an IRU set.
    Hull { set: PathBuf },
    /// One random point of the convex hull.
    HullSample {
        set: PathBuf,
        #[arg(long, default_value_t = 3)]
        vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PairingArg {
    Ab,
    Ba,
    AtBt,
    BtAt,
}

impl From<PairingArg> for Pairing {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::Ab => Pairing::AB,
            PairingArg::Ba => Pairing::BA,
            PairingArg::AtBt => Pairing::AtBt,
            PairingArg::BtAt => Pairing::BtAt,
        }
    }
}

fn parse_tol(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(t),
        Ok(t) => Err(format!("tolerance must be positive, got {t}")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_cap(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("cap must be at least 1".into()),
        Ok(c) => Ok(c),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Serialize)]
struct SaddleReport {
    a_tilde: Matrix,
    b_tilde: Matrix,
    a_index: usize,
    b_index: usize,
    value: f64,
    minmax: f64,
    maxmin: f64,
    gap: f64,
    perron_vector: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hull_check: Option<HullCheck>,
}

#[derive(Serialize)]
struct MinimaxReport {
    minmax: f64,
    maxmin: f64,
    gap: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<Vec<f64>>>,
}

#[derive(Serialize)]
struct DistanceReport {
    distance: f64,
}

/// Writes the report; `Ok(false)` means a checked property failed.
fn run(cli: &Cli) -> Result<bool, Failure> {
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let opts = Options::default().with_cap(cli.cap).with_exec(exec);
    let out = cli.output.as_ref();
    match &cli.command {
        Command::Spectral { matrix, tol, max_iter } => {
            let m: Matrix = read_json(matrix)?;
            let p = spectral_radius(&m, *tol, *max_iter)?;
            if !p.converged {
                return Err(Failure::Numeric(format!(
                    "power iteration did not converge after {} iterations (last estimate {}, residual {:e})",
                    p.iterations,
                    p.rho,
                    p.residual(&m)
                )));
            }
            write_report(&p, out)?;
            Ok(true)
        }
        Command::Saddle(args) => {
            let (a, b): (MatrixSet, MatrixSet) = (read_json(&args.a)?, read_json(&args.b)?);
            let r = solve_saddle(&a, &b, &opts)?;
            let certificate = match args.certify {
                true => Some(certify_saddle(&r, &a, &b, args.tol, &opts)?),
                false => None,
            };
            let hull_check = match args.hull_samples {
                0 => None,
                n => Some(hull_spot_check(&r, &a, &b, n, args.seed, args.tol, &opts)?),
            };
            let ok = r.gap.abs() <= args.tol
                && certificate.as_ref().is_none_or(|c| c.valid)
                && hull_check.as_ref().is_none_or(|h| h.passed);
            write_report(
                &SaddleReport {
                    a_tilde: r.a_tilde,
                    b_tilde: r.b_tilde,
                    a_index: r.a_index,
                    b_index: r.b_index,
                    value: r.value,
                    minmax: r.minmax,
                    maxmin: r.maxmin,
                    gap: r.gap,
                    perron_vector: r.perron.vector,
                    certificate,
                    hull_check,
                },
                out,
            )?;
            Ok(ok || !args.require_equality)
        }
        Command::Minimax(args) => {
            let (a, b): (MatrixSet, MatrixSet) = (read_json(&args.a)?, read_json(&args.b)?);
            let t = minimax_table_with(&a, &b, args.pairing.into(), &opts)?;
            let report = MinimaxReport {
                minmax: t.minmax().1,
                maxmin: t.maxmin().1,
                gap: t.gap(),
                table: args.table.then(|| t.values.clone()),
            };
            write_report(&report, out)?;
            Ok(report.gap.abs() <= args.tol || !args.require_equality)
        }
        Command::HsetCheck { set, probes, seed, tol } => {
            let s: MatrixSet = read_json(set)?;
            let check = check_hset_sampled(&s, *probes, *seed, *tol, &opts)?;
            write_report(&check, out)?;
            Ok(check.passed)
        }
        Command::Hausdorff { left, right } => {
            let (a, b): (MatrixSet, MatrixSet) = (read_json(left)?, read_json(right)?);
            write_report(&DistanceReport { distance: hausdorff_distance(&a, &b, &opts)? }, out)?;
            Ok(true)
        }
        Command::Algebra { op } => {
            match op {
                AlgebraOp::Sum { left, right } => {
                    let s = minkowski_sum(&read_json(left)?, &read_json(right)?, &opts)?;
                    write_report(&s, out)?;
                }
                AlgebraOp::Prod { left, right } => {
                    let s = minkowski_product(&read_json(left)?, &read_json(right)?, &opts)?;
                    write_report(&s, out)?;
                }
                AlgebraOp::Scale { factor, set } => write_report(&scale_set(*factor, &read_json(set)?)?, out)?,
                AlgebraOp::Eval { expr } => {
                    let e: PolyExpr = read_json(expr)?;
                    write_report(&eval_expr(&e, &opts)?, out)?;
                }
                AlgebraOp::Hull { set } => write_report(&convex_hull_iru(&read_json(set)?)?, out)?,
                AlgebraOp::HullSample { set, vertices, seed } => {
                    write_report(&convex_hull_sample(&read_json(set)?, *vertices, *seed, &opts)?, out)?
                }
            }
            Ok(true)
        }
        Command::Batch {
            trials,
            seed,
            hull_samples,
            tol,
        } => {
            let mut config = SweepConfig::new(*trials, *seed);
            config.hull_samples = *hull_samples;
            let report = equality_sweep(&config, &opts)?;
            write_report(&report, out)?;
            Ok(report.passed(*tol))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
