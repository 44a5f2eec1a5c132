//! The `wernerlab` command line.
//!
//! [`run`] parses arguments, writes to the given streams and returns the exit
//! code: 0 on success, 1 on usage or parameter errors, 2 when a verification
//! fails.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use crate::analytic::{
    delta_s, fidelity_isotropic, fidelity_werner, qcb_isotropic, qcb_werner,
    relative_entropy_werner, s_quantity, QcbResult,
};
use crate::discrimination::{bounds, bounds_isotropic, curve_grid};
use crate::error::{Error, Result};
use crate::metrology::{qcrb, qfi_finite_difference, qfi_werner, simulate_estimation};
use crate::output::{bounds_json, curves_csv, json_float, OutputRecord};
use crate::verify::{run_verify, teleport_defects, VerifyConfig, TELEPORT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VERIFY_FAILED: i32 = 2;

/// Environment variable holding the worker thread count (0 = automatic).
pub const THREADS_ENV: &str = "WERNERLAB_THREADS";

#[derive(Debug, Parser)]
#[command(name = "wernerlab", version, about = "Werner-state channel metrics and bounds")]
struct Cli {
    /// Output format; defaults to JSON, or CSV for `curves`.
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Pair {
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    #[arg(long, allow_hyphen_values = true)]
    zeta: f64,
}

#[derive(Debug, Args)]
struct IsoPair {
    /// Use isotropic states (depolarizing channels) instead of Werner states.
    #[arg(long)]
    isotropic: bool,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "isotropic")]
    eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true, required_unless_present = "isotropic")]
    zeta: Option<f64>,
    #[arg(long, requires = "isotropic")]
    alpha: Option<f64>,
    #[arg(long, requires = "isotropic")]
    beta: Option<f64>,
    #[arg(long, default_value_t = 2)]
    d: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fidelity between two Werner states.
    Fidelity(Pair),
    /// Relative entropies, their difference and the S quantity.
    Relent(Pair),
    /// Quantum Chernoff bound and optimal s.
    Qcb(IsoPair),
    /// Fisher information and Cramér-Rao bound; `sim` runs the experiment.
    Estimate(EstimateArgs),
    /// Error bounds for n-use channel discrimination.
    Discriminate(DiscriminateArgs),
    /// Bound curves over an eta grid.
    Curves(CurvesArgs),
    /// Teleportation simulation and covariance checks.
    TeleportCheck(TeleportArgs),
    /// Full cross-check of closed forms against matrix oracles.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct EstimateArgs {
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    #[arg(long, default_value_t = 1)]
    n: usize,
    /// Also report the finite-difference Fisher information with this step.
    #[arg(long)]
    delta: Option<f64>,
    #[command(subcommand)]
    sim: Option<EstimateSim>,
}

#[derive(Debug, Subcommand)]
enum EstimateSim {
    /// Monte Carlo estimation with the symmetric-subspace measurement.
    Sim {
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
struct DiscriminateArgs {
    #[command(flatten)]
    pair: IsoPair,
    #[arg(long, default_value_t = 1)]
    n: usize,
}

#[derive(Debug, Args)]
struct CurvesArgs {
    #[arg(long, allow_hyphen_values = true)]
    zeta: f64,
    /// Comma-separated copy numbers.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    n: Vec<usize>,
    #[arg(long, default_value_t = 0.01)]
    step: f64,
    /// Destination file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TeleportArgs {
    #[arg(long)]
    d: usize,
    #[arg(long, allow_hyphen_values = true)]
    eta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 0.25)]
    grid: f64,
    /// Dimensions as `lo..hi` (inclusive) or a comma-separated list.
    #[arg(long, default_value = "2..6", value_parser = |s: &str| parse_dims(s).map(Dims))]
    dims: Dims,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Multiplier applied to every tolerance.
    #[arg(long, default_value_t = 1.0)]
    tol_scale: f64,
}

#[derive(Debug, Clone)]
struct Dims(Vec<usize>);

/// Accepts `2..6`, `2..=6`, `3` or `2,4,5`.
pub fn parse_dims(s: &str) -> std::result::Result<Vec<usize>, String> {
    let bad = || format!("invalid dimension list `{s}`");
    let dims: Vec<usize> = if let Some((lo, hi)) = s.split_once("..") {
        let hi = hi.strip_prefix('=').unwrap_or(hi);
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        (lo..=hi).collect()
    } else {
        s.split(',')
            .map(|p| p.trim().parse().map_err(|_| bad()))
            .collect::<std::result::Result<_, _>>()?
    };
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(bad());
    }
    Ok(dims)
}

enum Outcome {
    Record(OutputRecord, i32),
    Text(String),
    Written,
}

/// Runs one invocation. `argv` includes the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{}", e.render());
                return EXIT_OK;
            }
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };

    match dispatch(&cli, err) {
        Ok(Outcome::Record(record, code)) => {
            let text = match cli.format {
                Some(Format::Csv) => record.to_csv(),
                _ => record.to_json_string() + "\n",
            };
            let _ = out.write_all(text.as_bytes());
            code
        }
        Ok(Outcome::Text(text)) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Ok(Outcome::Written) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn qcb_fields(record: OutputRecord, r: QcbResult) -> OutputRecord {
    record
        .result_f("q", r.q)
        .result_f("s_star", r.s_star)
        .result("s_kind", r.s_kind.as_str())
}

fn require(value: Option<f64>, name: &'static str) -> Result<f64> {
    value.ok_or(Error::param(name, f64::NAN, "required"))
}

fn dispatch(cli: &Cli, err: &mut dyn Write) -> Result<Outcome> {
    let record = match &cli.command {
        Command::Fidelity(p) => OutputRecord::new("fidelity")
            .param_f("eta", p.eta)
            .param_f("zeta", p.zeta)
            .result_f("fidelity", fidelity_werner(p.eta, p.zeta)?),

        Command::Relent(p) => {
            let mut rec = OutputRecord::new("relent")
                .param_f("eta", p.eta)
                .param_f("zeta", p.zeta)
                .result_f("relative_entropy", relative_entropy_werner(p.eta, p.zeta)?)
                .result_f("reverse_relative_entropy", relative_entropy_werner(p.zeta, p.eta)?)
                .result_f("s_quantity", s_quantity(p.eta, p.zeta)?);
            rec = match delta_s(p.eta, p.zeta) {
                Ok(ds) => rec.result_f("delta_s", ds),
                Err(Error::SupportMismatch) => rec.result("delta_s", Value::Null),
                Err(e) => return Err(e),
            };
            rec
        }

        Command::Qcb(p) if p.isotropic => {
            let (alpha, beta) = (require(p.alpha, "alpha")?, require(p.beta, "beta")?);
            let rec = OutputRecord::new("qcb")
                .param("isotropic", true)
                .param_f("alpha", alpha)
                .param_f("beta", beta)
                .param("d", p.d);
            qcb_fields(rec, qcb_isotropic(alpha, beta, p.d)?)
                .result_f("fidelity", fidelity_isotropic(alpha, beta, p.d)?)
        }
        Command::Qcb(p) => {
            let (eta, zeta) = (require(p.eta, "eta")?, require(p.zeta, "zeta")?);
            let rec = OutputRecord::new("qcb").param_f("eta", eta).param_f("zeta", zeta);
            qcb_fields(rec, qcb_werner(eta, zeta)?)
        }

        Command::Estimate(a) => {
            let mut rec = OutputRecord::new("estimate")
                .param_f("eta", a.eta)
                .param("n", a.n)
                .result_f("qfi", qfi_werner(a.eta, a.n)?)
                .result_f("qcrb_variance", qcrb(a.eta, a.n)?);
            if let Some(delta) = a.delta {
                rec = rec
                    .param_f("delta", delta)
                    .result_f("qfi_finite_difference", a.n as f64 * qfi_finite_difference(a.eta, delta)?);
            }
            if let Some(EstimateSim::Sim { trials, seed }) = a.sim {
                let r = simulate_estimation(a.eta, a.n, trials, seed)?;
                rec = rec
                    .param("trials", trials)
                    .param("seed", seed)
                    .result_f("empirical_mean", r.empirical_mean)
                    .result_f("empirical_variance", r.empirical_variance)
                    .result_f("saturation_ratio", r.saturation_ratio());
            }
            rec
        }

        Command::Discriminate(a) if a.pair.isotropic => {
            let p = &a.pair;
            let (alpha, beta) = (require(p.alpha, "alpha")?, require(p.beta, "beta")?);
            let b = bounds_isotropic(alpha, beta, p.d, a.n)?;
            OutputRecord::new("discriminate")
                .param("isotropic", true)
                .param_f("alpha", alpha)
                .param_f("beta", beta)
                .param("d", p.d)
                .param("n", a.n)
                .result_f("qcb_upper", b.qcb_upper)
                .result_f("fid_upper", b.fid_upper)
        }
        Command::Discriminate(a) => {
            let p = &a.pair;
            let (eta, zeta) = (require(p.eta, "eta")?, require(p.zeta, "zeta")?);
            let b = bounds(eta, zeta, p.d, a.n)?;
            OutputRecord::new("discriminate")
                .param_f("eta", eta)
                .param_f("zeta", zeta)
                .param("d", p.d)
                .param("n", a.n)
                .result_f("lower", b.lower)
                .result_f("helstrom_block", b.helstrom_block)
                .result_f("qcb_upper", b.qcb_upper)
                .result_f("fid_upper", b.fid_upper)
        }

        Command::Curves(a) => {
            let rows = curve_grid(a.zeta, &a.n, a.step)?;
            let text = match cli.format {
                Some(Format::Json) => {
                    let arr: Vec<Value> = rows.iter().map(bounds_json).collect();
                    serde_json::to_string_pretty(&Value::Array(arr)).expect("serializable") + "\n"
                }
                _ => curves_csv(&rows),
            };
            return match &a.out {
                Some(path) => {
                    fs::write(path, text).map_err(|e| Error::Io(e.to_string()))?;
                    Ok(Outcome::Written)
                }
                None => Ok(Outcome::Text(text)),
            };
        }

        Command::TeleportCheck(a) => {
            let (sim, cov) = teleport_defects(a.d, a.eta, a.samples, a.seed)?;
            let passed = sim <= TELEPORT_TOL && cov <= TELEPORT_TOL;
            if !passed {
                let _ = writeln!(err, "teleport-check failed: simulation {sim:e}, covariance {cov:e}");
            }
            let rec = OutputRecord::new("teleport-check")
                .param("d", a.d)
                .param_f("eta", a.eta)
                .param("seed", a.seed)
                .param("samples", a.samples)
                .result_f("max_trace_distance", sim)
                .result_f("max_covariance_defect", cov)
                .result_f("tolerance", TELEPORT_TOL)
                .result("passed", passed);
            return Ok(Outcome::Record(rec, if passed { EXIT_OK } else { EXIT_VERIFY_FAILED }));
        }

        Command::Verify(a) => {
            let config = VerifyConfig {
                grid_step: a.grid,
                dims: a.dims.0.clone(),
                seed: a.seed,
                tol_scale: a.tol_scale,
            };
            let report = run_verify(&config)?;
            for c in report.failures() {
                let _ = writeln!(
                    err,
                    "FAILED {}: worst {:e} exceeds tolerance {:e}",
                    c.name, c.worst, c.tolerance
                );
            }
            let checks: Vec<Value> = report
                .checks
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "name": c.name,
                        "worst": json_float(c.worst),
                        "tolerance": json_float(c.tolerance),
                        "passed": c.passed,
                    })
                })
                .collect();
            let passed = report.passed();
            let rec = OutputRecord::new("verify")
                .param_f("grid", a.grid)
                .param("dims", a.dims.0.clone())
                .param("seed", a.seed)
                .param_f("tol_scale", a.tol_scale)
                .result("checks", checks)
                .result("passed", passed);
            return Ok(Outcome::Record(rec, if passed { EXIT_OK } else { EXIT_VERIFY_FAILED }));
        }
    };
    Ok(Outcome::Record(record, EXIT_OK))
}

/// Reads [`THREADS_ENV`] and sizes the global rayon pool. Unset, empty or
/// `0` leaves rayon's automatic choice in place.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let raw = raw.trim();
    if raw.is_empty() {
        return Ok(());
    }
    let threads: usize = raw
        .parse()
        .map_err(|_| Error::param("WERNERLAB_THREADS", f64::NAN, "must be a non-negative integer"))?;
    if threads > 0 {
        // A pool that already exists keeps its size; that is not an error here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    Ok(())
}
