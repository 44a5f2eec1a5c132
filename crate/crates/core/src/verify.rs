//! Cross-checks of every closed form against its dense-matrix oracle.
//!
//! [`run_verify`] builds the states explicitly, evaluates both sides and
//! reports the worst discrepancy of each check next to its tolerance. All
//! tolerances are multiplied by [`VerifyConfig::tol_scale`]; a scale of zero
//! demands bit-exact agreement and is expected to fail.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analytic::{
    critical_s_isotropic, critical_s_werner, delta_s, fidelity_werner, helstrom_multicopy_werner,
    qcb_isotropic, qcb_werner, relative_entropy_werner, SKind,
};
use crate::channels::hw_channel_apply;
use crate::discrimination::bounds;
use crate::error::{Error, Result};
use crate::grid::parameter_grid;
use crate::linalg::{
    bures_fidelity_numeric, qcb_numeric, relative_entropy_numeric,
    trace_distance_numeric, ChernoffCurve, DensityMatrix,
};
use crate::metrology::{qfi_finite_difference, qfi_werner, simulate_estimation};
use crate::random::{random_density_matrix, random_unitary};
use crate::states::{isotropic_state, werner_state, IsotropicParams, WernerParams};
use crate::telesim::{covariance_check, teleport_channel};

pub const FIDELITY_TOL: f64 = 1e-9;
pub const RELATIVE_ENTROPY_TOL: f64 = 1e-8;
pub const QCB_TOL: f64 = 1e-6;
pub const S_STAR_TOL: f64 = 1e-4;
pub const IDENTITY_TOL: f64 = 1e-12;
pub const QFI_RELATIVE_TOL: f64 = 1e-3;
pub const SATURATION_TOL: f64 = 0.05;
pub const TELEPORT_TOL: f64 = 1e-10;
pub const SANDWICH_SLACK: f64 = 1e-10;
pub const HELSTROM_TOL: f64 = 1e-10;

/// Offset from `s` used to confirm that a stationary point is a minimum.
pub const BRACKET_OFFSET: f64 = 1e-3;
/// Offset from the boundary at which a one-sided Chernoff limit is sampled.
pub const LIMIT_OFFSET: f64 = 1e-9;

const QFI_DELTA: f64 = 1e-4;
const SATURATION_COPIES: usize = 1000;
const SATURATION_TRIALS: usize = 10_000;
const TELEPORT_SAMPLES: usize = 5;
const MAX_SANDWICH_COPIES: usize = 20;
const MAX_EXPLICIT_COPIES: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub grid_step: f64,
    pub dims: Vec<usize>,
    pub seed: u64,
    pub tol_scale: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            grid_step: 0.25,
            dims: (2..=6).collect(),
            seed: 0,
            tol_scale: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    /// Largest discrepancy found (or the violating value for sign checks).
    pub worst: f64,
    /// Scaled tolerance the worst value was compared against.
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn within(name: &'static str, worst: f64, tol: f64, scale: f64) -> Self {
        let tolerance = tol * scale;
        Self {
            name,
            worst,
            tolerance,
            passed: worst <= tolerance,
        }
    }

    /// Passes when `worst` is strictly negative; not affected by scaling.
    fn negative(name: &'static str, worst: f64) -> Self {
        Self {
            name,
            worst,
            tolerance: 0.0,
            passed: worst < 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

fn max_of(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN propagates so that a broken evaluation can never pass.
    values.into_iter().fold(0.0, |acc, x| if x.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(x) })
}

fn abs_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs()
    }
}

fn pairs(grid: &[f64]) -> Vec<(f64, f64)> {
    grid.iter()
        .flat_map(|&x| grid.iter().map(move |&y| (x, y)))
        .collect()
}

/// Runs the whole suite.
pub fn run_verify(config: &VerifyConfig) -> Result<VerifyReport> {
    if config.grid_step.is_nan() || config.grid_step <= 0.0 || config.grid_step > 2.0 {
        return Err(Error::param("grid", config.grid_step, "must lie in (0, 2]"));
    }
    if config.tol_scale.is_nan() || config.tol_scale < 0.0 {
        return Err(Error::param("tol_scale", config.tol_scale, "must be non-negative"));
    }
    if let Some(&d) = config.dims.iter().find(|&&d| d < 2) {
        return Err(Error::InvalidDimension(d));
    }
    let grid = parameter_grid(-1.0, 1.0, config.grid_step);
    let scale = config.tol_scale;
    let mut checks = Vec::new();

    let werner = WernerOracle::new(&grid, &config.dims)?;
    checks.push(Check::within("fidelity_vs_matrix", werner.fidelity_error()?, FIDELITY_TOL, scale));
    checks.push(Check::within(
        "relative_entropy_vs_matrix",
        werner.relative_entropy_error()?,
        RELATIVE_ENTROPY_TOL,
        scale,
    ));
    let (q_err, s_err) = werner.qcb_errors()?;
    checks.push(Check::within("qcb_vs_matrix", q_err, QCB_TOL, scale));
    checks.push(Check::within("qcb_s_star_vs_matrix", s_err, S_STAR_TOL, scale));

    let iso_dims: Vec<usize> = config.dims.iter().copied().filter(|d| (2..=4).contains(d)).collect();
    let (iq, is) = isotropic_qcb_errors(&grid, &iso_dims)?;
    checks.push(Check::within("isotropic_qcb_vs_matrix", iq, QCB_TOL, scale));
    checks.push(Check::within("isotropic_s_star_vs_matrix", is, S_STAR_TOL, scale));

    let interior: Vec<f64> = grid.iter().copied().filter(|x| x.abs() < 1.0).collect();
    let ids = critical_point_identities(&interior, &config.dims)?;
    checks.push(Check::within("s_swap_sums_to_one", ids.swap_sum, IDENTITY_TOL, scale));
    checks.push(Check::negative("s_is_local_minimum", ids.bracket_margin));
    checks.push(Check::negative("s_in_open_interval", ids.interval_margin));
    checks.push(Check::within("isotropic_substitution", ids.substitution, IDENTITY_TOL, scale));
    checks.push(Check::negative("delta_s_negative", delta_s_worst(&interior)?));

    checks.push(Check::within("qfi_finite_difference", qfi_fd_error(&interior)?, QFI_RELATIVE_TOL, scale));
    checks.push(Check::within(
        "qcrb_saturation",
        saturation_error(&interior, config.seed)?,
        SATURATION_TOL,
        scale,
    ));

    let tele_dims: Vec<usize> = config.dims.iter().copied().filter(|d| (2..=3).contains(d)).collect();
    let mut sim = 0.0f64;
    let mut cov = 0.0f64;
    for &d in &tele_dims {
        for &eta in &grid {
            let (s, c) = teleport_defects(d, eta, TELEPORT_SAMPLES, config.seed)?;
            sim = max_of([sim, s]);
            cov = max_of([cov, c]);
        }
    }
    checks.push(Check::within("teleport_simulates_hw", sim, TELEPORT_TOL, scale));
    checks.push(Check::within("teleport_covariance", cov, TELEPORT_TOL, scale));

    checks.push(Check::within("bound_sandwich", sandwich_violation(&grid)?, SANDWICH_SLACK, scale));
    checks.push(Check::within("helstrom_vs_matrix", explicit_helstrom_error(&grid)?, HELSTROM_TOL, scale));

    Ok(VerifyReport {
        config: config.clone(),
        checks,
    })
}

/// Explicit Werner states for every `(d, η)` on the grid.
struct WernerOracle {
    grid: Vec<f64>,
    states: Vec<(usize, Vec<DensityMatrix>)>,
}

impl WernerOracle {
    fn new(grid: &[f64], dims: &[usize]) -> Result<Self> {
        let states = dims
            .iter()
            .map(|&d| {
                let row = grid
                    .par_iter()
                    .map(|&eta| werner_state(WernerParams::new(eta, d)?))
                    .collect::<Result<Vec<_>>>()?;
                Ok((d, row))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            grid: grid.to_vec(),
            states,
        })
    }

    fn each_pair<T, F>(&self, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(f64, f64, &DensityMatrix, &DensityMatrix) -> Result<T> + Sync,
    {
        let n = self.grid.len();
        let mut out = Vec::new();
        for (_, row) in &self.states {
            let part = (0..n * n)
                .into_par_iter()
                .map(|k| {
                    let (i, j) = (k / n, k % n);
                    f(self.grid[i], self.grid[j], &row[i], &row[j])
                })
                .collect::<Result<Vec<_>>>()?;
            out.extend(part);
        }
        Ok(out)
    }

    fn fidelity_error(&self) -> Result<f64> {
        let errs = self.each_pair(|eta, zeta, a, b| {
            Ok(abs_diff(fidelity_werner(eta, zeta)?, bures_fidelity_numeric(a, b)?))
        })?;
        Ok(max_of(errs))
    }

    fn relative_entropy_error(&self) -> Result<f64> {
        let errs = self.each_pair(|eta, zeta, a, b| {
            Ok(abs_diff(relative_entropy_werner(eta, zeta)?, relative_entropy_numeric(a, b)?))
        })?;
        Ok(max_of(errs))
    }

    /// Worst `|Δq|` over the grid and worst `|Δs*|` over interior points.
    fn qcb_errors(&self) -> Result<(f64, f64)> {
        let errs = self.each_pair(|eta, zeta, a, b| {
            let analytic = qcb_werner(eta, zeta)?;
            let numeric = qcb_numeric(a, b)?;
            let ds = if analytic.s_kind == SKind::Interior {
                abs_diff(analytic.s_star, numeric.s_star)
            } else {
                0.0
            };
            Ok((abs_diff(analytic.q, numeric.q), ds))
        })?;
        let s_errs: Vec<f64> = errs.iter().map(|e| e.1).collect();
        let errs: Vec<f64> = errs.iter().map(|e| e.0).collect();
        Ok((max_of(errs), max_of(s_errs)))
    }
}

fn isotropic_qcb_errors(grid: &[f64], dims: &[usize]) -> Result<(f64, f64)> {
    let mut q_worst = 0.0;
    let mut s_worst = 0.0;
    for &d in dims {
        let df = d as f64;
        let alphas: Vec<f64> = grid.iter().map(|x| df * (1.0 + x) / 2.0).collect();
        let states = alphas
            .par_iter()
            .map(|&a| isotropic_state(IsotropicParams::new(a, d)?))
            .collect::<Result<Vec<_>>>()?;
        let n = alphas.len();
        let errs = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (i, j) = (k / n, k % n);
                let analytic = qcb_isotropic(alphas[i], alphas[j], d)?;
                let numeric = qcb_numeric(&states[i], &states[j])?;
                let ds = if analytic.s_kind == SKind::Interior {
                    abs_diff(analytic.s_star, numeric.s_star)
                } else {
                    0.0
                };
                Ok((abs_diff(analytic.q, numeric.q), ds))
            })
            .collect::<Result<Vec<_>>>()?;
        q_worst = max_of(std::iter::once(q_worst).chain(errs.iter().map(|e| e.0)));
        s_worst = max_of(std::iter::once(s_worst).chain(errs.iter().map(|e| e.1)));
    }
    Ok((q_worst, s_worst))
}

struct Identities {
    swap_sum: f64,
    /// Largest `Q_s - min(Q_{s-h}, Q_{s+h})`; negative when every `s` is a
    /// strict local minimum.
    bracket_margin: f64,
    /// Largest `max(-s, s - 1)`; negative when every `s` lies in `(0, 1)`.
    interval_margin: f64,
    substitution: f64,
}

fn critical_point_identities(interior: &[f64], dims: &[usize]) -> Result<Identities> {
    let mut ids = Identities {
        swap_sum: 0.0,
        bracket_margin: f64::NEG_INFINITY,
        interval_margin: f64::NEG_INFINITY,
        substitution: 0.0,
    };
    for &eta in interior {
        for &zeta in interior {
            if eta == zeta {
                continue;
            }
            let s = critical_s_werner(eta, zeta);
            ids.swap_sum = max_of([ids.swap_sum, (s + critical_s_werner(zeta, eta) - 1.0).abs()]);
            let q = |t: f64| crate::analytic::chernoff_werner(eta, zeta, t);
            let margin = q(s)? - q(s - BRACKET_OFFSET)?.min(q(s + BRACKET_OFFSET)?);
            ids.bracket_margin = ids.bracket_margin.max(margin);
            ids.interval_margin = ids.interval_margin.max((-s).max(s - 1.0));
            for &d in dims {
                let df = d as f64;
                let (alpha, beta) = (df * (1.0 + eta) / 2.0, df * (1.0 + zeta) / 2.0);
                let diff = (critical_s_isotropic(alpha, beta, d) - s).abs();
                ids.substitution = max_of([ids.substitution, diff]);
            }
        }
    }
    if ids.bracket_margin == f64::NEG_INFINITY {
        // Fewer than two interior points: nothing to violate.
        ids.bracket_margin = -1.0;
        ids.interval_margin = -1.0;
    }
    Ok(ids)
}

/// Largest `ΔS(η, ζ)` over pairs with `|η| > |ζ|`.
fn delta_s_worst(interior: &[f64]) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for &eta in interior {
        for &zeta in interior {
            if eta.abs() > zeta.abs() {
                worst = worst.max(delta_s(eta, zeta)?);
            }
        }
    }
    Ok(if worst == f64::NEG_INFINITY { -1.0 } else { worst })
}

fn qfi_fd_error(interior: &[f64]) -> Result<f64> {
    let mut worst = 0.0;
    for &eta in interior {
        if eta + QFI_DELTA > 1.0 {
            continue;
        }
        let exact = qfi_werner(eta, 1)?;
        let rel = ((qfi_finite_difference(eta, QFI_DELTA)? - exact) / exact).abs();
        worst = max_of([worst, rel]);
    }
    Ok(worst)
}

/// Worst `|Var · QFI - 1|` over a few interior parameters.
fn saturation_error(interior: &[f64], seed: u64) -> Result<f64> {
    let mut worst = 0.0;
    for (k, &eta) in interior.iter().enumerate().step_by(2) {
        let report = simulate_estimation(eta, SATURATION_COPIES, SATURATION_TRIALS, seed.wrapping_add(k as u64))?;
        worst = max_of([worst, (report.saturation_ratio() - 1.0).abs()]);
    }
    Ok(worst)
}

/// Worst trace distance between teleportation over `W_{η,d}` and the
/// Holevo-Werner channel, and worst covariance defect, over `samples`
/// seeded random inputs and unitaries.
pub fn teleport_defects(d: usize, eta: f64, samples: usize, seed: u64) -> Result<(f64, f64)> {
    let params = WernerParams::new(eta, d)?;
    let resource = werner_state(params)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(d as u64);
    let mut sim = 0.0;
    let mut cov = 0.0;
    for _ in 0..samples {
        let rho = random_density_matrix(d, &mut rng)?;
        let teleported = teleport_channel(&resource, &rho)?;
        let direct = hw_channel_apply(params, &rho)?;
        sim = max_of([sim, trace_distance_numeric(&teleported, &direct)?]);
        let u = random_unitary(d, &mut rng);
        cov = max_of([cov, covariance_check(params, &u, &rho)?]);
    }
    Ok((sim, cov))
}

/// Largest violation of `lower ≤ helstrom ≤ Q^n/2 ≤ F^n/2` (zero if none).
fn sandwich_violation(grid: &[f64]) -> Result<f64> {
    let ps = pairs(grid);
    let violations = ps
        .par_iter()
        .map(|&(eta, zeta)| {
            let mut worst = 0.0f64;
            for n in 1..=MAX_SANDWICH_COPIES {
                let b = bounds(eta, zeta, 2, n)?;
                worst = worst
                    .max(b.lower - b.helstrom_block)
                    .max(b.helstrom_block - b.qcb_upper)
                    .max(b.qcb_upper - b.fid_upper)
                    .max(-b.lower)
                    .max(b.fid_upper - 0.5);
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(max_of(violations))
}

/// `½(1 - D(ρ, σ))` from explicit matrices.
pub fn helstrom_numeric(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    Ok(0.5 * (1.0 - trace_distance_numeric(rho, sigma)?))
}

/// Compares the combinatorial multi-copy Helstrom error with explicit
/// tensor powers of two-qubit Werner states.
fn explicit_helstrom_error(grid: &[f64]) -> Result<f64> {
    let powers = grid
        .par_iter()
        .map(|&eta| {
            let w = werner_state(WernerParams::new(eta, 2)?)?;
            let mut list = vec![w.clone()];
            for _ in 1..MAX_EXPLICIT_COPIES {
                let next = list.last().expect("non-empty").tensor(&w)?;
                list.push(next);
            }
            Ok(list)
        })
        .collect::<Result<Vec<_>>>()?;
    let n = grid.len();
    let errs = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let mut worst = 0.0f64;
            for copies in 1..=MAX_EXPLICIT_COPIES {
                let exact = helstrom_multicopy_werner(grid[i], grid[j], 2, copies)?;
                let numeric = helstrom_numeric(&powers[i][copies - 1], &powers[j][copies - 1])?;
                worst = worst.max(abs_diff(exact, numeric));
            }
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(max_of(errs))
}

/// `Q_s` of the explicit matrices just inside the boundary, for comparing
/// with the one-sided limits of the closed form.
pub fn boundary_chernoff(rho: &DensityMatrix, sigma: &DensityMatrix, kind: SKind) -> Result<f64> {
    let curve = ChernoffCurve::new(rho, sigma)?;
    Ok(match kind {
        SKind::LeftLimit => curve.eval(LIMIT_OFFSET),
        SKind::RightLimit => curve.eval(1.0 - LIMIT_OFFSET),
        _ => curve.eval(0.5),
    })
}
