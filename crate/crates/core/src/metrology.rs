//! Estimation limits for the Holevo-Werner parameter and a seeded
//! Monte Carlo experiment that reaches them.
//!
//! Projecting each copy of `W_η` onto the symmetric subspace succeeds with
//! probability `(1 + η)/2` in every dimension, so `k` successes out of `n`
//! give the unbiased estimate `2k/n - 1` with variance `(1 - η²)/n`. That is
//! exactly the inverse quantum Fisher information.
//!
//! Randomness comes from [`ChaCha8Rng`]. Trial `t` uses the stream
//! `seed_from_u64(seed)` with `set_stream(t)`, so a report depends only on its
//! inputs and never on how rayon schedules the trials.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;

use crate::analytic::werner_infidelity;
use crate::error::{Error, Result};
use crate::states::check_eta;

fn check_copies(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "need at least one copy"));
    }
    Ok(())
}

/// `n/(1 - η²)`, or `+∞` at `η = ±1`.
pub fn qfi_werner(eta: f64, n: usize) -> Result<f64> {
    check_eta("eta", eta)?;
    check_copies(n)?;
    let gap = 1.0 - eta * eta;
    if gap == 0.0 {
        return Ok(f64::INFINITY);
    }
    // Scaled from the single-copy value so additivity holds bit for bit.
    Ok(n as f64 * (1.0 / gap))
}

/// Cramér-Rao variance floor `(1 - η²)/n`. Zero at `η = ±1`.
pub fn qcrb(eta: f64, n: usize) -> Result<f64> {
    Ok(1.0 / qfi_werner(eta, n)?)
}

/// Per-copy Fisher information from the fidelity of neighbouring states,
/// `8 (1 - F(W_η, W_{η+δ})) / δ²`.
///
/// `1 - F` is evaluated without subtracting two numbers close to one.
pub fn qfi_finite_difference(eta: f64, delta: f64) -> Result<f64> {
    check_eta("eta", eta)?;
    if eta.abs() == 1.0 {
        return Err(Error::param("eta", eta, "must lie in (-1, 1)"));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::param("delta", delta, "must be positive"));
    }
    let shifted = eta + delta;
    if shifted.abs() > 1.0 {
        return Err(Error::param("delta", delta, "eta + delta must stay in [-1, 1]"));
    }
    let infidelity = werner_infidelity(eta, shifted);
    Ok(8.0 * infidelity / (delta * delta))
}

/// Probability of the symmetric-subspace outcome on one copy of `W_η`.
pub fn symmetric_outcome_probability(eta: f64) -> Result<f64> {
    check_eta("eta", eta)?;
    Ok((1.0 + eta) / 2.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimationReport {
    pub eta_true: f64,
    pub n: usize,
    pub qfi: f64,
    pub qcrb_variance: f64,
    pub trials: usize,
    pub empirical_mean: f64,
    /// Unbiased sample variance of the estimates (zero for a single trial).
    pub empirical_variance: f64,
    pub seed: u64,
}

impl EstimationReport {
    /// `empirical_variance · qfi`; close to one when the bound is saturated.
    pub fn saturation_ratio(&self) -> f64 {
        self.empirical_variance * self.qfi
    }
}

/// Runs `trials` independent experiments, each measuring `n` copies.
pub fn simulate_estimation(eta: f64, n: usize, trials: usize, seed: u64) -> Result<EstimationReport> {
    check_eta("eta", eta)?;
    if eta.abs() == 1.0 {
        return Err(Error::param("eta", eta, "must lie in (-1, 1)"));
    }
    check_copies(n)?;
    if trials == 0 {
        return Err(Error::param("trials", 0.0, "need at least one trial"));
    }
    let p = symmetric_outcome_probability(eta)?;
    let binomial = Binomial::new(n as u64, p)
        .map_err(|_| Error::param("eta", eta, "invalid outcome probability"))?;
    let nf = n as f64;

    let estimates: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let k = binomial.sample(&mut rng) as f64;
            2.0 * k / nf - 1.0
        })
        .collect();

    let count = estimates.len() as f64;
    let mean = estimates.iter().sum::<f64>() / count;
    let variance = if trials > 1 {
        estimates.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1.0)
    } else {
        0.0
    };
    let qfi = qfi_werner(eta, n)?;
    Ok(EstimationReport {
        eta_true: eta,
        n,
        qfi,
        qcrb_variance: 1.0 / qfi,
        trials,
        empirical_mean: mean,
        empirical_variance: variance,
        seed,
    })
}
