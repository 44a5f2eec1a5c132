//! Error bounds for telling two Holevo-Werner channels apart with `n` uses.
//!
//! Each record holds the bound chain
//!
//! ```text
//! (1 - √min{1 - F^{2n}, nS}) / 2  ≤  p_err  ≤  Q^n / 2  ≤  F^n / 2
//! ```
//!
//! together with the exact error of the best block strategy, which sits
//! between the lower bound and the Chernoff bound. When `S` diverges (an
//! endpoint channel) the minimum falls on the fidelity branch.

use rayon::prelude::*;

use crate::analytic::{
    fidelity_isotropic, fidelity_werner, helstrom_multicopy_werner, qcb_isotropic, qcb_werner,
    s_quantity,
};
use crate::error::{Error, Result};
use crate::grid::parameter_grid;
use crate::states::check_eta;

/// Default slack for [`DiscriminationBounds::is_ordered`].
pub const ORDERING_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationBounds {
    pub eta: f64,
    pub zeta: f64,
    pub d: usize,
    pub n: usize,
    pub lower: f64,
    pub qcb_upper: f64,
    pub fid_upper: f64,
    /// Exact minimum error of the best non-adaptive block strategy.
    pub helstrom_block: f64,
}

impl DiscriminationBounds {
    /// `lower ≤ helstrom_block ≤ qcb_upper ≤ fid_upper`, all in `[0, 1/2]`.
    pub fn is_ordered(&self, slack: f64) -> bool {
        let chain = [self.lower, self.helstrom_block, self.qcb_upper, self.fid_upper];
        chain.iter().all(|&x| (-slack..=0.5 + slack).contains(&x))
            && chain.windows(2).all(|w| w[0] <= w[1] + slack)
    }
}

fn check_copies(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "need at least one channel use"));
    }
    Ok(())
}

/// Fails with [`Error::Overflow`] above the Helstrom copy cap.
pub fn bounds(eta: f64, zeta: f64, d: usize, n: usize) -> Result<DiscriminationBounds> {
    check_copies(n)?;
    let helstrom_block = helstrom_multicopy_werner(eta, zeta, d, n)?;
    let f = fidelity_werner(eta, zeta)?;
    let q = qcb_werner(eta, zeta)?.q;
    let s = s_quantity(eta, zeta)?;
    let nf = n as f64;

    let fid_branch = 1.0 - f.powf(2.0 * nf);
    let inner = fid_branch.min(nf * s).clamp(0.0, 1.0);
    Ok(DiscriminationBounds {
        eta,
        zeta,
        d,
        n,
        lower: 0.5 * (1.0 - inner.sqrt()),
        qcb_upper: 0.5 * q.powf(nf),
        fid_upper: 0.5 * f.powf(nf),
        helstrom_block,
    })
}

/// Bounds for `η ∈ {-1, -1 + step, …, 1}` at each `n`, sorted by `(n, η)`.
///
/// The bounds do not depend on the dimension; rows are computed at `d = 2`.
pub fn curve_grid(zeta: f64, n_list: &[usize], eta_step: f64) -> Result<Vec<DiscriminationBounds>> {
    check_eta("zeta", zeta)?;
    if eta_step.is_nan() || eta_step <= 0.0 {
        return Err(Error::param("eta_step", eta_step, "must be positive"));
    }
    if n_list.is_empty() {
        return Err(Error::param("n", 0.0, "need at least one copy number"));
    }
    let mut ns = n_list.to_vec();
    ns.sort_unstable();
    ns.dedup();
    let etas = parameter_grid(-1.0, 1.0, eta_step);
    let points: Vec<(usize, f64)> = ns
        .iter()
        .flat_map(|&n| etas.iter().map(move |&eta| (n, eta)))
        .collect();
    points
        .into_par_iter()
        .map(|(n, eta)| bounds(eta, zeta, 2, n))
        .collect()
}

/// Chernoff and fidelity upper bounds for two depolarizing channels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicBounds {
    pub alpha: f64,
    pub beta: f64,
    pub d: usize,
    pub n: usize,
    pub qcb_upper: f64,
    pub fid_upper: f64,
}

pub fn bounds_isotropic(alpha: f64, beta: f64, d: usize, n: usize) -> Result<IsotropicBounds> {
    check_copies(n)?;
    let q = qcb_isotropic(alpha, beta, d)?.q;
    let f = fidelity_isotropic(alpha, beta, d)?;
    let nf = n as f64;
    Ok(IsotropicBounds {
        alpha,
        beta,
        d,
        n,
        qcb_upper: 0.5 * q.powf(nf),
        fid_upper: 0.5 * f.powf(nf),
    })
}
