//! Distance and divergence measures evaluated directly from matrices.
//!
//! These are the numeric oracles: every closed form in [`crate::analytic`]
//! is checked against them on explicitly constructed states.

use super::density::{ensure_same_dim, DensityMatrix};
use super::eigen::eigh;
use crate::error::Result;
use crate::optimize::golden_section_minimize;

/// Eigenvalues at or below this are treated as outside the support.
pub const SUPPORT_EPS: f64 = 1e-12;

const QCB_GRID_STEP: f64 = 0.005;
const QCB_S_TOL: f64 = 1e-8;

#[inline]
fn chop(x: f64) -> f64 {
    if x <= SUPPORT_EPS {
        0.0
    } else {
        x
    }
}

/// Bures fidelity `Tr sqrt(sqrt(σ) ρ sqrt(σ))`.
pub fn bures_fidelity_numeric(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(rho, sigma)?;
    let sqrt_sigma = sigma.spectrum().map(|x| chop(x).sqrt());
    let inner = (&(&sqrt_sigma * rho.matrix()) * &sqrt_sigma).hermitian_part();
    let f: f64 = eigh(&inner)?
        .eigenvalues
        .iter()
        .map(|&x| chop(x).sqrt())
        .sum();
    Ok(f.clamp(0.0, 1.0))
}

/// Trace distance `½ Σ |λ_i(ρ - σ)|`.
pub fn trace_distance_numeric(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(rho, sigma)?;
    let diff = (rho.matrix() - sigma.matrix()).hermitian_part();
    let d: f64 = 0.5 * eigh(&diff)?.eigenvalues.iter().map(|x| x.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

/// Squared overlaps `|<v_i|w_j>|^2` between the eigenbases of two states.
fn eigenbasis_overlaps(rho: &DensityMatrix, sigma: &DensityMatrix) -> Vec<Vec<f64>> {
    let n = rho.dim();
    let v = &rho.spectrum().eigenvectors;
    let w = &sigma.spectrum().eigenvectors;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    (0..n)
                        .map(|k| v[(k, i)].conj() * w[(k, j)])
                        .sum::<num_complex::Complex64>()
                        .norm_sqr()
                })
                .collect()
        })
        .collect()
}

/// Base-2 relative entropy `Tr ρ (log ρ - log σ)`; `+∞` when the support of
/// `ρ` is not contained in that of `σ`.
pub fn relative_entropy_numeric(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    ensure_same_dim(rho, sigma)?;
    let p: Vec<f64> = rho.eigenvalues().iter().map(|&x| chop(x)).collect();
    let q: Vec<f64> = sigma.eigenvalues().iter().map(|&x| chop(x)).collect();
    let overlaps = eigenbasis_overlaps(rho, sigma);

    let mut leaked = 0.0;
    let mut cross = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &qj) in q.iter().enumerate() {
            let o = overlaps[i][j];
            if qj == 0.0 {
                leaked += pi * o;
            } else {
                cross += pi * o * qj.log2();
            }
        }
    }
    if leaked > 1e-10 {
        return Ok(f64::INFINITY);
    }
    let neg_entropy: f64 = p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.log2()).sum();
    Ok((neg_entropy - cross).max(0.0))
}

/// Result of the numeric Chernoff search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericQcb {
    pub q: f64,
    pub s_star: f64,
}

/// `Q_s = Tr(ρ^s σ^(1-s))` as a function of `s`, with `0^s = 0` for `s > 0`.
pub struct ChernoffCurve {
    p: Vec<f64>,
    q: Vec<f64>,
    overlaps: Vec<Vec<f64>>,
}

impl ChernoffCurve {
    pub fn new(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<Self> {
        ensure_same_dim(rho, sigma)?;
        Ok(Self {
            p: rho.eigenvalues().iter().map(|&x| chop(x)).collect(),
            q: sigma.eigenvalues().iter().map(|&x| chop(x)).collect(),
            overlaps: eigenbasis_overlaps(rho, sigma),
        })
    }

    /// Evaluates `Q_s` for `s` strictly inside `(0, 1)`.
    pub fn eval(&self, s: f64) -> f64 {
        let ps: Vec<f64> = self.p.iter().map(|&x| if x == 0.0 { 0.0 } else { x.powf(s) }).collect();
        let qs: Vec<f64> = self
            .q
            .iter()
            .map(|&x| if x == 0.0 { 0.0 } else { x.powf(1.0 - s) })
            .collect();
        let mut acc = 0.0;
        for (i, &a) in ps.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in qs.iter().enumerate() {
                acc += a * b * self.overlaps[i][j];
            }
        }
        acc
    }
}

/// Minimizes `Q_s` over the open interval: a coarse grid with step 0.005,
/// then golden-section refinement around the best grid point.
pub fn qcb_numeric(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<NumericQcb> {
    let curve = ChernoffCurve::new(rho, sigma)?;
    let steps = (1.0 / QCB_GRID_STEP).round() as usize;
    let mut best_s = 0.5;
    let mut best_q = f64::INFINITY;
    for k in 1..steps {
        let s = k as f64 * QCB_GRID_STEP;
        let q = curve.eval(s);
        if q < best_q {
            best_q = q;
            best_s = s;
        }
    }
    let lo = (best_s - QCB_GRID_STEP).max(0.0);
    let hi = (best_s + QCB_GRID_STEP).min(1.0);
    let (s, q) = golden_section_minimize(|s| curve.eval(s), lo, hi, QCB_S_TOL);
    if q <= best_q {
        Ok(NumericQcb { q, s_star: s })
    } else {
        Ok(NumericQcb {
            q: best_q,
            s_star: best_s,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::ComplexMatrix;
    use crate::random::random_density_matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn basis(d: usize, k: usize) -> DensityMatrix {
        let mut diag = vec![0.0; d];
        diag[k] = 1.0;
        DensityMatrix::new(ComplexMatrix::from_real_diagonal(&diag)).unwrap()
    }

    #[test]
    fn fidelity_extremes() {
        let zero = basis(2, 0);
        let one = basis(2, 1);
        assert!((bures_fidelity_numeric(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(bures_fidelity_numeric(&zero, &one).unwrap(), 0.0);
    }

    #[test]
    fn trace_distance_extremes() {
        let zero = basis(2, 0);
        let one = basis(2, 1);
        assert!(trace_distance_numeric(&zero, &zero).unwrap().abs() < 1e-15);
        assert!((trace_distance_numeric(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn relative_entropy_self_is_zero_and_support_mismatch_is_infinite() {
        let mixed = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(relative_entropy_numeric(&mixed, &mixed).unwrap().abs() < 1e-14);
        let pure = basis(3, 2);
        assert_eq!(relative_entropy_numeric(&mixed, &pure).unwrap(), f64::INFINITY);
        // log2(3) in the other direction
        let s = relative_entropy_numeric(&pure, &mixed).unwrap();
        assert!((s - 3f64.log2()).abs() < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = DensityMatrix::maximally_mixed(2).unwrap();
        let b = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(bures_fidelity_numeric(&a, &b).is_err());
        assert!(trace_distance_numeric(&a, &b).is_err());
        assert!(relative_entropy_numeric(&a, &b).is_err());
        assert!(qcb_numeric(&a, &b).is_err());
    }

    #[test]
    fn qcb_of_identical_states_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density_matrix(3, &mut rng).unwrap();
        let r = qcb_numeric(&rho, &rho).unwrap();
        assert!((r.q - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fuchs_van_de_graaf_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 2..=5 {
            for _ in 0..10 {
                let rho = random_density_matrix(d, &mut rng).unwrap();
                let sigma = random_density_matrix(d, &mut rng).unwrap();
                let f = bures_fidelity_numeric(&rho, &sigma).unwrap();
                let f_rev = bures_fidelity_numeric(&sigma, &rho).unwrap();
                let t = trace_distance_numeric(&rho, &sigma).unwrap();
                assert!((f - f_rev).abs() <= 1e-10);
                assert!(1.0 - f <= t + 1e-12, "1-F={} D={t}", 1.0 - f);
                assert!(t <= (1.0 - f * f).sqrt() + 1e-12);
            }
        }
    }

    #[test]
    fn qcb_symmetric_under_swap() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for d in 2..=4 {
            let rho = random_density_matrix(d, &mut rng).unwrap();
            let sigma = random_density_matrix(d, &mut rng).unwrap();
            let a = qcb_numeric(&rho, &sigma).unwrap();
            let b = qcb_numeric(&sigma, &rho).unwrap();
            assert!((a.q - b.q).abs() <= 1e-7);
            assert!((a.s_star + b.s_star - 1.0).abs() <= 1e-6);
        }
    }
}
