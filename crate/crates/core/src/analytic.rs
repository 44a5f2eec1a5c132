//! Closed-form metrics between Werner (and isotropic) states.
//!
//! Two Werner states of the same dimension commute and share the
//! eigenvalue classes of [`crate::states::werner_spectrum`], whose total
//! weights are `(1 + η)/2` and `(1 - η)/2`. Every quantity here therefore
//! reduces to a two-outcome classical expression and none depends on `d`.
//! The isotropic formulas have the same structure with weights `α/d` and
//! `(d - α)/d`.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::states::{check_alpha, check_eta, werner_spectrum, WernerParams};

/// Tolerance on `|η - ζ|` below which the pair is treated as identical.
pub const DEGENERATE_TOL: f64 = 1e-14;

/// Copy number above which the combinatorial Helstrom sum is refused.
pub const HELSTROM_MAX_COPIES: usize = 1000;
const HELSTROM_DIRECT_MAX: usize = 50;

fn check_pair(eta: f64, zeta: f64) -> Result<()> {
    check_eta("eta", eta)?;
    check_eta("zeta", zeta)
}

/// `1 - F` as the squared Hellinger distance `½ Σ (√p - √q)²` of the class
/// weights, with each root difference written as `(p - q)/(√p + √q)`.
/// Accurate to a few ulps for nearby states, where `1 - F` is tiny.
pub(crate) fn werner_infidelity(eta: f64, zeta: f64) -> f64 {
    let root_gap = |p: f64, q: f64| {
        let den = p.sqrt() + q.sqrt();
        if den == 0.0 {
            0.0
        } else {
            (p - q) / den
        }
    };
    let plus = root_gap((1.0 + eta) / 2.0, (1.0 + zeta) / 2.0);
    let minus = root_gap((1.0 - eta) / 2.0, (1.0 - zeta) / 2.0);
    0.5 * (plus * plus + minus * minus)
}

/// `√((1+η)(1+ζ))/2 + √((1-η)(1-ζ))/2`.
pub fn fidelity_werner(eta: f64, zeta: f64) -> Result<f64> {
    check_pair(eta, zeta)?;
    let direct = ((1.0 + eta) * (1.0 + zeta)).sqrt() / 2.0 + ((1.0 - eta) * (1.0 - zeta)).sqrt() / 2.0;
    // Near one the complement form loses less; near zero the direct sum does.
    let f = if direct > 0.5 {
        1.0 - werner_infidelity(eta, zeta)
    } else {
        direct
    };
    Ok(f.clamp(0.0, 1.0))
}

/// `√(αβ)/d + √((d-α)(d-β))/d`.
pub fn fidelity_isotropic(alpha: f64, beta: f64, d: usize) -> Result<f64> {
    check_iso(alpha, beta, d)?;
    let df = d as f64;
    let f = (alpha * beta).sqrt() / df + ((df - alpha) * (df - beta)).sqrt() / df;
    Ok(f.min(1.0))
}

/// `p log2(p/q)` with `0 log(0/q) = 0` and `p log(p/0) = +∞`.
fn kl_term(p: f64, q: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else if q == 0.0 {
        f64::INFINITY
    } else {
        p * (p / q).log2()
    }
}

/// `S(W_η || W_ζ)` in bits.
pub fn relative_entropy_werner(eta: f64, zeta: f64) -> Result<f64> {
    check_pair(eta, zeta)?;
    let s = kl_term((1.0 + eta) / 2.0, (1.0 + zeta) / 2.0)
        + kl_term((1.0 - eta) / 2.0, (1.0 - zeta) / 2.0);
    Ok(s.max(0.0))
}

/// `S(W_η||W_ζ) - S(W_ζ||W_η)
///  = (1 + (η+ζ)/2) log2[(1+η)/(1+ζ)] + (1 - (η+ζ)/2) log2[(1-η)/(1-ζ)]`.
///
/// Only defined in the open square; at `±1` one direction diverges.
pub fn delta_s(eta: f64, zeta: f64) -> Result<f64> {
    check_pair(eta, zeta)?;
    if eta.abs() == 1.0 || zeta.abs() == 1.0 {
        return Err(Error::SupportMismatch);
    }
    let mean = (eta + zeta) / 2.0;
    Ok((1.0 + mean) * ((1.0 + eta) / (1.0 + zeta)).log2()
        + (1.0 - mean) * ((1.0 - eta) / (1.0 - zeta)).log2())
}

/// `(ln √2) · min{S(W_η||W_ζ), S(W_ζ||W_η)}`.
///
/// Both directions are evaluated; the minimum is never assumed to be the
/// `|η| >= |ζ|` branch. `+∞` only when both directions diverge.
pub fn s_quantity(eta: f64, zeta: f64) -> Result<f64> {
    let forward = relative_entropy_werner(eta, zeta)?;
    let backward = relative_entropy_werner(zeta, eta)?;
    Ok(0.5 * LN_2 * forward.min(backward))
}

/// Which case of the Chernoff minimization produced the optimum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SKind {
    /// Stationary point inside `(0, 1)`.
    Interior,
    /// Infimum approached as `s → 0⁺`.
    LeftLimit,
    /// Infimum approached as `s → 1⁻`.
    RightLimit,
    /// Identical states: `Q_s = 1` everywhere, `s = 1/2` by convention.
    DegenerateHalf,
}

impl SKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SKind::Interior => "interior",
            SKind::LeftLimit => "left_limit",
            SKind::RightLimit => "right_limit",
            SKind::DegenerateHalf => "degenerate_half",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QcbResult {
    pub q: f64,
    pub s_star: f64,
    pub s_kind: SKind,
}

/// Two-outcome Chernoff family `Q_s = k₊ P^s + k₋ M^s`, written in terms of
/// the class weights `p₊, p₋` of the first state and `q₊, q₋` of the second
/// (`k± = q±`, `P = p₊/q₊`, `M = p₋/q₋`).
#[derive(Debug, Clone, Copy)]
struct TwoClass {
    p_plus: f64,
    p_minus: f64,
    q_plus: f64,
    q_minus: f64,
}

impl TwoClass {
    fn werner(eta: f64, zeta: f64) -> Self {
        Self {
            p_plus: (1.0 + eta) / 2.0,
            p_minus: (1.0 - eta) / 2.0,
            q_plus: (1.0 + zeta) / 2.0,
            q_minus: (1.0 - zeta) / 2.0,
        }
    }

    fn eval(&self, s: f64) -> f64 {
        let term = |p: f64, q: f64| {
            if p == 0.0 || q == 0.0 {
                0.0
            } else {
                p.powf(s) * q.powf(1.0 - s)
            }
        };
        term(self.p_plus, self.q_plus) + term(self.p_minus, self.q_minus)
    }
}

/// Stationary point of `k₊ P^s + k₋ M^s`:
/// `s = ln(-k₋ ln M / (k₊ ln P)) / ln(P / M)`.
fn stationary_point(k_plus: f64, k_minus: f64, ln_p: f64, ln_m: f64) -> f64 {
    ((-k_minus * ln_m) / (k_plus * ln_p)).ln() / (ln_p - ln_m)
}

/// Interior critical point `s_{η,ζ}` for `η ≠ ζ`, both in `(-1, 1)`.
pub fn critical_s_werner(eta: f64, zeta: f64) -> f64 {
    let ln_p = eta.ln_1p() - zeta.ln_1p();
    let ln_m = (-eta).ln_1p() - (-zeta).ln_1p();
    stationary_point((1.0 + zeta) / 2.0, (1.0 - zeta) / 2.0, ln_p, ln_m)
}

/// Interior critical point `s^Ω_{α,β}` for `α ≠ β`, both in `(0, d)`,
/// computed in the isotropic variables.
pub fn critical_s_isotropic(alpha: f64, beta: f64, d: usize) -> f64 {
    let df = d as f64;
    let ln_p = alpha.ln() - beta.ln();
    let ln_m = (df - alpha).ln() - (df - beta).ln();
    stationary_point(beta / df, (df - beta) / df, ln_p, ln_m)
}

/// `Q_s = Tr(W_η^s W_ζ^{1-s}) = (1+ζ)/2 · P^s + (1-ζ)/2 · M^s`.
pub fn chernoff_werner(eta: f64, zeta: f64, s: f64) -> Result<f64> {
    check_pair(eta, zeta)?;
    Ok(TwoClass::werner(eta, zeta).eval(s))
}

/// `Q_s = (β/d)(α/β)^s + ((d-β)/d)((d-α)/(d-β))^s`.
pub fn chernoff_isotropic(alpha: f64, beta: f64, d: usize, s: f64) -> Result<f64> {
    check_iso(alpha, beta, d)?;
    let df = d as f64;
    let family = TwoClass {
        p_plus: alpha / df,
        p_minus: (df - alpha) / df,
        q_plus: beta / df,
        q_minus: (df - beta) / df,
    };
    Ok(family.eval(s))
}

/// Quantum Chernoff bound `inf_s Tr(W_η^s W_ζ^{1-s})` between two Werner states.
///
/// Cases, checked in this order:
/// * `η = ζ`: `Q = 1`, `s = 1/2`;
/// * `η = ±1`: `Q_s = ((1 ± ζ)/2)^{1-s}`, infimum `(1 ± ζ)/2` as `s → 0⁺`;
/// * `ζ = ±1`: `Q_s = ((1 ± η)/2)^s`, infimum `(1 ± η)/2` as `s → 1⁻`;
/// * otherwise the interior stationary point.
pub fn qcb_werner(eta: f64, zeta: f64) -> Result<QcbResult> {
    check_pair(eta, zeta)?;
    if (eta - zeta).abs() <= DEGENERATE_TOL {
        return Ok(QcbResult {
            q: 1.0,
            s_star: 0.5,
            s_kind: SKind::DegenerateHalf,
        });
    }
    if eta == 1.0 || eta == -1.0 {
        return Ok(QcbResult {
            q: (1.0 + eta * zeta) / 2.0,
            s_star: 0.0,
            s_kind: SKind::LeftLimit,
        });
    }
    if zeta == 1.0 || zeta == -1.0 {
        return Ok(QcbResult {
            q: (1.0 + eta * zeta) / 2.0,
            s_star: 1.0,
            s_kind: SKind::RightLimit,
        });
    }
    let s = critical_s_werner(eta, zeta);
    Ok(QcbResult {
        q: TwoClass::werner(eta, zeta).eval(s).min(1.0),
        s_star: s,
        s_kind: SKind::Interior,
    })
}

fn check_iso(alpha: f64, beta: f64, d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    check_alpha("alpha", alpha, d)?;
    check_alpha("beta", beta, d)
}

/// Quantum Chernoff bound between two isotropic states of dimension `d`.
///
/// Cases, checked in this order: `α = β` (`s = 1/2`), `α ∈ {0, d}`
/// (`s → 0⁺`), `β ∈ {0, d}` (`s → 1⁻`), otherwise `s^Ω_{α,β}`.
pub fn qcb_isotropic(alpha: f64, beta: f64, d: usize) -> Result<QcbResult> {
    check_iso(alpha, beta, d)?;
    let df = d as f64;
    if (alpha - beta).abs() <= DEGENERATE_TOL * df {
        return Ok(QcbResult {
            q: 1.0,
            s_star: 0.5,
            s_kind: SKind::DegenerateHalf,
        });
    }
    if alpha == 0.0 || alpha == df {
        // Q_s = (β/d)^{1-s} at α = d and ((d-β)/d)^{1-s} at α = 0.
        let base = if alpha == df { beta / df } else { (df - beta) / df };
        return Ok(QcbResult {
            q: base,
            s_star: 0.0,
            s_kind: SKind::LeftLimit,
        });
    }
    if beta == 0.0 || beta == df {
        let base = if beta == df { alpha / df } else { (df - alpha) / df };
        return Ok(QcbResult {
            q: base,
            s_star: 1.0,
            s_kind: SKind::RightLimit,
        });
    }
    let s = critical_s_isotropic(alpha, beta, d);
    Ok(QcbResult {
        q: chernoff_isotropic(alpha, beta, d, s)?.min(1.0),
        s_star: s,
        s_kind: SKind::Interior,
    })
}

/// Exact minimum error `½(1 - D(W_η^{⊗n}, W_ζ^{⊗n}))` of the best block
/// strategy with `n` copies.
///
/// `W^{⊗n}` has eigenvalue `a₊^k a₋^{n-k}` with multiplicity
/// `C(n,k) m₊^k m₋^{n-k}`, so the trace distance is a sum over `k`.
pub fn helstrom_multicopy_werner(eta: f64, zeta: f64, d: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("n", 0.0, "need at least one copy"));
    }
    if n > HELSTROM_MAX_COPIES {
        return Err(Error::Overflow(n));
    }
    let first = werner_spectrum(WernerParams::new(eta, d)?);
    let second = werner_spectrum(WernerParams::new(zeta, d)?);
    let [sym, anti] = first.classes;
    let [sym2, anti2] = second.classes;
    let m_plus = sym.multiplicity as f64;
    let m_minus = anti.multiplicity as f64;

    let mut l1 = 0.0;
    if n <= HELSTROM_DIRECT_MAX {
        let mut binom = 1.0f64;
        for k in 0..=n {
            let j = (n - k) as i32;
            let k_i = k as i32;
            // Multiplicity and eigenvalue are paired per factor to stay in range.
            let a = (m_plus * sym.eigenvalue).powi(k_i) * (m_minus * anti.eigenvalue).powi(j);
            let b = (m_plus * sym2.eigenvalue).powi(k_i) * (m_minus * anti2.eigenvalue).powi(j);
            l1 += binom * (a - b).abs();
            binom = binom * (n - k) as f64 / (k + 1) as f64;
        }
    } else {
        // Log-space: C(n,k) (m₊a₊)^k (m₋a₋)^{n-k}, i.e. binomial weights.
        let ln_pow = |count: usize, x: f64| if count == 0 { 0.0 } else { count as f64 * x.ln() };
        let mut ln_binom = 0.0f64;
        for k in 0..=n {
            let weight = |plus: f64, minus: f64| {
                (ln_binom + ln_pow(k, plus) + ln_pow(n - k, minus)).exp()
            };
            let a = weight(sym.weight(), anti.weight());
            let b = weight(sym2.weight(), anti2.weight());
            l1 += (a - b).abs();
            if k < n {
                ln_binom += ((n - k) as f64).ln() - ((k + 1) as f64).ln();
            }
        }
    }
    let distance = (0.5 * l1).clamp(0.0, 1.0);
    Ok(0.5 * (1.0 - distance))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parameter_grid;

    fn interior_grid() -> Vec<f64> {
        parameter_grid(-1.0, 1.0, 0.1)
            .into_iter()
            .filter(|x| x.abs() < 1.0)
            .collect()
    }

    #[test]
    fn fidelity_values() {
        assert!((fidelity_werner(0.3, 0.3).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity_werner(1.0, -1.0).unwrap(), 0.0);
        let expected = (1.5f64.sqrt() + 0.5f64.sqrt()) / 2.0;
        assert!((fidelity_werner(0.5, 0.0).unwrap() - expected).abs() < 1e-15);
        assert!((fidelity_werner(0.5, 0.0).unwrap() - 0.9659258263).abs() < 1e-10);
        assert!(fidelity_werner(1.1, 0.0).is_err());
    }

    #[test]
    fn relative_entropy_values() {
        assert_eq!(relative_entropy_werner(0.4, 0.4).unwrap(), 0.0);
        let expected = 0.75 * 1.5f64.log2() + 0.25 * 0.5f64.log2();
        assert!((relative_entropy_werner(0.5, 0.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.188722).abs() < 1e-6);
        assert_eq!(relative_entropy_werner(0.0, 1.0).unwrap(), f64::INFINITY);
        // Zero-weight class of the first argument contributes nothing.
        assert!(relative_entropy_werner(1.0, 0.0).unwrap().is_finite());
    }

    #[test]
    fn delta_s_special_values() {
        for eta in interior_grid() {
            assert!(delta_s(eta, eta).unwrap().abs() < 1e-15);
            assert!(delta_s(eta, -eta).unwrap().abs() < 1e-14);
        }
        assert!(delta_s(0.8, 0.2).unwrap() < 0.0);
        assert_eq!(delta_s(1.0, 0.2).unwrap_err(), Error::SupportMismatch);
    }

    #[test]
    fn delta_s_is_antisymmetric_and_matches_directed_difference() {
        for eta in interior_grid() {
            for zeta in interior_grid() {
                let a = delta_s(eta, zeta).unwrap();
                assert!((a + delta_s(zeta, eta).unwrap()).abs() <= 1e-12);
                let direct = relative_entropy_werner(eta, zeta).unwrap()
                    - relative_entropy_werner(zeta, eta).unwrap();
                assert!((a - direct).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn s_quantity_branches() {
        let ln_sqrt2 = 2f64.sqrt().ln();
        assert_eq!(s_quantity(0.2, 0.2).unwrap(), 0.0);
        let first = ln_sqrt2 * relative_entropy_werner(0.8, 0.2).unwrap();
        assert!((s_quantity(0.8, 0.2).unwrap() - first).abs() < 1e-15);
        assert!((s_quantity(0.2, 0.8).unwrap() - first).abs() < 1e-15);
        // One direction infinite: the finite one is used.
        let finite = ln_sqrt2 * relative_entropy_werner(1.0, 0.0).unwrap();
        assert!((s_quantity(1.0, 0.0).unwrap() - finite).abs() < 1e-15);
        assert_eq!(s_quantity(1.0, -1.0).unwrap(), f64::INFINITY);
    }

    #[test]
    fn qcb_cases() {
        let same = qcb_werner(0.3, 0.3).unwrap();
        assert_eq!((same.q, same.s_kind), (1.0, SKind::DegenerateHalf));
        assert_eq!(same.s_star, 0.5);

        let left = qcb_werner(1.0, 0.0).unwrap();
        assert_eq!(left.s_kind, SKind::LeftLimit);
        assert!((left.q - 0.5).abs() < 1e-15);

        let right = qcb_werner(0.2, -1.0).unwrap();
        assert_eq!(right.s_kind, SKind::RightLimit);
        assert!((right.q - 0.4).abs() < 1e-15);

        let sym = qcb_werner(0.5, -0.5).unwrap();
        assert_eq!(sym.s_kind, SKind::Interior);
        assert!((sym.s_star - 0.5).abs() < 1e-15);
        assert!((sym.q - 0.75f64.sqrt()).abs() < 1e-15);

        let opposite = qcb_werner(1.0, -1.0).unwrap();
        assert_eq!(opposite.q, 0.0);
    }

    #[test]
    fn qcb_limits_match_closed_family() {
        // Q at the singular cases equals the limit of Q_s at the boundary.
        for (eta, zeta) in [(1.0, 0.3), (-1.0, 0.3), (0.3, 1.0), (0.3, -1.0)] {
            let r = qcb_werner(eta, zeta).unwrap();
            let s = if r.s_kind == SKind::LeftLimit { 1e-12 } else { 1.0 - 1e-12 };
            let limit = chernoff_werner(eta, zeta, s).unwrap();
            assert!((r.q - limit).abs() < 1e-10, "{eta} {zeta}");
        }
    }

    #[test]
    fn critical_points_sum_to_one() {
        for eta in interior_grid() {
            for zeta in interior_grid() {
                if eta == zeta {
                    continue;
                }
                let a = critical_s_werner(eta, zeta);
                let b = critical_s_werner(zeta, eta);
                assert!((a + b - 1.0).abs() <= 1e-12, "{eta} {zeta}");
                assert!(a > 0.0 && a < 1.0);
            }
        }
    }

    #[test]
    fn qcb_is_symmetric() {
        let grid = parameter_grid(-1.0, 1.0, 0.1);
        for &eta in &grid {
            for &zeta in &grid {
                let a = qcb_werner(eta, zeta).unwrap().q;
                let b = qcb_werner(zeta, eta).unwrap().q;
                assert!((a - b).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn isotropic_cases() {
        assert_eq!(qcb_isotropic(1.5, 1.5, 3).unwrap().q, 1.0);
        let left = qcb_isotropic(2.0, 1.0, 2).unwrap();
        assert_eq!(left.s_kind, SKind::LeftLimit);
        assert!((left.q - 0.5).abs() < 1e-15);
        let right = qcb_isotropic(1.0, 0.0, 2).unwrap();
        assert_eq!(right.s_kind, SKind::RightLimit);
        assert!((right.q - 0.5).abs() < 1e-15);
        assert!(qcb_isotropic(4.0, 1.0, 3).is_err());
        assert!(qcb_isotropic(1.0, 1.0, 1).is_err());
    }

    #[test]
    fn isotropic_substitution() {
        for d in 2..=4 {
            let df = d as f64;
            for eta in interior_grid() {
                for zeta in interior_grid() {
                    if eta == zeta {
                        continue;
                    }
                    let alpha = df * (1.0 + eta) / 2.0;
                    let beta = df * (1.0 + zeta) / 2.0;
                    let iso = critical_s_isotropic(alpha, beta, d);
                    assert!((iso - critical_s_werner(eta, zeta)).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn helstrom_single_copy() {
        for d in 2..=5 {
            for (eta, zeta) in [(0.5, 0.0), (-1.0, 1.0), (0.3, -0.7)] {
                let p = helstrom_multicopy_werner(eta, zeta, d, 1).unwrap();
                let expected = (1.0 - (eta - zeta).abs() / 2.0) / 2.0;
                assert!((p - expected).abs() < 1e-15);
            }
        }
        for n in [1, 7, 60] {
            assert_eq!(helstrom_multicopy_werner(0.2, 0.2, 3, n).unwrap(), 0.5);
        }
    }

    #[test]
    fn helstrom_paths_agree_near_switch() {
        // Plain binomial oracle at the last direct copy number, then the
        // first log-space one must keep decreasing.
        let direct = helstrom_multicopy_werner(0.4, 0.1, 2, 50).unwrap();
        let mut l1 = 0.0;
        let (p, q) = (0.7f64, 0.55f64);
        let mut binom = 1.0f64;
        for k in 0..=50usize {
            let a = binom * p.powi(k as i32) * (1.0 - p).powi((50 - k) as i32);
            let b = binom * q.powi(k as i32) * (1.0 - q).powi((50 - k) as i32);
            l1 += (a - b).abs();
            binom = binom * (50 - k) as f64 / (k + 1) as f64;
        }
        assert!((direct - 0.5 * (1.0 - 0.5 * l1)).abs() < 1e-12);
        let log_space = helstrom_multicopy_werner(0.4, 0.1, 2, 51).unwrap();
        assert!(log_space < direct);
    }

    #[test]
    fn helstrom_errors() {
        assert!(matches!(helstrom_multicopy_werner(0.1, 0.2, 2, 0), Err(Error::InvalidParameter { .. })));
        assert_eq!(helstrom_multicopy_werner(0.1, 0.2, 2, 1001).unwrap_err(), Error::Overflow(1001));
        assert!(helstrom_multicopy_werner(0.1, 0.2, 2, 1000).is_ok());
    }
}
