//! Werner and isotropic two-qudit states, in parameter and explicit-matrix form.
//!
//! Basis convention: the product vector `|i j>` has index `i * d + j`.
//! The flip operator, the maximally entangled operator, the partial
//! transpose and the teleportation simulator all rely on it.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigh, ComplexMatrix, DensityMatrix};

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(())
}

/// Werner state parameters: `eta = Tr(W F)` in `[-1, 1]` and local dimension `d >= 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    eta: f64,
    d: usize,
}

impl WernerParams {
    pub fn new(eta: f64, d: usize) -> Result<Self> {
        check_dim(d)?;
        check_eta("eta", eta)?;
        Ok(Self { eta, d })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

pub(crate) fn check_eta(name: &'static str, value: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&value) {
        return Err(Error::param(name, value, "must lie in [-1, 1]"));
    }
    Ok(())
}

pub(crate) fn check_alpha(name: &'static str, value: f64, d: usize) -> Result<()> {
    if !(0.0..=d as f64).contains(&value) {
        return Err(Error::param(name, value, "must lie in [0, d]"));
    }
    Ok(())
}

/// Isotropic state parameters: `alpha = Tr(Ω M)` in `[0, d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IsotropicParams {
    alpha: f64,
    d: usize,
}

impl IsotropicParams {
    pub fn new(alpha: f64, d: usize) -> Result<Self> {
        check_dim(d)?;
        check_alpha("alpha", alpha, d)?;
        Ok(Self { alpha, d })
    }

    /// From the mixing weight of `Ω_p = p 𝕀/d² + (1 - p)|Φ><Φ|`,
    /// with `p` in `[0, d²/(d²-1)]`.
    pub fn from_mixing_weight(p: f64, d: usize) -> Result<Self> {
        check_dim(d)?;
        let df = d as f64;
        let p_max = df * df / (df * df - 1.0);
        if !(0.0..=p_max).contains(&p) {
            return Err(Error::param("p", p, "must lie in [0, d^2/(d^2-1)]"));
        }
        let alpha = (df - p * (df * df - 1.0) / df).clamp(0.0, df);
        Self::new(alpha, d)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `p = d (d - alpha) / (d² - 1)`.
    pub fn mixing_weight(&self) -> f64 {
        let df = self.d as f64;
        df * (df - self.alpha) / (df * df - 1.0)
    }
}

/// One eigenvalue class of a simultaneously diagonalizable family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumClass {
    pub eigenvalue: f64,
    pub multiplicity: usize,
}

impl SpectrumClass {
    /// Total probability weight of the class.
    pub fn weight(&self) -> f64 {
        self.eigenvalue * self.multiplicity as f64
    }
}

/// Eigenvalue classes of a Werner or isotropic state. Zero-eigenvalue
/// classes at the extremes are kept so the multiplicities always sum to `d²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPair {
    pub classes: [SpectrumClass; 2],
}

impl SpectrumPair {
    pub fn total_multiplicity(&self) -> usize {
        self.classes.iter().map(|c| c.multiplicity).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.classes.iter().map(SpectrumClass::weight).sum()
    }

    /// All `d²` eigenvalues in ascending order.
    pub fn expanded(&self) -> Vec<f64> {
        let mut out: Vec<f64> = self
            .classes
            .iter()
            .flat_map(|c| std::iter::repeat_n(c.eigenvalue, c.multiplicity))
            .collect();
        out.sort_by(f64::total_cmp);
        out
    }
}

/// `𝔽 = Σ |ij><ji|`.
pub fn flip_operator(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let mut f = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            f[(i * d + j, j * d + i)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(f)
}

/// `𝕄 = Σ |ii><jj|`, i.e. `d |Φ><Φ|`.
pub fn max_entangled_operator(d: usize) -> Result<ComplexMatrix> {
    check_dim(d)?;
    let mut m = ComplexMatrix::zeros(d * d);
    for i in 0..d {
        for j in 0..d {
            m[(i * d + i, j * d + j)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(m)
}

/// `|Φ> = d^{-1/2} Σ |ii>`.
pub fn max_entangled_vector(d: usize) -> Vec<Complex64> {
    let amp = Complex64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

/// `|Φ><Φ|`.
pub fn max_entangled_state(d: usize) -> Result<DensityMatrix> {
    check_dim(d)?;
    DensityMatrix::pure(&max_entangled_vector(d))
}

/// `W = [(d - η) 𝕀 + (dη - 1) 𝔽] / (d³ - d)`.
pub fn werner_state(params: WernerParams) -> Result<DensityMatrix> {
    let d = params.d;
    let df = d as f64;
    let norm = df * df * df - df;
    let id_coeff = (df - params.eta) / norm;
    let flip_coeff = (df * params.eta - 1.0) / norm;
    let flip = flip_operator(d)?;
    let m = ComplexMatrix::from_fn(d * d, |r, c| {
        let id = if r == c { id_coeff } else { 0.0 };
        Complex64::new(id, 0.0) + flip[(r, c)] * flip_coeff
    });
    DensityMatrix::new(m)
}

/// `d(d+1)/2` eigenvalues `(1+η)/[d(d+1)]` on the symmetric subspace and
/// `d(d-1)/2` eigenvalues `(1-η)/[d(d-1)]` on the antisymmetric one.
pub fn werner_spectrum(params: WernerParams) -> SpectrumPair {
    let d = params.d;
    let df = d as f64;
    SpectrumPair {
        classes: [
            SpectrumClass {
                eigenvalue: (1.0 + params.eta) / (df * (df + 1.0)),
                multiplicity: d * (d + 1) / 2,
            },
            SpectrumClass {
                eigenvalue: (1.0 - params.eta) / (df * (df - 1.0)),
                multiplicity: d * (d - 1) / 2,
            },
        ],
    }
}

/// `Ω = [(d - α) 𝕀 + (dα - 1) 𝕄] / (d³ - d)`.
pub fn isotropic_state(params: IsotropicParams) -> Result<DensityMatrix> {
    let d = params.d;
    let df = d as f64;
    let norm = df * df * df - df;
    let id_coeff = (df - params.alpha) / norm;
    let m_coeff = (df * params.alpha - 1.0) / norm;
    let mm = max_entangled_operator(d)?;
    let m = ComplexMatrix::from_fn(d * d, |r, c| {
        let id = if r == c { id_coeff } else { 0.0 };
        Complex64::new(id, 0.0) + mm[(r, c)] * m_coeff
    });
    DensityMatrix::new(m)
}

/// `Ω_p = p 𝕀/d² + (1 - p) |Φ><Φ|`.
pub fn isotropic_state_from_mixing_weight(p: f64, d: usize) -> Result<DensityMatrix> {
    IsotropicParams::from_mixing_weight(p, d)?;
    let df = d as f64;
    let phi = max_entangled_operator(d)?.scale((1.0 - p) / df);
    let noise = ComplexMatrix::identity(d * d).scale(p / (df * df));
    DensityMatrix::new(&phi + &noise)
}

/// One eigenvalue `α/d` on `|Φ>` and `d² - 1` eigenvalues `(d-α)/[d(d²-1)]`.
///
/// When `Ω` arises as the partial transpose of a Werner state (`α = η`,
/// `α <= 1`) the first class reads `η/d`; in general it is `α/d`.
pub fn isotropic_spectrum(params: IsotropicParams) -> SpectrumPair {
    let d = params.d;
    let df = d as f64;
    SpectrumPair {
        classes: [
            SpectrumClass {
                eigenvalue: params.alpha / df,
                multiplicity: 1,
            },
            SpectrumClass {
                eigenvalue: (df - params.alpha) / (df * (df * df - 1.0)),
                multiplicity: d * d - 1,
            },
        ],
    }
}

/// Smallest eigenvalue of the partial transpose of a bipartite state.
pub fn partial_transpose_min_eigenvalue(state: &DensityMatrix, d: usize) -> Result<f64> {
    let pt = state.matrix().partial_transpose(d)?;
    Ok(eigh(&pt)?.eigenvalues[0])
}

/// Positive partial transpose test with the density-matrix PSD tolerance.
pub fn is_ppt(state: &DensityMatrix, d: usize) -> Result<bool> {
    Ok(partial_transpose_min_eigenvalue(state, d)? >= -crate::linalg::PSD_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::parameter_grid;

    fn assert_spectrum_matches(state: &DensityMatrix, spectrum: &SpectrumPair) {
        let expected = spectrum.expanded();
        for (got, want) in state.eigenvalues().iter().zip(&expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn flip_swaps_basis_vectors() {
        let f = flip_operator(2).unwrap();
        // F|01> = |10>: column 1 has its one in row 2
        assert_eq!(f[(2, 1)], Complex64::new(1.0, 0.0));
        assert_eq!(f[(1, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn operator_traces_and_squares() {
        for d in 2..=6 {
            let f = flip_operator(d).unwrap();
            let m = max_entangled_operator(d).unwrap();
            let diag_sum = |a: &ComplexMatrix| (0..d * d).map(|i| a[(i, i)].re).sum::<f64>();
            assert_eq!(diag_sum(&f), d as f64);
            assert_eq!(diag_sum(&m), d as f64);
            assert!((&f * &f).max_abs_diff(&ComplexMatrix::identity(d * d)) == 0.0);
            assert!((&m * &m).max_abs_diff(&m.scale(d as f64)) == 0.0);
            assert_eq!(f.hermiticity_defect(), 0.0);
            assert_eq!(m.hermiticity_defect(), 0.0);
        }
    }

    #[test]
    fn partial_transpose_of_flip_is_max_entangled_operator() {
        for d in 2..=5 {
            let f = flip_operator(d).unwrap();
            assert_eq!(f.partial_transpose(d).unwrap(), max_entangled_operator(d).unwrap());
        }
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(flip_operator(1).unwrap_err(), Error::InvalidDimension(1));
        assert!(WernerParams::new(1.5, 2).is_err());
        assert!(WernerParams::new(0.0, 1).is_err());
        assert!(IsotropicParams::new(-0.1, 3).is_err());
        assert!(IsotropicParams::new(3.1, 3).is_err());
        assert!(WernerParams::new(f64::NAN, 2).is_err());
    }

    #[test]
    fn singlet_at_eta_minus_one() {
        let w = werner_state(WernerParams::new(-1.0, 2).unwrap()).unwrap();
        let ev = w.eigenvalues();
        for x in &ev[..3] {
            assert!(x.abs() < 1e-15);
        }
        assert!((ev[3] - 1.0).abs() < 1e-14);
        // singlet (|01> - |10>)/√2
        assert!((w.matrix()[(1, 2)].re + 0.5).abs() < 1e-15);
    }

    #[test]
    fn flip_expectation_recovers_eta() {
        let w = werner_state(WernerParams::new(0.3, 3).unwrap()).unwrap();
        let eta = w.matrix().trace_product(&flip_operator(3).unwrap()).re;
        assert!((eta - 0.3).abs() < 1e-12);
    }

    #[test]
    fn werner_eigenvalues_match_spectrum() {
        let p = WernerParams::new(0.4, 3).unwrap();
        assert_spectrum_matches(&werner_state(p).unwrap(), &werner_spectrum(p));
    }

    #[test]
    fn werner_spectrum_at_zero_qubits() {
        let s = werner_spectrum(WernerParams::new(0.0, 2).unwrap());
        assert!((s.classes[0].eigenvalue - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(s.classes[0].multiplicity, 3);
        assert!((s.classes[1].eigenvalue - 0.5).abs() < 1e-15);
        assert_eq!(s.classes[1].multiplicity, 1);
    }

    #[test]
    fn werner_spectrum_keeps_zero_class_at_eta_one() {
        for d in 2..=6 {
            let s = werner_spectrum(WernerParams::new(1.0, d).unwrap());
            let df = d as f64;
            assert!((s.classes[0].eigenvalue - 2.0 / (df * (df + 1.0))).abs() < 1e-15);
            assert_eq!(s.classes[1].eigenvalue, 0.0);
            assert_eq!(s.classes[1].multiplicity, d * (d - 1) / 2);
        }
    }

    #[test]
    fn spectra_normalized_on_grid() {
        for d in 2..=6 {
            for eta in parameter_grid(-1.0, 1.0, 0.1) {
                let s = werner_spectrum(WernerParams::new(eta, d).unwrap());
                assert!((s.total_weight() - 1.0).abs() < 1e-12);
                assert_eq!(s.total_multiplicity(), d * d);
            }
            for k in 0..=10 {
                let alpha = d as f64 * k as f64 / 10.0;
                let s = isotropic_spectrum(IsotropicParams::new(alpha, d).unwrap());
                assert!((s.total_weight() - 1.0).abs() < 1e-12);
                assert_eq!(s.total_multiplicity(), d * d);
            }
        }
    }

    #[test]
    fn isotropic_at_alpha_d_is_max_entangled() {
        for d in 2..=4 {
            let omega = isotropic_state(IsotropicParams::new(d as f64, d).unwrap()).unwrap();
            let phi = max_entangled_state(d).unwrap();
            assert!(omega.matrix().max_abs_diff(phi.matrix()) < 1e-15);
        }
    }

    #[test]
    fn isotropic_qubit_alpha_one_spectrum() {
        let p = IsotropicParams::new(1.0, 2).unwrap();
        let omega = isotropic_state(p).unwrap();
        let ev = omega.eigenvalues();
        for x in &ev[..3] {
            assert!((x - 1.0 / 6.0).abs() < 1e-14);
        }
        assert!((ev[3] - 0.5).abs() < 1e-14);
        assert_spectrum_matches(&omega, &isotropic_spectrum(p));
    }

    #[test]
    fn isotropic_max_entangled_expectation() {
        for d in 2..=5 {
            let p = IsotropicParams::new(0.7 * d as f64, d).unwrap();
            let omega = isotropic_state(p).unwrap();
            let alpha = omega.matrix().trace_product(&max_entangled_operator(d).unwrap()).re;
            assert!((alpha - p.alpha()).abs() < 1e-12);
        }
    }

    #[test]
    fn mixing_weight_round_trip() {
        for d in 2..=5 {
            for k in 0..=8 {
                let alpha = d as f64 * k as f64 / 8.0;
                let params = IsotropicParams::new(alpha, d).unwrap();
                let p = params.mixing_weight();
                let back = IsotropicParams::from_mixing_weight(p, d).unwrap();
                assert!((back.alpha() - alpha).abs() < 1e-12);
                let a = isotropic_state(params).unwrap();
                let b = isotropic_state_from_mixing_weight(p, d).unwrap();
                assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-12);
            }
        }
    }

    #[test]
    fn werner_partial_transpose_is_isotropic() {
        for d in 2..=4 {
            for alpha in parameter_grid(0.0, 1.0, 0.25) {
                let w = werner_state(WernerParams::new(alpha, d).unwrap()).unwrap();
                let omega = isotropic_state(IsotropicParams::new(alpha, d).unwrap()).unwrap();
                let pt = w.matrix().partial_transpose(d).unwrap();
                assert!(pt.max_abs_diff(omega.matrix()) <= 1e-12);
            }
        }
    }

    #[test]
    fn ppt_iff_eta_non_negative() {
        for d in 2..=4 {
            for eta in parameter_grid(-1.0, 1.0, 0.1) {
                let w = werner_state(WernerParams::new(eta, d).unwrap()).unwrap();
                assert_eq!(is_ppt(&w, d).unwrap(), eta >= 0.0, "d={d} eta={eta}");
            }
        }
    }
}
