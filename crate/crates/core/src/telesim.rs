//! Qudit teleportation over a two-qudit resource state.
//!
//! The Bell basis is `|Φ_ab> = (U_ab ⊗ 𝕀)|Φ>` with the Heisenberg-Weyl
//! operators `U_ab = X^a Z^b`, `X|j> = |j+1 mod d>`, `Z|j> = ω^j |j>`.
//! The input sits on system A and the resource on systems B, C. Projecting
//! AB onto `|Φ_ab>` leaves C rotated by `U_ab^dagger`, which the receiver
//! undoes with a correction on C.
//!
//! With [`Correction::Conjugate`] (`V_ab = U_ab^*`) teleporting over a
//! Werner state reproduces the Holevo-Werner channel for every η; with
//! [`Correction::Direct`] (`V_ab = U_ab`) teleporting over an isotropic
//! state reproduces the depolarizing channel. For qubits the two coincide
//! since the Paulis `X^a Z^b` are real.
//!
//! Measurement branches are computed exactly (projector sandwich and partial
//! trace), not sampled.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::hw_channel_apply;
use crate::error::{Error, Result};
use crate::linalg::{trace_distance_numeric, ComplexMatrix, DensityMatrix};
use crate::states::WernerParams;

/// Label `(a, b)` of the teleportation unitary `X^a Z^b`, both taken mod `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HeisenbergWeylLabel {
    a: usize,
    b: usize,
}

impl HeisenbergWeylLabel {
    pub fn new(a: usize, b: usize, d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidDimension(d));
        }
        if a >= d || b >= d {
            return Err(Error::param(
                "label",
                a.max(b) as f64,
                "shift and phase powers must lie in [0, d)",
            ));
        }
        Ok(Self { a, b })
    }

    pub fn shift(&self) -> usize {
        self.a
    }

    pub fn phase(&self) -> usize {
        self.b
    }

    /// `X^a Z^b`, i.e. `|j> ↦ ω^{bj} |j + a>`.
    pub fn unitary(&self, d: usize) -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(d);
        for j in 0..d {
            u[((j + self.a) % d, j)] = root_of_unity(d, self.b * j);
        }
        u
    }
}

fn root_of_unity(d: usize, k: usize) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * (k % d) as f64 / d as f64)
}

/// All `d²` labels in `(a, b)` lexicographic order.
pub fn labels(d: usize) -> Result<Vec<HeisenbergWeylLabel>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok((0..d)
        .flat_map(|a| (0..d).map(move |b| HeisenbergWeylLabel { a, b }))
        .collect())
}

/// `|Φ_ab> = d^{-1/2} Σ_j ω^{bj} |j+a>|j>`.
pub fn bell_vector(label: HeisenbergWeylLabel, d: usize) -> Vec<Complex64> {
    let amp = 1.0 / (d as f64).sqrt();
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    for j in 0..d {
        v[((j + label.a) % d) * d + j] = root_of_unity(d, label.b * j) * amp;
    }
    v
}

/// The qudit Bell basis, ordered as [`labels`].
pub fn bell_basis(d: usize) -> Result<Vec<(HeisenbergWeylLabel, Vec<Complex64>)>> {
    Ok(labels(d)?
        .into_iter()
        .map(|l| (l, bell_vector(l, d)))
        .collect())
}

/// Receiver-side correction convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Correction {
    /// `V_ab = U_ab^*`; simulates channels covariant with output unitary `U^*`.
    #[default]
    Conjugate,
    /// `V_ab = U_ab`; simulates channels covariant with output unitary `U`.
    Direct,
}

impl Correction {
    fn unitary(self, label: HeisenbergWeylLabel, d: usize) -> ComplexMatrix {
        let u = label.unitary(d);
        match self {
            Correction::Conjugate => u.conj(),
            Correction::Direct => u,
        }
    }
}

/// One measurement branch.
#[derive(Debug, Clone)]
pub struct TeleportationOutcome {
    pub label: HeisenbergWeylLabel,
    pub probability: f64,
    /// Corrected, normalized output; `None` for a zero-probability branch.
    pub post_state: Option<DensityMatrix>,
}

fn check_dims(resource: &DensityMatrix, input: &DensityMatrix) -> Result<usize> {
    let d = input.dim();
    if resource.dim() != d * d {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            found: resource.dim(),
        });
    }
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(d)
}

/// Unnormalized, corrected output on C for one Bell outcome.
fn branch(
    resource: &ComplexMatrix,
    input: &ComplexMatrix,
    label: HeisenbergWeylLabel,
    d: usize,
    correction: Correction,
) -> ComplexMatrix {
    let phi = bell_vector(label, d);
    // A[j][j'] = Σ_{i,i'} conj(φ[i,j]) ρ[i,i'] φ[i',j']
    let a = ComplexMatrix::from_fn(d, |j, jp| {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let left = phi[i * d + j].conj();
            if left == Complex64::new(0.0, 0.0) {
                continue;
            }
            for ip in 0..d {
                acc += left * input[(i, ip)] * phi[ip * d + jp];
            }
        }
        acc
    });
    // σ[c][c'] = Σ_{j,j'} A[j][j'] R[(j,c),(j',c')]
    let sigma = ComplexMatrix::from_fn(d, |c, cp| {
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..d {
            for jp in 0..d {
                acc += a[(j, jp)] * resource[(j * d + c, jp * d + cp)];
            }
        }
        acc
    });
    sigma.conjugate_by(&correction.unitary(label, d))
}

fn branches(
    resource: &DensityMatrix,
    input: &DensityMatrix,
    correction: Correction,
) -> Result<Vec<(HeisenbergWeylLabel, ComplexMatrix)>> {
    let d = check_dims(resource, input)?;
    let labels = labels(d)?;
    Ok(labels
        .into_par_iter()
        .map(|l| (l, branch(resource.matrix(), input.matrix(), l, d, correction)))
        .collect())
}

/// Per-outcome probabilities and corrected post-measurement states.
pub fn teleport_outcomes(
    resource: &DensityMatrix,
    input: &DensityMatrix,
    correction: Correction,
) -> Result<Vec<TeleportationOutcome>> {
    branches(resource, input, correction)?
        .into_iter()
        .map(|(label, sigma)| {
            let probability = sigma.trace().re.max(0.0);
            let post_state = if probability > 1e-15 {
                Some(DensityMatrix::new(sigma.hermitian_part().scale(1.0 / probability))?)
            } else {
                None
            };
            Ok(TeleportationOutcome {
                label,
                probability,
                post_state,
            })
        })
        .collect()
}

/// Averaged teleportation output with an explicit correction convention.
pub fn teleport_channel_with(
    resource: &DensityMatrix,
    input: &DensityMatrix,
    correction: Correction,
) -> Result<DensityMatrix> {
    let d = input.dim();
    let mut out = ComplexMatrix::zeros(d);
    for (_, sigma) in branches(resource, input, correction)? {
        out = &out + &sigma;
    }
    DensityMatrix::new(out.hermitian_part())
}

/// Teleports `input` over `resource` with the `U^*` corrections that
/// simulate Holevo-Werner channels.
pub fn teleport_channel(resource: &DensityMatrix, input: &DensityMatrix) -> Result<DensityMatrix> {
    teleport_channel_with(resource, input, Correction::Conjugate)
}

pub const UNITARY_TOL: f64 = 1e-10;

/// Trace distance between `W(U ρ U^dagger)` and `U^* W(ρ) U^T`.
pub fn covariance_check(
    params: WernerParams,
    unitary: &ComplexMatrix,
    rho: &DensityMatrix,
) -> Result<f64> {
    let d = params.d();
    if unitary.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: unitary.dim(),
        });
    }
    unitary.ensure_unitary(UNITARY_TOL)?;
    let rotated = DensityMatrix::new(rho.matrix().conjugate_by(unitary).hermitian_part())?;
    let lhs = hw_channel_apply(params, &rotated)?;
    let out = hw_channel_apply(params, rho)?;
    let rhs = DensityMatrix::new(out.matrix().conjugate_by(&unitary.conj()).hermitian_part())?;
    trace_distance_numeric(&lhs, &rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::depolarizing_apply;
    use crate::random::{random_density_matrix, random_unitary};
    use crate::states::{isotropic_state, max_entangled_state, werner_state, IsotropicParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn qubit_bell_states() {
        let basis = bell_basis(2).unwrap();
        assert_eq!(basis.len(), 4);
        let h = 1.0 / 2f64.sqrt();
        // (a, b) = (0, 1): (|00> - |11>)/√2
        let v = &basis[1].1;
        assert!((v[0].re - h).abs() < 1e-15 && (v[3].re + h).abs() < 1e-15);
        // (a, b) = (1, 0): (|10> + |01>)/√2
        let v = &basis[2].1;
        assert!((v[1].re - h).abs() < 1e-15 && (v[2].re - h).abs() < 1e-15);
    }

    #[test]
    fn bell_basis_orthonormal_and_complete() {
        for d in 2..=4 {
            let basis = bell_basis(d).unwrap();
            let mut sum = ComplexMatrix::zeros(d * d);
            for (i, (_, u)) in basis.iter().enumerate() {
                for (j, (_, v)) in basis.iter().enumerate() {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    assert!((inner(u, v) - expected).norm() < 1e-12);
                }
                sum = &sum + &ComplexMatrix::outer(u);
            }
            assert!(sum.max_abs_diff(&ComplexMatrix::identity(d * d)) < 1e-12);
        }
    }

    #[test]
    fn qutrit_bell_states_are_maximally_entangled() {
        let mixed = ComplexMatrix::identity(3).scale(1.0 / 3.0);
        for (_, v) in bell_basis(3).unwrap() {
            let reduced = ComplexMatrix::outer(&v).trace_out_first(3, 3).unwrap();
            assert!(reduced.max_abs_diff(&mixed) < 1e-12);
        }
    }

    #[test]
    fn label_validation() {
        assert!(HeisenbergWeylLabel::new(3, 0, 3).is_err());
        assert!(HeisenbergWeylLabel::new(0, 0, 1).is_err());
        let l = HeisenbergWeylLabel::new(1, 2, 3).unwrap();
        assert!(l.unitary(3).unitarity_defect() < 1e-14);
    }

    #[test]
    fn teleporting_over_max_entangled_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for d in 2..=4 {
            let phi = max_entangled_state(d).unwrap();
            let rho = random_density_matrix(d, &mut rng).unwrap();
            let out = teleport_channel_with(&phi, &rho, Correction::Direct).unwrap();
            assert!(trace_distance_numeric(&out, &rho).unwrap() <= 1e-10);
        }
        // Real Paulis: the conjugate convention agrees for qubits.
        let phi = max_entangled_state(2).unwrap();
        let rho = random_density_matrix(2, &mut rng).unwrap();
        let out = teleport_channel(&phi, &rho).unwrap();
        assert!(trace_distance_numeric(&out, &rho).unwrap() <= 1e-10);
    }

    #[test]
    fn werner_resource_simulates_hw_channel() {
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        for d in 2..=3 {
            for eta in [-1.0, -0.5, 0.0, 0.5, 1.0] {
                let p = WernerParams::new(eta, d).unwrap();
                let w = werner_state(p).unwrap();
                for _ in 0..5 {
                    let rho = random_density_matrix(d, &mut rng).unwrap();
                    let sim = teleport_channel(&w, &rho).unwrap();
                    let direct = hw_channel_apply(p, &rho).unwrap();
                    assert!(trace_distance_numeric(&sim, &direct).unwrap() <= 1e-10);
                }
            }
        }
    }

    #[test]
    fn isotropic_resource_simulates_depolarizing_with_direct_corrections() {
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        for d in 2..=3 {
            for k in 0..=4 {
                let p = IsotropicParams::new(d as f64 * k as f64 / 4.0, d).unwrap();
                let omega = isotropic_state(p).unwrap();
                let rho = random_density_matrix(d, &mut rng).unwrap();
                let sim = teleport_channel_with(&omega, &rho, Correction::Direct).unwrap();
                let direct = depolarizing_apply(p, &rho).unwrap();
                assert!(trace_distance_numeric(&sim, &direct).unwrap() <= 1e-10);
            }
        }
    }

    #[test]
    fn werner_resource_gives_uniform_outcomes() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for d in 2..=3 {
            let w = werner_state(WernerParams::new(0.3, d).unwrap()).unwrap();
            let rho = random_density_matrix(d, &mut rng).unwrap();
            let outcomes = teleport_outcomes(&w, &rho, Correction::Conjugate).unwrap();
            assert_eq!(outcomes.len(), d * d);
            let total: f64 = outcomes.iter().map(|o| o.probability).sum();
            assert!((total - 1.0).abs() <= 1e-10);
            for o in &outcomes {
                assert!((o.probability - 1.0 / (d * d) as f64).abs() <= 1e-10);
                assert!(o.post_state.is_some());
            }
        }
    }

    #[test]
    fn teleportation_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(35);
        for d in 2..=3 {
            let w = werner_state(WernerParams::new(-0.4, d).unwrap()).unwrap();
            let a = random_density_matrix(d, &mut rng).unwrap();
            let b = random_density_matrix(d, &mut rng).unwrap();
            let mix = a.mix(&b, 0.3).unwrap();
            let lhs = teleport_channel(&w, &mix).unwrap();
            let rhs = teleport_channel(&w, &a)
                .unwrap()
                .mix(&teleport_channel(&w, &b).unwrap(), 0.3)
                .unwrap();
            assert!(lhs.matrix().max_abs_diff(rhs.matrix()) <= 1e-10);
        }
    }

    #[test]
    fn dimension_mismatch() {
        let w = werner_state(WernerParams::new(0.0, 2).unwrap()).unwrap();
        let rho = DensityMatrix::maximally_mixed(3).unwrap();
        assert!(matches!(
            teleport_channel(&w, &rho),
            Err(Error::DimensionMismatch { expected: 9, found: 4 })
        ));
    }

    #[test]
    fn covariance_defects() {
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        let rho = random_density_matrix(3, &mut rng).unwrap();
        let p = WernerParams::new(0.7, 3).unwrap();
        assert!(covariance_check(p, &ComplexMatrix::identity(3), &rho).unwrap() < 1e-15);
        let u = random_unitary(3, &mut rng);
        assert!(covariance_check(p, &u, &rho).unwrap() <= 1e-10);

        let x = HeisenbergWeylLabel::new(1, 0, 2).unwrap().unitary(2);
        let rho2 = random_density_matrix(2, &mut rng).unwrap();
        let p2 = WernerParams::new(-1.0, 2).unwrap();
        assert!(covariance_check(p2, &x, &rho2).unwrap() <= 1e-12);
    }

    #[test]
    fn covariance_rejects_non_unitary() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        let p = WernerParams::new(0.0, 2).unwrap();
        let bad = ComplexMatrix::identity(2).scale(2.0);
        assert!(matches!(covariance_check(p, &bad, &rho), Err(Error::NotUnitary(_))));
    }
}
