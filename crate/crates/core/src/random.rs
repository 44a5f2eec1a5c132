//! Seeded random states and unitaries for property checks.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{ComplexMatrix, DensityMatrix};

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// `G G^dagger / Tr(G G^dagger)` for a complex Ginibre matrix `G`.
pub fn random_density_matrix(dim: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    let g = ComplexMatrix::from_fn(dim, |_, _| gaussian(rng));
    let gg = (&g * &g.adjoint()).hermitian_part();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale(1.0 / tr))
}

/// Random pure state drawn from the unitarily invariant measure.
pub fn random_pure_state(dim: usize, rng: &mut impl Rng) -> Result<DensityMatrix> {
    let v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
    DensityMatrix::pure(&v)
}

/// Haar-random unitary: modified Gram-Schmidt on the columns of a complex
/// Gaussian matrix (the implied `R` factor has a positive diagonal).
pub fn random_unitary(dim: usize, rng: &mut impl Rng) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian(rng)).collect())
        .collect();
    for j in 0..dim {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let qk = &done[k];
            let proj: Complex64 = qk.iter().zip(rest[0].iter()).map(|(a, b)| a.conj() * b).sum();
            for (x, q) in rest[0].iter_mut().zip(qk) {
                *x -= proj * q;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in &mut cols[j] {
            *x /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, |i, j| cols[j][i])
}
