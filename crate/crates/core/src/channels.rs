//! Holevo-Werner and depolarizing channels, and their Choi matrices.
//!
//! Channels are parameter records plus a linear action on operators. The
//! action is defined on arbitrary (not only unit-trace) operators so that the
//! Choi matrix can be assembled from `E(|i><j|)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};
use crate::states::{IsotropicParams, WernerParams};

/// A linear map on `d x d` operators.
pub trait Channel {
    fn input_dim(&self) -> usize;

    /// The channel's linear extension applied to an arbitrary operator.
    fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix;

    fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_input(self.input_dim(), rho)?;
        DensityMatrix::new(self.apply_operator(rho.matrix()))
    }
}

fn check_input(d: usize, rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: rho.dim(),
        });
    }
    Ok(())
}

/// `[(d - c) Tr(X) 𝕀 + (d c - 1) Y] / (d² - 1)` with `Y` either `X` or `X^T`.
fn affine_mix(d: usize, c: f64, x: &ComplexMatrix, y: &ComplexMatrix) -> ComplexMatrix {
    let df = d as f64;
    let norm = df * df - 1.0;
    let tr = x.trace();
    let id_coeff = tr * ((df - c) / norm);
    let y_coeff = (df * c - 1.0) / norm;
    ComplexMatrix::from_fn(d, |i, j| {
        let id = if i == j { id_coeff } else { Complex64::new(0.0, 0.0) };
        id + y[(i, j)] * y_coeff
    })
}

/// The Holevo-Werner channel `ρ ↦ [(d - η) 𝕀 + (dη - 1) ρ^T] / (d² - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolevoWerner(pub WernerParams);

impl Channel for HolevoWerner {
    fn input_dim(&self) -> usize {
        self.0.d()
    }

    fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        affine_mix(self.0.d(), self.0.eta(), x, &x.transpose())
    }
}

/// The depolarizing channel `ρ ↦ [(d - α) 𝕀 + (dα - 1) ρ] / (d² - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Depolarizing(pub IsotropicParams);

impl Channel for Depolarizing {
    fn input_dim(&self) -> usize {
        self.0.d()
    }

    fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        affine_mix(self.0.d(), self.0.alpha(), x, x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityChannel(pub usize);

impl Channel for IdentityChannel {
    fn input_dim(&self) -> usize {
        self.0
    }

    fn apply_operator(&self, x: &ComplexMatrix) -> ComplexMatrix {
        x.clone()
    }
}

pub fn hw_channel_apply(params: WernerParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    HolevoWerner(params).apply(rho)
}

pub fn depolarizing_apply(params: IsotropicParams, rho: &DensityMatrix) -> Result<DensityMatrix> {
    Depolarizing(params).apply(rho)
}

/// `χ_E = (𝐈 ⊗ E)(|Φ><Φ|)`, the channel acting on the second factor.
pub fn choi_matrix(channel: &dyn Channel, d: usize) -> Result<DensityMatrix> {
    if channel.input_dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: channel.input_dim(),
        });
    }
    let mut chi = ComplexMatrix::zeros(d * d);
    let inv_d = 1.0 / d as f64;
    for i in 0..d {
        for j in 0..d {
            let mut unit = ComplexMatrix::zeros(d);
            unit[(i, j)] = Complex64::new(1.0, 0.0);
            let out = channel.apply_operator(&unit);
            for k in 0..d {
                for l in 0..d {
                    chi[(i * d + k, j * d + l)] = out[(k, l)] * inv_d;
                }
            }
        }
    }
    DensityMatrix::new(chi)
}
