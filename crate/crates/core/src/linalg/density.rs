use super::eigen::{eigh, EigenDecomposition, HERMITIAN_TOL};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues below `-PSD_TOL` reject a candidate state; those in
/// `[-PSD_TOL, 0)` are clamped to zero.
pub const PSD_TOL: f64 = 1e-10;

/// A validated density matrix: Hermitian, unit trace, positive semi-definite.
///
/// The spectral decomposition computed during validation is kept, with
/// slightly negative eigenvalues already clamped to zero.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spectrum: EigenDecomposition,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if defect > HERMITIAN_TOL {
            return Err(Error::NonHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::NotUnitTrace(tr.re));
        }
        let mut spectrum = eigh(&matrix)?;
        if let Some(&min) = spectrum.eigenvalues.first() {
            if min < -PSD_TOL {
                return Err(Error::NotPositive(min));
            }
        }
        for x in &mut spectrum.eigenvalues {
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        Ok(Self { matrix, spectrum })
    }

    /// Normalized projector onto a (not necessarily normalized) vector.
    pub fn pure(v: &[num_complex::Complex64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm <= 0.0 {
            return Err(Error::param("norm", norm, "pure state vector must be non-zero"));
        }
        Self::new(ComplexMatrix::outer(v).scale(1.0 / norm))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn spectrum(&self) -> &EigenDecomposition {
        &self.spectrum
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum.eigenvalues
    }

    pub fn transpose(&self) -> Result<Self> {
        Self::new(self.matrix.transpose())
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Self::new(self.matrix.kron(&other.matrix)?)
    }

    /// `p ρ + (1 - p) σ`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param("p", p, "mixing weight must lie in [0, 1]"));
        }
        ensure_same_dim(self, other)?;
        Self::new(&self.matrix.scale(p) + &other.matrix.scale(1.0 - p))
    }
}

impl PartialEq for DensityMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.matrix == other.matrix
    }
}

pub(crate) fn ensure_same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(())
}

/// `(A ⊗ B)` for plain matrices, with the default dimension cap.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.kron(b)
}

/// Transpose on the second factor of a bipartite state of local dimension `d`.
pub fn partial_transpose(state: &DensityMatrix, d: usize) -> Result<ComplexMatrix> {
    state.matrix().partial_transpose(d)
}
