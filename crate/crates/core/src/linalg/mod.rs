//! Dense complex Hermitian linear algebra and the matrix-level oracle metrics.

mod density;
mod eigen;
mod matrix;
mod metrics;

pub use density::{partial_transpose, tensor_product, DensityMatrix, PSD_TOL, TRACE_TOL};
pub use eigen::{eigh, EigenDecomposition, HERMITIAN_TOL, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{ComplexMatrix, DEFAULT_DIM_CAP};
pub use metrics::{
    bures_fidelity_numeric, qcb_numeric, relative_entropy_numeric, trace_distance_numeric,
    ChernoffCurve, NumericQcb, SUPPORT_EPS,
};
