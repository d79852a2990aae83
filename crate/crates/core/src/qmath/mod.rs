//! Dense complex linear algebra for small composite systems.
//!
//! Composite indices are row-major: basis state `|i⟩_S |j⟩_A` sits at `i·d_A + j`.

mod decomp;
mod density;
mod matrix;
mod state;

use serde::{Deserialize, Serialize};

pub use decomp::{hermitian_eigenvalues, svd, Svd, SVD_ZERO};
pub use density::{outer, partial_trace, purity, validate, DensityOperator, ValidityReport};
pub use matrix::Matrix;
pub use num_complex::Complex64;
pub use state::{tensor, StateVector};

/// Amplitudes are plain `Complex64`.
pub type ComplexAmplitude = Complex64;

/// Largest supported Hilbert-space dimension.
pub const MAX_DIM: usize = 64;

pub const TOL_NORM: f64 = 1e-9;
pub const TOL_HERM: f64 = 1e-9;
pub const TOL_TRACE: f64 = 1e-9;
pub const TOL_PSD: f64 = 1e-10;
/// Orthonormality and degeneracy checks share this tolerance.
pub const TOL_DEGENERATE: f64 = 1e-9;

/// One half of the system/apparatus (or photon S/photon A) split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    S,
    A,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::S => Side::A,
            Side::A => Side::S,
        }
    }
}
