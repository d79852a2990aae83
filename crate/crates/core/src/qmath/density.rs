use num_complex::Complex64;
use serde::Serialize;

use super::state::check_dim;
use super::{hermitian_eigenvalues, Matrix, Side, StateVector, TOL_HERM, TOL_PSD, TOL_TRACE};
use crate::error::{Error, Result};

/// Hermitian, unit-trace, positive-semidefinite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    m: Matrix,
}

impl DensityOperator {
    /// Accepts `entries` only if [`validate`] reports it valid.
    pub fn new(entries: Matrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch { expected: entries.rows(), found: entries.cols() });
        }
        check_dim(entries.rows())?;
        if !entries.is_finite() {
            return Err(Error::NonFinite);
        }
        let report = validate(&entries);
        if !report.is_valid() {
            return Err(Error::InvalidDensity(report.summary()));
        }
        Ok(Self { m: entries })
    }

    /// `(1/dim)·I`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { m: Matrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0)) })
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Diagonal (populations) in the computational basis.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.m[(i, i)].re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }
}

/// `|v⟩⟨v|`.
pub fn outer(v: &StateVector) -> DensityOperator {
    let a = v.amps();
    DensityOperator { m: Matrix::from_fn(a.len(), a.len(), |i, j| a[i] * a[j].conj()) }
}

/// Traces out the subsystem not named by `keep`.
///
/// Composite indices follow `i·d_A + j` with `i` on S and `j` on A.
pub fn partial_trace(rho: &DensityOperator, dims: (usize, usize), keep: Side) -> Result<DensityOperator> {
    let (ds, da) = dims;
    if ds == 0 || da == 0 {
        return Err(Error::ZeroDimension);
    }
    if ds * da != rho.dim() {
        return Err(Error::DimensionMismatch { expected: ds * da, found: rho.dim() });
    }
    let r = &rho.m;
    let m = match keep {
        Side::S => Matrix::from_fn(ds, ds, |i, k| (0..da).map(|j| r[(i * da + j, k * da + j)]).sum()),
        Side::A => Matrix::from_fn(da, da, |j, l| (0..ds).map(|i| r[(i * da + j, i * da + l)]).sum()),
    };
    Ok(DensityOperator { m })
}

/// `Tr(ρ²)`, in `[1/dim, 1]` for a valid operator.
pub fn purity(rho: &DensityOperator) -> f64 {
    // Tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
    rho.m.as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// Deviations of a square matrix from the density-operator invariants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidityReport {
    pub dim: usize,
    /// `max |ρ - ρ†|`.
    pub hermiticity_deviation: f64,
    /// `|Tr ρ - 1|`.
    pub trace_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub hermitian: bool,
    pub unit_trace: bool,
    pub positive: bool,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.hermitian && self.unit_trace && self.positive
    }

    pub fn summary(&self) -> String {
        let mut parts = Vec::new();
        if !self.hermitian {
            parts.push(format!("hermiticity deviation {:e}", self.hermiticity_deviation));
        }
        if !self.unit_trace {
            parts.push(format!("trace deviation {:e}", self.trace_deviation));
        }
        if !self.positive {
            parts.push(format!("min eigenvalue {:e}", self.min_eigenvalue));
        }
        if parts.is_empty() {
            "valid".to_string()
        } else {
            parts.join(", ")
        }
    }
}

/// Checks Hermiticity (1e-9), unit trace (1e-9) and positivity (min eigenvalue ≥ -1e-10).
///
/// A non-square input reports every check as failed with infinite deviations.
pub fn validate(m: &Matrix) -> ValidityReport {
    if !m.is_square() || !m.is_finite() {
        return ValidityReport {
            dim: m.rows(),
            hermiticity_deviation: f64::INFINITY,
            trace_deviation: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
            hermitian: false,
            unit_trace: false,
            positive: false,
        };
    }
    let herm = m.max_abs_diff(&m.adjoint());
    let tr = (m.trace() - Complex64::new(1.0, 0.0)).norm();
    let min_eig = hermitian_eigenvalues(m).first().copied().unwrap_or(0.0);
    ValidityReport {
        dim: m.rows(),
        hermiticity_deviation: herm,
        trace_deviation: tr,
        min_eigenvalue: min_eig,
        hermitian: herm <= TOL_HERM,
        unit_trace: tr <= TOL_TRACE,
        positive: min_eig >= -TOL_PSD,
    }
}
