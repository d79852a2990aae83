use num_complex::Complex64;

use super::{MAX_DIM, TOL_NORM};
use crate::error::{Error, Result};

/// Normalized pure state of fixed dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Validates finiteness, dimension cap and normalization (`|Σ|a_k|² - 1| ≤ 1e-9`).
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        check_dim(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let dev = (norm_sqr(&amps) - 1.0).abs();
        if dev > TOL_NORM {
            return Err(Error::NotNormalized(dev));
        }
        Ok(Self { amps })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amps: Vec<Complex64>) -> Result<Self> {
        let n = norm_sqr(&amps).sqrt();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::NotNormalized(f64::NAN));
        }
        Self::new(amps.into_iter().map(|z| z / n).collect())
    }

    /// Computational basis vector `|index⟩` in `dim` dimensions.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        check_dim(dim)?;
        if index >= dim {
            return Err(Error::DimensionMismatch { expected: dim, found: index + 1 });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amps })
    }

    /// Skips validation; callers guarantee the invariants hold.
    pub(crate) fn from_amps_unchecked(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Born-rule probabilities in the computational basis.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }
}

/// Composite state with `amps[i * w.dim + j] = v_i * w_j`.
pub fn tensor(v: &StateVector, w: &StateVector) -> Result<StateVector> {
    let dim = v.dim().checked_mul(w.dim()).ok_or(Error::DimensionTooLarge(usize::MAX))?;
    check_dim(dim)?;
    let amps = v
        .amps
        .iter()
        .flat_map(|a| w.amps.iter().map(move |b| a * b))
        .collect();
    Ok(StateVector { amps })
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        Err(Error::ZeroDimension)
    } else if dim > MAX_DIM {
        Err(Error::DimensionTooLarge(dim))
    } else {
        Ok(())
    }
}

fn norm_sqr(amps: &[Complex64]) -> f64 {
    amps.iter().map(|z| z.norm_sqr()).sum()
}
