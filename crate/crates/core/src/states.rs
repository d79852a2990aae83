//! Superposition and measurement states, their local (reduced) states, and the
//! Schmidt form of a bipartite pure state.
//!
//! The measurement state pairs each system state `|s_i⟩` with an apparatus
//! "pointer" state `|a_i⟩`:
//!
//! ```text
//! |ψ⟩_SA = c₁|s₁⟩|a₁⟩ + c₂|s₂⟩|a₂⟩
//! ```
//!
//! With orthonormal pointers both local states are diagonal mixtures
//! `diag(|c₁|², |c₂|²)`. A pointer overlap `γ = ⟨a₁|a₂⟩ ≠ 0` leaves residual
//! coherence `c₁ c₂* γ*` in the off-diagonal of the system's local state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{self, outer, partial_trace, DensityOperator, Matrix, Side, StateVector, Svd};
use crate::qmath::{TOL_DEGENERATE, TOL_NORM};

/// Schmidt coefficients at or below this are dropped from the decomposition.
pub const SCHMIDT_RANK_CUTOFF: f64 = 1e-10;

/// Pure state of a two-part system with labelled local bases.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartitePureState {
    dims: (usize, usize),
    vector: StateVector,
    labels_s: Vec<String>,
    labels_a: Vec<String>,
}

impl BipartitePureState {
    /// Labels default to `s1, s2, …` and `a1, a2, …`.
    pub fn new(dims: (usize, usize), vector: StateVector) -> Result<Self> {
        let (ds, da) = dims;
        if ds == 0 || da == 0 {
            return Err(Error::ZeroDimension);
        }
        if ds * da != vector.dim() {
            return Err(Error::DimensionMismatch { expected: ds * da, found: vector.dim() });
        }
        Ok(Self {
            dims,
            vector,
            labels_s: (1..=ds).map(|i| format!("s{i}")).collect(),
            labels_a: (1..=da).map(|i| format!("a{i}")).collect(),
        })
    }

    pub fn with_labels(mut self, labels_s: Vec<String>, labels_a: Vec<String>) -> Result<Self> {
        if labels_s.len() != self.dims.0 {
            return Err(Error::DimensionMismatch { expected: self.dims.0, found: labels_s.len() });
        }
        if labels_a.len() != self.dims.1 {
            return Err(Error::DimensionMismatch { expected: self.dims.1, found: labels_a.len() });
        }
        self.labels_s = labels_s;
        self.labels_a = labels_a;
        Ok(self)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn vector(&self) -> &StateVector {
        &self.vector
    }

    pub fn labels(&self, side: Side) -> &[String] {
        match side {
            Side::S => &self.labels_s,
            Side::A => &self.labels_a,
        }
    }

    /// `M_ij` with `|ψ⟩ = Σ M_ij |i⟩_S |j⟩_A`.
    pub fn coefficient_matrix(&self) -> Matrix {
        Matrix::from_vec(self.dims.0, self.dims.1, self.vector.amps().to_vec())
    }
}

/// Overlap `γ = ⟨a₁|a₂⟩` between the two apparatus pointer states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorOverlap(Complex64);

impl DetectorOverlap {
    /// Perfectly distinguishing pointers.
    pub const ORTHOGONAL: DetectorOverlap = DetectorOverlap(Complex64::new(0.0, 0.0));
    /// Pointers that carry no information.
    pub const IDENTICAL: DetectorOverlap = DetectorOverlap(Complex64::new(1.0, 0.0));

    pub fn new(gamma: Complex64) -> Result<Self> {
        if !(gamma.re.is_finite() && gamma.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if gamma.norm() > 1.0 + 1e-12 {
            return Err(Error::OverlapOutOfRange(gamma.norm()));
        }
        Ok(Self(gamma))
    }

    pub fn real(gamma: f64) -> Result<Self> {
        Self::new(Complex64::new(gamma, 0.0))
    }

    pub fn value(self) -> Complex64 {
        self.0
    }

    pub fn magnitude(self) -> f64 {
        self.0.norm()
    }
}

/// `c₁|s₁⟩ + c₂|s₂⟩`.
pub fn make_superposition(c1: Complex64, c2: Complex64) -> Result<StateVector> {
    StateVector::new(vec![c1, c2])
}

/// `c₁|s₁⟩|a₁⟩ + c₂|s₂⟩|a₂⟩` in a 2×2 space with `⟨a₁|a₂⟩ = γ`.
///
/// The pointers are `|a₁⟩ = (1, 0)` and `|a₂⟩ = (γ, √(1-|γ|²))`.
pub fn make_measurement_state(c1: Complex64, c2: Complex64, overlap: DetectorOverlap) -> Result<BipartitePureState> {
    make_superposition(c1, c2)?;
    let gamma = overlap.value();
    let perp = (1.0 - gamma.norm_sqr()).max(0.0).sqrt();
    let amps = vec![c1, Complex64::new(0.0, 0.0), c2 * gamma, c2 * perp];
    BipartitePureState::new((2, 2), StateVector::new(amps)?)
}

/// Reduced density operator of one side.
pub fn local_state(psi: &BipartitePureState, side: Side) -> DensityOperator {
    partial_trace(&outer(psi.vector()), psi.dims(), side).expect("dims validated at construction")
}

/// ℓ₁ off-diagonal mass `Σ_{i≠j} |ρ_ij|` in the computational (pointer) basis.
pub fn coherence(rho: &DensityOperator) -> f64 {
    l1_offdiag(rho.matrix())
}

/// ℓ₁ coherence in the orthonormal basis given by the columns of `basis`.
pub fn coherence_in_basis(rho: &DensityOperator, basis: &Matrix) -> Result<f64> {
    if basis.rows() != rho.dim() || basis.cols() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: basis.rows() });
    }
    let dev = (&basis.adjoint() * basis).max_abs_diff(&Matrix::identity(rho.dim()));
    if dev > TOL_DEGENERATE {
        return Err(Error::NotUnitary(dev));
    }
    Ok(l1_offdiag(&(&(&basis.adjoint() * rho.matrix()) * basis)))
}

fn l1_offdiag(m: &Matrix) -> f64 {
    let n = m.rows();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                total += m[(i, j)].norm();
            }
        }
    }
    total
}

/// SVD of the coefficient matrix; the raw material of [`schmidt`].
pub fn svd_coeff_matrix(psi: &BipartitePureState) -> Svd {
    qmath::svd(&psi.coefficient_matrix())
}

/// `|ψ⟩ = Σ_k c_k |s_k⟩|a_k⟩` with descending `c_k > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm {
    pub coeffs: Vec<f64>,
    pub basis_s: Vec<StateVector>,
    pub basis_a: Vec<StateVector>,
    /// Two adjacent coefficients agree within 1e-9, so the bases are not unique.
    pub degenerate: bool,
}

impl SchmidtForm {
    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    /// Rebuilds the composite amplitudes (row-major, `i·d_A + j`).
    pub fn reconstruct(&self) -> Vec<Complex64> {
        let ds = self.basis_s.first().map_or(0, StateVector::dim);
        let da = self.basis_a.first().map_or(0, StateVector::dim);
        let mut out = vec![Complex64::new(0.0, 0.0); ds * da];
        for ((c, s), a) in self.coeffs.iter().zip(&self.basis_s).zip(&self.basis_a) {
            for (i, si) in s.amps().iter().enumerate() {
                for (j, aj) in a.amps().iter().enumerate() {
                    out[i * da + j] += si * aj * *c;
                }
            }
        }
        out
    }

    /// Largest amplitude error of [`reconstruct`](Self::reconstruct) against `psi`.
    pub fn reconstruction_error(&self, psi: &BipartitePureState) -> f64 {
        self.reconstruct()
            .iter()
            .zip(psi.vector().amps())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Schmidt decomposition.
///
/// Each `|s_k⟩` is rephased so its first non-negligible component is real and
/// positive; the conjugate phase goes into `|a_k⟩`, so the reconstruction matches
/// `psi` exactly rather than up to a phase.
pub fn schmidt(psi: &BipartitePureState) -> SchmidtForm {
    let svd = svd_coeff_matrix(psi);
    let (ds, da) = psi.dims();
    let mut coeffs = Vec::new();
    let mut basis_s = Vec::new();
    let mut basis_a = Vec::new();
    for (k, &sigma) in svd.values.iter().enumerate() {
        if sigma <= SCHMIDT_RANK_CUTOFF {
            continue;
        }
        let mut s: Vec<Complex64> = (0..ds).map(|i| svd.left[(i, k)]).collect();
        let mut a: Vec<Complex64> = (0..da).map(|j| svd.right[(j, k)].conj()).collect();
        if let Some(lead) = s.iter().find(|z| z.norm() > TOL_DEGENERATE) {
            let phase = lead.conj() / lead.norm();
            s.iter_mut().for_each(|z| *z *= phase);
            a.iter_mut().for_each(|z| *z /= phase);
        }
        coeffs.push(sigma);
        basis_s.push(StateVector::from_amps_unchecked(s));
        basis_a.push(StateVector::from_amps_unchecked(a));
    }
    let degenerate = coeffs.windows(2).any(|w| (w[0] - w[1]).abs() < TOL_DEGENERATE);
    SchmidtForm { coeffs, basis_s, basis_a, degenerate }
}

/// Equal Schmidt coefficients: the local states are multiples of the identity on
/// the support and their eigenbases are not unique.
pub fn is_basis_ambiguous(psi: &BipartitePureState) -> bool {
    schmidt(psi).degenerate
}

/// Overlap after `n` environment collisions, each multiplying it by `γ₀`.
pub fn collision_decoherence(gamma0: DetectorOverlap, n: u32) -> DetectorOverlap {
    DetectorOverlap(gamma0.value().powu(n))
}

/// `|c₁|² + |c₂|²` deviation check shared by callers that take raw coefficients.
pub(crate) fn check_coefficients(c1: Complex64, c2: Complex64) -> Result<()> {
    let dev = (c1.norm_sqr() + c2.norm_sqr() - 1.0).abs();
    if !dev.is_finite() {
        Err(Error::NonFinite)
    } else if dev > TOL_NORM {
        Err(Error::NotNormalized(dev))
    } else {
        Ok(())
    }
}
