//! Two-mode linear optics and the two-photon "double double-slit" interferometer.
//!
//! Each photon travels a solid and a dashed path (mode 0 and mode 1). Composite
//! modes are ordered `(S solid, S dashed) ⊗ (A solid, A dashed)`, and detector 1
//! of each photon is output port 0 of its beam splitter.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{Matrix, Side, StateVector};

/// Solid path / detector 1 index.
pub const SOLID: usize = 0;
/// Dashed path / detector 2 index.
pub const DASHED: usize = 1;

/// Fixed phase added to the S solid branch so that equal settings give
/// correlation +1. With the symmetric beam splitter used here the bare circuit
/// has correlation `-cos(φ_S - φ_A)`; a half-wave offset flips it.
pub const CALIBRATION_OFFSET: f64 = PI;

const TOL_UNITARY: f64 = 1e-9;

/// Unitary acting on optical path modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    m: Matrix,
}

impl ModeUnitary {
    /// Accepts `m` if `max |U†U - I| ≤ 1e-9`.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch { expected: m.rows(), found: m.cols() });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let dev = unitarity_deviation(&m);
        if dev > TOL_UNITARY {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { m })
    }

    pub fn identity(dim: usize) -> Self {
        Self { m: Matrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    /// `next · self`: apply `self` first, then `next`.
    pub fn then(&self, next: &ModeUnitary) -> ModeUnitary {
        assert_eq!(self.dim(), next.dim(), "composing unitaries of different size");
        ModeUnitary { m: &next.m * &self.m }
    }

    pub fn kron(&self, other: &ModeUnitary) -> ModeUnitary {
        ModeUnitary { m: self.m.kron(&other.m) }
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if v.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.dim() });
        }
        Ok(StateVector::from_amps_unchecked(self.m.apply(v.amps())))
    }

    pub fn unitarity_deviation(&self) -> f64 {
        unitarity_deviation(&self.m)
    }
}

fn unitarity_deviation(m: &Matrix) -> f64 {
    (&m.adjoint() * m).max_abs_diff(&Matrix::identity(m.rows()))
}

/// Local phase settings of the two photons, in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseSettings {
    pub phi_s: f64,
    pub phi_a: f64,
}

impl PhaseSettings {
    pub fn new(phi_s: f64, phi_a: f64) -> Result<Self> {
        if !(phi_s.is_finite() && phi_a.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { phi_s, phi_a })
    }

    /// Both phases reduced to `[0, 2π)`. For display only.
    pub fn canonical(&self) -> (f64, f64) {
        (canonical_phase(self.phi_s), canonical_phase(self.phi_a))
    }

    pub fn difference(&self) -> f64 {
        self.phi_s - self.phi_a
    }

    pub fn get(&self, side: Side) -> f64 {
        match side {
            Side::S => self.phi_s,
            Side::A => self.phi_a,
        }
    }
}

pub fn canonical_phase(phi: f64) -> f64 {
    let r = phi.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Symmetric 50/50 splitter `(1/√2)[[1, i], [i, 1]]`.
pub fn beam_splitter_5050() -> ModeUnitary {
    let t = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let r = Complex64::new(0.0, FRAC_1_SQRT_2);
    ModeUnitary { m: Matrix::from_rows(&[vec![t, r], vec![r, t]]) }
}

/// Multiplies the amplitude on `branch` of a two-mode system by `e^{iφ}`.
pub fn phase_shifter(phi: f64, branch: usize) -> Result<ModeUnitary> {
    if !phi.is_finite() {
        return Err(Error::NonFinite);
    }
    if branch > 1 {
        return Err(Error::DimensionMismatch { expected: 2, found: branch + 1 });
    }
    let mut d = [Complex64::new(1.0, 0.0); 2];
    d[branch] = Complex64::from_polar(1.0, phi);
    Ok(ModeUnitary { m: Matrix::diag(&d) })
}

/// Mirrors carry no phase of their own; any fixed mirror phase is absorbed by
/// [`CALIBRATION_OFFSET`].
pub fn mirror() -> ModeUnitary {
    ModeUnitary::identity(2)
}

/// `u ⊗ I` (side S) or `I ⊗ u` (side A) on a `(d_S, d_A)` mode space.
pub fn embed_local(u: &ModeUnitary, side: Side, dims: (usize, usize)) -> Result<ModeUnitary> {
    let (ds, da) = dims;
    let (expected, other) = match side {
        Side::S => (ds, da),
        Side::A => (da, ds),
    };
    if u.dim() != expected {
        return Err(Error::DimensionMismatch { expected, found: u.dim() });
    }
    let id = ModeUnitary::identity(other);
    Ok(match side {
        Side::S => u.kron(&id),
        Side::A => id.kron(u),
    })
}

/// The full two-photon circuit for one pair of settings.
///
/// Photon S gets `φ_S` (plus [`CALIBRATION_OFFSET`]) on its solid path, photon A
/// gets `φ_A` on its dashed path; then each photon meets its own beam splitter.
/// The two measurement-state branches therefore pick up relative phase
/// `φ_S - φ_A`.
pub fn build_rto_circuit(settings: PhaseSettings) -> ModeUnitary {
    let dims = (2, 2);
    let phase_s = phase_shifter(settings.phi_s + CALIBRATION_OFFSET, SOLID).expect("finite settings");
    let phase_a = phase_shifter(settings.phi_a, DASHED).expect("finite settings");
    let bs = beam_splitter_5050();
    let m = mirror();
    let local_s = phase_s.then(&m).then(&bs);
    let local_a = phase_a.then(&m).then(&bs);
    embed_local(&local_s, Side::S, dims)
        .expect("two modes")
        .then(&embed_local(&local_a, Side::A, dims).expect("two modes"))
}

/// Same circuit for one photon alone: a Mach–Zehnder with the side's phase.
pub fn single_photon_circuit(phi: f64, side: Side) -> Result<ModeUnitary> {
    let shifter = match side {
        Side::S => phase_shifter(phi + CALIBRATION_OFFSET, SOLID)?,
        Side::A => phase_shifter(phi, DASHED)?,
    };
    Ok(shifter.then(&mirror()).then(&beam_splitter_5050()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn beam_splitter_balances_and_swaps() {
        let bs = beam_splitter_5050();
        assert!(bs.unitarity_deviation() < 1e-12);
        let out = bs.apply(&StateVector::basis(2, 0).unwrap()).unwrap().probabilities();
        assert!((out[0] - 0.5).abs() < 1e-15 && (out[1] - 0.5).abs() < 1e-15);
        // BS·BS = [[0, i], [i, 0]] by direct product
        let twice = bs.then(&bs);
        let oracle = Matrix::from_rows(&[vec![c(0.0, 0.0), c(0.0, 1.0)], vec![c(0.0, 1.0), c(0.0, 0.0)]]);
        assert!(twice.matrix().max_abs_diff(&oracle) < 1e-15);
        let p = twice.apply(&StateVector::basis(2, 0).unwrap()).unwrap().probabilities();
        assert!(p[0].abs() < 1e-15 && (p[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn phase_shifter_examples() {
        assert_eq!(phase_shifter(0.0, 0).unwrap(), ModeUnitary::identity(2));
        let plus = StateVector::new(vec![c(FRAC_1_SQRT_2, 0.0); 2]).unwrap();
        let flipped = phase_shifter(PI, 1).unwrap().apply(&plus).unwrap();
        assert!((flipped.amps()[0] - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((flipped.amps()[1] - c(-FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!(phase_shifter(1.0, 2).is_err());
        assert_eq!(phase_shifter(f64::INFINITY, 0), Err(Error::NonFinite));
    }

    #[test]
    fn embedding_matches_tensor_oracle() {
        let id = ModeUnitary::identity(2);
        assert_eq!(embed_local(&id, Side::S, (2, 2)).unwrap(), ModeUnitary::identity(4));

        let bs = beam_splitter_5050();
        let embedded = embed_local(&bs, Side::S, (2, 2)).unwrap();
        let b = bs.matrix();
        for r in 0..4 {
            for col in 0..4 {
                let oracle = if r % 2 == col % 2 { b[(r / 2, col / 2)] } else { c(0.0, 0.0) };
                assert_eq!(embedded.matrix()[(r, col)], oracle);
            }
        }
        assert!(embed_local(&bs, Side::A, (2, 3)).is_err());
        assert_eq!(embed_local(&ModeUnitary::identity(3), Side::A, (2, 3)).unwrap().dim(), 6);
    }

    #[test]
    fn local_phases_commute() {
        let ps = embed_local(&phase_shifter(0.7, 0).unwrap(), Side::S, (2, 2)).unwrap();
        let pa = embed_local(&phase_shifter(-1.9, 1).unwrap(), Side::A, (2, 2)).unwrap();
        assert!(ps.then(&pa).matrix().max_abs_diff(pa.then(&ps).matrix()) < 1e-12);
    }

    #[test]
    fn circuit_is_unitary() {
        for (x, y) in [(0.0, 0.0), (1.0, -2.0), (PI / 2.0, PI / 2.0), (5.5, 0.1)] {
            let u = build_rto_circuit(PhaseSettings::new(x, y).unwrap());
            assert!(u.unitarity_deviation() < 1e-12);
            assert!(ModeUnitary::new(u.matrix().clone()).is_ok());
        }
    }

    #[test]
    fn rejects_non_unitary() {
        let m = Matrix::identity(2).scale(c(1.1, 0.0));
        assert!(matches!(ModeUnitary::new(m), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn canonical_phases() {
        let s = PhaseSettings::new(-PI / 2.0, 5.0 * PI).unwrap();
        let (a, b) = s.canonical();
        assert!((a - 1.5 * PI).abs() < 1e-12 && (b - PI).abs() < 1e-12);
        assert!(PhaseSettings::new(f64::NAN, 0.0).is_err());
    }
}
