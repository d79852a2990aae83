//! Drivers for the two-photon interferometer and the which-path experiments.
//!
//! Every number here comes out of the circuit or the reduced density operator;
//! the cosine law and the `2|c₁c₂γ|` visibility are results, checked against
//! closed forms only in tests.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{build_rto_circuit, PhaseSettings};
use crate::qmath::{tensor, Side};
use crate::states::{check_coefficients, local_state, make_measurement_state, make_superposition, DetectorOverlap};

const TOL_PROB: f64 = 1e-12;

/// `c₁ = c₂ = 1/√2`.
pub const EQUAL_WEIGHT: Complex64 = Complex64::new(FRAC_1_SQRT_2, 0.0);

/// Slack on the classical bound, so `S = 2` up to rounding is not a violation.
pub const CHSH_TOLERANCE: f64 = 1e-9;

/// `(a, a′, b, b′)` maximizing the CHSH value for the equal-weight state.
pub const CHSH_OPTIMAL_ANGLES: [f64; 4] = [0.0, FRAC_PI_2, FRAC_PI_4, -FRAC_PI_4];

/// Coincidence probabilities; `p_xy` is S at detector `x` and A at detector `y`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
}

impl JointDistribution {
    /// Each entry in `[0, 1]` and the total within 1e-12 of 1.
    pub fn new(p11: f64, p12: f64, p21: f64, p22: f64) -> Result<Self> {
        let d = Self { p11, p12, p21, p22 };
        d.check()?;
        Ok(d)
    }

    pub fn check(&self) -> Result<()> {
        let ps = self.as_array();
        if ps.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidDistribution("non-finite probability".into()));
        }
        if let Some(p) = ps.iter().find(|&&p| !(-TOL_PROB..=1.0 + TOL_PROB).contains(&p)) {
            return Err(Error::InvalidDistribution(format!("probability {p} outside [0, 1]")));
        }
        let total: f64 = ps.iter().sum();
        if (total - 1.0).abs() > TOL_PROB {
            return Err(Error::InvalidDistribution(format!("probabilities sum to {total}")));
        }
        Ok(())
    }

    /// Outcomes in the fixed order 11, 12, 21, 22.
    pub fn as_array(&self) -> [f64; 4] {
        [self.p11, self.p12, self.p21, self.p22]
    }

    pub fn agreement(&self) -> f64 {
        self.p11 + self.p22
    }

    pub fn disagreement(&self) -> f64 {
        self.p12 + self.p21
    }

    pub fn correlation(&self) -> CorrelationValue {
        CorrelationValue(self.agreement() - self.disagreement())
    }

    /// `(P(detector 1), P(detector 2))` on one side.
    pub fn marginal(&self, side: Side) -> (f64, f64) {
        match side {
            Side::S => (self.p11 + self.p12, self.p21 + self.p22),
            Side::A => (self.p11 + self.p21, self.p12 + self.p22),
        }
    }
}

/// Correlation `E = P(agree) - P(disagree)` in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct CorrelationValue(pub f64);

impl CorrelationValue {
    pub fn value(self) -> f64 {
        self.0
    }

    /// `(1 + E) / 2`.
    pub fn agreement_probability(self) -> f64 {
        (1.0 + self.0) / 2.0
    }
}

/// Born-rule coincidence distribution of the ideal measurement state behind the
/// interferometer.
pub fn rto_joint(settings: PhaseSettings, c1: Complex64, c2: Complex64) -> Result<JointDistribution> {
    let ms = make_measurement_state(c1, c2, DetectorOverlap::ORTHOGONAL)?;
    let out = build_rto_circuit(settings).apply(ms.vector())?;
    let p = out.probabilities();
    Ok(JointDistribution { p11: p[0], p12: p[1], p21: p[2], p22: p[3] })
}

pub fn rto_correlation(settings: PhaseSettings, c1: Complex64, c2: Complex64) -> Result<CorrelationValue> {
    Ok(rto_joint(settings, c1, c2)?.correlation())
}

/// Singles `(p1, p2)` of one photon, marginalized from the coincidences.
pub fn singles_marginals(settings: PhaseSettings, c1: Complex64, c2: Complex64, side: Side) -> Result<(f64, f64)> {
    Ok(rto_joint(settings, c1, c2)?.marginal(side))
}

/// The four correlations and CHSH value for analyzer settings `(a, a′)` on S and `(b, b′)` on A.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChshTerms {
    pub angles: [f64; 4],
    /// `E(a,b), E(a,b′), E(a′,b), E(a′,b′)`.
    pub correlations: [f64; 4],
    pub s: f64,
}

impl ChshTerms {
    /// `|S| > 2` by more than rounding noise.
    pub fn violates(&self) -> bool {
        self.s.abs() > 2.0 + CHSH_TOLERANCE
    }
}

pub fn chsh_terms(a: f64, a_prime: f64, b: f64, b_prime: f64, c1: Complex64, c2: Complex64) -> Result<ChshTerms> {
    let e = |x: f64, y: f64| -> Result<f64> { Ok(rto_correlation(PhaseSettings::new(x, y)?, c1, c2)?.value()) };
    let correlations = [e(a, b)?, e(a, b_prime)?, e(a_prime, b)?, e(a_prime, b_prime)?];
    let s = correlations[0] + correlations[1] + correlations[2] - correlations[3];
    Ok(ChshTerms { angles: [a, a_prime, b, b_prime], correlations, s })
}

/// `S = E(a,b) + E(a,b′) + E(a′,b) - E(a′,b′)` for the equal-weight state, with `φ_S`
/// playing the `a` analyzer and `φ_A` the `b` analyzer.
pub fn chsh(a: f64, a_prime: f64, b: f64, b_prime: f64) -> Result<f64> {
    Ok(chsh_terms(a, a_prime, b, b_prime, EQUAL_WEIGHT, EQUAL_WEIGHT)?.s)
}

/// Screen fringe visibility of S when entangled with a detector of overlap `γ`,
/// read off the off-diagonal of the system's local state.
pub fn fringe_visibility(gamma: DetectorOverlap, c1: Complex64, c2: Complex64) -> Result<f64> {
    let ms = make_measurement_state(c1, c2, gamma)?;
    Ok(2.0 * local_state(&ms, Side::S).entry(0, 1).norm())
}

/// Induced-coherence barrier scan: the remote photon acts as a which-slit
/// detector whose overlap equals the barrier transmission.
///
/// Only the endpoints (0: barrier in, 1: barrier out) correspond to the
/// experiment; the linear interior is a model extension.
pub fn zwm_scan(barrier_transmission: f64, c1: Complex64, c2: Complex64) -> Result<f64> {
    if !(0.0..=1.0).contains(&barrier_transmission) {
        return Err(Error::TransmissionOutOfRange(barrier_transmission));
    }
    fringe_visibility(DetectorOverlap::real(barrier_transmission)?, c1, c2)
}

/// Detector-1 probabilities `(S, A)` for unentangled photons, each in
/// `(|solid⟩ + |dashed⟩)/√2`, through the same circuit.
pub fn unentangled_control(settings: PhaseSettings) -> Result<(f64, f64)> {
    let single = make_superposition(EQUAL_WEIGHT, EQUAL_WEIGHT)?;
    let product = tensor(&single, &single)?;
    let p = build_rto_circuit(settings).apply(&product)?.probabilities();
    let joint = JointDistribution { p11: p[0], p12: p[1], p21: p[2], p22: p[3] };
    Ok((joint.marginal(Side::S).0, joint.marginal(Side::A).0))
}

/// `(I_max - I_min) / (I_max + I_min)` of a sampled intensity curve.
pub fn sweep_visibility(intensities: &[f64]) -> f64 {
    let max = intensities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = intensities.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min <= 0.0 {
        0.0
    } else {
        (max - min) / (max + min)
    }
}

/// `points` evenly spaced values from `start` to `stop` inclusive; one point gives `[start]`.
pub fn phase_grid(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        n => (0..n).map(|k| start + (stop - start) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Coefficient validation for callers holding raw `(c₁, c₂)`.
pub fn check_amplitudes(c1: Complex64, c2: Complex64) -> Result<()> {
    check_coefficients(c1, c2)
}
