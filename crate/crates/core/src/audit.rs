//! No-signaling auditor.
//!
//! One side's singles are recomputed (or resampled) at every remote phase
//! setting on a grid; if they move, the remote observer could signal by turning
//! a phase shifter. The exact audit allows 1e-12 of drift, the sampled audit 5
//! pooled standard errors.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{rto_joint, JointDistribution};
use crate::optics::PhaseSettings;
use crate::qmath::Side;
use crate::stochastics::sample_events_on_stream;

pub const EXACT_TOLERANCE: f64 = 1e-12;
/// In units of the pooled standard error of a difference of two proportions.
pub const SAMPLED_TOLERANCE_SIGMA: f64 = 5.0;
pub const MIN_TRIALS_PER_POINT: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditMode {
    Exact,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    /// The side whose local statistics were audited.
    pub side: Side,
    pub local_phase: f64,
    /// Remote phase settings.
    pub grid: Vec<f64>,
    /// Detector-1 probability (exact) or frequency (sampled) at each grid point.
    pub marginals: Vec<f64>,
    pub max_deviation: f64,
    pub mode: AuditMode,
    pub tolerance: f64,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials_per_point: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn verdict(max_deviation: f64, tolerance: f64) -> Verdict {
    if max_deviation <= tolerance {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

fn settings_for(side: Side, local_phase: f64, remote: f64) -> Result<PhaseSettings> {
    match side {
        Side::S => PhaseSettings::new(local_phase, remote),
        Side::A => PhaseSettings::new(remote, local_phase),
    }
}

/// Exact audit of the interferometer with the ideal measurement state.
pub fn audit_exact(side: Side, local_phase: f64, remote_grid: &[f64], c1: Complex64, c2: Complex64) -> Result<AuditReport> {
    audit_exact_with(side, local_phase, remote_grid, |remote| {
        rto_joint(settings_for(side, local_phase, remote)?, c1, c2)
    })
}

/// Exact audit of an arbitrary joint distribution indexed by remote phase.
pub fn audit_exact_with<F>(side: Side, local_phase: f64, remote_grid: &[f64], source: F) -> Result<AuditReport>
where
    F: Fn(f64) -> Result<JointDistribution>,
{
    if remote_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let marginals: Vec<(f64, f64)> = remote_grid
        .iter()
        .map(|&r| source(r).map(|d| d.marginal(side)))
        .collect::<Result<_>>()?;
    let mut max_deviation: f64 = 0.0;
    for (k, a) in marginals.iter().enumerate() {
        for b in &marginals[k + 1..] {
            max_deviation = max_deviation.max((a.0 - b.0).abs()).max((a.1 - b.1).abs());
        }
    }
    Ok(AuditReport {
        side,
        local_phase,
        grid: remote_grid.to_vec(),
        marginals: marginals.iter().map(|m| m.0).collect(),
        max_deviation,
        mode: AuditMode::Exact,
        tolerance: EXACT_TOLERANCE,
        verdict: verdict(max_deviation, EXACT_TOLERANCE),
        trials_per_point: None,
        seed: None,
    })
}

/// Sampled audit with the local phase at 0.
pub fn audit_sampled(
    side: Side,
    remote_grid: &[f64],
    trials_per_point: u64,
    seed: u64,
    c1: Complex64,
    c2: Complex64,
) -> Result<AuditReport> {
    audit_sampled_at(side, 0.0, remote_grid, trials_per_point, seed, c1, c2)
}

pub fn audit_sampled_at(
    side: Side,
    local_phase: f64,
    remote_grid: &[f64],
    trials_per_point: u64,
    seed: u64,
    c1: Complex64,
    c2: Complex64,
) -> Result<AuditReport> {
    audit_sampled_with(side, local_phase, remote_grid, trials_per_point, seed, |remote| {
        rto_joint(settings_for(side, local_phase, remote)?, c1, c2)
    })
}

/// Sampled audit of an arbitrary source. Grid point `k` samples on stream `k` of
/// `seed`; the deviation is the largest pairwise two-proportion z-score of the
/// detector-1 frequencies.
pub fn audit_sampled_with<F>(
    side: Side,
    local_phase: f64,
    remote_grid: &[f64],
    trials_per_point: u64,
    seed: u64,
    source: F,
) -> Result<AuditReport>
where
    F: Fn(f64) -> Result<JointDistribution>,
{
    if remote_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if trials_per_point < MIN_TRIALS_PER_POINT {
        return Err(Error::TooFewTrials { min: MIN_TRIALS_PER_POINT, got: trials_per_point });
    }
    let n = trials_per_point as f64;
    let freqs: Vec<f64> = remote_grid
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let tally = sample_events_on_stream(&source(r)?, trials_per_point, seed, k as u64)?;
            Ok(tally.detector1(side) as f64 / n)
        })
        .collect::<Result<_>>()?;

    let mut max_deviation: f64 = 0.0;
    for (k, &a) in freqs.iter().enumerate() {
        for &b in &freqs[k + 1..] {
            let pooled = (a + b) / 2.0;
            let se = (pooled * (1.0 - pooled) * 2.0 / n).sqrt();
            let z = if a == b {
                0.0
            } else if se > 0.0 {
                (a - b).abs() / se
            } else {
                f64::INFINITY
            };
            max_deviation = max_deviation.max(z);
        }
    }
    Ok(AuditReport {
        side,
        local_phase,
        grid: remote_grid.to_vec(),
        marginals: freqs,
        max_deviation,
        mode: AuditMode::Sampled,
        tolerance: SAMPLED_TOLERANCE_SIGMA,
        verdict: verdict(max_deviation, SAMPLED_TOLERANCE_SIGMA),
        trials_per_point: Some(trials_per_point),
        seed: Some(seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{phase_grid, EQUAL_WEIGHT as H};
    use std::f64::consts::TAU;

    #[test]
    fn exact_audit_passes_for_equal_weights() {
        let grid = phase_grid(0.0, TAU, 25);
        let r = audit_exact(Side::A, 0.3, &grid, H, H).unwrap();
        assert!(r.passed());
        assert!(r.max_deviation <= 1e-12);
        assert_eq!(r.grid.len(), 25);
    }

    #[test]
    fn single_point_is_trivial() {
        let r = audit_exact(Side::S, 0.0, &[1.0], H, H).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.passed());
        let r = audit_sampled(Side::S, &[1.0], 1000, 3, H, H).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert!(r.passed());
    }

    #[test]
    fn unequal_weights_still_pass() {
        let c1 = Complex64::new(0.6, 0.0);
        let c2 = Complex64::new(0.0, 0.8);
        for side in [Side::S, Side::A] {
            let r = audit_exact(side, -0.7, &phase_grid(-3.0, 3.0, 13), c1, c2).unwrap();
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn errors() {
        assert_eq!(audit_exact(Side::S, 0.0, &[], H, H), Err(Error::EmptyGrid));
        assert_eq!(
            audit_sampled(Side::S, &[0.0], 99, 1, H, H),
            Err(Error::TooFewTrials { min: 100, got: 99 })
        );
    }

    #[test]
    fn exact_audit_flags_a_biased_source() {
        let grid = phase_grid(0.0, TAU, 5);
        let r = audit_exact_with(Side::A, 0.0, &grid, |remote| {
            let b = 0.01 * remote.cos();
            JointDistribution::new(0.25 + b, 0.25 - b, 0.25, 0.25)
        })
        .unwrap();
        assert!(!r.passed());
        assert!((r.max_deviation - 0.02).abs() < 1e-12);
    }

    #[test]
    fn report_json_shape() {
        let r = audit_exact(Side::A, 0.0, &[0.0, 1.0], H, H).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["side"], "A");
        assert_eq!(v["mode"], "exact");
        assert_eq!(v["verdict"], "pass");
        assert_eq!(v["tolerance"], 1e-12);
        assert!(v.get("seed").is_none());
    }
}
