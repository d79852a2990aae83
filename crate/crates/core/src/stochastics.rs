//! Seeded coincidence sampling for finite-trial runs.
//!
//! Generator contract: ChaCha20 (`rand_chacha` 0.9) seeded through
//! `SeedableRng::seed_from_u64`, with the task index selecting the ChaCha stream.
//! Uniforms take the top 53 bits of `next_u64`. Each trial picks an outcome by
//! inverse CDF over the fixed order 11, 12, 21, 22. Identical `(distribution,
//! trials, seed, stream)` give bit-identical tallies on every platform.

use rand_chacha::ChaCha20Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::JointDistribution;
use crate::qmath::Side;

/// Pinned generator identification, echoed into machine-readable outputs.
pub const PRNG_ALGORITHM: &str = "chacha20/rand_chacha-0.9/seed_from_u64/stream=task";

/// Independent generator for task `task` of a run seeded with `seed`.
pub fn task_rng(seed: u64, task: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Uniform in `[0, 1)` with 53 random bits.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Coincidence counts `(n11, n12, n21, n22)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EventTally {
    pub counts: [u64; 4],
    pub trials: u64,
    pub seed: u64,
}

impl EventTally {
    pub fn agreements(&self) -> u64 {
        self.counts[0] + self.counts[3]
    }

    pub fn agreement_fraction(&self) -> Option<f64> {
        (self.trials > 0).then(|| self.agreements() as f64 / self.trials as f64)
    }

    /// Detector-1 count on one side.
    pub fn detector1(&self, side: Side) -> u64 {
        match side {
            Side::S => self.counts[0] + self.counts[1],
            Side::A => self.counts[0] + self.counts[2],
        }
    }

    /// Adds counts; the seed of `self` is kept.
    pub fn merge(&self, other: &EventTally) -> EventTally {
        let mut counts = self.counts;
        for (c, o) in counts.iter_mut().zip(other.counts) {
            *c += o;
        }
        EventTally { counts, trials: self.trials + other.trials, seed: self.seed }
    }
}

/// Multinomial draw on stream 0 of `seed`.
pub fn sample_events(dist: &JointDistribution, trials: u64, seed: u64) -> Result<EventTally> {
    sample_events_on_stream(dist, trials, seed, 0)
}

/// Multinomial draw on a derived stream, for parallel or per-grid-point tasks.
pub fn sample_events_on_stream(dist: &JointDistribution, trials: u64, seed: u64, stream: u64) -> Result<EventTally> {
    dist.check()?;
    let [p11, p12, p21, _] = dist.as_array();
    let cdf = [p11, p11 + p12, p11 + p12 + p21];
    let mut rng = task_rng(seed, stream);
    let mut counts = [0u64; 4];
    for _ in 0..trials {
        let u = uniform(&mut rng);
        let k = cdf.iter().position(|&c| u < c).unwrap_or(3);
        counts[k] += 1;
    }
    Ok(EventTally { counts, trials, seed })
}

/// `Ê` with standard error `sqrt((1 - Ê²)/N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimatedCorrelation {
    pub e_hat: f64,
    pub stderr: f64,
}

impl EstimatedCorrelation {
    /// `|Ê - exact| < k·stderr`. When the tally is deterministic (stderr 0) the
    /// estimate has to match within 1e-12 instead.
    pub fn within(&self, exact: f64, k: f64) -> bool {
        let diff = (self.e_hat - exact).abs();
        diff < k * self.stderr || diff <= 1e-12
    }
}

pub fn estimate_correlation(tally: &EventTally) -> Result<EstimatedCorrelation> {
    if tally.trials == 0 {
        return Err(Error::NoTrials);
    }
    let [n11, n12, n21, n22] = tally.counts;
    let n = tally.trials as f64;
    let e_hat = ((n11 + n22) as f64 - (n12 + n21) as f64) / n;
    let stderr = ((1.0 - e_hat * e_hat).max(0.0) / n).sqrt();
    Ok(EstimatedCorrelation { e_hat, stderr })
}

/// Pearson statistic of a tally against the distribution it was drawn from.
/// Outcomes with zero probability are skipped.
pub fn chi_square(tally: &EventTally, dist: &JointDistribution) -> f64 {
    let n = tally.trials as f64;
    tally
        .counts
        .iter()
        .zip(dist.as_array())
        .filter(|(_, p)| *p > 0.0)
        .map(|(&obs, p)| {
            let exp = n * p;
            (obs as f64 - exp).powi(2) / exp
        })
        .sum()
}
