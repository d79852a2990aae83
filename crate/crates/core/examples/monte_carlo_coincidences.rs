//! Finite coincidence counts against the exact correlation.

use std::f64::consts::PI;

use localstate::experiments::{rto_joint, EQUAL_WEIGHT as H};
use localstate::optics::PhaseSettings;
use localstate::stochastics::{estimate_correlation, sample_events, PRNG_ALGORITHM};

fn main() -> localstate::Result<()> {
    let d = rto_joint(PhaseSettings::new(PI / 3.0, 0.0)?, H, H)?;
    println!("generator: {PRNG_ALGORITHM}");
    println!("exact E = {:.5}, P(agree) = {:.5}", d.correlation().value(), d.agreement());
    for n in [1_000, 10_000, 100_000, 1_000_000] {
        let tally = sample_events(&d, n, 42)?;
        let est = estimate_correlation(&tally)?;
        println!(
            "N = {n:>8}: counts {:?}, E_hat = {:+.5} ± {:.5}",
            tally.counts, est.e_hat, est.stderr
        );
    }
    Ok(())
}
