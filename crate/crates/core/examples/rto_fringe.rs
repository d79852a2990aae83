//! The coincidence correlation fringe E = cos(φ_S - φ_A) and the flat singles
//! beneath it.

use std::f64::consts::TAU;

use localstate::experiments::{phase_grid, rto_joint, EQUAL_WEIGHT as H};
use localstate::optics::PhaseSettings;
use localstate::Side;

fn main() -> localstate::Result<()> {
    println!("{:>8} {:>8} {:>8} {:>8} {:>8}", "phi", "E", "P(agree)", "S det1", "A det1");
    for phi in phase_grid(0.0, TAU, 13) {
        let d = rto_joint(PhaseSettings::new(phi, 0.0)?, H, H)?;
        println!(
            "{phi:>8.4} {:>8.4} {:>8.4} {:>8.4} {:>8.4}",
            d.correlation().value(),
            d.agreement(),
            d.marginal(Side::S).0,
            d.marginal(Side::A).0
        );
    }
    Ok(())
}
