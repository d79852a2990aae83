//! Neither observer's singles move when the other turns a phase shifter;
//! a doctored source that leaks the remote setting is caught.

use std::f64::consts::TAU;

use localstate::audit::{audit_exact, audit_sampled, audit_sampled_with};
use localstate::experiments::{phase_grid, JointDistribution, EQUAL_WEIGHT as H};
use localstate::Side;

fn main() -> localstate::Result<()> {
    let grid = phase_grid(0.0, TAU, 25);
    let exact = audit_exact(Side::A, 0.3, &grid, H, H)?;
    println!("exact:   max deviation {:.2e} -> {:?}", exact.max_deviation, exact.verdict);

    let sampled = audit_sampled(Side::A, &grid, 100_000, 7, H, H)?;
    println!("sampled: max z {:.2} -> {:?}", sampled.max_deviation, sampled.verdict);

    let leaky = |remote: f64| {
        let b = 0.01 * remote.cos();
        JointDistribution::new(0.25 + b, 0.25 - b, 0.25, 0.25)
    };
    let caught = audit_sampled_with(Side::A, 0.0, &grid, 100_000, 7, leaky)?;
    println!("leaky:   max z {:.2} -> {:?}", caught.max_deviation, caught.verdict);
    Ok(())
}
