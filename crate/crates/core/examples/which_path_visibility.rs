//! Screen fringes fade as the which-path detector states become distinguishable.

use localstate::experiments::{fringe_visibility, EQUAL_WEIGHT as H};
use localstate::states::DetectorOverlap;

fn main() -> localstate::Result<()> {
    println!("{:>6} {:>10}", "gamma", "visibility");
    for k in 0..=10 {
        let g = k as f64 / 10.0;
        println!("{g:>6.1} {:>10.4}", fringe_visibility(DetectorOverlap::real(g)?, H, H)?);
    }
    Ok(())
}
