//! CHSH value of the equal-weight state at the best analyzer angles, and at a
//! setting that stays classical.

use localstate::experiments::{chsh_terms, CHSH_OPTIMAL_ANGLES, EQUAL_WEIGHT as H};

fn main() -> localstate::Result<()> {
    for angles in [CHSH_OPTIMAL_ANGLES, [0.0; 4]] {
        let [a, ap, b, bp] = angles;
        let t = chsh_terms(a, ap, b, bp, H, H)?;
        println!("angles {angles:?}\n  E = {:?}\n  S = {:.6} violates: {}", t.correlations, t.s, t.violates());
    }
    Ok(())
}
