//! Reduced states of a system entangled with an ideal detector.
//!
//! The global state is pure, yet each side on its own looks like a mixture
//! with no off-diagonal terms.

use localstate::qmath::{outer, purity, Complex64};
use localstate::states::{coherence, local_state, make_measurement_state, DetectorOverlap};

fn main() -> localstate::Result<()> {
    let (c1, c2) = (Complex64::new(0.6, 0.0), Complex64::from_polar(0.8, 1.1));
    let ms = make_measurement_state(c1, c2, DetectorOverlap::ORTHOGONAL)?;

    println!("global purity: {:.6}", purity(&outer(ms.vector())));
    for side in [localstate::Side::S, localstate::Side::A] {
        let rho = local_state(&ms, side);
        println!(
            "{side:?}: diag = {:?}, coherence = {:.2e}, purity = {:.4}",
            rho.diagonal(),
            coherence(&rho),
            purity(&rho)
        );
    }
    Ok(())
}
