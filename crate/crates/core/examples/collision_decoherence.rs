//! Repeated weak scattering: each collision shrinks the detector overlap, and
//! the system's coherence decays geometrically with it.

use localstate::experiments::EQUAL_WEIGHT as H;
use localstate::states::{coherence, collision_decoherence, local_state, make_measurement_state, DetectorOverlap};
use localstate::Side;

fn main() -> localstate::Result<()> {
    let per_hit = DetectorOverlap::real(0.9)?;
    for n in [0, 1, 5, 10, 20, 50] {
        let g = collision_decoherence(per_hit, n);
        let ms = make_measurement_state(H, H, g)?;
        println!("{n:>3} collisions: |γ| = {:.4}, coherence = {:.4}", g.magnitude(), coherence(&local_state(&ms, Side::S)));
    }
    Ok(())
}
