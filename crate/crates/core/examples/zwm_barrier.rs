//! Induced coherence: blocking the idler path turns it into a which-slit marker.

use localstate::experiments::{zwm_scan, EQUAL_WEIGHT as H};

fn main() -> localstate::Result<()> {
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("barrier transmission {t:.2}: signal visibility {:.3}", zwm_scan(t, H, H)?);
    }
    Ok(())
}
