//! Schmidt coefficients, and what happens when two of them coincide.

use std::f64::consts::FRAC_1_SQRT_2;

use localstate::qmath::{Complex64, StateVector};
use localstate::states::{is_basis_ambiguous, make_measurement_state, schmidt, BipartitePureState, DetectorOverlap};

fn main() -> localstate::Result<()> {
    for (m1, m2) in [(0.6, 0.8), (FRAC_1_SQRT_2, FRAC_1_SQRT_2)] {
        let ms = make_measurement_state(Complex64::new(m1, 0.0), Complex64::new(m2, 0.0), DetectorOverlap::ORTHOGONAL)?;
        let form = schmidt(&ms);
        println!(
            "|c1|={m1:.4} |c2|={m2:.4}: coeffs {:?}, ambiguous basis: {}, error {:.1e}",
            form.coeffs,
            is_basis_ambiguous(&ms),
            form.reconstruction_error(&ms)
        );
    }

    // a generic 2x3 state
    let amps = [(0.3, 0.2), (0.1, -0.4), (0.5, 0.0), (-0.2, 0.3), (0.0, 0.1), (0.4, 0.4)];
    let v = StateVector::normalized(amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect())?;
    let psi = BipartitePureState::new((2, 3), v)?;
    let form = schmidt(&psi);
    let entropy: f64 = form.coeffs.iter().map(|c| c * c).filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum();
    println!("2x3 state: rank {}, coeffs {:?}, entanglement entropy {entropy:.4} bits", form.rank(), form.coeffs);
    Ok(())
}
