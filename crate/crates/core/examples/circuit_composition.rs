//! Building the two-photon interferometer from beam splitters and phase
//! shifters, and feeding it entangled and unentangled light.

use std::f64::consts::FRAC_PI_2;

use localstate::experiments::unentangled_control;
use localstate::optics::{beam_splitter_5050, build_rto_circuit, embed_local, phase_shifter, PhaseSettings, DASHED};
use localstate::qmath::tensor;
use localstate::states::{make_measurement_state, make_superposition, DetectorOverlap};
use localstate::{Complex64, Side};

fn main() -> localstate::Result<()> {
    // one arm by hand: phase on the dashed branch, then a 50/50 splitter
    let arm = phase_shifter(FRAC_PI_2, DASHED)?.then(&beam_splitter_5050());
    let on_a = embed_local(&arm, Side::A, (2, 2))?;
    println!("A-arm unitary on 4 modes, deviation {:.1e}", on_a.unitarity_deviation());

    let settings = PhaseSettings::new(0.4, 0.4)?;
    let circuit = build_rto_circuit(settings);
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);

    let entangled = make_measurement_state(h, h, DetectorOverlap::ORTHOGONAL)?;
    let p = circuit.apply(entangled.vector())?.probabilities();
    println!("entangled   p11 p12 p21 p22 = {p:.4?}");

    let single = make_superposition(h, h)?;
    let p = circuit.apply(&tensor(&single, &single)?)?.probabilities();
    println!("unentangled p11 p12 p21 p22 = {p:.4?}");

    for phi in [-FRAC_PI_2, 0.0, FRAC_PI_2] {
        let (s1, a1) = unentangled_control(PhaseSettings::new(phi, phi)?)?;
        println!("control at phi = {phi:+.4}: P(S det1) = {s1:.4}, P(A det1) = {a1:.4}");
    }
    Ok(())
}
