//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion:
//!
//! ```text
//! cargo test -p localstate --test acceptance -- --nocapture
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, SQRT_2, TAU};
use std::time::{Duration, Instant};

use localstate::audit::{audit_exact, audit_sampled};
use localstate::experiments::{
    chsh, fringe_visibility, phase_grid, rto_correlation, rto_joint, sweep_visibility, unentangled_control, zwm_scan,
    CHSH_OPTIMAL_ANGLES, EQUAL_WEIGHT as H,
};
use localstate::optics::{beam_splitter_5050, build_rto_circuit, embed_local, phase_shifter, PhaseSettings, DASHED, SOLID};
use localstate::qmath::{outer, partial_trace, tensor, validate, Complex64, Matrix, Side, StateVector};
use localstate::states::{local_state, make_measurement_state, schmidt, DetectorOverlap};
use localstate::stochastics::{estimate_correlation, sample_events_on_stream};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

const GOLDEN_SEEDS: [u64; 3] = [7, 1234, 0x5EED];
const DRAWS: u32 = 1000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn correlation(phi_s: f64, phi_a: f64) -> f64 {
    rto_correlation(PhaseSettings::new(phi_s, phi_a).unwrap(), H, H).unwrap().value()
}

fn correlation_fringe() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for phi_s in phase_grid(0.0, TAU, 25) {
        for phi_a in [0.0, 0.7, -2.1] {
            worst = worst.max((correlation(phi_s, phi_a) - (phi_s - phi_a).cos()).abs());
        }
    }
    let anchors = [(0.0, 1.0), (FRAC_PI_2, 0.0), (PI, -1.0)];
    let anchor_err = anchors.iter().map(|&(p, e)| (correlation(p, 0.0) - e).abs()).fold(0.0, f64::max);
    let elapsed = start.elapsed();
    ensure(
        worst <= 1e-12 && anchor_err <= 1e-12 && elapsed < Duration::from_secs(1),
        format!("max |E - cos| = {worst:.2e}, anchor error = {anchor_err:.2e}, {elapsed:?}"),
    )
}

fn agreement_mapping() -> Outcome {
    let plus = rto_joint(PhaseSettings::new(PI / 3.0, 0.0).unwrap(), H, H).unwrap();
    let minus = rto_joint(PhaseSettings::new(2.0 * PI / 3.0, 0.0).unwrap(), H, H).unwrap();
    let e = (plus.correlation().value(), minus.correlation().value());
    let errs = [
        (e.0 - 0.5).abs(),
        (e.1 + 0.5).abs(),
        (plus.agreement() - 0.75).abs(),
        (plus.correlation().agreement_probability() - 0.75).abs(),
        (minus.disagreement() - 0.75).abs(),
    ];
    let worst = errs.iter().copied().fold(0.0, f64::max);
    ensure(
        worst <= 1e-12,
        format!("P(agree | E=+0.5) = {:.15}, P(disagree | E=-0.5) = {:.15}", plus.agreement(), minus.disagreement()),
    )
}

fn singles_flatness() -> Outcome {
    let grid = phase_grid(0.0, TAU, 25);
    let mut worst: f64 = 0.0;
    for side in [Side::S, Side::A] {
        for &local in &grid {
            let r = audit_exact(side, local, &grid, H, H).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("exact audit failed: side {side:?} local {local}: {}", r.max_deviation));
            }
            worst = worst.max(r.max_deviation);
        }
    }
    let mut worst_z: f64 = 0.0;
    for seed in GOLDEN_SEEDS {
        for side in [Side::S, Side::A] {
            let r = audit_sampled(side, &grid, 100_000, seed, H, H).map_err(|e| e.to_string())?;
            if !r.passed() {
                return Err(format!("sampled audit failed: seed {seed} side {side:?}: {:.2}σ", r.max_deviation));
            }
            worst_z = worst_z.max(r.max_deviation);
        }
    }
    ensure(worst <= 1e-12, format!("exact 25x25 max deviation = {worst:.2e}, sampled max z = {worst_z:.2}σ (< 5σ)"))
}

fn local_mixtures() -> Outcome {
    let cases = [(0.6, 0.8), (0.8, 0.6), (1.0, 0.0), (FRAC_1_SQRT_2, FRAC_1_SQRT_2)];
    let mut worst: f64 = 0.0;
    for (m1, m2) in cases {
        let (c1, c2) = (Complex64::from_polar(m1, 0.4), Complex64::from_polar(m2, -1.3));
        let ms = make_measurement_state(c1, c2, DetectorOverlap::ORTHOGONAL).unwrap();
        let expected = Matrix::diag(&[c(m1 * m1, 0.0), c(m2 * m2, 0.0)]);
        for side in [Side::S, Side::A] {
            worst = worst.max(local_state(&ms, side).matrix().max_abs_diff(&expected));
        }
    }
    let ms = make_measurement_state(H, H, DetectorOverlap::ORTHOGONAL).unwrap();
    let half = Matrix::diag(&[c(0.5, 0.0), c(0.5, 0.0)]);
    let degenerate = [Side::S, Side::A].iter().map(|&s| local_state(&ms, s).matrix().max_abs_diff(&half)).fold(0.0, f64::max);
    ensure(
        worst <= 1e-12 && degenerate <= 1e-12,
        format!("max deviation from diag(|c1|², |c2|²) = {worst:.2e}, from I/2 = {degenerate:.2e}"),
    )
}

fn schmidt_structure() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut flags = Vec::new();
    for theta in [0.0, 0.2, 0.5, PI / 4.0, PI / 4.0 + 1e-11, PI / 4.0 + 1e-6, 1.0, 1.5] {
        let (m1, m2) = (f64::cos(theta), f64::sin(theta));
        let ms = make_measurement_state(Complex64::from_polar(m1, 0.3), Complex64::from_polar(m2, 2.0), DetectorOverlap::ORTHOGONAL)
            .unwrap();
        let form = schmidt(&ms);
        let mut expected: Vec<f64> = [m1, m2].into_iter().filter(|&x| x > 1e-10).collect();
        expected.sort_by(|a, b| b.total_cmp(a));
        if form.coeffs.len() != expected.len() {
            return Err(format!("theta {theta}: rank {} vs {}", form.coeffs.len(), expected.len()));
        }
        for (got, want) in form.coeffs.iter().zip(&expected) {
            worst = worst.max((got - want).abs());
        }
        let should_flag = expected.len() == 2 && (m1 - m2).abs() < 1e-9;
        if form.degenerate != should_flag {
            return Err(format!("theta {theta}: degenerate flag {} (expected {should_flag})", form.degenerate));
        }
        flags.push(form.degenerate);
    }
    let raised = flags.iter().filter(|&&f| f).count();
    ensure(worst <= 1e-9, format!("max coefficient error = {worst:.2e}, degeneracy raised on {raised}/{} cases as expected", flags.len()))
}

fn quarter_wave_shift() -> Outcome {
    let before = correlation(0.0, 0.0);
    let after = correlation(FRAC_PI_2, 0.0);
    let other_arm = correlation(0.0, FRAC_PI_2);
    ensure(
        (before - 1.0).abs() <= 1e-12 && after.abs() <= 1e-12 && other_arm.abs() <= 1e-12,
        format!("E: {before:+.15} -> {after:+.3e} (S arm), {other_arm:+.3e} (A arm)"),
    )
}

fn chsh_violation() -> Outcome {
    let [a, a2, b, b2] = CHSH_OPTIMAL_ANGLES;
    let s = chsh(a, a2, b, b2).map_err(|e| e.to_string())?;
    ensure((s - 2.0 * SQRT_2).abs() <= 1e-9, format!("S = {s:.15} (2√2 = {:.15})", 2.0 * SQRT_2))
}

/// Reduced-matrix oracle: ρ_S[0][1] summed straight from the amplitudes.
fn oracle_visibility(c1: Complex64, c2: Complex64, g: Complex64) -> f64 {
    let r = (1.0 - g.norm_sqr()).max(0.0).sqrt();
    let psi = [c1, c(0.0, 0.0), c2 * g, c2 * r];
    let off = psi[0] * psi[2].conj() + psi[1] * psi[3].conj();
    2.0 * off.norm()
}

fn which_path() -> Outcome {
    let v0 = fringe_visibility(DetectorOverlap::ORTHOGONAL, H, H).unwrap();
    let grid = phase_grid(-PI, PI, 65);
    let singles: Vec<f64> = grid.iter().map(|&p| unentangled_control(PhaseSettings::new(p, 0.0).unwrap()).unwrap().0).collect();
    let control = sweep_visibility(&singles);
    let mut worst: f64 = 0.0;
    for (m, p) in [(0.25, 0.0), (0.5, 1.0), (0.9, -2.0), (1.0, 0.5)] {
        for (c1, c2) in [(H, H), (c(0.6, 0.0), c(0.0, 0.8))] {
            let g = Complex64::from_polar(m, p);
            let v = fringe_visibility(DetectorOverlap::new(g).unwrap(), c1, c2).unwrap();
            let closed = 2.0 * (c1 * c2 * g).norm();
            worst = worst.max((v - closed).abs()).max((v - oracle_visibility(c1, c2, g)).abs());
        }
    }
    ensure(
        v0.abs() <= 1e-12 && (control - 1.0).abs() <= 1e-12 && worst <= 1e-12,
        format!("V(γ=0) = {v0:.2e}, control singles V = {control:.15}, max intermediate error = {worst:.2e}"),
    )
}

fn zwm_endpoints() -> Outcome {
    let blocked = zwm_scan(0.0, H, H).unwrap();
    let open = zwm_scan(1.0, H, H).unwrap();
    ensure(blocked.abs() <= 1e-12 && (open - 1.0).abs() <= 1e-12, format!("V(T=0) = {blocked:.2e}, V(T=1) = {open:.15}"))
}

fn monte_carlo() -> Outcome {
    let grid = phase_grid(0.0, TAU, 25);
    let mut worst: f64 = 0.0;
    for seed in GOLDEN_SEEDS {
        for (k, &phi) in grid.iter().enumerate() {
            let d = rto_joint(PhaseSettings::new(phi, 0.0).unwrap(), H, H).unwrap();
            let exact = d.correlation().value();
            let est = estimate_correlation(&sample_events_on_stream(&d, 100_000, seed, k as u64).unwrap()).unwrap();
            if !est.within(exact, 4.0) {
                return Err(format!("seed {seed} phi {phi}: E_hat {} vs {exact} (stderr {})", est.e_hat, est.stderr));
            }
            if est.stderr > 0.0 {
                worst = worst.max((est.e_hat - exact).abs() / est.stderr);
            }
        }
    }
    Ok(format!("{} sweep points at N=1e5, largest |E_hat - E| = {worst:.2} stderr (< 4)", grid.len() * GOLDEN_SEEDS.len()))
}

fn seeded_runner() -> TestRunner {
    TestRunner::new_with_rng(Config { cases: DRAWS, failure_persistence: None, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn unit_vector(dim: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), dim)
        .prop_filter("non-zero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::normalized(v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap())
}

fn property_suites() -> Outcome {
    let mut runner = seeded_runner();
    // optics: random local elements and full circuits stay unitary and conserve probability
    runner
        .run(&(-TAU..TAU, -TAU..TAU, 0usize..2, any::<bool>(), unit_vector(4)), |(p, q, branch, on_s, v)| {
            let side = if on_s { Side::S } else { Side::A };
            let local = phase_shifter(p, if branch == 0 { SOLID } else { DASHED }).unwrap().then(&beam_splitter_5050());
            let circuits = [build_rto_circuit(PhaseSettings::new(p, q).unwrap()), embed_local(&local, side, (2, 2)).unwrap()];
            for u in circuits {
                prop_assert!(u.unitarity_deviation() <= 1e-12);
                prop_assert!((u.apply(&v).unwrap().norm_sqr() - 1.0).abs() <= 1e-12);
            }
            Ok(())
        })
        .map_err(|e| format!("unitarity: {e}"))?;

    let mut runner = seeded_runner();
    // states: local operators are Hermitian, unit trace and PSD
    runner
        .run(&(1usize..5, 1usize..5).prop_flat_map(|(ds, da)| (Just((ds, da)), unit_vector(ds * da))), |(dims, v)| {
            let rho = outer(&v);
            for side in [Side::S, Side::A] {
                let r = partial_trace(&rho, dims, side).unwrap();
                let report = validate(r.matrix());
                prop_assert!(report.hermiticity_deviation <= 1e-9, "{report:?}");
                prop_assert!(report.trace_deviation <= 1e-9, "{report:?}");
                prop_assert!(report.min_eigenvalue >= -1e-10, "{report:?}");
            }
            Ok(())
        })
        .map_err(|e| format!("local states: {e}"))?;

    let mut runner = seeded_runner();
    // round trip: tracing out one factor of a product returns the other
    runner
        .run(&(1usize..5, 1usize..5).prop_flat_map(|(ds, da)| (unit_vector(ds), unit_vector(da))), |(v, w)| {
            let joint = tensor(&v, &w).unwrap();
            let dims = (v.dim(), w.dim());
            let rho = outer(&joint);
            prop_assert!(partial_trace(&rho, dims, Side::S).unwrap().matrix().max_abs_diff(outer(&v).matrix()) <= 1e-12);
            prop_assert!(partial_trace(&rho, dims, Side::A).unwrap().matrix().max_abs_diff(outer(&w).matrix()) <= 1e-12);
            Ok(())
        })
        .map_err(|e| format!("round trip: {e}"))?;

    Ok(format!("3 suites x {DRAWS} seeded draws: unitarity, Hermiticity/trace/PSD, partial-trace/tensor round trip"))
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let criteria: [Criterion; 11] = [
        ("correlation fringe", correlation_fringe),
        ("agreement mapping", agreement_mapping),
        ("singles flatness", singles_flatness),
        ("local mixtures", local_mixtures),
        ("schmidt coefficients", schmidt_structure),
        ("quarter-wave shift", quarter_wave_shift),
        ("chsh", chsh_violation),
        ("which-path complementarity", which_path),
        ("induced-coherence endpoints", zwm_endpoints),
        ("monte carlo consistency", monte_carlo),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {:>2} ({name}): {detail}", n + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2} ({name}): {detail}", n + 1);
            }
        }
    }
    let elapsed = start.elapsed();
    let in_budget = elapsed < Duration::from_secs(30);
    println!("{} suite runtime: {elapsed:?} (budget 30s)", if in_budget { "PASS" } else { "FAIL" });
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
    assert!(in_budget, "acceptance suite took {elapsed:?}");
}
