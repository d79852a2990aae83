//! Command-line front end.
//!
//! Every subcommand parses and validates its whole configuration, computes the
//! complete output in memory, and only then writes it, so a rejected run never
//! leaves a partial file behind.
//!
//! Exit codes: 0 success, 1 configuration error, 2 I/O error, 3 audit failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::audit::{audit_exact, audit_exact_with, audit_sampled_at, audit_sampled_with, AuditReport};
use crate::experiments::{
    check_amplitudes, chsh_terms, fringe_visibility, phase_grid, rto_joint, JointDistribution, CHSH_OPTIMAL_ANGLES,
};
use crate::optics::PhaseSettings;
use crate::qmath::{Side, StateVector};
use crate::states::{coherence, local_state, make_measurement_state, schmidt, BipartitePureState, DetectorOverlap};
use crate::stochastics::{estimate_correlation, sample_events_on_stream};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_IO: i32 = 2;
pub const EXIT_AUDIT_FAIL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "localstate", version, about = "Entangled measurement states: local mixtures and interfering correlations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Correlation fringe E(φ_S - φ_A) of the two-photon interferometer (CSV).
    RtoSweep {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// CHSH value of the equal-weight measurement state (JSON).
    Chsh {
        #[command(flatten)]
        common: CommonArgs,
        /// Analyzer angles a,a',b,b' in radians.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        angles: Option<Vec<f64>>,
    },
    /// Which-path fringe visibility against detector overlap (CSV).
    Visibility {
        #[command(flatten)]
        common: CommonArgs,
        /// Detector overlaps in [0, 1], comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.5,0.75,1")]
        gamma: Vec<f64>,
    },
    /// No-signaling audit of one side's singles over a remote phase grid (JSON).
    Nosignal {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Audited side.
        #[arg(long, value_enum, default_value = "a")]
        side: SideArg,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        local_phase: f64,
        /// Tabulated joint distributions to audit instead of the interferometer.
        #[arg(long)]
        fault: Option<PathBuf>,
    },
    /// Schmidt decomposition of a bipartite pure state (JSON).
    Schmidt {
        #[command(flatten)]
        common: CommonArgs,
        /// Detector overlap of the measurement state built from c1, c2.
        #[arg(long, default_value_t = 0.0)]
        gamma: f64,
        /// State file: {"dims": [dS, dA], "amplitudes": [[mag, phase], ...]}.
        #[arg(long, conflicts_with = "amplitudes")]
        state: Option<PathBuf>,
        /// Inline amplitudes mag:phase,mag:phase,... (row-major, S index major).
        #[arg(long, requires = "dims", allow_hyphen_values = true)]
        amplitudes: Option<String>,
        /// Subsystem dimensions for --amplitudes, e.g. 2x3.
        #[arg(long)]
        dims: Option<String>,
    },
}

#[derive(Debug, Clone, Args)]
struct CommonArgs {
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    c1_mag: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c1_phase: f64,
    #[arg(long, default_value_t = std::f64::consts::FRAC_1_SQRT_2)]
    c2_mag: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    c2_phase: f64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
struct GridArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phi_start: f64,
    #[arg(long, default_value_t = std::f64::consts::TAU, allow_negative_numbers = true)]
    phi_stop: f64,
    #[arg(long, default_value_t = 25)]
    points: usize,
}

#[derive(Debug, Clone, Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Trials per grid point; enables sampled columns / the sampled audit.
    #[arg(long)]
    trials: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SideArg {
    S,
    A,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::S => Side::S,
            SideArg::A => Side::A,
        }
    }
}

/// Phase sweep `points` values from `start` to `stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        phase_grid(self.start, self.stop, self.points)
    }
}

/// Validated settings shared by every subcommand.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip)]
    pub c1: Complex64,
    #[serde(skip)]
    pub c2: Complex64,
    pub grid: GridSpec,
    pub seed: u64,
    pub trials: Option<u64>,
    pub format: Format,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Config(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Config(_) => EXIT_CONFIG,
            Failure::Io(_) => EXIT_IO,
        }
    }
}

fn config<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Config(e.to_string())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return EXIT_CONFIG;
            }
            let _ = write!(stdout, "{}", e.render());
            return EXIT_OK;
        }
    };
    match execute(cli.command) {
        Ok((cfg, body, code)) => match emit(cfg.out.as_deref(), &body, stdout) {
            Ok(()) => code,
            Err(e) => {
                let _ = writeln!(stderr, "error: {}", failure_text(&e));
                e.code()
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", failure_text(&e));
            e.code()
        }
    }
}

fn failure_text(f: &Failure) -> &str {
    match f {
        Failure::Config(m) | Failure::Io(m) => m,
    }
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| Failure::Io(e.to_string())),
    }
}

fn build_config(
    command: &str,
    common: &CommonArgs,
    grid: Option<&GridArgs>,
    sampling: Option<&SamplingArgs>,
    default_format: Format,
) -> Result<RunConfig, Failure> {
    let amp = |name: &str, mag: f64, phase: f64| -> Result<Complex64, Failure> {
        if !(mag.is_finite() && phase.is_finite()) || mag < 0.0 {
            return Err(Failure::Config(format!("{name}: magnitude must be finite and non-negative")));
        }
        Ok(Complex64::from_polar(mag, phase))
    };
    let c1 = amp("c1", common.c1_mag, common.c1_phase)?;
    let c2 = amp("c2", common.c2_mag, common.c2_phase)?;
    check_amplitudes(c1, c2).map_err(|e| Failure::Config(format!("|c1|^2 + |c2|^2 must be 1: {e}")))?;

    let grid = match grid {
        Some(g) => {
            if g.points < 1 {
                return Err(Failure::Config("--points must be at least 1".into()));
            }
            if !(g.phi_start.is_finite() && g.phi_stop.is_finite()) {
                return Err(Failure::Config("phase grid bounds must be finite".into()));
            }
            GridSpec { start: g.phi_start, stop: g.phi_stop, points: g.points }
        }
        None => GridSpec { start: 0.0, stop: 0.0, points: 1 },
    };
    let (seed, trials) = sampling.map_or((0, None), |s| (s.seed, s.trials));
    if trials == Some(0) {
        return Err(Failure::Config("--trials must be positive".into()));
    }
    Ok(RunConfig {
        command: command.to_string(),
        c1,
        c2,
        grid,
        seed,
        trials,
        format: common.format.unwrap_or(default_format),
        out: common.out.clone(),
    })
}

fn json_only(cfg: &RunConfig) -> Result<(), Failure> {
    if cfg.format == Format::Csv {
        Err(Failure::Config(format!("{} writes JSON only", cfg.command)))
    } else {
        Ok(())
    }
}

fn execute(command: Command) -> Result<(RunConfig, String, i32), Failure> {
    match command {
        Command::RtoSweep { common, grid, sampling } => {
            let cfg = build_config("rto-sweep", &common, Some(&grid), Some(&sampling), Format::Csv)?;
            let body = cmd_rto_sweep(&cfg)?;
            Ok((cfg, body, EXIT_OK))
        }
        Command::Chsh { common, angles } => {
            let cfg = build_config("chsh", &common, None, None, Format::Json)?;
            json_only(&cfg)?;
            let angles = match angles.as_deref() {
                Some(&[a, ap, b, bp]) => [a, ap, b, bp],
                Some(v) => return Err(Failure::Config(format!("--angles takes 4 values, got {}", v.len()))),
                None => CHSH_OPTIMAL_ANGLES,
            };
            if angles.iter().any(|a| !a.is_finite()) {
                return Err(Failure::Config("--angles must be finite".into()));
            }
            let body = cmd_chsh(&cfg, angles)?;
            Ok((cfg, body, EXIT_OK))
        }
        Command::Visibility { common, gamma } => {
            let cfg = build_config("visibility", &common, None, None, Format::Csv)?;
            let body = cmd_visibility(&cfg, &gamma)?;
            Ok((cfg, body, EXIT_OK))
        }
        Command::Nosignal { common, grid, sampling, side, local_phase, fault } => {
            let cfg = build_config("nosignal", &common, Some(&grid), Some(&sampling), Format::Json)?;
            json_only(&cfg)?;
            if !local_phase.is_finite() {
                return Err(Failure::Config("--local-phase must be finite".into()));
            }
            let fixture = fault.as_deref().map(read_fault_fixture).transpose()?;
            let report = cmd_nosignal(&cfg, side.into(), local_phase, fixture.as_ref())?;
            let code = if report.passed() { EXIT_OK } else { EXIT_AUDIT_FAIL };
            Ok((cfg, report.to_json() + "\n", code))
        }
        Command::Schmidt { common, gamma, state, amplitudes, dims } => {
            let cfg = build_config("schmidt", &common, None, None, Format::Json)?;
            json_only(&cfg)?;
            let psi = match (state, amplitudes) {
                (Some(path), _) => read_state_file(&path)?,
                (None, Some(amps)) => parse_inline_state(&amps, dims.as_deref().unwrap_or_default())?,
                (None, None) => {
                    let overlap = DetectorOverlap::real(gamma).map_err(config)?;
                    if gamma < 0.0 {
                        return Err(Failure::Config("--gamma must lie in [0, 1]".into()));
                    }
                    make_measurement_state(cfg.c1, cfg.c2, overlap).map_err(config)?
                }
            };
            let body = cmd_schmidt(&psi);
            Ok((cfg, body, EXIT_OK))
        }
    }
}

/// One row of the correlation sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub phi_diff: f64,
    pub e_exact: f64,
    pub p_agree: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub e_hat: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

/// Sweep rows for `φ_S = φ`, `φ_A = 0` over the grid; row `k` samples on stream `k`.
pub fn rto_sweep_rows(cfg: &RunConfig) -> crate::Result<Vec<SweepRow>> {
    cfg.grid
        .values()
        .into_iter()
        .enumerate()
        .map(|(k, phi)| {
            let joint = rto_joint(PhaseSettings::new(phi, 0.0)?, cfg.c1, cfg.c2)?;
            let mut row = SweepRow {
                phi_diff: phi,
                e_exact: joint.correlation().value(),
                p_agree: joint.agreement(),
                e_hat: None,
                stderr: None,
            };
            if let Some(n) = cfg.trials {
                let est = estimate_correlation(&sample_events_on_stream(&joint, n, cfg.seed, k as u64)?)?;
                row.e_hat = Some(est.e_hat);
                row.stderr = Some(est.stderr);
            }
            Ok(row)
        })
        .collect()
}

fn cmd_rto_sweep(cfg: &RunConfig) -> Result<String, Failure> {
    let rows = rto_sweep_rows(cfg).map_err(config)?;
    Ok(match cfg.format {
        Format::Json => json_body(&rows),
        Format::Csv => {
            let mut out = String::from("phi_diff,E_exact,p_agree");
            if cfg.trials.is_some() {
                out.push_str(",E_hat,stderr");
            }
            out.push('\n');
            for r in &rows {
                let mut fields = vec![format_number(r.phi_diff), format_number(r.e_exact), format_number(r.p_agree)];
                if let (Some(e), Some(s)) = (r.e_hat, r.stderr) {
                    fields.push(format_number(e));
                    fields.push(format_number(s));
                }
                let _ = writeln!(out, "{}", fields.join(","));
            }
            out
        }
    })
}

fn cmd_chsh(cfg: &RunConfig, angles: [f64; 4]) -> Result<String, Failure> {
    let [a, ap, b, bp] = angles;
    let t = chsh_terms(a, ap, b, bp, cfg.c1, cfg.c2).map_err(config)?;
    Ok(json_body(&json!({
        "angles": t.angles,
        "e_values": t.correlations,
        "s": t.s,
        "violates": t.violates(),
    })))
}

#[derive(Debug, Serialize)]
struct VisibilityRow {
    gamma: f64,
    visibility: f64,
    coherence: f64,
}

fn cmd_visibility(cfg: &RunConfig, gammas: &[f64]) -> Result<String, Failure> {
    if gammas.is_empty() {
        return Err(Failure::Config("--gamma needs at least one value".into()));
    }
    if let Some(g) = gammas.iter().find(|g| !(0.0..=1.0).contains(*g)) {
        return Err(Failure::Config(format!("gamma {g} outside [0, 1]")));
    }
    let rows: Vec<VisibilityRow> = gammas
        .iter()
        .map(|&g| {
            let overlap = DetectorOverlap::real(g)?;
            let ms = make_measurement_state(cfg.c1, cfg.c2, overlap)?;
            Ok(VisibilityRow {
                gamma: g,
                visibility: fringe_visibility(overlap, cfg.c1, cfg.c2)?,
                coherence: coherence(&local_state(&ms, Side::S)),
            })
        })
        .collect::<crate::Result<_>>()
        .map_err(config)?;
    Ok(match cfg.format {
        Format::Json => json_body(&rows),
        Format::Csv => {
            let mut out = String::from("gamma,visibility,coherence\n");
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    format_number(r.gamma),
                    format_number(r.visibility),
                    format_number(r.coherence)
                );
            }
            out
        }
    })
}

/// Injected-fault fixture: joint distributions tabulated against the remote phase.
#[derive(Debug, Clone, Deserialize, Serialize)]
pub struct FaultFixture {
    pub rows: Vec<FaultRow>,
}

#[derive(Debug, Clone, Copy, Deserialize, Serialize)]
pub struct FaultRow {
    pub remote_phase: f64,
    pub p11: f64,
    pub p12: f64,
    pub p21: f64,
    pub p22: f64,
}

fn read_fault_fixture(path: &Path) -> Result<FaultFixture, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let fixture: FaultFixture =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    if fixture.rows.is_empty() {
        return Err(Failure::Config("fault fixture has no rows".into()));
    }
    for r in &fixture.rows {
        JointDistribution::new(r.p11, r.p12, r.p21, r.p22).map_err(config)?;
    }
    Ok(fixture)
}

fn cmd_nosignal(
    cfg: &RunConfig,
    side: Side,
    local_phase: f64,
    fixture: Option<&FaultFixture>,
) -> Result<AuditReport, Failure> {
    if let Some(n) = cfg.trials {
        if n < crate::audit::MIN_TRIALS_PER_POINT {
            return Err(Failure::Config(format!(
                "--trials must be at least {} for the sampled audit",
                crate::audit::MIN_TRIALS_PER_POINT
            )));
        }
    }
    let report = match fixture {
        Some(fx) => {
            let grid: Vec<f64> = fx.rows.iter().map(|r| r.remote_phase).collect();
            let lookup = |remote: f64| {
                let r = fx.rows.iter().find(|r| r.remote_phase == remote).expect("grid taken from rows");
                JointDistribution::new(r.p11, r.p12, r.p21, r.p22)
            };
            match cfg.trials {
                Some(n) => audit_sampled_with(side, local_phase, &grid, n, cfg.seed, lookup),
                None => audit_exact_with(side, local_phase, &grid, lookup),
            }
        }
        None => {
            let grid = cfg.grid.values();
            match cfg.trials {
                Some(n) => audit_sampled_at(side, local_phase, &grid, n, cfg.seed, cfg.c1, cfg.c2),
                None => audit_exact(side, local_phase, &grid, cfg.c1, cfg.c2),
            }
        }
    };
    report.map_err(config)
}

#[derive(Debug, Deserialize)]
struct StateFile {
    dims: [usize; 2],
    amplitudes: Vec<[f64; 2]>,
}

fn read_state_file(path: &Path) -> Result<BipartitePureState, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let file: StateFile = serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    build_state((file.dims[0], file.dims[1]), &file.amplitudes)
}

fn parse_inline_state(amps: &str, dims: &str) -> Result<BipartitePureState, Failure> {
    let (ds, da) = dims
        .split_once(['x', 'X'])
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
        .ok_or_else(|| Failure::Config(format!("malformed --dims '{dims}', expected e.g. 2x2")))?;
    let pairs = amps
        .split(',')
        .map(|tok| {
            let (m, p) = tok.split_once(':').unwrap_or((tok, "0"));
            Some([m.trim().parse().ok()?, p.trim().parse().ok()?])
        })
        .collect::<Option<Vec<[f64; 2]>>>()
        .ok_or_else(|| Failure::Config(format!("malformed --amplitudes '{amps}', expected mag:phase,...")))?;
    build_state((ds, da), &pairs)
}

fn build_state(dims: (usize, usize), pairs: &[[f64; 2]]) -> Result<BipartitePureState, Failure> {
    if pairs.iter().any(|[m, p]| !(m.is_finite() && p.is_finite()) || *m < 0.0) {
        return Err(Failure::Config("amplitude magnitudes must be finite and non-negative".into()));
    }
    let amps = pairs.iter().map(|[m, p]| Complex64::from_polar(*m, *p)).collect();
    let v = StateVector::new(amps).map_err(config)?;
    BipartitePureState::new(dims, v).map_err(config)
}

fn cmd_schmidt(psi: &BipartitePureState) -> String {
    let form = schmidt(psi);
    json_body(&json!({
        "coeffs": form.coeffs,
        "degenerate": form.degenerate,
        "reconstruction_error": form.reconstruction_error(psi),
    }))
}

fn json_body<T: Serialize + ?Sized>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable output") + "\n"
}

/// Formats like C's `%.15g`: 15 significant digits, trailing zeros trimmed,
/// exponent form outside `1e-4 ≤ |x| < 1e15`.
pub fn format_number(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let m = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (14 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
