//! Local states of entangled measurement states.
//!
//! A system `S` measured by an apparatus `A` ends up in the entangled state
//! `c₁|s₁⟩|a₁⟩ + c₂|s₂⟩|a₂⟩`. This crate builds that state, reduces it to the
//! local density operators of each side, and runs the two-photon interferometer
//! in which the coherence shows up only in coincidences:
//!
//! - [`qmath`]: dense complex matrices, partial trace, Jacobi eigen/SVD.
//! - [`states`]: superposition and measurement states, local states, Schmidt form,
//!   coherence and a collision decoherence model.
//! - [`optics`]: beam splitters, phase shifters and the two-photon interferometer.
//! - [`experiments`]: correlation fringes, singles, CHSH, which-path visibility.
//! - [`stochastics`]: seeded coincidence sampling and correlation estimates.
//! - [`audit`]: exact and sampled no-signaling checks.
//! - [`cli`]: the `localstate` command line front end.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod audit;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod optics;
pub mod qmath;
pub mod states;
pub mod stochastics;

pub use error::{Error, Result};
pub use qmath::{Complex64, DensityOperator, Matrix, Side, StateVector};
