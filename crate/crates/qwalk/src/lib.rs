//! Discrete-time quantum walk simulation and entanglement analysis.
//!
//! The crate simulates one and two coherent walkers on the line exactly, in
//! position space, and quantifies the entanglement their unitary evolution
//! generates:
//!
//! - [`walk1d`] runs the single-walker Hadamard walk and tracks the
//!   coin-position entanglement entropy through the 2x2 reduced coin density.
//! - [`asymptotics`] evaluates the long-time entanglement without stepping:
//!   closed forms for localized and nonlocal starts, plus an independent
//!   k-space route (spectral evolution and stationary quadrature) that
//!   cross-checks the position-space kernels.
//! - [`walk2d`] runs two walkers under separable and non-separable four-state
//!   coins (Hadamard pair, Grover reflection, the random-Pavlov game coin)
//!   and measures the walker-walker entanglement through a Schmidt
//!   decomposition of the joint amplitudes.
//! - [`math`] holds the shared numerics: entropy functions, the trace-one
//!   Hermitian eigenproblem, Schmidt entropy, and log-growth fitting.
//!
//! All evolution is deterministic; states are immutable values, so parameter
//! sweeps parallelize without coordination.

pub mod asymptotics;
pub mod error;
pub mod math;
pub mod walk1d;
pub mod walk2d;

pub use error::{Error, Result};
