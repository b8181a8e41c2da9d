//! State-vector quantum circuit simulation with the algorithms, money schemes
//! and randomness checks built on top of it.

pub mod algorithms;
pub mod circuit;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod money;
pub mod report;
pub mod rng;
pub mod seed;
pub mod state;
pub mod subroutines;

pub use circuit::{Circuit, GateApplication, Oracle, OracleTarget};
pub use error::{Error, Result};
pub use gates::{Gate, GateMatrix};
pub use seed::{derive_seed, seeded, SeededRng};
pub use state::{Amplitude, MeasurementBasis, MeasurementOutcome, QubitIndex, StateVector};

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 24;
/// Allowed deviation of `‖ψ‖²` from 1.
pub const NORM_TOL: f64 = 1e-10;
/// Product-state test threshold on `|a00·a11 − a01·a10|`.
pub const ENTANGLE_TOL: f64 = 1e-9;
pub const UNITARY_TOL: f64 = 1e-12;
