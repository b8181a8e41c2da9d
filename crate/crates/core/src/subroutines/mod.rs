//! Reusable quantum building blocks.

mod amplitude;
mod grover;
mod phase;
mod qft;

pub use amplitude::{
    amplitude_estimation, amplitude_estimation_distribution, amplitude_estimation_median,
    distribution_for_state, estimate_from_readout, error_bound, AmplitudeEstimate,
};
pub use grover::{
    grover_closed_form, grover_iteration_count, grover_search, grover_state, grover_success_probability,
    min_iterations_for, naive_search, GroverOutcome,
};
pub use phase::{
    decode_phase_register, phase_estimation, phase_estimation_distribution, phase_gate, phase_kickback_demo, Eigenphase,
    KickbackOutcome, PhaseEstimationOutcome,
};
pub use qft::{apply_qft, inverse_qft_circuit, qft_circuit, qft_product_form_circuit};

use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::state::StateVector;

/// `I − 2|ψ⟩⟨ψ|`.
pub fn reflection_oracle(psi: &StateVector) -> Result<GateMatrix> {
    if psi.n_qubits() > 10 {
        return Err(Error::QubitCount(psi.n_qubits()));
    }
    let d = psi.dim();
    let a = psi.amplitudes();
    let mut m = GateMatrix::identity(d);
    for r in 0..d {
        for c in 0..d {
            let v = m.get(r, c) - 2.0 * a[r] * a[c].conj();
            m.set(r, c, v);
        }
    }
    Ok(m)
}
