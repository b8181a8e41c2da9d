use crate::error::{Error, Result};
use crate::gates::{matrix_of, Gate};
use crate::state::StateVector;

/// `|φ⟩|0⟩` through a CNOT: copies basis states, entangles superpositions.
pub fn cnot_copier(phi: &StateVector) -> Result<StateVector> {
    if phi.n_qubits() != 1 {
        return Err(Error::QubitCount(phi.n_qubits()));
    }
    let mut s = phi.tensor(&StateVector::zero_state(1)?)?;
    s.apply_matrix(&[0, 1], &matrix_of(&Gate::Cnot))?;
    Ok(s)
}

/// Fidelity of the copier output with `|φ⟩|φ⟩`: `|ᾱ²α + β̄²β|²`.
pub fn copier_fidelity(phi: &StateVector) -> Result<f64> {
    cnot_copier(phi)?.fidelity(&phi.tensor(phi)?)
}

/// `⟨φ|ρ|φ⟩` for either output qubit alone: `|α|⁴ + |β|⁴`.
pub fn copier_single_copy_fidelity(phi: &StateVector) -> Result<f64> {
    let out = cnot_copier(phi)?;
    let (a, b) = (phi.amplitude(0), phi.amplitude(1));
    // the output is α|00⟩ + β|11⟩, so each copy is diagonal with weights |α|², |β|²
    let (w0, w1) = (out.amplitude(0).norm_sqr(), out.amplitude(3).norm_sqr());
    Ok(w0 * a.norm_sqr() + w1 * b.norm_sqr())
}
