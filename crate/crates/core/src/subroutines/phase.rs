use serde::Serialize;

use super::qft::qft_product_form_circuit;
use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::seed::SeededRng;
use crate::state::{format_bits, Amplitude, QubitIndex, StateVector};

const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Eigenphase {
    /// In `[0, 1)`.
    pub phi: f64,
    pub n_bits: usize,
    /// Set when `phi · 2^n_bits` is an integer.
    pub exact_binary: bool,
}

impl Eigenphase {
    pub fn new(phi: f64, n_bits: usize) -> Self {
        let phi = phi.rem_euclid(1.0);
        let scaled = phi * (1u64 << n_bits) as f64;
        Self {
            phi,
            n_bits,
            exact_binary: (scaled - scaled.round()).abs() < 1e-12,
        }
    }
}

/// Returns the eigenvalue of `u` for `v`, or the residual when `v` is not an
/// eigenvector.
fn eigenvalue(u: &GateMatrix, v: &StateVector) -> Result<Amplitude> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let uv = u.apply(v.amplitudes())?;
    let lambda: Amplitude = v.amplitudes().iter().zip(&uv).map(|(a, b)| a.conj() * b).sum();
    let residual = uv
        .iter()
        .zip(v.amplitudes())
        .map(|(x, y)| (x - lambda * y).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual >= EIGEN_TOL || (lambda.norm() - 1.0).abs() >= EIGEN_TOL {
        return Err(Error::NotAnEigenvector(residual.max((lambda.norm() - 1.0).abs())));
    }
    Ok(lambda)
}

#[derive(Debug, Clone)]
pub struct KickbackOutcome {
    /// Control qubit after the controlled-`U`.
    pub ancilla: StateVector,
    /// `⟨v|ρ_target|v⟩`.
    pub target_fidelity: f64,
    pub eigenphase: f64,
}

/// `|+⟩|v⟩` through a controlled-`U`; the control picks up the eigenphase.
pub fn phase_kickback_demo(u: &GateMatrix, eigvec: &StateVector) -> Result<KickbackOutcome> {
    let lambda = eigenvalue(u, eigvec)?;
    let m = eigvec.n_qubits();
    let mut joint = StateVector::plus().tensor(eigvec)?;
    let targets: Vec<QubitIndex> = (1..=m).collect();
    joint.apply_controlled(&[0], &targets, u)?;

    let half = eigvec.dim();
    let project = |offset: usize| -> Amplitude {
        eigvec
            .amplitudes()
            .iter()
            .enumerate()
            .map(|(i, v)| v.conj() * joint.amplitude(offset + i))
            .sum()
    };
    let (a0, a1) = (project(0), project(half));
    let target_fidelity = a0.norm_sqr() + a1.norm_sqr();
    Ok(KickbackOutcome {
        ancilla: StateVector::normalized(vec![a0, a1])?,
        target_fidelity,
        eigenphase: (lambda.arg() / (2.0 * std::f64::consts::PI)).rem_euclid(1.0),
    })
}

/// Phase of a clock register read qubit 0 first. The product-form inverse
/// QFT leaves the binary digits in reverse order, so the last character is
/// the first fractional digit.
pub fn decode_phase_register(bits: &str) -> Result<f64> {
    let mut phi = 0.0;
    for (k, ch) in bits.chars().rev().enumerate() {
        match ch {
            '0' => {}
            '1' => phi += 0.5f64.powi(k as i32 + 1),
            _ => return Err(Error::InvalidParameter(format!("bad register bit `{ch}`"))),
        }
    }
    Ok(phi)
}

fn reverse_bits(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| (acc << 1) | ((x >> b) & 1))
}

/// Clock-register state before measurement: `[clock n][target]`.
fn estimation_state(u: &GateMatrix, eigvec: &StateVector, n: usize) -> Result<StateVector> {
    if n == 0 || n > 10 {
        return Err(Error::InvalidParameter(format!("phase estimation needs 1..=10 clock bits, got {n}")));
    }
    eigenvalue(u, eigvec)?;
    let m = eigvec.n_qubits();
    let mut state = StateVector::zero_state(n)?.tensor(eigvec)?;
    let targets: Vec<QubitIndex> = (n..n + m).collect();
    for k in 0..n {
        state.apply_matrix(&[k], &GateMatrix::hadamard())?;
    }
    let mut power = u.clone();
    for k in (0..n).rev() {
        // clock qubit k controls U^(2^(n-1-k))
        state.apply_controlled(&[k], &targets, &power)?;
        if k > 0 {
            power = power.mul(&power)?;
        }
    }
    let inverse = qft_product_form_circuit(n)?.adjoint();
    for step in inverse.steps() {
        crate::circuit::apply_gate(&mut state, &step.gate, &step.targets)?;
    }
    Ok(state)
}

/// Probability of each decoded integer `j` (phase `j / 2^n`).
pub fn phase_estimation_distribution(u: &GateMatrix, eigvec: &StateVector, n: usize) -> Result<Vec<f64>> {
    let state = estimation_state(u, eigvec, n)?;
    let clock: Vec<QubitIndex> = (0..n).collect();
    let raw = state.marginal(&clock)?;
    let mut out = vec![0.0; raw.len()];
    for (r, p) in raw.into_iter().enumerate() {
        out[reverse_bits(r, n)] += p;
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseEstimationOutcome {
    /// Clock register as measured, qubit 0 first.
    pub readout: String,
    pub estimate: Eigenphase,
}

pub fn phase_estimation(
    u: &GateMatrix,
    eigvec: &StateVector,
    n: usize,
    rng: &mut SeededRng,
) -> Result<PhaseEstimationOutcome> {
    let state = estimation_state(u, eigvec, n)?;
    let clock: Vec<QubitIndex> = (0..n).collect();
    let out = state.measure_qubits(&clock, rng)?;
    let readout = format_bits(out.value, n);
    let phi = decode_phase_register(&readout)?;
    Ok(PhaseEstimationOutcome {
        readout,
        estimate: Eigenphase::new(phi, n),
    })
}

/// Diagonal single-qubit unitary `diag(1, e^{2πiφ})`, eigenvector `|1⟩`.
pub fn phase_gate(phi: f64) -> GateMatrix {
    GateMatrix::diagonal(&[
        Amplitude::new(1.0, 0.0),
        Amplitude::from_polar(1.0, 2.0 * std::f64::consts::PI * phi),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{matrix_of, Gate};
    use crate::seed::seeded;
    use std::f64::consts::PI;

    fn ket1() -> StateVector {
        StateVector::from_bits("1").unwrap()
    }

    #[test]
    fn kickback_examples() {
        let z = matrix_of(&Gate::Z);
        let out = phase_kickback_demo(&z, &ket1()).unwrap();
        assert!((out.ancilla.fidelity(&StateVector::minus()).unwrap() - 1.0).abs() < 1e-12);
        assert!((out.target_fidelity - 1.0).abs() < 1e-10);
        assert!((out.eigenphase - 0.5).abs() < 1e-12);

        let out = phase_kickback_demo(&z, &StateVector::zero_state(1).unwrap()).unwrap();
        assert!((out.ancilla.fidelity(&StateVector::plus()).unwrap() - 1.0).abs() < 1e-12);

        let out = phase_kickback_demo(&matrix_of(&Gate::T), &ket1()).unwrap();
        let want = StateVector::normalized(vec![Amplitude::new(1.0, 0.0), Amplitude::from_polar(1.0, PI / 4.0)]).unwrap();
        assert!((out.ancilla.fidelity(&want).unwrap() - 1.0).abs() < 1e-12);
        assert!((out.ancilla.amplitude(1) / out.ancilla.amplitude(0) - Amplitude::from_polar(1.0, PI / 4.0)).norm() < 1e-12);
    }

    #[test]
    fn kickback_rejects_non_eigenvector() {
        let r = phase_kickback_demo(&matrix_of(&Gate::Z), &StateVector::plus());
        assert!(matches!(r, Err(Error::NotAnEigenvector(_))));
        let r = phase_estimation_distribution(&matrix_of(&Gate::X), &ket1(), 3);
        assert!(matches!(r, Err(Error::NotAnEigenvector(_))));
    }

    #[test]
    fn exact_phases_read_exactly() {
        for n in 1..=6 {
            for j in 0..1usize << n {
                let phi = j as f64 / (1u64 << n) as f64;
                let dist = phase_estimation_distribution(&phase_gate(phi), &ket1(), n).unwrap();
                assert!((dist[j] - 1.0).abs() < 1e-9, "n={n} j={j}");
            }
        }
    }

    #[test]
    fn worked_register_reading() {
        let mut rng = seeded(5);
        let out = phase_estimation(&phase_gate(0.4375), &ket1(), 5, &mut rng).unwrap();
        assert_eq!(out.readout, "01110");
        assert_eq!(out.estimate.phi, 0.4375);
        assert!(out.estimate.exact_binary);
        assert_eq!(decode_phase_register("10110").unwrap(), 0.40625);
        assert_eq!(decode_phase_register("00111").unwrap(), 0.875);
    }

    #[test]
    fn trivial_phases() {
        let mut rng = seeded(1);
        let id = GateMatrix::identity(2);
        let out = phase_estimation(&id, &StateVector::zero_state(1).unwrap(), 4, &mut rng).unwrap();
        assert_eq!(out.readout, "0000");
        let out = phase_estimation(&matrix_of(&Gate::Z), &ket1(), 1, &mut rng).unwrap();
        assert_eq!(out.readout, "1");
        assert_eq!(out.estimate.phi, 0.5);
    }
}
