//! Browser bindings: a few small simulations exposed to JavaScript.

use qecon::experiments::guess_acceptance_rate;
use qecon::money::guess_and_measure_acceptance;
use qecon::subroutines::{grover_success_probability, qft_circuit};
use qecon::StateVector;
use wasm_bindgen::prelude::wasm_bindgen;

/// Largest register the page accepts; keeps each call well under a frame budget.
pub const WEB_MAX_QUBITS: u32 = 10;

fn check_width(n: u32) -> Result<usize, String> {
    if n == 0 || n > WEB_MAX_QUBITS {
        return Err(format!("qubit count must be in 1..={WEB_MAX_QUBITS}, got {n}"));
    }
    Ok(n as usize)
}

/// Success probability of Grover search on `n` qubits after `0..=max_iterations`
/// rounds, marked item all ones.
#[wasm_bindgen]
pub fn grover_success_curve(n: u32, max_iterations: u32) -> Result<Vec<f64>, String> {
    let n = check_width(n)?;
    if max_iterations > 200 {
        return Err("at most 200 iterations".into());
    }
    let marked = (1u64 << n) - 1;
    (0..=max_iterations as usize)
        .map(|k| grover_success_probability(n, marked, k).map_err(|e| e.to_string()))
        .collect()
}

/// QFT of basis state `|x⟩` as interleaved `[re0, im0, re1, im1, ...]`.
#[wasm_bindgen]
pub fn qft_amplitudes(n: u32, x: u32) -> Result<Vec<f64>, String> {
    let n = check_width(n)?;
    let mut s = StateVector::basis_state(n, x as usize).map_err(|e| e.to_string())?;
    qft_circuit(n).and_then(|c| c.apply_unitary(&mut s)).map_err(|e| e.to_string())?;
    Ok(s.amplitudes().iter().flat_map(|a| [a.re, a.im]).collect())
}

/// Guess-and-measure forgery against `n`-qubit Wiesner bills: JSON with the
/// observed acceptance rate, `(3/4)^n`, and the binomial standard error.
#[wasm_bindgen]
pub fn wiesner_forgery_stats(n: u32, trials: u32, seed: u32) -> Result<String, String> {
    let n = check_width(n)?;
    if trials == 0 || trials > 200_000 {
        return Err("trials must be in 1..=200000".into());
    }
    let observed = guess_acceptance_rate(n, trials as u64, seed as u64).map_err(|e| e.to_string())?;
    let expected = guess_and_measure_acceptance(n);
    let sigma = (expected * (1.0 - expected) / trials as f64).sqrt();
    Ok(serde_json::json!({
        "qubits": n,
        "trials": trials,
        "observed": observed,
        "expected": expected,
        "sigma": sigma,
    })
    .to_string())
}
