use serde::Serialize;

use crate::circuit::{Oracle, OracleTarget};
use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::seed::SeededRng;
use crate::state::{format_bits, QubitIndex, StateVector};

#[derive(Debug, Clone, Serialize)]
pub struct GroverOutcome {
    pub found: String,
    pub queries: u64,
}

fn check_oracle(o: &Oracle) -> Result<usize> {
    let n = o.in_bits();
    if o.out_bits() != 1 || o.target() != OracleTarget::Xor {
        return Err(Error::InvalidParameter("search needs a one-bit XOR oracle".into()));
    }
    if n > 14 {
        return Err(Error::QubitCount(n + 1));
    }
    Ok(n)
}

/// `2|s⟩⟨s| − I` on the search register, separately for each flag value.
fn diffuse(state: &mut StateVector) {
    let amps = state.amplitudes_mut();
    let half = amps.len() / 2;
    for flag in 0..2 {
        // flag is the last qubit: indices x*2 + flag
        let mean = (0..half).map(|x| amps[2 * x + flag]).sum::<crate::state::Amplitude>() / half as f64;
        for x in 0..half {
            let a = &mut amps[2 * x + flag];
            *a = 2.0 * mean - *a;
        }
    }
}

/// State after `iterations` rounds of oracle and diffusion. Layout: search
/// register (qubits `0..n`) then the flag qubit prepared in `|−⟩`.
pub fn grover_state(o: &mut Oracle, iterations: usize) -> Result<StateVector> {
    let n = check_oracle(o)?;
    let mut state = StateVector::zero_state(n + 1)?;
    state.apply_matrix(&[n], &crate::gates::matrix_of(&crate::gates::Gate::X))?;
    for q in 0..=n {
        state.apply_matrix(&[q], &GateMatrix::hadamard())?;
    }
    let input: Vec<QubitIndex> = (0..n).collect();
    for _ in 0..iterations {
        o.apply(&mut state, &input, &[n])?;
        diffuse(&mut state);
    }
    Ok(state)
}

pub fn grover_search(o: &mut Oracle, iterations: usize, rng: &mut SeededRng) -> Result<GroverOutcome> {
    let before = o.query_count();
    let state = grover_state(o, iterations)?;
    let n = o.in_bits();
    let input: Vec<QubitIndex> = (0..n).collect();
    let out = state.measure_qubits(&input, rng)?;
    Ok(GroverOutcome {
        found: format_bits(out.value, n),
        queries: o.query_count() - before,
    })
}

/// Pre-measurement probability of reading `marked` after `iterations` rounds.
pub fn grover_success_probability(n: usize, marked: u64, iterations: usize) -> Result<f64> {
    let mut o = Oracle::xor(n, 1, move |x| u64::from(x == marked))?;
    let state = grover_state(&mut o, iterations)?;
    let input: Vec<QubitIndex> = (0..n).collect();
    Ok(state.marginal(&input)?[marked as usize])
}

/// `sin²((2k + 1)θ)` with `sin θ = 2^{−n/2}`.
pub fn grover_closed_form(n: usize, iterations: usize) -> f64 {
    let theta = (2f64.powf(-(n as f64) / 2.0)).asin();
    ((2 * iterations + 1) as f64 * theta).sin().powi(2)
}

/// `⌊(π/4)√(2^n)⌋`.
pub fn grover_iteration_count(n: usize) -> usize {
    (std::f64::consts::FRAC_PI_4 * 2f64.powf(n as f64 / 2.0)).floor() as usize
}

/// Smallest iteration count whose simulated success probability reaches
/// `target`.
pub fn min_iterations_for(n: usize, marked: u64, target: f64) -> Result<usize> {
    let mut o = Oracle::xor(n, 1, move |x| u64::from(x == marked))?;
    let limit = 2 * grover_iteration_count(n) + 2;
    let mut state = grover_state(&mut o, 0)?;
    let input: Vec<QubitIndex> = (0..n).collect();
    for k in 0..=limit {
        if state.marginal(&input)?[marked as usize] >= target {
            return Ok(k);
        }
        o.apply(&mut state, &input, &[n])?;
        diffuse(&mut state);
    }
    Err(Error::InvalidParameter(format!("target {target} not reached within {limit} iterations")))
}

/// One oracle call on the uniform superposition, then the flag is measured;
/// the search register is read only when the flag is 1.
pub fn naive_search(o: &mut Oracle, rng: &mut SeededRng) -> Result<(Option<String>, u64)> {
    let n = check_oracle(o)?;
    let before = o.query_count();
    let mut state = StateVector::zero_state(n + 1)?;
    for q in 0..n {
        state.apply_matrix(&[q], &GateMatrix::hadamard())?;
    }
    let input: Vec<QubitIndex> = (0..n).collect();
    o.apply(&mut state, &input, &[n])?;
    let flag = state.measure_qubits(&[n], rng)?;
    let found = if flag.value == 1 {
        let x = flag.post_state.measure_qubits(&input, rng)?;
        Some(format_bits(x.value, n))
    } else {
        None
    };
    Ok((found, o.query_count() - before))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::seeded;

    #[test]
    fn three_qubits_two_rounds() {
        let closed = grover_closed_form(3, 2);
        assert!((closed - 0.9453125).abs() < 1e-9);
        let p = grover_success_probability(3, 5, 2).unwrap();
        assert!((p - closed).abs() < 1e-9);
    }

    #[test]
    fn zero_rounds_is_uniform() {
        for n in 1..=6 {
            let p = grover_success_probability(n, 0, 0).unwrap();
            assert!((p - 2f64.powi(-(n as i32))).abs() < 1e-12);
        }
    }

    #[test]
    fn queries_equal_iterations() {
        let mut rng = seeded(3);
        let mut o = Oracle::xor(5, 1, |x| u64::from(x == 17)).unwrap();
        let out = grover_search(&mut o, 4, &mut rng).unwrap();
        assert_eq!(out.queries, 4);
        assert_eq!(o.query_count(), 4);
    }

    #[test]
    fn closed_form_matches_simulation() {
        for n in 2..=8 {
            for k in 0..6 {
                let p = grover_success_probability(n, 1, k).unwrap();
                assert!((p - grover_closed_form(n, k)).abs() < 1e-9, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn minimal_rounds_sequence() {
        let ks: Vec<usize> = (3..=10).map(|n| min_iterations_for(n, 3, 0.9).unwrap()).collect();
        assert_eq!(ks, vec![2, 2, 4, 5, 7, 10, 14, 20]);
    }

    #[test]
    fn naive_search_cases() {
        let mut rng = seeded(8);
        let mut all = Oracle::xor(3, 1, |_| 1).unwrap();
        let mut none = Oracle::xor(3, 1, |_| 0).unwrap();
        for _ in 0..50 {
            assert!(naive_search(&mut all, &mut rng).unwrap().0.is_some());
            assert!(naive_search(&mut none, &mut rng).unwrap().0.is_none());
        }
        assert_eq!(all.query_count(), 50);
        let mut one = Oracle::xor(2, 1, |x| u64::from(x == 2)).unwrap();
        let trials = 20_000;
        let mut hits = 0;
        for _ in 0..trials {
            if let (Some(x), _) = naive_search(&mut one, &mut rng).unwrap() {
                assert_eq!(x, "10");
                hits += 1;
            }
        }
        let p = hits as f64 / trials as f64;
        let sigma = (0.25 * 0.75 / trials as f64).sqrt();
        assert!((p - 0.25).abs() < 4.0 * sigma, "{p}");
    }
}
