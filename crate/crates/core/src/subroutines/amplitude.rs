use std::f64::consts::PI;

use serde::Serialize;

use super::qft::apply_qft;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::seed::SeededRng;
use crate::state::{sample_index, Amplitude, QubitIndex, StateVector, ZERO};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AmplitudeEstimate {
    pub a_hat: f64,
    pub t: usize,
    /// `2π√(â(1−â))/t + π²/t²`, evaluated at the estimate.
    pub error_bound: f64,
    /// One preparation plus `t − 1` applications of the rotation.
    pub queries: u64,
}

pub fn error_bound(a: f64, t: usize) -> f64 {
    let t = t as f64;
    2.0 * PI * (a * (1.0 - a)).max(0.0).sqrt() / t + PI * PI / (t * t)
}

pub fn estimate_from_readout(y: usize, t: usize) -> AmplitudeEstimate {
    let a_hat = (PI * y as f64 / t as f64).sin().powi(2);
    // snap rounding residue so the trivial cases are exact
    let a_hat = if a_hat < 1e-15 {
        0.0
    } else if 1.0 - a_hat < 1e-15 {
        1.0
    } else {
        a_hat
    };
    AmplitudeEstimate {
        a_hat,
        t,
        error_bound: error_bound(a_hat, t),
        queries: t as u64,
    }
}

fn clock_bits(t: usize) -> Result<usize> {
    if !(2..=64).contains(&t) || !t.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("t must be a power of two in 2..=64, got {t}")));
    }
    Ok(t.trailing_zeros() as usize)
}

/// `Q = (2|ψ⟩⟨ψ| − I)(I − 2P)` applied in place.
fn rotate(v: &mut [Amplitude], psi: &[Amplitude], good: &[bool]) {
    for (a, &g) in v.iter_mut().zip(good) {
        if g {
            *a = -*a;
        }
    }
    let overlap: Amplitude = psi.iter().zip(v.iter()).map(|(p, a)| p.conj() * a).sum();
    for (a, p) in v.iter_mut().zip(psi) {
        *a = 2.0 * overlap * p - *a;
    }
}

/// Distribution of the clock readout `y ∈ [0, t)`.
pub fn amplitude_estimation_distribution(prep: &Circuit, good: &[usize], t: usize) -> Result<Vec<f64>> {
    let m = prep.n_qubits();
    if m > 12 {
        return Err(Error::QubitCount(m));
    }
    let mut psi = StateVector::zero_state(m)?;
    prep.apply_unitary(&mut psi)?;
    let mut flags = vec![false; psi.dim()];
    for &g in good {
        if g >= psi.dim() {
            return Err(Error::InvalidParameter(format!("good state {g} outside a {m}-qubit register")));
        }
        flags[g] = true;
    }
    distribution_for_state(&psi, &flags, t)
}

/// Same as [`amplitude_estimation_distribution`] for an already prepared
/// `|ψ⟩` and a per-basis-state flag.
pub fn distribution_for_state(psi: &StateVector, flags: &[bool], t: usize) -> Result<Vec<f64>> {
    let c = clock_bits(t)?;
    let dim = psi.dim();
    if flags.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: flags.len(),
        });
    }
    if c + psi.n_qubits() > crate::MAX_QUBITS {
        return Err(Error::QubitCount(c + psi.n_qubits()));
    }
    // [clock c][system m], clock already Hadamarded
    let norm = 1.0 / (t as f64).sqrt();
    let mut amps = vec![ZERO; t * dim];
    for y in 0..t {
        for (s, p) in psi.amplitudes().iter().enumerate() {
            amps[y * dim + s] = p * norm;
        }
    }
    for j in 0..c {
        // clock qubit j controls Q^(2^(c-1-j))
        let reps = 1usize << (c - 1 - j);
        let bit = 1usize << (c - 1 - j);
        for y in (0..t).filter(|y| y & bit != 0) {
            let slice = &mut amps[y * dim..(y + 1) * dim];
            for _ in 0..reps {
                rotate(slice, psi.amplitudes(), flags);
            }
        }
    }
    let mut joint = StateVector::from_amplitudes(amps)?;
    let clock: Vec<QubitIndex> = (0..c).collect();
    apply_qft(&mut joint, &clock, true)?;
    joint.marginal(&clock)
}

pub fn amplitude_estimation(
    prep: &Circuit,
    good: &[usize],
    t: usize,
    rng: &mut SeededRng,
) -> Result<AmplitudeEstimate> {
    let dist = amplitude_estimation_distribution(prep, good, t)?;
    let y = sample_index(dist.iter().copied(), rng);
    Ok(estimate_from_readout(y, t))
}

/// Median of `repeats` independent estimates; queries add up.
pub fn amplitude_estimation_median(
    prep: &Circuit,
    good: &[usize],
    t: usize,
    repeats: usize,
    rng: &mut SeededRng,
) -> Result<AmplitudeEstimate> {
    if repeats == 0 {
        return Err(Error::InvalidParameter("need at least one repeat".into()));
    }
    let dist = amplitude_estimation_distribution(prep, good, t)?;
    let mut values: Vec<f64> = (0..repeats)
        .map(|_| estimate_from_readout(sample_index(dist.iter().copied(), rng), t).a_hat)
        .collect();
    values.sort_by(f64::total_cmp);
    let a_hat = values[(repeats - 1) / 2];
    Ok(AmplitudeEstimate {
        a_hat,
        t,
        error_bound: error_bound(a_hat, t),
        queries: (t * repeats) as u64,
    })
}
