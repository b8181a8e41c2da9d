use serde::Serialize;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::seed::SeededRng;
use crate::state::{sample_index, Amplitude, StateVector, ZERO};
use crate::subroutines::{distribution_for_state, error_bound, estimate_from_readout};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonteCarloOutcome {
    pub mu_hat: f64,
    pub error_bound: f64,
    pub queries: u64,
}

/// `W(prep ⊗ I)|0⟩` with `W: |x⟩|0⟩ → |x⟩(√(1−φ(x))|0⟩ + √φ(x)|1⟩)`; the
/// flag marks ancilla = 1.
pub fn montecarlo_state(prep: &Circuit, phi: impl Fn(usize) -> f64) -> Result<(StateVector, Vec<bool>)> {
    let m = prep.n_qubits();
    if m + 1 > 12 {
        return Err(Error::QubitCount(m + 1));
    }
    let mut psi = StateVector::zero_state(m)?;
    prep.apply_unitary(&mut psi)?;
    let mut amps = vec![ZERO; 2 * psi.dim()];
    for (x, a) in psi.amplitudes().iter().enumerate() {
        let v = phi(x);
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::InvalidParameter(format!("phi({x}) = {v} outside [0, 1]")));
        }
        amps[2 * x] = a * Amplitude::new((1.0 - v).sqrt(), 0.0);
        amps[2 * x + 1] = a * Amplitude::new(v.sqrt(), 0.0);
    }
    let flags = (0..amps.len()).map(|i| i & 1 == 1).collect();
    Ok((StateVector::from_amplitudes(amps)?, flags))
}

/// `Σ_x |ψ_x|² φ(x)`.
pub fn exact_mean(prep: &Circuit, phi: impl Fn(usize) -> f64) -> Result<f64> {
    let (state, flags) = montecarlo_state(prep, phi)?;
    Ok(state
        .probabilities()
        .iter()
        .zip(&flags)
        .filter(|(_, &f)| f)
        .map(|(p, _)| p)
        .sum())
}

pub fn montecarlo_distribution(prep: &Circuit, phi: impl Fn(usize) -> f64, t: usize) -> Result<Vec<f64>> {
    let (state, flags) = montecarlo_state(prep, phi)?;
    distribution_for_state(&state, &flags, t)
}

/// Median of `medians` amplitude estimates; each costs `t` queries.
pub fn montecarlo_mean(
    prep: &Circuit,
    phi: impl Fn(usize) -> f64,
    t: usize,
    medians: usize,
    rng: &mut SeededRng,
) -> Result<MonteCarloOutcome> {
    if medians == 0 {
        return Err(Error::InvalidParameter("need at least one repeat".into()));
    }
    let dist = montecarlo_distribution(prep, phi, t)?;
    let mut values: Vec<f64> = (0..medians)
        .map(|_| estimate_from_readout(sample_index(dist.iter().copied(), rng), t).a_hat)
        .collect();
    values.sort_by(f64::total_cmp);
    let mu_hat = values[(medians - 1) / 2];
    Ok(MonteCarloOutcome {
        mu_hat,
        error_bound: error_bound(mu_hat, t),
        queries: (t * medians) as u64,
    })
}

/// Median of `|â − μ|` under the exact readout distribution.
pub fn median_abs_error(dist: &[f64], t: usize, mu: f64) -> f64 {
    let mut errs: Vec<(f64, f64)> = dist
        .iter()
        .enumerate()
        .map(|(y, &p)| ((estimate_from_readout(y, t).a_hat - mu).abs(), p))
        .collect();
    errs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut acc = 0.0;
    for (e, p) in &errs {
        acc += p;
        if acc >= 0.5 {
            return *e;
        }
    }
    errs.last().map_or(0.0, |e| e.0)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
