use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use serde::Serialize;

use crate::circuit::Oracle;
use crate::error::{Error, Result};
use crate::gates::{matrix_of, Gate};
use crate::seed::SeededRng;
use crate::state::{QubitIndex, StateVector};
use crate::subroutines::apply_qft;

pub type RealFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Gradient of `f` at `x0` by one coherent oracle query.
#[derive(Clone)]
pub struct GradientProblem {
    pub d: usize,
    /// Bits per input register (`N = 2^n` grid points).
    pub n: usize,
    /// Output register bits (`N0 = 2^n0`).
    pub n0: usize,
    /// Bound on the gradient components.
    pub m: f64,
    /// Step scale of the sampling box.
    pub l: f64,
    pub x0: Vec<f64>,
    pub f: RealFn,
}

impl std::fmt::Debug for GradientProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradientProblem")
            .field("d", &self.d)
            .field("n", &self.n)
            .field("n0", &self.n0)
            .field("m", &self.m)
            .field("l", &self.l)
            .field("x0", &self.x0)
            .finish()
    }
}

/// `⌈log2[(max f − min f) / ((m l / 2^n) · θ / 2π)]⌉`.
pub fn required_output_bits(f_range: f64, m: f64, l: f64, n: usize, theta: f64) -> Result<usize> {
    let denom = m * l / (1u64 << n) as f64 * theta / (2.0 * std::f64::consts::PI);
    let ratio = f_range / denom;
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(Error::InvalidParameter(format!("output-bit formula undefined for ratio {ratio}")));
    }
    Ok(ratio.log2().ceil().max(1.0) as usize)
}

impl GradientProblem {
    pub fn new(
        n: usize,
        n0: usize,
        m: f64,
        l: f64,
        x0: Vec<f64>,
        f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let d = x0.len();
        if d == 0 || n == 0 || n0 == 0 {
            return Err(Error::InvalidParameter("empty register".into()));
        }
        if d * n + n0 > crate::MAX_QUBITS {
            return Err(Error::QubitCount(d * n + n0));
        }
        if !(m > 0.0 && l > 0.0) {
            return Err(Error::InvalidParameter("m and l must be positive".into()));
        }
        Ok(Self {
            d,
            n,
            n0,
            m,
            l,
            x0,
            f: Arc::new(f),
        })
    }

    /// Sampling point for grid index `delta` of register `j`.
    fn point(&self, deltas: &[u64]) -> Vec<f64> {
        let big_n = (1u64 << self.n) as f64;
        self.x0
            .iter()
            .zip(deltas)
            .map(|(x, &dl)| x + self.l * (dl as f64 - big_n / 2.0) / big_n)
            .collect()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GradientOutcome {
    pub gradient: Vec<f64>,
    /// Centered register readouts `k_j ∈ [−N/2, N/2)`.
    pub readout: Vec<i64>,
    pub queries: u64,
}

pub fn jordan_gradient(p: &GradientProblem, rng: &mut SeededRng) -> Result<GradientOutcome> {
    let (d, n, n0) = (p.d, p.n, p.n0);
    let big_n = 1u64 << n;
    let big_n0 = 1u64 << n0;
    let width = d * n + n0;
    let scale = big_n0 as f64 * big_n as f64 / (p.m * p.l);

    let non_finite = Arc::new(AtomicBool::new(false));
    let flag = Arc::clone(&non_finite);
    let problem = p.clone();
    let mut oracle = Oracle::mod_add(d * n, n0, move |x| {
        let deltas: Vec<u64> = (0..d).map(|j| (x >> ((d - 1 - j) * n)) & (big_n - 1)).collect();
        let v = (problem.f)(&problem.point(&deltas));
        if !v.is_finite() {
            flag.store(true, Ordering::Relaxed);
            return 0;
        }
        (v * scale).round().rem_euclid(big_n0 as f64) as u64
    })?;

    let input: Vec<QubitIndex> = (0..d * n).collect();
    let output: Vec<QubitIndex> = (d * n..width).collect();
    let mut state = StateVector::zero_state(width)?;
    let h = matrix_of(&Gate::H);
    let x = matrix_of(&Gate::X);
    for &q in &input {
        state.apply_matrix(&[q], &h)?;
    }
    for &q in &output {
        state.apply_matrix(&[q], &x)?;
    }
    apply_qft(&mut state, &output, true)?;
    oracle.apply(&mut state, &input, &output)?;
    if non_finite.load(Ordering::Relaxed) {
        return Err(Error::InvalidParameter("f is not finite on the sampling box".into()));
    }
    for j in 0..d {
        apply_qft(&mut state, &input[j * n..(j + 1) * n], false)?;
    }
    let mut readout = Vec::with_capacity(d);
    let mut gradient = Vec::with_capacity(d);
    let mut current = state;
    for j in 0..d {
        let reg = &input[j * n..(j + 1) * n];
        let out = current.measure_qubits(reg, rng)?;
        let raw = out.value as i64;
        let k = if raw >= (big_n / 2) as i64 { raw - big_n as i64 } else { raw };
        readout.push(k);
        gradient.push(p.m * k as f64 / big_n as f64);
        current = out.post_state;
    }
    Ok(GradientOutcome {
        gradient,
        readout,
        queries: oracle.query_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::seeded;

    #[test]
    fn linear_family_exact() {
        let mut rng = seeded(4);
        let (n, m) = (4usize, 8.0);
        for g in [vec![1.5], vec![-2.0, 0.5], vec![3.0, -4.0, 0.0]] {
            let coeffs = g.clone();
            let p = GradientProblem::new(n, n + 2, m, 0.1, vec![0.3; g.len()], move |x| {
                x.iter().zip(&coeffs).map(|(a, b)| a * b).sum::<f64>() + 2.0
            })
            .unwrap();
            let out = jordan_gradient(&p, &mut rng).unwrap();
            assert_eq!(out.gradient, g);
            assert_eq!(out.queries, 1);
        }
    }

    #[test]
    fn constant_gives_zero() {
        let mut rng = seeded(0);
        let p = GradientProblem::new(3, 3, 4.0, 1.0, vec![1.0, 2.0], |_| 7.25).unwrap();
        let out = jordan_gradient(&p, &mut rng).unwrap();
        assert_eq!(out.gradient, vec![0.0, 0.0]);
        assert_eq!(out.queries, 1);
    }

    #[test]
    fn rejects_non_finite_and_overflow() {
        let mut rng = seeded(0);
        let p = GradientProblem::new(2, 2, 1.0, 1.0, vec![0.0], |_| f64::NAN).unwrap();
        assert!(jordan_gradient(&p, &mut rng).is_err());
        assert!(GradientProblem::new(8, 8, 1.0, 1.0, vec![0.0; 3], |_| 0.0).is_err());
    }

    #[test]
    fn output_bits_formula() {
        // range 1, m l / N = 1/16, theta / 2pi = 1/4 -> log2(64) = 6
        let n0 = required_output_bits(1.0, 1.0, 1.0, 4, std::f64::consts::PI / 2.0).unwrap();
        assert_eq!(n0, 6);
    }
}
