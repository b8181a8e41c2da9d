//! Linear congruential generators, a simulated QRNG, and uniformity checks.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::report::ExperimentReport;
use crate::seed::{seeded, SeededRng};
use crate::state::StateVector;

/// Rejection level for the chi-square uniformity test.
pub const CHI_SQUARE_ALPHA: f64 = 0.001;
pub const CHI_SQUARE_BINS: usize = 16;
pub const MAX_LAG: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LcgParams {
    pub a: u64,
    pub c: u64,
    pub m: u64,
}

impl LcgParams {
    pub fn new(a: u64, c: u64, m: u64) -> Result<Self> {
        if m == 0 || a >= m || c >= m {
            return Err(Error::InvalidParameter(format!("LCG needs m > 0, a < m, c < m (got a={a}, c={c}, m={m})")));
        }
        Ok(Self { a, c, m })
    }

    /// `a = 7^5, c = 0, m = 2^31 − 1`.
    pub fn minimal_standard() -> Self {
        Self {
            a: 16807,
            c: 0,
            m: 2_147_483_647,
        }
    }

    /// Short-period textbook parameters.
    pub fn bad_demo() -> Self {
        Self { a: 205, c: 57, m: 256 }
    }
}

/// `(a x + c) mod m` in 128-bit arithmetic.
pub fn lcg_next(p: LcgParams, x: u64) -> Result<u64> {
    if x >= p.m {
        return Err(Error::InvalidParameter(format!("state {x} not below modulus {}", p.m)));
    }
    Ok(((p.a as u128 * x as u128 + p.c as u128) % p.m as u128) as u64)
}

#[derive(Debug, Clone)]
pub struct Lcg {
    params: LcgParams,
    state: u64,
}

impl Lcg {
    pub fn new(params: LcgParams, seed: u64) -> Result<Self> {
        lcg_next(params, seed)?;
        Ok(Self { params, state: seed })
    }

    pub fn params(&self) -> LcgParams {
        self.params
    }

    /// Next value mapped to `[0, 1)`.
    pub fn next_unit(&mut self) -> f64 {
        self.next().expect("infinite") as f64 / self.params.m as f64
    }
}

impl Iterator for Lcg {
    type Item = u64;
    fn next(&mut self) -> Option<u64> {
        self.state = ((self.params.a as u128 * self.state as u128 + self.params.c as u128) % self.params.m as u128) as u64;
        Some(self.state)
    }
}

fn coin_circuit() -> Circuit {
    let mut c = Circuit::new(1).expect("one qubit");
    c.h(0).and_then(|c| c.measure(&[0])).expect("valid coin circuit");
    c
}

/// One run of the single-Hadamard coin circuit. The simulator's sampling
/// seed stands in for physical randomness.
pub fn qrng_bit(rng: &mut SeededRng) -> Result<u8> {
    let (_, bits) = coin_circuit().run(&StateVector::zero_state(1)?, rng)?;
    Ok(u8::from(bits.as_deref() == Some("1")))
}

/// Pre-measurement state of the coin circuit.
pub fn qrng_state() -> Result<StateVector> {
    let mut s = StateVector::zero_state(1)?;
    coin_circuit().apply_unitary(&mut s)?;
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StreamSource {
    Lcg { params: LcgParams, seed: u64 },
    Qrng { seed: u64 },
}

/// Replayable stream of integer draws and their unit-interval images.
#[derive(Debug, Clone)]
pub struct BitStream {
    source: StreamSource,
    emitted: u64,
    inner: StreamInner,
}

#[derive(Debug, Clone)]
enum StreamInner {
    Lcg(Lcg),
    Qrng(SeededRng),
}

/// Bits per QRNG word.
pub const QRNG_WORD_BITS: u32 = 16;

impl BitStream {
    pub fn new(source: StreamSource) -> Result<Self> {
        let inner = match source {
            StreamSource::Lcg { params, seed } => StreamInner::Lcg(Lcg::new(params, seed)?),
            StreamSource::Qrng { seed } => StreamInner::Qrng(seeded(seed)),
        };
        Ok(Self {
            source,
            emitted: 0,
            inner,
        })
    }

    pub fn source(&self) -> StreamSource {
        self.source
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    /// Exclusive upper bound of [`BitStream::next_value`].
    pub fn modulus(&self) -> u64 {
        match &self.inner {
            StreamInner::Lcg(l) => l.params().m,
            StreamInner::Qrng(_) => 1 << QRNG_WORD_BITS,
        }
    }

    pub fn next_value(&mut self) -> Result<u64> {
        self.emitted += 1;
        match &mut self.inner {
            StreamInner::Lcg(l) => Ok(l.next().expect("infinite")),
            StreamInner::Qrng(rng) => {
                (0..QRNG_WORD_BITS).try_fold(0u64, |acc, _| Ok((acc << 1) | u64::from(qrng_bit(rng)?)))
            }
        }
    }

    pub fn take_values(&mut self, n: usize) -> Result<Vec<u64>> {
        (0..n).map(|_| self.next_value()).collect()
    }

    /// Raw bits: LCG values contribute their low bit, QRNG runs one bit each.
    pub fn take_bits(&mut self, n: usize) -> Result<Vec<u8>> {
        (0..n)
            .map(|_| {
                self.emitted += 1;
                match &mut self.inner {
                    StreamInner::Lcg(l) => Ok((l.next().expect("infinite") & 1) as u8),
                    StreamInner::Qrng(rng) => qrng_bit(rng),
                }
            })
            .collect()
    }
}

/// Smallest `p <= n/2` with `x[i + p] == x[i]` throughout the window.
pub fn detect_period(values: &[u64]) -> Option<usize> {
    let n = values.len();
    (1..=n / 2).find(|&p| (0..n - p).all(|i| values[i + p] == values[i]))
}

/// Lag-`k` sample autocorrelation.
pub fn autocorrelation(xs: &[f64], lag: usize) -> f64 {
    let n = xs.len();
    if lag >= n {
        return 0.0;
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    let var: f64 = xs.iter().map(|x| (x - mean).powi(2)).sum();
    if var == 0.0 {
        return 1.0;
    }
    let cov: f64 = (0..n - lag).map(|i| (xs[i] - mean) * (xs[i + lag] - mean)).sum();
    cov / var
}

/// Chi-square statistic over equal bins of `[0, 1)` and its upper-tail p-value.
pub fn chi_square_uniform(xs: &[f64], bins: usize) -> (f64, f64) {
    let mut counts = vec![0usize; bins];
    for &x in xs {
        counts[((x * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let expected = xs.len() as f64 / bins as f64;
    let stat: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dist = ChiSquared::new((bins - 1) as f64).expect("positive degrees of freedom");
    (stat, dist.sf(stat))
}

pub const MIN_REPORT_DRAWS: usize = 500;

/// Mean deviation, lag 1..16 autocorrelations, 16-bin chi-square and the
/// detected period of the first `n` draws.
pub fn uniformity_report(name: &str, stream: &mut BitStream, n: usize, seed: u64) -> Result<ExperimentReport> {
    if n < MIN_REPORT_DRAWS {
        return Err(Error::InvalidParameter(format!("need at least {MIN_REPORT_DRAWS} draws, got {n}")));
    }
    let modulus = stream.modulus() as f64;
    let raw = stream.take_values(n)?;
    let unit: Vec<f64> = raw.iter().map(|&v| v as f64 / modulus).collect();
    let mean = unit.iter().sum::<f64>() / n as f64;
    let acf: Vec<f64> = (1..=MAX_LAG).map(|k| autocorrelation(&unit, k)).collect();
    let max_acf = acf.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let (chi, p) = chi_square_uniform(&unit, CHI_SQUARE_BINS);
    let period = detect_period(&raw);

    let mut report = ExperimentReport::new(format!("rng.{name}"), seed);
    report
        .param("source", serde_json::to_value(stream.source()).expect("plain enum"))
        .param("n", n)
        .result("mean", mean)
        .result("mean_deviation", (mean - 0.5).abs())
        .result("relative_mean_deviation", (mean - 0.5).abs() / 0.5)
        .result("autocorrelation", acf)
        .result("max_abs_autocorrelation", max_acf)
        .result("chi_square", chi)
        .result("chi_square_p", p)
        .result("chi_square_alpha", CHI_SQUARE_ALPHA)
        .result(
            "period",
            period.map_or(serde_json::Value::Null, serde_json::Value::from),
        );
    Ok(report)
}

/// One decimal value per line.
pub fn format_decimal(values: &[u64]) -> String {
    values.iter().map(|v| format!("{v}\n")).collect()
}

/// Bits packed most-significant-first, 64 per line as 16 hex digits; a
/// final partial word is zero-padded on the right.
pub fn pack_bits_hex(bits: &[u8]) -> String {
    bits.chunks(64)
        .map(|chunk| {
            let word = chunk
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &b)| acc | (u64::from(b & 1) << (63 - i)));
            format!("{word:016x}\n")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::trial_rng;

    #[test]
    fn minimal_standard_first_value() {
        let p = LcgParams::minimal_standard();
        assert_eq!(lcg_next(p, 1).unwrap(), 16807);
        let mut g = Lcg::new(p, 1).unwrap();
        assert_eq!(g.next(), Some(16807));
        assert_eq!(g.next(), Some(282_475_249));
    }

    #[test]
    fn degenerate_parameters() {
        let p = LcgParams::new(1, 0, 97).unwrap();
        assert_eq!(lcg_next(p, 42).unwrap(), 42);
        let p = LcgParams::new(5, 0, 97).unwrap();
        assert!(Lcg::new(p, 0).unwrap().take(10).all(|v| v == 0));
        assert!(LcgParams::new(5, 0, 0).is_err());
        assert!(LcgParams::new(97, 0, 97).is_err());
        assert!(LcgParams::new(5, 97, 97).is_err());
        assert!(lcg_next(LcgParams::bad_demo(), 256).is_err());
    }

    #[test]
    fn minimal_standard_window() {
        let p = LcgParams::minimal_standard();
        let mut g = Lcg::new(p, 1).unwrap();
        for _ in 0..1_000_000 {
            let v = g.next().unwrap();
            assert!(v < p.m && v != 1);
            let u = v as f64 / p.m as f64;
            assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn periods() {
        let mut s = BitStream::new(StreamSource::Lcg {
            params: LcgParams::minimal_standard(),
            seed: 1,
        })
        .unwrap();
        let r = uniformity_report("lcg", &mut s, 500, 1).unwrap();
        assert!(r.results["period"].is_null());
        let mut s = BitStream::new(StreamSource::Lcg {
            params: LcgParams::bad_demo(),
            seed: 1,
        })
        .unwrap();
        let r = uniformity_report("bad", &mut s, 1000, 1).unwrap();
        assert_eq!(r.results["period"], serde_json::json!(256));
        assert_eq!(detect_period(&[1, 2, 3, 1, 2, 3, 1]), Some(3));
        assert_eq!(detect_period(&[1, 2, 3, 4]), None);
    }

    #[test]
    fn qrng_bits() {
        let s = qrng_state().unwrap();
        for (a, b) in s.amplitudes().iter().zip(StateVector::plus().amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        assert!((s.probability_of_one(0).unwrap() - 0.5).abs() < 1e-15);
        let mut rng = seeded(10);
        let n = 100_000;
        let ones: u32 = (0..n).map(|_| u32::from(qrng_bit(&mut rng).unwrap())).sum();
        let sigma = (0.25 / n as f64).sqrt();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 3.0 * sigma);
        let a = BitStream::new(StreamSource::Qrng { seed: 3 }).unwrap().take_bits(256).unwrap();
        let b = BitStream::new(StreamSource::Qrng { seed: 3 }).unwrap().take_bits(256).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn qrng_passes_chi_square() {
        let runs = 200;
        let pass = (0..runs)
            .filter(|&i| {
                let mut rng = trial_rng(31, i);
                let xs: Vec<f64> = (0..1000)
                    .map(|_| {
                        let w = (0..16).fold(0u32, |acc, _| (acc << 1) | u32::from(qrng_bit(&mut rng).unwrap()));
                        w as f64 / 65536.0
                    })
                    .collect();
                chi_square_uniform(&xs, CHI_SQUARE_BINS).1 > CHI_SQUARE_ALPHA
            })
            .count();
        assert!(pass as f64 / runs as f64 >= 0.99);
    }

    #[test]
    fn stream_formats() {
        assert_eq!(format_decimal(&[1, 16807]), "1\n16807\n");
        let mut bits = vec![0u8; 64];
        bits[0] = 1;
        bits[63] = 1;
        bits.push(1);
        assert_eq!(pack_bits_hex(&bits), "8000000000000001\n8000000000000000\n");
    }
}
