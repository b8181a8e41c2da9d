//! Exact statevector representation and Born-rule measurement.
//!
//! Index convention: qubit 0 is the leftmost symbol of a ket and the most
//! significant bit of the amplitude index, so `|q0 q1 ... q(n-1)>` lives at
//! index `sum q_i * 2^(n-1-i)`. Every module in the crate follows this.

use std::fmt;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::seed::SeededRng;
use crate::{ENTANGLE_TOL, MAX_QUBITS, NORM_TOL};

pub type Amplitude = Complex64;

pub(crate) const ZERO: Amplitude = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Amplitude = Complex64::new(1.0, 0.0);

/// Index of a qubit inside a register.
pub type QubitIndex = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum MeasurementBasis {
    /// `{|0>, |1>}`
    Computational,
    /// `{|+>, |->}`; outcome 0 reads `+`.
    Hadamard,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementOutcome {
    /// Measured register value, first measured qubit most significant.
    pub value: usize,
    pub width: usize,
    pub post_state: StateVector,
}

impl MeasurementOutcome {
    pub fn bits(&self) -> String {
        format_bits(self.value, self.width)
    }
}

pub(crate) fn format_bits(value: usize, width: usize) -> String {
    (0..width)
        .map(|i| if (value >> (width - 1 - i)) & 1 == 1 { '1' } else { '0' })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Amplitude>,
}

fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount(n));
    }
    Ok(())
}

impl StateVector {
    pub fn zero_state(n: usize) -> Result<Self> {
        Self::basis_state(n, 0)
    }

    pub fn basis_state(n: usize, index: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Ok(Self { n_qubits: n, amps })
    }

    /// Basis state from a ket label such as `"01"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let mut index = 0usize;
        for (pos, c) in bits.chars().enumerate() {
            index = (index << 1)
                | match c {
                    '0' => 0,
                    '1' => 1,
                    _ => {
                        return Err(Error::Parse {
                            line: 1,
                            token: c.to_string(),
                            message: format!("bit label position {pos} is not 0 or 1"),
                        })
                    }
                };
        }
        Self::basis_state(bits.len(), index)
    }

    /// Takes ownership of an amplitude array, which must already be normalized.
    pub fn from_amplitudes(amps: Vec<Amplitude>) -> Result<Self> {
        let n = dimension_to_qubits(amps.len())?;
        if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Normalizes an arbitrary nonzero vector.
    pub fn normalized(mut amps: Vec<Amplitude>) -> Result<Self> {
        let n = dimension_to_qubits(amps.len())?;
        if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n_qubits: n, amps })
    }

    pub fn qubit(alpha: Amplitude, beta: Amplitude) -> Result<Self> {
        Self::from_amplitudes(vec![alpha, beta])
    }

    pub fn plus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            n_qubits: 1,
            amps: vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        }
    }

    pub fn minus() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            n_qubits: 1,
            amps: vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
        }
    }

    /// Uniform superposition over all `2^n` basis states.
    pub fn uniform(n: usize) -> Result<Self> {
        check_qubits(n)?;
        let dim = 1usize << n;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(Self {
            n_qubits: n,
            amps: vec![a; dim],
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Amplitude] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Amplitude {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Amplitude> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Scales the amplitudes back to unit norm after accumulated rounding.
    pub fn renormalize(&mut self) {
        let norm = self.norm_sqr().sqrt();
        if norm > 0.0 {
            self.amps.iter_mut().for_each(|a| *a /= norm);
        }
    }

    /// Bit mask of qubit `q` inside an amplitude index.
    #[inline]
    pub fn mask(&self, q: QubitIndex) -> usize {
        1usize << (self.n_qubits - 1 - q)
    }

    pub fn check_qubit(&self, q: QubitIndex) -> Result<()> {
        if q >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                n_qubits: self.n_qubits,
            });
        }
        Ok(())
    }

    pub(crate) fn check_distinct(&self, qubits: &[QubitIndex]) -> Result<()> {
        for (i, &q) in qubits.iter().enumerate() {
            self.check_qubit(q)?;
            if qubits[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    /// `a ⊗ b`; the qubits of `self` precede those of `other`.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n_qubits + other.n_qubits;
        check_qubits(n)?;
        let mut amps = Vec::with_capacity(1 << n);
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Ok(StateVector { n_qubits: n, amps })
    }

    /// `<self|other>` with the conjugate on the left.
    pub fn inner_product(&self, other: &StateVector) -> Result<Amplitude> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|²`, which ignores global phase.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner_product(other)?.norm_sqr().min(1.0))
    }

    /// Product test for two-qubit states via the determinant of the 2×2
    /// amplitude matrix `M[i][j] = amps[2i + j]`.
    pub fn is_product_two_qubit(&self) -> Result<bool> {
        if self.n_qubits != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                found: self.dim(),
            });
        }
        let a = &self.amps;
        let det = a[0] * a[3] - a[1] * a[2];
        Ok(det.norm() < ENTANGLE_TOL)
    }

    /// Marginal probability that qubit `q` reads 1.
    pub fn probability_of_one(&self, q: QubitIndex) -> Result<f64> {
        self.check_qubit(q)?;
        let m = self.mask(q);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Extracts the value of the listed qubits from a basis index; the first
    /// listed qubit becomes the most significant bit.
    #[inline]
    pub fn register_value(&self, index: usize, qubits: &[QubitIndex]) -> usize {
        qubits
            .iter()
            .fold(0, |acc, &q| (acc << 1) | usize::from(index & self.mask(q) != 0))
    }

    /// Writes a register value into a basis index.
    #[inline]
    pub fn with_register_value(&self, index: usize, qubits: &[QubitIndex], value: usize) -> usize {
        let w = qubits.len();
        qubits.iter().enumerate().fold(index, |acc, (k, &q)| {
            let m = self.mask(q);
            if (value >> (w - 1 - k)) & 1 == 1 {
                acc | m
            } else {
                acc & !m
            }
        })
    }

    /// Distribution of the register formed by `qubits`.
    pub fn marginal(&self, qubits: &[QubitIndex]) -> Result<Vec<f64>> {
        self.check_distinct(qubits)?;
        let mut dist = vec![0.0; 1 << qubits.len()];
        for (i, a) in self.amps.iter().enumerate() {
            dist[self.register_value(i, qubits)] += a.norm_sqr();
        }
        Ok(dist)
    }

    /// Samples a full computational-basis measurement by inverse CDF.
    pub fn measure_all(&self, rng: &mut SeededRng) -> MeasurementOutcome {
        let value = sample_index(self.amps.iter().map(|a| a.norm_sqr()), rng);
        let mut amps = vec![ZERO; self.dim()];
        amps[value] = ONE;
        MeasurementOutcome {
            value,
            width: self.n_qubits,
            post_state: StateVector {
                n_qubits: self.n_qubits,
                amps,
            },
        }
    }

    /// Measures one qubit. Hadamard-basis measurement is `H`, computational
    /// measurement, `H`; outcome 0 is `+`.
    pub fn measure_qubit(
        &self,
        q: QubitIndex,
        basis: MeasurementBasis,
        rng: &mut SeededRng,
    ) -> Result<MeasurementOutcome> {
        self.check_qubit(q)?;
        match basis {
            MeasurementBasis::Computational => self.measure_qubits(&[q], rng),
            MeasurementBasis::Hadamard => {
                let h = GateMatrix::hadamard();
                let mut s = self.clone();
                s.apply_matrix(&[q], &h)?;
                let mut out = s.measure_qubits(&[q], rng)?;
                out.post_state.apply_matrix(&[q], &h)?;
                Ok(out)
            }
        }
    }

    /// Computational-basis measurement of a subset of qubits; the rest of the
    /// register is projected and renormalized.
    pub fn measure_qubits(
        &self,
        qubits: &[QubitIndex],
        rng: &mut SeededRng,
    ) -> Result<MeasurementOutcome> {
        let dist = self.marginal(qubits)?;
        let value = sample_index(dist.iter().copied(), rng);
        let post_state = self.project(qubits, value)?;
        Ok(MeasurementOutcome {
            value,
            width: qubits.len(),
            post_state,
        })
    }

    /// Projects the register `qubits` onto `value` and renormalizes.
    pub fn project(&self, qubits: &[QubitIndex], value: usize) -> Result<StateVector> {
        self.check_distinct(qubits)?;
        let mut amps = self.amps.clone();
        for (i, a) in amps.iter_mut().enumerate() {
            if self.register_value(i, qubits) != value {
                *a = ZERO;
            }
        }
        StateVector::normalized(amps)
    }

    /// Conditional state of the qubits not in `qubits`, given that register
    /// reads `value`; returns the reduced state and the branch probability.
    pub fn condition_on(
        &self,
        qubits: &[QubitIndex],
        value: usize,
    ) -> Result<(StateVector, f64)> {
        self.check_distinct(qubits)?;
        let rest: Vec<QubitIndex> = (0..self.n_qubits).filter(|q| !qubits.contains(q)).collect();
        if rest.is_empty() {
            return Err(Error::InvalidParameter(
                "conditioning on every qubit leaves no register".into(),
            ));
        }
        let mut amps = vec![ZERO; 1 << rest.len()];
        for (i, a) in self.amps.iter().enumerate() {
            if self.register_value(i, qubits) == value {
                amps[self.register_value(i, &rest)] = *a;
            }
        }
        let p: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        Ok((StateVector::normalized(amps)?, p))
    }

    /// Applies a `2^k × 2^k` matrix to the listed target qubits (first target
    /// is the most significant row/column bit of the matrix).
    pub fn apply_matrix(&mut self, targets: &[QubitIndex], m: &GateMatrix) -> Result<()> {
        self.apply_controlled(&[], targets, m)
    }

    /// Applies `m` to `targets` on the subspace where every control reads 1.
    pub fn apply_controlled(
        &mut self,
        controls: &[QubitIndex],
        targets: &[QubitIndex],
        m: &GateMatrix,
    ) -> Result<()> {
        let all: Vec<QubitIndex> = controls.iter().chain(targets).copied().collect();
        self.check_distinct(&all)?;
        let k = targets.len();
        if m.dim() != 1 << k {
            return Err(Error::DimensionMismatch {
                expected: 1 << k,
                found: m.dim(),
            });
        }
        let control_mask: usize = controls.iter().map(|&q| self.mask(q)).sum();
        let target_masks: Vec<usize> = targets.iter().map(|&q| self.mask(q)).collect();
        let target_mask: usize = target_masks.iter().sum();
        let sub = 1usize << k;
        // offsets[r] = basis-index offset of matrix row/column r
        let offsets: Vec<usize> = (0..sub)
            .map(|r| {
                (0..k)
                    .filter(|&b| (r >> (k - 1 - b)) & 1 == 1)
                    .map(|b| target_masks[b])
                    .sum()
            })
            .collect();

        if k == 1 {
            let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
            let t = target_masks[0];
            for base in 0..self.dim() {
                if base & target_mask != 0 || base & control_mask != control_mask {
                    continue;
                }
                let a0 = self.amps[base];
                let a1 = self.amps[base | t];
                self.amps[base] = m00 * a0 + m01 * a1;
                self.amps[base | t] = m10 * a0 + m11 * a1;
            }
            return Ok(());
        }

        let mut gathered = vec![ZERO; sub];
        for base in 0..self.dim() {
            if base & target_mask != 0 || base & control_mask != control_mask {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let row = m.row(r);
                self.amps[base | off] = row.iter().zip(&gathered).map(|(x, y)| x * y).sum();
            }
        }
        Ok(())
    }

    /// Applies a basis permutation `|i> -> |perm(i)>`. `perm` must be a
    /// bijection on `0..dim`.
    pub fn apply_permutation(&mut self, perm: impl Fn(usize) -> usize) {
        let mut out = vec![ZERO; self.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            out[perm(i)] = *a;
        }
        self.amps = out;
    }

    /// Multiplies each amplitude by a unit-modulus phase.
    pub fn apply_diagonal(&mut self, phase: impl Fn(usize) -> Amplitude) {
        for (i, a) in self.amps.iter_mut().enumerate() {
            *a *= phase(i);
        }
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Amplitude] {
        &mut self.amps
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > 1e-24 {
                writeln!(f, "|{}>: {:+.6}{:+.6}i", format_bits(i, self.n_qubits), a.re, a.im)?;
            }
        }
        Ok(())
    }
}

fn dimension_to_qubits(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(len));
    }
    let n = len.trailing_zeros() as usize;
    check_qubits(n)?;
    Ok(n)
}

/// Inverse-CDF draw from unnormalized weights.
pub(crate) fn sample_index(weights: impl Iterator<Item = f64> + Clone, rng: &mut SeededRng) -> usize {
    let total: f64 = weights.clone().sum();
    let u: f64 = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            last_nonzero = i;
        }
        acc += w;
        if u < acc {
            return i;
        }
    }
    last_nonzero
}
