//! Circuits as ordered gate applications, executed against [`StateVector`].

use std::ops::Add;

use crate::error::{Error, Result};
use crate::gates::{matrix_of, toffoli_decomposition_on, Gate, GateMatrix};
use crate::seed::SeededRng;
use crate::state::{QubitIndex, StateVector};

mod format;
mod oracle;

pub use format::{deserialize, serialize};
pub use oracle::{Oracle, OracleTarget};

#[derive(Debug, Clone, PartialEq)]
pub struct GateApplication {
    pub gate: Gate,
    /// Controls first for controlled gates.
    pub targets: Vec<QubitIndex>,
}

impl GateApplication {
    pub fn new(gate: Gate, targets: Vec<QubitIndex>) -> Self {
        Self { gate, targets }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        self.gate.validate()?;
        if self.targets.len() != self.gate.arity() {
            return Err(Error::DimensionMismatch {
                expected: self.gate.arity(),
                found: self.targets.len(),
            });
        }
        for (i, &q) in self.targets.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, n_qubits });
            }
            if self.targets[..i].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        apply_gate(state, &self.gate, &self.targets)
    }

    pub fn adjoint(&self) -> GateApplication {
        GateApplication::new(Gate::adjoint_of(self.gate.clone()), self.targets.clone())
    }
}

pub(crate) fn apply_gate(state: &mut StateVector, gate: &Gate, targets: &[QubitIndex]) -> Result<()> {
    let (n_controls, inner) = gate.peel_controls();
    if targets.len() != n_controls + inner.arity() {
        return Err(Error::DimensionMismatch {
            expected: n_controls + inner.arity(),
            found: targets.len(),
        });
    }
    let (controls, rest) = targets.split_at(n_controls);
    match inner {
        Gate::I => {
            state.check_distinct(targets)?;
            Ok(())
        }
        Gate::Swap if controls.is_empty() => {
            state.check_distinct(targets)?;
            let (ma, mb) = (state.mask(rest[0]), state.mask(rest[1]));
            state.apply_permutation(|i| {
                let (a, b) = (i & ma != 0, i & mb != 0);
                if a == b {
                    i
                } else {
                    i ^ ma ^ mb
                }
            });
            Ok(())
        }
        g => state.apply_controlled(controls, rest, &matrix_of(g)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct GateComplexity {
    pub elementary_gate_count: usize,
}

impl Add for GateComplexity {
    type Output = GateComplexity;
    fn add(self, rhs: Self) -> Self {
        GateComplexity {
            elementary_gate_count: self.elementary_gate_count + rhs.elementary_gate_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    steps: Vec<GateApplication>,
    final_measurement: Option<Vec<QubitIndex>>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > crate::MAX_QUBITS {
            return Err(Error::QubitCount(n_qubits));
        }
        Ok(Self {
            n_qubits,
            steps: Vec::new(),
            final_measurement: None,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn steps(&self) -> &[GateApplication] {
        &self.steps
    }

    pub fn final_measurement(&self) -> Option<&[QubitIndex]> {
        self.final_measurement.as_deref()
    }

    pub fn push(&mut self, gate: Gate, targets: Vec<QubitIndex>) -> Result<&mut Self> {
        let step = GateApplication::new(gate, targets);
        step.validate(self.n_qubits)?;
        self.steps.push(step);
        Ok(self)
    }

    pub fn h(&mut self, q: QubitIndex) -> Result<&mut Self> {
        self.push(Gate::H, vec![q])
    }

    pub fn x(&mut self, q: QubitIndex) -> Result<&mut Self> {
        self.push(Gate::X, vec![q])
    }

    pub fn cnot(&mut self, control: QubitIndex, target: QubitIndex) -> Result<&mut Self> {
        self.push(Gate::Cnot, vec![control, target])
    }

    pub fn measure(&mut self, qubits: &[QubitIndex]) -> Result<&mut Self> {
        let mut all = self.final_measurement.take().unwrap_or_default();
        for &q in qubits {
            if q >= self.n_qubits {
                return Err(Error::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
            if all.contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
            all.push(q);
        }
        self.final_measurement = Some(all);
        Ok(self)
    }

    /// Appends all steps of `other` (same width).
    pub fn append(&mut self, other: &Circuit) -> Result<&mut Self> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: other.n_qubits,
            });
        }
        self.steps.extend(other.steps.iter().cloned());
        Ok(self)
    }

    /// Appends `other` with its qubit `i` mapped to `layout[i]` of this circuit.
    pub fn append_mapped(&mut self, other: &Circuit, layout: &[QubitIndex]) -> Result<&mut Self> {
        if layout.len() != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: other.n_qubits,
                found: layout.len(),
            });
        }
        for s in &other.steps {
            let targets = s.targets.iter().map(|&q| layout[q]).collect();
            self.push(s.gate.clone(), targets)?;
        }
        Ok(self)
    }

    /// Applies every step in order; no measurement.
    pub fn apply_unitary(&self, state: &mut StateVector) -> Result<()> {
        if state.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.n_qubits,
                found: state.n_qubits(),
            });
        }
        for s in &self.steps {
            s.apply(state)?;
        }
        Ok(())
    }

    /// Runs the circuit; returns the final (post-measurement) state and the
    /// measured bit string when the circuit declares a measurement.
    pub fn run(
        &self,
        initial: &StateVector,
        rng: &mut SeededRng,
    ) -> Result<(StateVector, Option<String>)> {
        let mut state = initial.clone();
        self.apply_unitary(&mut state)?;
        match &self.final_measurement {
            Some(qs) => {
                let out = state.measure_qubits(qs, rng)?;
                let bits = out.bits();
                Ok((out.post_state, Some(bits)))
            }
            None => Ok((state, None)),
        }
    }

    /// Counts gates. With `elementary`, Toffoli expands to its two-qubit
    /// decomposition and SWAP to three CNOTs.
    pub fn gate_count(&self, elementary: bool) -> GateComplexity {
        let toffoli_len = toffoli_decomposition_on(0, 1, 2).len();
        let count = self
            .steps
            .iter()
            .map(|s| match (&s.gate, elementary) {
                (Gate::Toffoli, true) => toffoli_len,
                (Gate::Swap, true) => 3,
                _ => 1,
            })
            .sum();
        GateComplexity {
            elementary_gate_count: count,
        }
    }

    /// Step-reversed circuit of adjoint gates; measurement is dropped.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n_qubits: self.n_qubits,
            steps: self.steps.iter().rev().map(GateApplication::adjoint).collect(),
            final_measurement: None,
        }
    }

    /// Replaces every Toffoli with its two-qubit decomposition.
    pub fn expand_toffoli(&self) -> Circuit {
        let mut steps = Vec::new();
        for s in &self.steps {
            match s.gate {
                Gate::Toffoli => steps.extend(toffoli_decomposition_on(s.targets[0], s.targets[1], s.targets[2])),
                _ => steps.push(s.clone()),
            }
        }
        Circuit {
            n_qubits: self.n_qubits,
            steps,
            final_measurement: self.final_measurement.clone(),
        }
    }

    /// Composed `2^n × 2^n` unitary, built column by column.
    pub fn unitary(&self) -> Result<GateMatrix> {
        if self.n_qubits > 12 {
            return Err(Error::InvalidParameter(format!(
                "refusing to materialize a {}-qubit unitary",
                self.n_qubits
            )));
        }
        let dim = 1usize << self.n_qubits;
        let mut m = GateMatrix::zeros(dim);
        for col in 0..dim {
            let mut s = StateVector::basis_state(self.n_qubits, col)?;
            self.apply_unitary(&mut s)?;
            for (row, a) in s.amplitudes().iter().enumerate() {
                m.set(row, col, *a);
            }
        }
        Ok(m)
    }
}
