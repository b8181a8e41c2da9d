//! Black-box classical functions lifted to reversible basis permutations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::GateMatrix;
use crate::state::{QubitIndex, StateVector, ONE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleTarget {
    /// `|x>|y> -> |x>|y XOR f(x)>`
    Xor,
    /// `|x>|y> -> |x>|y + f(x) mod 2^m>`
    ModAdd,
}

type BoxedFn = Box<dyn Fn(u64) -> u64 + Send + Sync>;

/// Wraps `f: {0,1}^in_bits -> {0,1}^out_bits`. Every quantum application and
/// every classical evaluation counts as one query.
pub struct Oracle {
    in_bits: usize,
    out_bits: usize,
    target: OracleTarget,
    f: BoxedFn,
    queries: u64,
}

impl std::fmt::Debug for Oracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Oracle")
            .field("in_bits", &self.in_bits)
            .field("out_bits", &self.out_bits)
            .field("target", &self.target)
            .field("queries", &self.queries)
            .finish()
    }
}

impl Oracle {
    pub fn new(
        in_bits: usize,
        out_bits: usize,
        target: OracleTarget,
        f: impl Fn(u64) -> u64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if in_bits == 0 || out_bits == 0 || in_bits + out_bits > crate::MAX_QUBITS {
            return Err(Error::QubitCount(in_bits + out_bits));
        }
        Ok(Self {
            in_bits,
            out_bits,
            target,
            f: Box::new(f),
            queries: 0,
        })
    }

    pub fn xor(in_bits: usize, out_bits: usize, f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Result<Self> {
        Self::new(in_bits, out_bits, OracleTarget::Xor, f)
    }

    pub fn mod_add(in_bits: usize, out_bits: usize, f: impl Fn(u64) -> u64 + Send + Sync + 'static) -> Result<Self> {
        Self::new(in_bits, out_bits, OracleTarget::ModAdd, f)
    }

    pub fn in_bits(&self) -> usize {
        self.in_bits
    }

    pub fn out_bits(&self) -> usize {
        self.out_bits
    }

    pub fn target(&self) -> OracleTarget {
        self.target
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    pub fn reset_count(&mut self) {
        self.queries = 0;
    }

    fn out_mask(&self) -> u64 {
        if self.out_bits >= 64 {
            u64::MAX
        } else {
            (1u64 << self.out_bits) - 1
        }
    }

    fn eval(&self, x: u64) -> u64 {
        (self.f)(x) & self.out_mask()
    }

    /// One classical evaluation.
    pub fn query(&mut self, x: u64) -> u64 {
        self.queries += 1;
        self.eval(x)
    }

    fn combine(&self, y: u64, fx: u64) -> u64 {
        match self.target {
            OracleTarget::Xor => y ^ fx,
            OracleTarget::ModAdd => y.wrapping_add(fx) & self.out_mask(),
        }
    }

    /// One coherent query on the listed input and output registers.
    pub fn apply(
        &mut self,
        state: &mut StateVector,
        input: &[QubitIndex],
        output: &[QubitIndex],
    ) -> Result<()> {
        if input.len() != self.in_bits {
            return Err(Error::DimensionMismatch {
                expected: self.in_bits,
                found: input.len(),
            });
        }
        if output.len() != self.out_bits {
            return Err(Error::DimensionMismatch {
                expected: self.out_bits,
                found: output.len(),
            });
        }
        let all: Vec<QubitIndex> = input.iter().chain(output).copied().collect();
        state.check_distinct(&all)?;
        let probe = state.clone();
        state.apply_permutation(|i| {
            let x = probe.register_value(i, input) as u64;
            let y = probe.register_value(i, output) as u64;
            let y2 = self.combine(y, self.eval(x));
            probe.with_register_value(i, output, y2 as usize)
        });
        self.queries += 1;
        Ok(())
    }

    /// Explicit permutation matrix on `in_bits + out_bits` qubits (input
    /// register first). Does not count as a query.
    pub fn matrix(&self) -> Result<GateMatrix> {
        let n = self.in_bits + self.out_bits;
        if n > 12 {
            return Err(Error::InvalidParameter(format!("{n}-qubit oracle matrix too large")));
        }
        let dim = 1usize << n;
        let mut m = GateMatrix::zeros(dim);
        for col in 0..dim {
            let x = (col >> self.out_bits) as u64;
            let y = (col as u64) & self.out_mask();
            let row = ((x << self.out_bits) | self.combine(y, self.eval(x))) as usize;
            m.set(row, col, ONE);
        }
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xor_oracle_is_self_inverse_permutation() {
        let mut o = Oracle::xor(3, 2, |x| x * 3 + 1).unwrap();
        let m = o.matrix().unwrap();
        assert!(m.is_unitary());
        assert!(m.mul(&m).unwrap().max_abs_diff(&GateMatrix::identity(32)) < 1e-15);
        assert_eq!(o.query_count(), 0);
        assert_eq!(o.query(5), 0);
        assert_eq!(o.query_count(), 1);
    }

    #[test]
    fn mod_add_oracle_acts_on_registers() {
        let mut o = Oracle::mod_add(2, 3, |x| x + 5).unwrap();
        assert!(o.matrix().unwrap().is_unitary());
        // input qubits 3,4 = x = 2, output qubits 0..3 = y = 6 -> (6 + 7) mod 8 = 5
        let mut s = StateVector::from_bits("11010").unwrap();
        o.apply(&mut s, &[3, 4], &[0, 1, 2]).unwrap();
        assert_eq!(s, StateVector::from_bits("10110").unwrap());
        assert_eq!(o.query_count(), 1);
        assert!(o.apply(&mut s, &[3, 4], &[0, 1]).is_err());
        assert!(o.apply(&mut s, &[3, 4], &[0, 1, 3]).is_err());
    }
}
