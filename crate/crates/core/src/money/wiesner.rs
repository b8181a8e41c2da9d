use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::SeededRng;
use crate::state::{MeasurementBasis, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BankPolicy {
    /// Post-measurement states come back whatever the verdict.
    ReturnAlways,
    /// The bill comes back only when valid; invalid bills are confiscated.
    ReturnOnValid,
    /// A valid bill is replaced by a freshly minted state under the same
    /// serial; invalid bills are confiscated.
    ReissueOnValid,
}

impl BankPolicy {
    pub fn name(self) -> &'static str {
        match self {
            BankPolicy::ReturnAlways => "return-always",
            BankPolicy::ReturnOnValid => "return-on-valid",
            BankPolicy::ReissueOnValid => "reissue",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Valid,
    Invalid,
}

/// Product-form bill: one single-qubit state per position.
#[derive(Debug, Clone, PartialEq)]
pub struct WiesnerBill {
    pub serial: String,
    pub qubits: Vec<StateVector>,
}

impl WiesnerBill {
    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    /// Joint state of all qubits; only for small bills.
    pub fn joint_state(&self) -> Result<StateVector> {
        let mut it = self.qubits.iter();
        let first = it.next().ok_or_else(|| Error::InvalidParameter("empty bill".into()))?.clone();
        it.try_fold(first, |acc, q| acc.tensor(q))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BankRecord {
    pub serial: String,
    pub bill_bits: Vec<bool>,
    /// `false` computational, `true` Hadamard.
    pub bases: Vec<bool>,
}

/// `|b⟩` in the computational basis, `|+⟩`/`|−⟩` in the Hadamard basis.
pub fn encode_qubit(bit: bool, hadamard: bool) -> StateVector {
    match (hadamard, bit) {
        (false, false) => StateVector::basis_state(1, 0).expect("1 qubit"),
        (false, true) => StateVector::basis_state(1, 1).expect("1 qubit"),
        (true, false) => StateVector::plus(),
        (true, true) => StateVector::minus(),
    }
}

pub fn encode_bill(serial: &str, bits: &[bool], bases: &[bool]) -> Result<WiesnerBill> {
    if bits.len() != bases.len() {
        return Err(Error::DimensionMismatch {
            expected: bits.len(),
            found: bases.len(),
        });
    }
    Ok(WiesnerBill {
        serial: serial.to_string(),
        qubits: bits.iter().zip(bases).map(|(&b, &h)| encode_qubit(b, h)).collect(),
    })
}

pub fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidParameter(format!("bad bit `{c}` in `{s}`"))),
        })
        .collect()
}

pub fn format_bitvec(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

#[derive(Debug, Clone)]
pub struct VerifyResult {
    pub verdict: Verdict,
    pub returned: Option<WiesnerBill>,
}

/// Private-key mint and verifier for one policy.
#[derive(Debug, Clone)]
pub struct Bank {
    policy: BankPolicy,
    records: BTreeMap<String, BankRecord>,
    minted: u64,
    verify_calls: u64,
}

const MAX_BILL_QUBITS: usize = 64;

impl Bank {
    pub fn new(policy: BankPolicy) -> Self {
        Self {
            policy,
            records: BTreeMap::new(),
            minted: 0,
            verify_calls: 0,
        }
    }

    pub fn policy(&self) -> BankPolicy {
        self.policy
    }

    pub fn verify_calls(&self) -> u64 {
        self.verify_calls
    }

    fn next_serial(&mut self) -> String {
        self.minted += 1;
        format!("W{:08}", self.minted)
    }

    fn draw(n: usize, rng: &mut SeededRng) -> (Vec<bool>, Vec<bool>) {
        let pairs: Vec<(bool, bool)> = (0..n).map(|_| (rng.random::<bool>(), rng.random::<bool>())).collect();
        pairs.into_iter().unzip()
    }

    pub fn mint(&mut self, n: usize, rng: &mut SeededRng) -> Result<WiesnerBill> {
        if n == 0 || n > MAX_BILL_QUBITS {
            return Err(Error::QubitCount(n));
        }
        let (bits, bases) = Self::draw(n, rng);
        self.mint_with(&bits, &bases)
    }

    /// Mint with the secret draws given explicitly.
    pub fn mint_with(&mut self, bits: &[bool], bases: &[bool]) -> Result<WiesnerBill> {
        if bits.is_empty() || bits.len() > MAX_BILL_QUBITS {
            return Err(Error::QubitCount(bits.len()));
        }
        let serial = self.next_serial();
        let bill = encode_bill(&serial, bits, bases)?;
        self.records.insert(
            serial.clone(),
            BankRecord {
                serial,
                bill_bits: bits.to_vec(),
                bases: bases.to_vec(),
            },
        );
        Ok(bill)
    }

    /// Bank-side view for audits and tests; not part of the verification
    /// interface.
    pub fn audit_record(&self, serial: &str) -> Option<&BankRecord> {
        self.records.get(serial)
    }

    /// Probability that `bill` passes, without measuring it.
    pub fn acceptance_probability(&self, bill: &WiesnerBill) -> Result<f64> {
        let rec = self
            .records
            .get(&bill.serial)
            .ok_or_else(|| Error::UnknownSerial(bill.serial.clone()))?;
        if rec.bill_bits.len() != bill.len() {
            return Ok(0.0);
        }
        bill.qubits
            .iter()
            .zip(rec.bill_bits.iter().zip(&rec.bases))
            .try_fold(1.0, |acc, (q, (&b, &h))| Ok(acc * q.fidelity(&encode_qubit(b, h))?))
    }

    pub fn verify(&mut self, bill: WiesnerBill, rng: &mut SeededRng) -> Result<VerifyResult> {
        let rec = self
            .records
            .get(&bill.serial)
            .ok_or_else(|| Error::UnknownSerial(bill.serial.clone()))?
            .clone();
        self.verify_calls += 1;
        if rec.bill_bits.len() != bill.len() {
            return Ok(VerifyResult {
                verdict: Verdict::Invalid,
                returned: (self.policy == BankPolicy::ReturnAlways).then_some(bill),
            });
        }
        let mut valid = true;
        let mut post = Vec::with_capacity(bill.len());
        for (q, (&b, &h)) in bill.qubits.iter().zip(rec.bill_bits.iter().zip(&rec.bases)) {
            let basis = if h { MeasurementBasis::Hadamard } else { MeasurementBasis::Computational };
            let out = q.measure_qubit(0, basis, rng)?;
            valid &= (out.value == 1) == b;
            post.push(out.post_state);
        }
        let verdict = if valid { Verdict::Valid } else { Verdict::Invalid };
        let measured = WiesnerBill {
            serial: bill.serial,
            qubits: post,
        };
        let returned = match (self.policy, verdict) {
            (BankPolicy::ReturnAlways, _) | (BankPolicy::ReturnOnValid, Verdict::Valid) => Some(measured),
            (BankPolicy::ReissueOnValid, Verdict::Valid) => {
                let (bits, bases) = Self::draw(rec.bill_bits.len(), rng);
                let fresh = encode_bill(&rec.serial, &bits, &bases)?;
                self.records.insert(
                    rec.serial.clone(),
                    BankRecord {
                        serial: rec.serial,
                        bill_bits: bits,
                        bases,
                    },
                );
                Some(fresh)
            }
            _ => None,
        };
        Ok(VerifyResult { verdict, returned })
    }
}

/// Fresh bill and its record without a bank.
pub fn mint_wiesner(n: usize, rng: &mut SeededRng) -> Result<(WiesnerBill, BankRecord)> {
    let mut bank = Bank::new(BankPolicy::ReturnAlways);
    let bill = bank.mint(n, rng)?;
    let rec = bank.audit_record(&bill.serial).expect("just minted").clone();
    Ok((bill, rec))
}
