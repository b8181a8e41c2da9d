use rand::Rng;
use serde::Serialize;

use super::wiesner::{encode_bill, Bank, Verdict, WiesnerBill};
use crate::error::Result;
use crate::gates::{matrix_of, Gate};
use crate::seed::SeededRng;
use crate::state::MeasurementBasis;

/// Measures each qubit in a uniformly guessed basis and prepares two copies
/// of what was read.
pub fn guess_and_measure_attack(bill: &WiesnerBill, rng: &mut SeededRng) -> Result<(WiesnerBill, WiesnerBill)> {
    let mut bits = Vec::with_capacity(bill.len());
    let mut bases = Vec::with_capacity(bill.len());
    for q in &bill.qubits {
        let hadamard = rng.random::<bool>();
        let basis = if hadamard { MeasurementBasis::Hadamard } else { MeasurementBasis::Computational };
        bits.push(q.measure_qubit(0, basis, rng)?.value == 1);
        bases.push(hadamard);
    }
    let forged = encode_bill(&bill.serial, &bits, &bases)?;
    Ok((forged.clone(), forged))
}

/// `(3/4)^n`.
pub fn guess_and_measure_acceptance(n: usize) -> f64 {
    0.75f64.powi(n as i32)
}

#[derive(Debug, Clone, Serialize)]
pub struct AdaptiveOutcome {
    pub bits: Vec<bool>,
    pub bases: Vec<bool>,
    pub verify_calls: u64,
    /// False when the bank kept the bill before every qubit was probed.
    pub completed: bool,
    /// The bill as last returned by the bank.
    #[serde(skip)]
    pub bill: Option<WiesnerBill>,
}

/// Probes one qubit per verification: an `X` flip leaves Hadamard-basis
/// qubits valid and turns computational ones invalid.
pub fn adaptive_attack(bank: &mut Bank, bill: WiesnerBill, rng: &mut SeededRng) -> Result<AdaptiveOutcome> {
    let x = matrix_of(&Gate::X);
    let n = bill.len();
    let start = bank.verify_calls();
    let mut bits = Vec::with_capacity(n);
    let mut bases = Vec::with_capacity(n);
    let mut current = bill;
    for i in 0..n {
        let mut probe = current.clone();
        probe.qubits[i].apply_matrix(&[0], &x)?;
        let result = bank.verify(probe, rng)?;
        let Some(mut returned) = result.returned else {
            return Ok(AdaptiveOutcome {
                bits,
                bases,
                verify_calls: bank.verify_calls() - start,
                completed: false,
                bill: None,
            });
        };
        match result.verdict {
            Verdict::Invalid => {
                returned.qubits[i].apply_matrix(&[0], &x)?;
                let out = returned.qubits[i].measure_qubit(0, MeasurementBasis::Computational, rng)?;
                returned.qubits[i] = out.post_state;
                bits.push(out.value == 1);
                bases.push(false);
            }
            Verdict::Valid => {
                let out = returned.qubits[i].measure_qubit(0, MeasurementBasis::Hadamard, rng)?;
                returned.qubits[i] = out.post_state;
                bits.push(out.value == 1);
                bases.push(true);
            }
        }
        current = returned;
    }
    Ok(AdaptiveOutcome {
        bits,
        bases,
        verify_calls: bank.verify_calls() - start,
        completed: true,
        bill: Some(current),
    })
}

/// Whether the recovered description equals the bank's current record.
pub fn recovery_matches(bank: &Bank, serial: &str, out: &AdaptiveOutcome) -> bool {
    out.completed
        && bank
            .audit_record(serial)
            .is_some_and(|r| r.bill_bits == out.bits && r.bases == out.bases)
}

/// Mints a counterfeit from a recovered description.
pub fn counterfeit(serial: &str, bits: &[bool], bases: &[bool]) -> Result<WiesnerBill> {
    encode_bill(serial, bits, bases)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::money::wiesner::{encode_qubit, parse_bits, BankPolicy};
    use crate::seed::{seeded, trial_rng};

    #[test]
    fn adaptive_recovers_worked_example() {
        let mut rng = seeded(7);
        for _ in 0..100 {
            let mut bank = Bank::new(BankPolicy::ReturnAlways);
            let bill = bank
                .mint_with(&parse_bits("01011").unwrap(), &parse_bits("11001").unwrap())
                .unwrap();
            let serial = bill.serial.clone();
            let out = adaptive_attack(&mut bank, bill, &mut rng).unwrap();
            assert_eq!(out.bits, parse_bits("01011").unwrap());
            assert_eq!(out.bases, parse_bits("11001").unwrap());
            assert!(out.verify_calls <= 10);
            assert!(recovery_matches(&bank, &serial, &out));
            let returned = out.bill.unwrap();
            assert_eq!(bank.acceptance_probability(&returned).unwrap(), 1.0);
        }
    }

    #[test]
    fn single_qubit_trace() {
        let mut rng = seeded(0);
        let mut bank = Bank::new(BankPolicy::ReturnAlways);
        let bill = bank.mint_with(&[false], &[false]).unwrap();
        let out = adaptive_attack(&mut bank, bill, &mut rng).unwrap();
        assert_eq!((out.bits, out.bases, out.verify_calls), (vec![false], vec![false], 1));
    }

    #[test]
    fn reissue_defeats_recovery() {
        let trials = 1000;
        let ok = (0..trials)
            .filter(|&i| {
                let mut rng = trial_rng(13, i);
                let mut bank = Bank::new(BankPolicy::ReissueOnValid);
                let bill = bank.mint(3, &mut rng).unwrap();
                let serial = bill.serial.clone();
                let out = adaptive_attack(&mut bank, bill, &mut rng).unwrap();
                recovery_matches(&bank, &serial, &out)
            })
            .count();
        assert!(ok < trials as usize);
    }

    #[test]
    fn guess_forgery_rate() {
        let n = 5;
        let trials = 20_000;
        let mut one = 0;
        let mut both = 0;
        for i in 0..trials {
            let mut rng = trial_rng(17, i);
            let mut bank = Bank::new(BankPolicy::ReturnAlways);
            let bill = bank.mint(n, &mut rng).unwrap();
            let (a, b) = guess_and_measure_attack(&bill, &mut rng).unwrap();
            let va = bank.verify(a, &mut rng).unwrap().verdict == Verdict::Valid;
            let vb = bank.verify(b, &mut rng).unwrap().verdict == Verdict::Valid;
            one += usize::from(va);
            both += usize::from(va && vb);
        }
        let p = guess_and_measure_acceptance(n);
        assert!((p - 0.2373046875).abs() < 1e-12);
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((one as f64 / trials as f64 - p).abs() < 3.0 * sigma);
        assert!(both <= one);
    }

    #[test]
    fn correct_guess_passes() {
        // an n=1 bill already in the guessed basis is read exactly
        let mut hits = 0;
        let mut tries = 0;
        for i in 0..200 {
            let mut rng = trial_rng(19, i);
            let mut bank = Bank::new(BankPolicy::ReturnAlways);
            let bill = bank.mint(1, &mut rng).unwrap();
            let rec = bank.audit_record(&bill.serial).unwrap().clone();
            let (forged, _) = guess_and_measure_attack(&bill, &mut rng).unwrap();
            let guessed_basis = forged.qubits[0] == encode_qubit(false, true) || forged.qubits[0] == encode_qubit(true, true);
            if guessed_basis == rec.bases[0] {
                tries += 1;
                hits += usize::from(bank.acceptance_probability(&forged).unwrap() == 1.0);
            }
        }
        assert!(tries > 0);
        assert_eq!(hits, tries);
    }
}
