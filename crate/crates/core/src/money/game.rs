use serde_json::json;

use super::attacks::{adaptive_attack, counterfeit, guess_and_measure_attack};
use super::wiesner::{Bank, BankPolicy, Verdict, WiesnerBill};
use crate::error::Result;
use crate::report::ExperimentReport;
use crate::seed::{trial_rng, SeededRng};

/// Receives `n` genuine bills (and the bank's public verification
/// interface) and emits candidate bills for submission.
pub trait Adversary {
    fn name(&self) -> &'static str;
    fn forge(
        &mut self,
        bills: Vec<WiesnerBill>,
        bank: &mut Bank,
        m: usize,
        rng: &mut SeededRng,
    ) -> Result<Vec<WiesnerBill>>;
}

/// Hands back the genuine bills.
pub struct HonestAdversary;

impl Adversary for HonestAdversary {
    fn name(&self) -> &'static str {
        "honest"
    }

    fn forge(&mut self, bills: Vec<WiesnerBill>, _: &mut Bank, m: usize, _: &mut SeededRng) -> Result<Vec<WiesnerBill>> {
        Ok(bills.into_iter().take(m).collect())
    }
}

/// One guess-and-measure forgery per bill, copied round-robin up to `m`.
pub struct GuessAdversary;

impl Adversary for GuessAdversary {
    fn name(&self) -> &'static str {
        "guess"
    }

    fn forge(&mut self, bills: Vec<WiesnerBill>, _: &mut Bank, m: usize, rng: &mut SeededRng) -> Result<Vec<WiesnerBill>> {
        let forged: Vec<WiesnerBill> = bills
            .iter()
            .map(|b| guess_and_measure_attack(b, rng).map(|p| p.0))
            .collect::<Result<_>>()?;
        Ok(forged.iter().cycle().take(m).cloned().collect())
    }
}

/// Recovers each bill qubit by qubit through the verifier, then submits the
/// bill it holds plus counterfeits printed from the recovered description.
pub struct AdaptiveAdversary;

impl Adversary for AdaptiveAdversary {
    fn name(&self) -> &'static str {
        "adaptive"
    }

    fn forge(&mut self, bills: Vec<WiesnerBill>, bank: &mut Bank, m: usize, rng: &mut SeededRng) -> Result<Vec<WiesnerBill>> {
        let mut held = Vec::new();
        let mut copies = Vec::new();
        for bill in bills {
            let serial = bill.serial.clone();
            let out = adaptive_attack(bank, bill, rng)?;
            if out.completed {
                copies.push(counterfeit(&serial, &out.bits, &out.bases)?);
            }
            held.extend(out.bill);
        }
        let mut subs: Vec<WiesnerBill> = held.into_iter().take(m).collect();
        let rest = m - subs.len();
        subs.extend(copies.iter().cycle().take(rest).cloned());
        Ok(subs)
    }
}

/// Per trial: mint `n_bills`, let the adversary emit `m` submissions, and
/// count the valid ones. The adversary wins when more than `n_bills` pass.
pub fn security_game(
    adversary: &mut dyn Adversary,
    n_bills: usize,
    m: usize,
    bill_qubits: usize,
    policy: BankPolicy,
    trials: u64,
    seed: u64,
) -> Result<ExperimentReport> {
    let mut wins = 0u64;
    let mut successes = 0u64;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let mut bank = Bank::new(policy);
        let bills: Vec<WiesnerBill> = (0..n_bills)
            .map(|_| bank.mint(bill_qubits, &mut rng))
            .collect::<Result<_>>()?;
        let subs = adversary.forge(bills, &mut bank, m, &mut rng)?;
        let mut ok = 0;
        for s in subs.into_iter().take(m) {
            if bank.verify(s, &mut rng)?.verdict == Verdict::Valid {
                ok += 1;
            }
        }
        successes += ok;
        if ok > n_bills as u64 {
            wins += 1;
        }
    }
    let mut report = ExperimentReport::new("money.game", seed);
    report
        .param("adversary", adversary.name())
        .param("n_bills", n_bills)
        .param("submissions", m)
        .param("bill_qubits", bill_qubits)
        .param("policy", policy.name())
        .param("trials", trials)
        .result("win_rate", wins as f64 / trials.max(1) as f64)
        .result("mean_valid_submissions", successes as f64 / trials.max(1) as f64)
        .result("wins", json!(wins));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn rate(r: &ExperimentReport) -> f64 {
        match &r.results["win_rate"] {
            Value::Number(n) => n.as_f64().unwrap(),
            _ => unreachable!(),
        }
    }

    #[test]
    fn honest_never_wins() {
        let r = security_game(&mut HonestAdversary, 3, 3, 5, BankPolicy::ReissueOnValid, 200, 1).unwrap();
        assert_eq!(rate(&r), 0.0);
    }

    #[test]
    fn guess_wins_rarely() {
        let r = security_game(&mut GuessAdversary, 1, 2, 5, BankPolicy::ReissueOnValid, 4000, 2).unwrap();
        let p1 = 0.75f64.powi(5);
        assert!(rate(&r) <= p1 + 3.0 * (p1 * (1.0 - p1) / 4000.0).sqrt());
        assert!(rate(&r) > 0.0);
    }

    #[test]
    fn adaptive_wins_when_states_come_back() {
        let r = security_game(&mut AdaptiveAdversary, 1, 4, 5, BankPolicy::ReturnAlways, 200, 3).unwrap();
        assert_eq!(rate(&r), 1.0);
        let r = security_game(&mut AdaptiveAdversary, 1, 4, 5, BankPolicy::ReissueOnValid, 200, 3).unwrap();
        assert!(rate(&r) < 1.0);
    }
}
