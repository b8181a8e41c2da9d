//! Report builders behind each command-line experiment.
//!
//! Every builder is a pure function of its parameters and the master seed;
//! trial `i` draws from `trial_rng(seed, i)` (or from a sub-master derived
//! with [`derive_seed`]) so the same inputs always give the same report.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use rand::Rng;
use serde_json::Value;

use crate::algorithms::{
    exact_mean, finite_difference_gradient, jordan_gradient, log_log_slope, median_abs_error, montecarlo_distribution,
    montecarlo_mean, ols_demo, qubo_bruteforce, DifferenceScheme, GradientProblem, QuboProblem,
};
use crate::circuit::{deserialize, serialize, Circuit, Oracle};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::money::{
    adaptive_attack, encode_bill, guess_and_measure_acceptance, guess_and_measure_attack, lightning_mint,
    lightning_round_probability, lightning_verify, parse_bits, recovery_matches, security_game, AdaptiveAdversary,
    Adversary, Bank, BankPolicy, GuessAdversary, HonestAdversary, LightningScheme, Verdict,
};
use crate::report::ExperimentReport;
use crate::rng::{
    detect_period, format_decimal, pack_bits_hex, uniformity_report, BitStream, LcgParams, StreamSource,
    CHI_SQUARE_ALPHA,
};
use crate::seed::{derive_seed, trial_rng};
use crate::state::StateVector;
use crate::subroutines::{
    error_bound, estimate_from_readout, grover_closed_form, grover_iteration_count, grover_search,
    grover_success_probability, min_iterations_for, naive_search,
};

/// Binomial standard error.
fn binomial_sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials.max(1) as f64).sqrt()
}

fn rate(hits: u64, trials: u64) -> f64 {
    hits as f64 / trials.max(1) as f64
}

fn counts_value(counts: &BTreeMap<String, u64>) -> Value {
    Value::Object(counts.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect())
}

// ---------------------------------------------------------------- demos

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// Hadamard then measure: a fair coin.
    I,
    /// Three alternating CNOTs swap two qubits.
    II,
    /// Toffoli with target prepared in `|1⟩` computes NAND.
    III,
    /// The same NAND through the two-qubit Toffoli decomposition.
    IV,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::I => "I",
            Figure::II => "II",
            Figure::III => "III",
            Figure::IV => "IV",
        }
    }

    pub fn circuit(self) -> Result<Circuit> {
        match self {
            Figure::I => {
                let mut c = Circuit::new(1)?;
                c.h(0)?.measure(&[0])?;
                Ok(c)
            }
            Figure::II => {
                let mut c = Circuit::new(2)?;
                c.cnot(0, 1)?.cnot(1, 0)?.cnot(0, 1)?.measure(&[0, 1])?;
                Ok(c)
            }
            Figure::III => {
                let mut c = Circuit::new(3)?;
                c.push(Gate::Toffoli, vec![0, 1, 2])?.measure(&[0, 1, 2])?;
                Ok(c)
            }
            Figure::IV => Ok(Figure::III.circuit()?.expand_toffoli()),
        }
    }
}

/// Builds the figure's circuit, round-trips it through the text format, runs
/// it `shots` times per input and checks the outcomes.
pub fn demo(figure: Figure, shots: u64, seed: u64) -> Result<ExperimentReport> {
    let built = figure.circuit()?;
    let text = serialize(&built)?;
    let circuit = deserialize(&text)?;
    let mut report = ExperimentReport::new(format!("demo.{}", figure.name()), seed);
    report
        .param("figure", figure.name())
        .param("shots", shots)
        .result("circuit", text.clone())
        .result("gate_count", circuit.gate_count(false).elementary_gate_count)
        .result("elementary_gate_count", circuit.gate_count(true).elementary_gate_count);
    report.check_eq("serialization_round_trip", true, circuit == built);

    let inputs: Vec<&str> = match figure {
        Figure::I => vec!["0"],
        Figure::II => vec!["00", "01", "10", "11"],
        Figure::III | Figure::IV => vec!["001", "011", "101", "111"],
    };
    let mut all_counts = BTreeMap::new();
    for (idx, input) in inputs.iter().enumerate() {
        let init = StateVector::from_bits(input)?;
        let mut rng = trial_rng(seed, idx as u64);
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for _ in 0..shots {
            let (_, bits) = circuit.run(&init, &mut rng)?;
            *counts.entry(bits.unwrap_or_default()).or_default() += 1;
        }
        all_counts.insert(input.to_string(), counts_value(&counts));

        match figure {
            Figure::I => {
                let ones = counts.get("1").copied().unwrap_or(0);
                let freq = rate(ones, shots);
                report.result("frequency_one", freq);
                report.check_close("fair_coin_within_3_sigma", 0.5, freq, 3.0 * binomial_sigma(0.5, shots));
                let mut pre = init.clone();
                circuit.apply_unitary(&mut pre)?;
                report.check_close("pre_measurement_is_plus", 1.0, pre.fidelity(&StateVector::plus())?, 1e-12);
            }
            Figure::II => {
                let expected: String = input.chars().rev().collect();
                let pass = counts.len() == 1 && counts.contains_key(&expected);
                report.check(&format!("swap_{input}"), expected, counts.keys().cloned().collect::<Vec<_>>().join("|"), pass);
            }
            Figure::III | Figure::IV => {
                let nand = if &input[..2] == "11" { '0' } else { '1' };
                let expected = format!("{}{nand}", &input[..2]);
                let pass = counts.len() == 1 && counts.contains_key(&expected);
                report.check(&format!("nand_{}", &input[..2]), expected, counts.keys().cloned().collect::<Vec<_>>().join("|"), pass);
            }
        }
    }
    report.result("counts", Value::Object(all_counts.into_iter().collect()));

    match figure {
        Figure::II => {
            report.check_eq("elementary_gates", 3usize, circuit.gate_count(true).elementary_gate_count);
        }
        Figure::IV => {
            let reference = Figure::III.circuit()?.unitary()?;
            let diff = circuit.unitary()?.max_abs_diff(&reference);
            report.result("unitary_max_abs_diff", diff);
            report.check_at_most("matches_toffoli_unitary", 1e-12, diff);
            report.check_eq("elementary_gates", 15usize, circuit.gate_count(true).elementary_gate_count);
            report.check_eq("toffoli_gates", 1usize, Figure::III.circuit()?.gate_count(false).elementary_gate_count);
        }
        _ => {}
    }
    Ok(report)
}

// ---------------------------------------------------------------- money

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoneyAttack {
    None,
    Guess,
    Adaptive,
    Game,
}

impl MoneyAttack {
    pub fn name(self) -> &'static str {
        match self {
            MoneyAttack::None => "none",
            MoneyAttack::Guess => "guess",
            MoneyAttack::Adaptive => "adaptive",
            MoneyAttack::Game => "game",
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct MoneyParams {
    pub qubits: usize,
    pub trials: u64,
    pub policy: Option<BankPolicy>,
}

pub const WORKED_BITS: &str = "01011";
pub const WORKED_BASES: &str = "11001";

pub fn money(attack: MoneyAttack, p: MoneyParams, seed: u64) -> Result<ExperimentReport> {
    if p.qubits == 0 {
        return Err(Error::InvalidParameter("bills need at least one qubit".into()));
    }
    if attack == MoneyAttack::Guess && p.policy.is_some() {
        return Err(Error::InvalidParameter(
            "the guess attack submits one forgery and never sees a returned bill; --policy does not apply".into(),
        ));
    }
    let default_policy = match attack {
        MoneyAttack::None => Some(BankPolicy::ReturnOnValid),
        MoneyAttack::Guess => None,
        MoneyAttack::Adaptive => Some(BankPolicy::ReturnAlways),
        MoneyAttack::Game => Some(BankPolicy::ReissueOnValid),
    };
    let p = MoneyParams {
        policy: p.policy.or(default_policy),
        ..p
    };
    let mut report = match attack {
        MoneyAttack::None => money_honest(p, seed)?,
        MoneyAttack::Guess => money_guess(p, seed)?,
        MoneyAttack::Adaptive => money_adaptive(p, seed)?,
        MoneyAttack::Game => money_game(p, seed)?,
    };
    report.param("attack", attack.name()).param("qubits", p.qubits).param("trials", p.trials);
    if let Some(policy) = p.policy {
        report.param("policy", policy.name());
    }
    Ok(report)
}

fn money_honest(p: MoneyParams, seed: u64) -> Result<ExperimentReport> {
    let policy = p.policy.unwrap_or(BankPolicy::ReturnOnValid);
    let mut report = ExperimentReport::new("money.none", seed);

    let mut bank = Bank::new(policy);
    let worked = bank.mint_with(&parse_bits(WORKED_BITS)?, &parse_bits(WORKED_BASES)?)?;
    let qubits = [
        StateVector::plus(),
        StateVector::minus(),
        StateVector::from_bits("0")?,
        StateVector::from_bits("1")?,
        StateVector::minus(),
    ];
    let exact = worked.qubits.iter().zip(&qubits).all(|(a, b)| a == b);
    report.check_eq("worked_example_state", true, exact);
    report.check_eq("worked_example_acceptance", 1.0, bank.acceptance_probability(&worked)?);

    let mut valid = 0u64;
    let mut revalid = 0u64;
    for i in 0..p.trials {
        let mut rng = trial_rng(seed, i);
        let bill = bank.mint(p.qubits, &mut rng)?;
        let out = bank.verify(bill, &mut rng)?;
        if out.verdict == Verdict::Valid {
            valid += 1;
        }
        if let Some(back) = out.returned {
            if bank.verify(back, &mut rng)?.verdict == Verdict::Valid {
                revalid += 1;
            }
        }
    }
    let completeness = rate(valid, p.trials);
    report
        .result("completeness", completeness)
        .result("returned_bill_completeness", rate(revalid, p.trials))
        .result("verify_calls", bank.verify_calls());
    report.check_eq("completeness", 1.0, completeness);
    report.check_eq("returned_bills_still_valid", valid, revalid);
    Ok(report)
}

/// Fraction of guess-and-measure forgeries the bank accepts.
pub fn guess_acceptance_rate(n: usize, trials: u64, seed: u64) -> Result<f64> {
    let mut bank = Bank::new(BankPolicy::ReturnOnValid);
    let mut hits = 0u64;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let bill = bank.mint(n, &mut rng)?;
        let (forged, _) = guess_and_measure_attack(&bill, &mut rng)?;
        if bank.verify(forged, &mut rng)?.verdict == Verdict::Valid {
            hits += 1;
        }
    }
    Ok(rate(hits, trials))
}

fn money_guess(p: MoneyParams, seed: u64) -> Result<ExperimentReport> {
    let expected = guess_and_measure_acceptance(p.qubits);
    let observed = guess_acceptance_rate(p.qubits, p.trials, seed)?;
    let sigma = binomial_sigma(expected, p.trials);
    let mut report = ExperimentReport::new("money.guess", seed);
    report
        .result("acceptance", observed)
        .result("expected_acceptance", expected)
        .result("sigma", sigma);
    report.check_close("acceptance_within_3_sigma", expected, observed, 3.0 * sigma);
    Ok(report)
}

/// Recovery statistics of the adaptive attack against `policy`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveStats {
    pub recovery_rate: f64,
    pub max_verify_calls: u64,
    pub mean_verify_calls: f64,
}

pub fn adaptive_recovery(n: usize, trials: u64, policy: BankPolicy, seed: u64) -> Result<AdaptiveStats> {
    let mut recovered = 0u64;
    let mut max_calls = 0u64;
    let mut total_calls = 0u64;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let mut bank = Bank::new(policy);
        let bill = bank.mint(n, &mut rng)?;
        let serial = bill.serial.clone();
        let out = adaptive_attack(&mut bank, bill, &mut rng)?;
        if out.completed && recovery_matches(&bank, &serial, &out) {
            recovered += 1;
        }
        max_calls = max_calls.max(out.verify_calls);
        total_calls += out.verify_calls;
    }
    Ok(AdaptiveStats {
        recovery_rate: rate(recovered, trials),
        max_verify_calls: max_calls,
        mean_verify_calls: total_calls as f64 / trials.max(1) as f64,
    })
}

fn money_adaptive(p: MoneyParams, seed: u64) -> Result<ExperimentReport> {
    let policy = p.policy.unwrap_or(BankPolicy::ReturnAlways);
    let stats = adaptive_recovery(p.qubits, p.trials, policy, seed)?;
    let mut report = ExperimentReport::new("money.adaptive", seed);
    report
        .result("recovery_rate", stats.recovery_rate)
        .result("max_verify_calls", stats.max_verify_calls)
        .result("mean_verify_calls", stats.mean_verify_calls);
    report.check_at_most("verify_calls_at_most_2n", (2 * p.qubits) as f64, stats.max_verify_calls as f64);
    match policy {
        BankPolicy::ReturnAlways => {
            report.check_eq("full_recovery", 1.0, stats.recovery_rate);
        }
        _ if p.qubits >= 2 => {
            report.check("recovery_blocked", "< 1", stats.recovery_rate, stats.recovery_rate < 1.0);
        }
        _ => {}
    }
    Ok(report)
}

fn money_game(p: MoneyParams, seed: u64) -> Result<ExperimentReport> {
    let policy = p.policy.unwrap_or(BankPolicy::ReissueOnValid);
    let (n_bills, submissions) = (1, 2);
    let mut report = ExperimentReport::new("money.game", seed);
    report.param("n_bills", n_bills).param("submissions", submissions);
    let mut adversaries: Vec<Box<dyn Adversary>> = vec![
        Box::new(HonestAdversary),
        Box::new(GuessAdversary),
        Box::new(AdaptiveAdversary),
    ];
    let mut win_rates = BTreeMap::new();
    for (idx, adv) in adversaries.iter_mut().enumerate() {
        let sub_seed = derive_seed(seed, idx as u64);
        let game = security_game(adv.as_mut(), n_bills, submissions, p.qubits, policy, p.trials, sub_seed)?;
        let name = adv.name();
        win_rates.insert(name, game.results_f64("win_rate"));
        for (k, v) in game.results {
            report.result(&format!("{name}.{k}"), v);
        }
    }
    report.check_eq("honest_never_wins", 0.0, win_rates["honest"]);
    let single = guess_and_measure_acceptance(p.qubits);
    let bound = single + 3.0 * binomial_sigma(single, p.trials);
    report.check_at_most("guess_win_rate_bounded", bound, win_rates["guess"]);
    match policy {
        BankPolicy::ReturnAlways => report.check_eq("adaptive_always_wins", 1.0, win_rates["adaptive"]),
        _ => report.check("adaptive_defeated_sometimes", "< 1", win_rates["adaptive"], win_rates["adaptive"] < 1.0),
    };
    Ok(report)
}

// ---------------------------------------------------------------- algorithms

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Ols,
    Grover,
    Gradient,
    MonteCarlo,
    Qubo,
    Lightning,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Ols => "ols",
            Algorithm::Grover => "grover",
            Algorithm::Gradient => "gradient",
            Algorithm::MonteCarlo => "montecarlo",
            Algorithm::Qubo => "qubo",
            Algorithm::Lightning => "lightning",
        }
    }
}

/// Overrides for the per-algorithm defaults.
#[derive(Debug, Clone, Copy, Default)]
pub struct AlgoParams {
    pub qubits: Option<usize>,
    pub trials: Option<u64>,
}

pub fn algo(which: Algorithm, p: AlgoParams, seed: u64) -> Result<ExperimentReport> {
    match which {
        Algorithm::Ols => {
            if p.qubits.is_some() || p.trials.is_some() {
                return Err(Error::InvalidParameter("the linear-system example takes no size or trial count".into()));
            }
            ols_demo(seed)
        }
        Algorithm::Grover => algo_grover(p.qubits.unwrap_or(3), p.trials.unwrap_or(1000), seed),
        Algorithm::Gradient => algo_gradient(p.qubits.unwrap_or(4), seed),
        Algorithm::MonteCarlo => algo_montecarlo(p.trials.unwrap_or(1000), seed),
        Algorithm::Qubo => algo_qubo(seed),
        Algorithm::Lightning => algo_lightning(p.qubits.unwrap_or(6), p.trials.unwrap_or(10_000), seed),
    }
}

pub const GROVER_SCALING_RANGE: std::ops::RangeInclusive<usize> = 3..=10;
pub const GROVER_TARGET: f64 = 0.9;

/// Minimal iteration counts reaching [`GROVER_TARGET`] over
/// [`GROVER_SCALING_RANGE`] and the fitted exponent of `k ∝ N^e`.
pub fn grover_scaling() -> Result<(Vec<usize>, f64)> {
    let mut ks = Vec::new();
    for n in GROVER_SCALING_RANGE {
        ks.push(min_iterations_for(n, (1u64 << n) - 1, GROVER_TARGET)?);
    }
    let xs: Vec<f64> = GROVER_SCALING_RANGE.map(|n| (1u64 << n) as f64).collect();
    let ys: Vec<f64> = ks.iter().map(|&k| k as f64).collect();
    Ok((ks, log_log_slope(&xs, &ys)))
}

fn algo_grover(n: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let k = grover_iteration_count(n);
    let marked = (1u64 << n) - 1;
    let statevector = grover_success_probability(n, marked, k)?;
    let closed = grover_closed_form(n, k);

    let mut oracle = Oracle::xor(n, 1, move |x| u64::from(x == marked))?;
    let target = format!("{marked:0n$b}");
    let mut hits = 0u64;
    let mut queries_ok = true;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let out = grover_search(&mut oracle, k, &mut rng)?;
        queries_ok &= out.queries == k as u64;
        hits += u64::from(out.found == target);
    }
    let naive_seed = derive_seed(seed, u64::MAX);
    let mut naive_hits = 0u64;
    for i in 0..trials {
        let mut rng = trial_rng(naive_seed, i);
        let (found, _) = naive_search(&mut oracle, &mut rng)?;
        naive_hits += u64::from(found.as_deref() == Some(target.as_str()));
    }
    let (ks, exponent) = grover_scaling()?;

    let sampled = rate(hits, trials);
    let naive = rate(naive_hits, trials);
    let naive_expected = 2f64.powi(-(n as i32));
    let mut report = ExperimentReport::new("algo.grover", seed);
    report
        .param("qubits", n)
        .param("iterations", k)
        .param("trials", trials)
        .param("marked", target.clone())
        .result("success_probability", statevector)
        .result("closed_form", closed)
        .result("sampled_success_rate", sampled)
        .result("naive_success_rate", naive)
        .result("scaling_qubits", GROVER_SCALING_RANGE.collect::<Vec<usize>>())
        .result("scaling_min_iterations", ks)
        .result("scaling_exponent", exponent);
    report
        .check_close("statevector_matches_closed_form", closed, statevector, 1e-9)
        .check_eq("queries_equal_iterations", true, queries_ok)
        .check_close(
            "sampling_within_3_sigma",
            statevector,
            sampled,
            (3.0 * binomial_sigma(statevector, trials)).max(1e-12),
        )
        .check_close("naive_within_3_sigma", naive_expected, naive, 3.0 * binomial_sigma(naive_expected, trials))
        .check_close("scaling_exponent_half", 0.5, exponent, 0.05);
    Ok(report)
}

fn algo_gradient(n: usize, seed: u64) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::new("algo.gradient", seed);
    report.param("bits_per_register", n);
    let families = [vec![1.5], vec![-2.0, 0.5], vec![3.0, -4.0, 0.0]];
    for (idx, g) in families.iter().enumerate() {
        let d = g.len();
        let coeffs = g.clone();
        let f = move |x: &[f64]| x.iter().zip(&coeffs).map(|(a, b)| a * b).sum::<f64>() + 2.0;
        let x0 = vec![0.3; d];
        let problem = GradientProblem::new(n, n + 2, 8.0, 0.1, x0.clone(), f.clone())?;
        let mut rng = trial_rng(seed, idx as u64);
        let out = jordan_gradient(&problem, &mut rng)?;
        let (_, forward) = finite_difference_gradient(&f, &x0, DifferenceScheme::Forward, 1e-3)?;
        let (_, centered) = finite_difference_gradient(&f, &x0, DifferenceScheme::Centered, 1e-3)?;
        report
            .result(&format!("d{d}.gradient"), out.gradient.clone())
            .result(&format!("d{d}.readout"), Value::from(out.readout.clone()))
            .result(&format!("d{d}.quantum_queries"), out.queries)
            .result(&format!("d{d}.forward_queries"), forward)
            .result(&format!("d{d}.centered_queries"), centered);
        report
            .check(&format!("d{d}_gradient_exact"), g.clone(), out.gradient.clone(), out.gradient == *g)
            .check_eq(&format!("d{d}_one_query"), 1u64, out.queries)
            .check_eq(&format!("d{d}_forward_queries"), d as u64 + 1, forward)
            .check_eq(&format!("d{d}_centered_queries"), 2 * d as u64, centered);
    }
    Ok(report)
}

pub const MONTECARLO_TS: [usize; 2] = [16, 32];
pub const SLOPE_TS: [usize; 4] = [8, 16, 32, 64];
pub const SLOPE_GRID: usize = 37;

fn bernoulli_prep() -> Result<Circuit> {
    let mut c = Circuit::new(1)?;
    c.h(0)?;
    Ok(c)
}

fn uniform_prep(n: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n)?;
    for q in 0..n {
        c.h(q)?;
    }
    Ok(c)
}

/// Fraction of single estimates within the error bound at the true mean.
pub fn montecarlo_coverage(
    prep: &Circuit,
    phi: impl Fn(usize) -> f64 + Copy,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    let mu = exact_mean(prep, phi)?;
    let bound = error_bound(mu, t);
    let mut hits = 0u64;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let out = montecarlo_mean(prep, phi, t, 1, &mut rng)?;
        hits += u64::from((out.mu_hat - mu).abs() <= bound);
    }
    Ok(rate(hits, trials))
}

/// Grid-averaged median error for each `t` in [`SLOPE_TS`] over payoffs
/// `μ + w (x − 3.5) / 7` on three uniform qubits.
pub fn montecarlo_error_curve() -> Result<Vec<f64>> {
    let prep = uniform_prep(3)?;
    let grid: Vec<f64> = (0..SLOPE_GRID)
        .map(|i| 0.05 + 0.9 * i as f64 / (SLOPE_GRID - 1) as f64)
        .collect();
    SLOPE_TS
        .iter()
        .map(|&t| {
            let mut total = 0.0;
            for &mu in &grid {
                let w = mu.min(1.0 - mu);
                let phi = move |x: usize| (mu + w * (x as f64 - 3.5) / 7.0).clamp(0.0, 1.0);
                let dist = montecarlo_distribution(&prep, phi, t)?;
                total += median_abs_error(&dist, t, exact_mean(&prep, phi)?);
            }
            Ok(total / grid.len() as f64)
        })
        .collect()
}

fn algo_montecarlo(trials: u64, seed: u64) -> Result<ExperimentReport> {
    let target = 8.0 / (PI * PI);
    let floor = target - 3.0 * binomial_sigma(target, trials);
    let mut report = ExperimentReport::new("algo.montecarlo", seed);
    report.param("trials", trials).param("t_values", MONTECARLO_TS.to_vec());
    let bernoulli = bernoulli_prep()?;
    let linear = uniform_prep(3)?;
    for (case_idx, case) in ["bernoulli", "linear"].iter().enumerate() {
        for (t_idx, &t) in MONTECARLO_TS.iter().enumerate() {
            let sub = derive_seed(seed, (case_idx * MONTECARLO_TS.len() + t_idx) as u64);
            let cov = if case_idx == 0 {
                montecarlo_coverage(&bernoulli, |x| x as f64, t, trials, sub)?
            } else {
                montecarlo_coverage(&linear, |x| x as f64 / 7.0, t, trials, sub)?
            };
            report.result(&format!("{case}.t{t}.coverage"), cov);
            report.check_at_least(&format!("{case}_t{t}_coverage"), floor, cov);
        }
    }
    let curve = montecarlo_error_curve()?;
    let xs: Vec<f64> = SLOPE_TS.iter().map(|&t| t as f64).collect();
    let slope = log_log_slope(&xs, &curve);
    report
        .result("slope_t_values", SLOPE_TS.to_vec())
        .result("median_error", curve)
        .result("error_slope", slope)
        .result("single_query_estimate_t16", estimate_from_readout(4, 16).a_hat);
    report.check_close("error_slope_minus_one", -1.0, slope, 0.1);
    Ok(report)
}

/// Fixed ten-variable instance with mixed-sign couplings.
pub fn bundled_qubo() -> QuboProblem {
    const N: usize = 10;
    let mut q = vec![vec![0.0; N]; N];
    for i in 0..N {
        for j in i + 1..N {
            let v = ((7 * i + 3 * j) % 11) as f64 - 5.0;
            q[i][j] = v;
            q[j][i] = v;
        }
    }
    let c: Vec<f64> = (0..N).map(|i| ((5 * i + 2) % 9) as f64 - 4.0).collect();
    QuboProblem::new(q, c).expect("fixed square instance")
}

fn enumerate_qubo(p: &QuboProblem) -> (u64, f64) {
    let n = p.n();
    (0..1u64 << n)
        .map(|x| {
            let bits: Vec<bool> = (0..n).map(|i| x >> (n - 1 - i) & 1 == 1).collect();
            (x, p.objective(&bits))
        })
        .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
}

fn algo_qubo(seed: u64) -> Result<ExperimentReport> {
    let p = bundled_qubo();
    let (x, value) = qubo_bruteforce(&p);
    let (_, reference) = enumerate_qubo(&p);
    let bits: String = x.iter().map(|&b| if b { '1' } else { '0' }).collect();
    let mut report = ExperimentReport::new("algo.qubo", seed);
    report
        .param("variables", p.n())
        .result("argmin", bits)
        .result("minimum", value)
        .result("reference_minimum", reference);
    report
        .check_close("optimum_matches_enumeration", reference, value, 1e-9)
        .check_close("argmin_attains_minimum", value, p.objective(&x), 1e-9);
    Ok(report)
}

pub const LIGHTNING_MODULUS: usize = 4;
pub const LIGHTNING_ROUNDS: usize = 4;

/// Pass rates of minted bills (all rounds) and of random basis-state
/// forgeries (one round).
pub fn lightning_rates(scheme: &LightningScheme, trials: u64, seed: u64) -> Result<(f64, f64, bool)> {
    let k = scheme.k();
    let mut genuine = 0u64;
    let mut uniform = true;
    for i in 0..trials {
        let mut rng = trial_rng(seed, i);
        let (p, bill) = lightning_mint(scheme, &mut rng)?;
        let support: Vec<usize> = (0..1usize << k).filter(|&g| scheme.invariant(g) == p).collect();
        let amp = 1.0 / (support.len() as f64).sqrt();
        uniform &= bill.amplitudes().iter().enumerate().all(|(g, a)| {
            let want = if scheme.invariant(g) == p { amp } else { 0.0 };
            (a.re - want).abs() < 1e-12 && a.im.abs() < 1e-12
        });
        genuine += u64::from(lightning_verify(scheme, &bill, LIGHTNING_ROUNDS, &mut rng)?);
    }
    let forge_seed = derive_seed(seed, u64::MAX);
    let mut forged = 0u64;
    for i in 0..trials {
        let mut rng = trial_rng(forge_seed, i);
        let g = rng.random_range(0..1usize << k);
        let fake = StateVector::basis_state(k, g)?;
        forged += u64::from(lightning_verify(scheme, &fake, 1, &mut rng)?);
    }
    Ok((rate(genuine, trials), rate(forged, trials), uniform))
}

fn algo_lightning(k: usize, trials: u64, seed: u64) -> Result<ExperimentReport> {
    let scheme = LightningScheme::modular(k, LIGHTNING_MODULUS)?;
    let (genuine, forged, uniform) = lightning_rates(&scheme, trials, seed)?;
    let round = lightning_round_probability(&scheme, &StateVector::basis_state(k, 0)?, 0)?;
    let mut report = ExperimentReport::new("algo.lightning", seed);
    report
        .param("k", k)
        .param("modulus", LIGHTNING_MODULUS)
        .param("rounds", LIGHTNING_ROUNDS)
        .param("trials", trials)
        .result("genuine_pass_rate", genuine)
        .result("forgery_round_pass_rate", forged)
        .result("forgery_round_probability", round);
    report
        .check_eq("mint_uniform_over_preimage", true, uniform)
        .check_eq("genuine_always_pass", 1.0, genuine)
        .check_close("forgery_round_half", 0.5, forged, 3.0 * binomial_sigma(0.5, trials));
    Ok(report)
}

// ---------------------------------------------------------------- rng

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RngSource {
    Lcg,
    BadLcg,
    Qrng,
}

impl RngSource {
    pub fn name(self) -> &'static str {
        match self {
            RngSource::Lcg => "lcg",
            RngSource::BadLcg => "bad-lcg",
            RngSource::Qrng => "qrng",
        }
    }

    /// Draws analysed when no count is given.
    pub fn default_count(self) -> usize {
        match self {
            RngSource::Lcg => 500,
            RngSource::BadLcg => 1000,
            RngSource::Qrng => 6250,
        }
    }

    /// LCG sources take the master seed reduced into their state space.
    pub fn stream(self, seed: u64) -> Result<BitStream> {
        let source = match self {
            RngSource::Lcg => {
                let params = LcgParams::minimal_standard();
                StreamSource::Lcg { params, seed: seed % params.m }
            }
            RngSource::BadLcg => {
                let params = LcgParams::bad_demo();
                StreamSource::Lcg { params, seed: seed % params.m }
            }
            RngSource::Qrng => StreamSource::Qrng { seed },
        };
        BitStream::new(source)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamFormat {
    /// One value per line.
    Decimal,
    /// Packed bits, 64 per line.
    Hex,
}

pub fn rng_stream(source: RngSource, count: usize, format: StreamFormat, seed: u64) -> Result<String> {
    let mut stream = source.stream(seed)?;
    Ok(match format {
        StreamFormat::Decimal => format_decimal(&stream.take_values(count)?),
        StreamFormat::Hex => pack_bits_hex(&stream.take_bits(count)?),
    })
}

pub const QRNG_RUN_DRAWS: usize = 1000;

/// `count` draws through the uniformity battery. For the QRNG, `runs`
/// further seeded streams estimate the chi-square pass rate.
pub fn rng_report(source: RngSource, count: usize, runs: u64, seed: u64) -> Result<ExperimentReport> {
    let mut stream = source.stream(seed)?;
    let mut report = uniformity_report(source.name(), &mut stream, count, seed)?;
    let first = source.stream(seed)?.next_value()?;
    report.result("first_value", first);
    let period = detect_period(&source.stream(seed)?.take_values(count)?);
    match source {
        RngSource::Lcg => {
            report.check("no_period_in_window", "none", period.map_or(Value::Null, Value::from), period.is_none());
        }
        RngSource::BadLcg => {
            report.check("period_detected", "some", period.map_or(Value::Null, Value::from), period.is_some());
        }
        RngSource::Qrng => {
            let mut passes = 0u64;
            for i in 0..runs {
                let mut s = RngSource::Qrng.stream(derive_seed(seed, i))?;
                let r = uniformity_report("qrng", &mut s, QRNG_RUN_DRAWS, seed)?;
                passes += u64::from(r.results_f64("chi_square_p") > CHI_SQUARE_ALPHA);
            }
            let pass_rate = rate(passes, runs);
            report.param("runs", runs).result("chi_square_pass_rate", pass_rate);
            report.check_at_least("chi_square_pass_rate", 0.99, pass_rate);
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------- circuit files

/// Runs a circuit file `shots` times from `initial` (all zeros by default).
pub fn circuit_file(text: &str, shots: u64, initial: Option<&str>, seed: u64) -> Result<ExperimentReport> {
    let circuit = deserialize(text)?;
    let n = circuit.n_qubits();
    let init = match initial {
        Some(bits) => StateVector::from_bits(bits)?,
        None => StateVector::zero_state(n)?,
    };
    let mut pre = init.clone();
    circuit.apply_unitary(&mut pre)?;
    let mut report = ExperimentReport::new("circuit.run", seed);
    report
        .param("qubits", n)
        .param("shots", shots)
        .param("initial", initial.map_or_else(|| "0".repeat(n), str::to_string))
        .result("gate_count", circuit.gate_count(false).elementary_gate_count)
        .result("elementary_gate_count", circuit.gate_count(true).elementary_gate_count)
        .result("probabilities", pre.probabilities());
    report.check_close("norm_preserved", 1.0, pre.norm_sqr(), crate::NORM_TOL);
    if circuit.final_measurement().is_some() {
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for i in 0..shots {
            let mut rng = trial_rng(seed, i);
            let (_, bits) = circuit.run(&init, &mut rng)?;
            *counts.entry(bits.unwrap_or_default()).or_default() += 1;
        }
        report.result("counts", counts_value(&counts));
    }
    Ok(report)
}

/// The worked-example bill, serial `W00000000`.
pub fn worked_bill() -> Result<crate::money::WiesnerBill> {
    encode_bill("W00000000", &parse_bits(WORKED_BITS)?, &parse_bits(WORKED_BASES)?)
}
