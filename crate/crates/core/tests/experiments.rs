use qecon::experiments::{
    algo, circuit_file, demo, money, rng_report, rng_stream, AlgoParams, Algorithm, Figure, MoneyAttack, MoneyParams,
    RngSource, StreamFormat,
};
use qecon::money::BankPolicy;
use qecon::report::ExperimentReport;

fn assert_passes(r: &ExperimentReport) {
    assert!(r.all_passed(), "{}: failed {:?}\n{}", r.experiment, r.failed_checks(), r.to_json());
    assert!(!r.checks.is_empty(), "{} has no checks", r.experiment);
}

#[test]
fn demos_pass() {
    for fig in [Figure::I, Figure::II, Figure::III, Figure::IV] {
        let r = demo(fig, 2000, 3).unwrap();
        assert_passes(&r);
    }
    let r = demo(Figure::II, 1, 0).unwrap();
    assert_eq!(r.results["counts"]["01"], serde_json::json!({"10": 1}));
    let r = demo(Figure::III, 1, 0).unwrap();
    assert_eq!(r.results["counts"]["111"], serde_json::json!({"110": 1}));
}

#[test]
fn money_reports_pass() {
    let base = MoneyParams {
        qubits: 5,
        trials: 400,
        policy: None,
    };
    for attack in [MoneyAttack::None, MoneyAttack::Adaptive, MoneyAttack::Game] {
        for policy in [BankPolicy::ReturnAlways, BankPolicy::ReturnOnValid, BankPolicy::ReissueOnValid] {
            let p = MoneyParams {
                policy: Some(policy),
                ..base
            };
            assert_passes(&money(attack, p, 9).unwrap());
        }
    }
    assert_passes(&money(MoneyAttack::Guess, MoneyParams { trials: 20_000, ..base }, 9).unwrap());
}

#[test]
fn money_defaults_are_recorded() {
    let r = money(MoneyAttack::Adaptive, MoneyParams { qubits: 3, trials: 10, policy: None }, 0).unwrap();
    assert_eq!(r.params["policy"], "return-always");
    assert_eq!(r.results_f64("recovery_rate"), 1.0);
}

#[test]
fn guess_rejects_policy() {
    let p = MoneyParams {
        qubits: 3,
        trials: 10,
        policy: Some(BankPolicy::ReturnAlways),
    };
    assert!(money(MoneyAttack::Guess, p, 0).is_err());
    assert!(money(MoneyAttack::None, MoneyParams { qubits: 0, ..p }, 0).is_err());
}

#[test]
fn algorithm_reports_pass() {
    let small = AlgoParams {
        qubits: None,
        trials: Some(300),
    };
    for which in [Algorithm::Grover, Algorithm::MonteCarlo, Algorithm::Lightning] {
        assert_passes(&algo(which, small, 5).unwrap());
    }
    for which in [Algorithm::Ols, Algorithm::Gradient, Algorithm::Qubo] {
        assert_passes(&algo(which, AlgoParams::default(), 5).unwrap());
    }
    assert!(algo(Algorithm::Ols, small, 5).is_err());
}

#[test]
fn grover_other_sizes() {
    for n in [2, 5, 7] {
        let r = algo(Algorithm::Grover, AlgoParams { qubits: Some(n), trials: Some(200) }, 1).unwrap();
        assert_passes(&r);
    }
}

#[test]
fn rng_reports() {
    let r = rng_report(RngSource::Lcg, 500, 0, 1).unwrap();
    assert_passes(&r);
    assert_eq!(r.results["first_value"], 16807);
    let r = rng_report(RngSource::BadLcg, 1000, 0, 1).unwrap();
    assert_passes(&r);
    assert_eq!(r.results["period"], 256);
    let r = rng_report(RngSource::Qrng, 1000, 50, 1).unwrap();
    assert_passes(&r);
    assert!(rng_report(RngSource::Lcg, 10, 0, 1).is_err());
}

#[test]
fn rng_streams() {
    assert_eq!(rng_stream(RngSource::Lcg, 2, StreamFormat::Decimal, 1).unwrap(), "16807\n282475249\n");
    let hex = rng_stream(RngSource::Qrng, 128, StreamFormat::Hex, 4).unwrap();
    assert_eq!(hex.lines().count(), 2);
    assert!(hex.lines().all(|l| l.len() == 16 && l.chars().all(|c| c.is_ascii_hexdigit())));
    assert_eq!(hex, rng_stream(RngSource::Qrng, 128, StreamFormat::Hex, 4).unwrap());
}

#[test]
fn circuit_files() {
    let text = "QUBITS 2\nH 0\nCNOT 0 1\nMEASURE 0 1\n";
    let r = circuit_file(text, 500, None, 2).unwrap();
    assert_passes(&r);
    let counts = r.results["counts"].as_object().unwrap();
    assert!(counts.keys().all(|k| k == "00" || k == "11"));
    assert_eq!(counts.values().map(|v| v.as_u64().unwrap()).sum::<u64>(), 500);
    let r = circuit_file("QUBITS 2\nX 1\n", 1, Some("10"), 2).unwrap();
    assert_eq!(r.results["probabilities"], serde_json::json!([0.0, 0.0, 0.0, 1.0]));
    assert!(circuit_file("QUBITS 2\nFOO 1\n", 1, None, 0).is_err());
}

#[test]
fn reports_are_deterministic() {
    let a = money(MoneyAttack::Game, MoneyParams { qubits: 4, trials: 50, policy: None }, 77).unwrap();
    let b = money(MoneyAttack::Game, MoneyParams { qubits: 4, trials: 50, policy: None }, 77).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let c = money(MoneyAttack::Game, MoneyParams { qubits: 4, trials: 50, policy: None }, 78).unwrap();
    assert_ne!(a.to_json(), c.to_json());
}

#[test]
fn csv_flattening() {
    let r = algo(Algorithm::Qubo, AlgoParams::default(), 0).unwrap();
    let csv = r.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("section,key,value,expected,pass"));
    assert!(csv.contains("check,optimum_matches_enumeration"));
}
