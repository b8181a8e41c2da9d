use proptest::prelude::*;

use qecon::algorithms::{jordan_gradient, qubo_bruteforce, GradientProblem, QuboProblem};
use qecon::circuit::{deserialize, serialize};
use qecon::gates::matrix_of;
use qecon::money::{
    adaptive_attack, copier_fidelity, copier_single_copy_fidelity, encode_bill, lightning_mint, recovery_matches, Bank,
    BankPolicy, LightningScheme, Verdict,
};
use qecon::report::ExperimentReport;
use qecon::rng::{Lcg, LcgParams};
use qecon::seed::trial_rng;
use qecon::subroutines::{
    decode_phase_register, grover_closed_form, grover_success_probability, inverse_qft_circuit,
    phase_estimation_distribution, phase_gate, qft_circuit,
};
use qecon::{Amplitude, Circuit, Gate, GateMatrix, Oracle, StateVector};

const TOL: f64 = 1e-9;

fn state_strategy(n: usize) -> impl Strategy<Value = StateVector> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n)
        .prop_filter("nonzero", |v| v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::normalized(v.into_iter().map(|(a, b)| Amplitude::new(a, b)).collect()).unwrap())
}

/// A gate together with distinct targets on an `n`-qubit register, `n >= 3`.
fn step_strategy(n: usize) -> impl Strategy<Value = (Gate, Vec<usize>)> {
    let one = prop_oneof![
        Just(Gate::I),
        Just(Gate::X),
        Just(Gate::Y),
        Just(Gate::Z),
        Just(Gate::H),
        Just(Gate::S),
        Just(Gate::T),
        (1u32..6).prop_map(Gate::Rk),
        Just(Gate::Adjoint(Box::new(Gate::T))),
    ];
    let gate = prop_oneof![
        one.clone().prop_map(|g| (g, 1usize)),
        Just((Gate::Cnot, 2)),
        Just((Gate::Swap, 2)),
        one.prop_map(|g| (Gate::controlled(g), 2)),
        Just((Gate::Toffoli, 3)),
    ];
    (gate, Just(()).prop_perturb(move |_, mut rng| {
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        order
    }))
        .prop_map(|((g, arity), order)| (g, order[..arity].to_vec()))
}

fn circuit_strategy(n: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
    prop::collection::vec(step_strategy(n), 0..max_len).prop_map(move |steps| {
        let mut c = Circuit::new(n).unwrap();
        for (g, t) in steps {
            c.push(g, t).unwrap();
        }
        c
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuits_preserve_norm(c in circuit_strategy(4, 24), psi in state_strategy(4)) {
        let mut s = psi.clone();
        c.apply_unitary(&mut s).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn circuit_unitaries_are_unitary(c in circuit_strategy(3, 16)) {
        prop_assert!(c.unitary().unwrap().unitarity_defect() < 1e-10);
    }

    #[test]
    fn adjoint_circuit_inverts(c in circuit_strategy(4, 20), psi in state_strategy(4)) {
        let mut s = psi.clone();
        c.apply_unitary(&mut s).unwrap();
        c.adjoint().apply_unitary(&mut s).unwrap();
        prop_assert!((s.fidelity(&psi).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn toffoli_expansion_is_exact(c in circuit_strategy(3, 8)) {
        let diff = c.unitary().unwrap().max_abs_diff(&c.expand_toffoli().unitary().unwrap());
        prop_assert!(diff < 1e-12);
    }

    #[test]
    fn gate_counts_add(a in circuit_strategy(3, 8), b in circuit_strategy(3, 8)) {
        let mut joined = a.clone();
        joined.append(&b).unwrap();
        prop_assert_eq!(joined.gate_count(true), a.gate_count(true) + b.gate_count(true));
    }

    #[test]
    fn text_format_round_trips(c in circuit_strategy(4, 16)) {
        let text = serialize(&c).unwrap();
        prop_assert_eq!(deserialize(&text).unwrap(), c);
    }

    #[test]
    fn tensor_amplitudes_are_products(phi in state_strategy(1), psi in state_strategy(2)) {
        let joint = phi.tensor(&psi).unwrap();
        for i in 0..2 {
            for j in 0..4 {
                let want = phi.amplitude(i) * psi.amplitude(j);
                prop_assert!((joint.amplitude(4 * i + j) - want).norm() < 1e-12);
            }
        }
        prop_assert!((joint.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn measurement_probabilities_sum_to_one(psi in state_strategy(4), seed in any::<u64>()) {
        prop_assert!((psi.probabilities().iter().sum::<f64>() - 1.0).abs() < 1e-10);
        let mut rng = trial_rng(seed, 0);
        let out = psi.measure_qubits(&[1, 3], &mut rng).unwrap();
        prop_assert!((out.post_state.norm_sqr() - 1.0).abs() < 1e-10);
        let marginal = psi.marginal(&[1, 3]).unwrap();
        prop_assert!(marginal[out.value] > 0.0);
    }

    #[test]
    fn fidelity_bounded_and_symmetric(a in state_strategy(3), b in state_strategy(3)) {
        let f = a.fidelity(&b).unwrap();
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&f));
        prop_assert!((f - b.fidelity(&a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn qft_inverse_is_identity(n in 1usize..=6) {
        let mut c = qft_circuit(n).unwrap();
        c.append(&inverse_qft_circuit(n).unwrap()).unwrap();
        let u = c.unitary().unwrap();
        prop_assert!(u.max_abs_diff(&GateMatrix::identity(1 << n)) < 1e-10);
    }

    #[test]
    fn exact_phases_estimated_with_certainty(n in 1usize..=6, j in 0usize..64) {
        let j = j % (1 << n);
        let phi = j as f64 / (1 << n) as f64;
        let eig = StateVector::basis_state(1, 1).unwrap();
        let dist = phase_estimation_distribution(&phase_gate(phi), &eig, n).unwrap();
        prop_assert!((dist[j] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn register_decoding_is_binary_fraction(bits in "[01]{1,10}") {
        let reversed: String = bits.chars().rev().collect();
        let want = reversed
            .chars()
            .enumerate()
            .map(|(i, c)| if c == '1' { 0.5f64.powi(i as i32 + 1) } else { 0.0 })
            .sum::<f64>();
        prop_assert!((decode_phase_register(&bits).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn grover_matches_closed_form(n in 2usize..=8, k in 0usize..10, marked in any::<u64>()) {
        let marked = marked % (1 << n);
        let p = grover_success_probability(n, marked, k).unwrap();
        prop_assert!((p - grover_closed_form(n, k)).abs() < 1e-9);
    }

    #[test]
    fn xor_oracle_is_involution_and_counted(table in prop::collection::vec(0u64..4, 8), psi in state_strategy(5)) {
        let t = table.clone();
        let mut o = Oracle::xor(3, 2, move |x| t[x as usize]).unwrap();
        let mut s = psi.clone();
        o.apply(&mut s, &[0, 1, 2], &[3, 4]).unwrap();
        o.apply(&mut s, &[0, 1, 2], &[3, 4]).unwrap();
        prop_assert_eq!(o.query_count(), 2);
        prop_assert!((s.fidelity(&psi).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!(o.matrix().unwrap().is_unitary());
    }

    #[test]
    fn genuine_bills_always_verify(bits in prop::collection::vec(any::<bool>(), 1..10), seed in any::<u64>()) {
        let bases: Vec<bool> = bits.iter().enumerate().map(|(i, b)| (i % 3 == 0) ^ b).collect();
        for policy in [BankPolicy::ReturnAlways, BankPolicy::ReturnOnValid, BankPolicy::ReissueOnValid] {
            let mut bank = Bank::new(policy);
            let bill = bank.mint_with(&bits, &bases).unwrap();
            prop_assert_eq!(bank.acceptance_probability(&bill).unwrap(), 1.0);
            let mut rng = trial_rng(seed, 0);
            let out = bank.verify(bill, &mut rng).unwrap();
            prop_assert_eq!(out.verdict, Verdict::Valid);
            let back = out.returned.expect("valid bills come back");
            prop_assert_eq!(bank.verify(back, &mut rng).unwrap().verdict, Verdict::Valid);
        }
    }

    #[test]
    fn encoded_bill_acceptance_is_product_of_overlaps(
        bits in prop::collection::vec(any::<bool>(), 1..7),
        guess in prop::collection::vec(any::<bool>(), 7),
        seed in any::<u64>(),
    ) {
        let mut rng = trial_rng(seed, 1);
        let mut bank = Bank::new(BankPolicy::ReturnOnValid);
        let bill = bank.mint(bits.len(), &mut rng).unwrap();
        let rec = bank.audit_record(&bill.serial).unwrap().clone();
        let guess_bases = &guess[..bits.len()];
        let forged = encode_bill(&bill.serial, &bits, guess_bases).unwrap();
        let want: f64 = (0..bits.len())
            .map(|i| {
                let real = qecon::money::encode_qubit(rec.bill_bits[i], rec.bases[i]);
                real.fidelity(&forged.qubits[i]).unwrap()
            })
            .product();
        prop_assert!((bank.acceptance_probability(&forged).unwrap() - want).abs() < 1e-12);
    }

    #[test]
    fn adaptive_attack_recovers_under_return_always(n in 1usize..8, seed in any::<u64>()) {
        let mut rng = trial_rng(seed, 2);
        let mut bank = Bank::new(BankPolicy::ReturnAlways);
        let bill = bank.mint(n, &mut rng).unwrap();
        let serial = bill.serial.clone();
        let out = adaptive_attack(&mut bank, bill, &mut rng).unwrap();
        prop_assert!(out.completed);
        prop_assert!(out.verify_calls <= 2 * n as u64);
        prop_assert!(recovery_matches(&bank, &serial, &out));
    }

    #[test]
    fn copier_fidelities(re_a in -1.0f64..1.0, im_a in -1.0f64..1.0, re_b in -1.0f64..1.0, im_b in -1.0f64..1.0) {
        prop_assume!(re_a * re_a + im_a * im_a + re_b * re_b + im_b * im_b > 1e-3);
        let phi = StateVector::normalized(vec![Amplitude::new(re_a, im_a), Amplitude::new(re_b, im_b)]).unwrap();
        let (a, b) = (phi.amplitude(0), phi.amplitude(1));
        let joint = (a.conj() * a.conj() * a + b.conj() * b.conj() * b).norm_sqr();
        prop_assert!((copier_fidelity(&phi).unwrap() - joint).abs() < 1e-12);
        let single = a.norm_sqr().powi(2) + b.norm_sqr().powi(2);
        prop_assert!((copier_single_copy_fidelity(&phi).unwrap() - single).abs() < 1e-12);
    }

    #[test]
    fn lightning_bills_uniform_on_preimage(k in 2usize..=7, log_m in 1u32..=2, seed in any::<u64>()) {
        let m = 1usize << log_m;
        let scheme = LightningScheme::modular(k, m).unwrap();
        let mut rng = trial_rng(seed, 3);
        let (p, bill) = lightning_mint(&scheme, &mut rng).unwrap();
        let size = (1usize << k) / m;
        for (g, a) in bill.amplitudes().iter().enumerate() {
            let want = if g % m == p { 1.0 / (size as f64).sqrt() } else { 0.0 };
            prop_assert!((a.re - want).abs() < 1e-12 && a.im.abs() < 1e-12);
        }
    }

    #[test]
    fn lcg_stays_in_range(seed in 1u64..2_147_483_647) {
        let mut lcg = Lcg::new(LcgParams::minimal_standard(), seed).unwrap();
        for _ in 0..1000 {
            let u = lcg.next_unit();
            prop_assert!((0.0..1.0).contains(&u));
        }
    }

    #[test]
    fn jordan_exact_on_grid_gradients(ks in prop::collection::vec(-8i64..8, 1..=3), seed in any::<u64>()) {
        // m = 8, N = 16: representable components are multiples of 1/2 in [-4, 4)
        let g: Vec<f64> = ks.iter().map(|&k| k as f64 * 0.5).collect();
        let coeffs = g.clone();
        let p = GradientProblem::new(4, 6, 8.0, 0.1, vec![0.2; g.len()], move |x| {
            x.iter().zip(&coeffs).map(|(a, b)| a * b).sum::<f64>()
        })
        .unwrap();
        let mut rng = trial_rng(seed, 4);
        let out = jordan_gradient(&p, &mut rng).unwrap();
        prop_assert_eq!(out.gradient, g);
        prop_assert_eq!(out.queries, 1);
    }

    #[test]
    fn qubo_optimum_dominates(
        q in prop::collection::vec(-5.0f64..5.0, 36),
        c in prop::collection::vec(-5.0f64..5.0, 6),
        probes in prop::collection::vec(prop::collection::vec(any::<bool>(), 6), 20),
    ) {
        let mut m = vec![vec![0.0; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                m[i][j] = (q[6 * i + j] + q[6 * j + i]) / 2.0;
            }
        }
        let p = QuboProblem::new(m, c).unwrap();
        let (x, best) = qubo_bruteforce(&p);
        prop_assert!((p.objective(&x) - best).abs() < 1e-9);
        for probe in probes {
            prop_assert!(best <= p.objective(&probe) + 1e-9);
        }
    }

    #[test]
    fn report_json_round_trips(seed in any::<u64>(), xs in prop::collection::vec(-1e6f64..1e6, 0..5), flag in any::<bool>()) {
        let mut r = ExperimentReport::new("prop.report", seed);
        r.param("flag", flag).result("xs", xs.clone()).check_close("c", 1.0, 1.0, 0.0);
        let back = ExperimentReport::from_json(&r.to_json()).unwrap();
        prop_assert_eq!(back.to_json(), r.to_json());
    }
}

#[test]
fn all_gate_matrices_unitary() {
    let gates = [
        Gate::I,
        Gate::X,
        Gate::Y,
        Gate::Z,
        Gate::H,
        Gate::S,
        Gate::T,
        Gate::Rk(1),
        Gate::Rk(7),
        Gate::Cnot,
        Gate::Swap,
        Gate::Toffoli,
        Gate::controlled(Gate::H),
        Gate::Adjoint(Box::new(Gate::S)),
    ];
    for g in gates {
        assert!(matrix_of(&g).unitarity_defect() < 1e-12, "{}", g.name());
    }
}
