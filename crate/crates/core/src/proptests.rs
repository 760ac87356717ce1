//! Randomized invariants across modules.

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use crate::ansatz::{AnsatzSpec, ParamVector, Topology};
use crate::bounds::{self, moments, QubitPosition};
use crate::experiment::config::{Experiment, RawConfig, Settings};
use crate::experiment::table::{Cell, Table};
use crate::gradient::{mc_grad_norm_sq, pairwise_sum, parameter_shift_gradient};
use crate::init::{self, sample_params, InitSpec, SeededRng};
use crate::pauli::{parse_hamiltonian, Hamiltonian, PauliString};
use crate::statevector::{adjoint_gradient, cost, run_circuit, StateVector};
use crate::training::{qnn_grad, qnn_loss, QnnModel, RmspropConfig, RmspropState};

fn codes(n: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..4, n)
}

fn string_and_pair() -> impl Strategy<Value = (Vec<u8>, (usize, usize))> {
    (2usize..7).prop_flat_map(|n| {
        (codes(n), (0..n, 0..n).prop_filter("distinct qubits", |(a, b)| a != b))
    })
}

/// Random Hamiltonian with 1..=4 non-identity terms on `n` qubits.
fn hamiltonian(n: usize) -> impl Strategy<Value = Hamiltonian> {
    prop::collection::vec((-2.0f64..2.0, codes(n)), 1..5).prop_filter_map("needs a non-identity term", move |terms| {
        let terms: Vec<_> = terms
            .into_iter()
            .filter(|(_, c)| c.iter().any(|&x| x != 0))
            .map(|(w, c)| (w, PauliString::new(&c).unwrap()))
            .collect();
        let h = Hamiltonian::new(n, terms).ok()?;
        (h.n_terms() > 0).then_some(h)
    })
}

/// (spec, Hamiltonian, seed) with N ≤ 6 and L ≤ 4.
fn instance() -> impl Strategy<Value = (AnsatzSpec, Hamiltonian, u64)> {
    (2usize..7, 1usize..5, any::<bool>(), any::<u64>()).prop_flat_map(|(n, l, full, seed)| {
        let topology = if full { Topology::Full } else { Topology::ChainClosed };
        let spec = AnsatzSpec::build(n, l, &topology).unwrap();
        (Just(spec), hamiltonian(n), Just(seed))
    })
}

fn random_state(n: usize, seed: u64) -> StateVector {
    let spec = AnsatzSpec::build(n, 2, &Topology::Full).unwrap();
    let params = sample_params(&spec, &InitSpec::Uniform, &mut SeededRng::new(seed, 0)).unwrap();
    run_circuit(&spec, &params).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cz_conjugation_is_an_involution((c, pair) in string_and_pair(), negate in any::<bool>()) {
        let mut p = PauliString::new(&c).unwrap();
        if negate {
            p = p.negated();
        }
        prop_assert_eq!(p.cz_conjugate(pair).unwrap().cz_conjugate(pair).unwrap(), p);
    }

    #[test]
    fn cz_conjugation_matches_the_state((c, pair) in string_and_pair(), seed in any::<u64>()) {
        let p = PauliString::new(&c).unwrap();
        let psi = random_state(c.len(), seed);
        let mut rotated = psi.clone();
        rotated.apply_cz(pair).unwrap();
        let direct = rotated.expectation(&p).unwrap();
        let predicted = psi.expectation(&p.cz_conjugate(pair).unwrap()).unwrap();
        prop_assert!((direct - predicted).norm() < 1e-12);
    }

    #[test]
    fn z_strings_keep_locality(c in codes(6).prop_map(|v| v.into_iter().map(|x| if x == 0 { 0 } else { 3 }).collect::<Vec<u8>>())) {
        prop_assume!(c.iter().any(|&x| x != 0));
        let p = PauliString::new(&c).unwrap();
        let spec = AnsatzSpec::build(6, 1, &Topology::Full).unwrap();
        let q = p.cz_layer_conjugate(&spec.cz_layers()[0]).unwrap();
        prop_assert_eq!(q.locality(), p.locality());
        prop_assert_eq!(q, p);
    }

    #[test]
    fn expectation_on_zero_matches_simulation(c in (1usize..8).prop_flat_map(codes), negate in any::<bool>()) {
        let mut p = PauliString::new(&c).unwrap();
        if negate {
            p = p.negated();
        }
        let e = p.expectation_on_zero();
        prop_assert!(e == -1.0 || e == 0.0 || e == 1.0);
        let sim = StateVector::zero_state(c.len()).unwrap().expectation(&p).unwrap();
        prop_assert_eq!(sim, Complex64::new(e, 0.0));
    }

    #[test]
    fn word_round_trip(c in (1usize..80).prop_flat_map(codes)) {
        let p = PauliString::new(&c).unwrap();
        prop_assert_eq!(PauliString::from_word(&p.word()).unwrap(), p);
    }

    #[test]
    fn hamiltonian_text_round_trip(h in (1usize..6).prop_flat_map(hamiltonian)) {
        prop_assert_eq!(parse_hamiltonian(&h.to_text()).unwrap(), h);
    }

    #[test]
    fn ansatz_layout(n in 2usize..9, l in 1usize..9, q in 1usize..19, k in 1usize..10) {
        let spec = AnsatzSpec::build(n, l, &Topology::ChainClosed).unwrap();
        prop_assert_eq!(spec.n_params(), 2 * n * l);
        prop_assert_eq!(&spec, &AnsatzSpec::build(n, l, &Topology::ChainClosed).unwrap());
        prop_assert_eq!(spec.cz_layers().len(), l);
        if q <= 2 * l && k <= n {
            prop_assert_eq!(spec.param_index(q, k).unwrap(), (q - 1) * n + (k - 1));
        } else {
            prop_assert!(spec.param_index(q, k).is_err());
        }
    }

    #[test]
    fn circuits_preserve_norm((spec, h, seed) in instance()) {
        let params = sample_params(&spec, &InitSpec::Uniform, &mut SeededRng::new(seed, 1)).unwrap();
        let psi = run_circuit(&spec, &params).unwrap();
        prop_assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        for (_, p) in h.terms() {
            prop_assert!(psi.expectation(p).unwrap().im.abs() < 1e-12);
        }
    }

    #[test]
    fn adjoint_matches_parameter_shift((spec, h, seed) in instance()) {
        let params = sample_params(&spec, &InitSpec::Uniform, &mut SeededRng::new(seed, 2)).unwrap();
        let adj = adjoint_gradient(&spec, &params, &h).unwrap();
        let shift = parameter_shift_gradient(&spec, &params, &h).unwrap();
        for (a, b) in adj.iter().zip(&shift) {
            prop_assert!((a - b).abs() < 1e-10, "{} vs {}", a, b);
        }
    }

    #[test]
    fn descent_identity((spec, h, seed) in instance()) {
        let params = sample_params(&spec, &InitSpec::Uniform, &mut SeededRng::new(seed, 3)).unwrap();
        let grad = adjoint_gradient(&spec, &params, &h).unwrap();
        let norm_sq = pairwise_sum(&grad.iter().map(|g| g * g).collect::<Vec<_>>());
        prop_assume!(norm_sq > 1e-6);
        let c0 = cost(&spec, &params, &h).unwrap();
        let ratio = |eta: f64| {
            let moved: Vec<f64> = params.iter().zip(&grad).map(|(p, g)| p - eta * g).collect();
            let c1 = cost(&spec, &ParamVector::new(moved).unwrap(), &h).unwrap();
            (c1 - c0 + eta * norm_sq).abs() / eta
        };
        let (r2, r4) = (ratio(1e-2), ratio(1e-4));
        prop_assert!(r4 < 1e-2 * norm_sq, "ratio {} at norm^2 {}", r4, norm_sq);
        prop_assert!(r4 <= r2 + 1e-9);
    }

    #[test]
    fn seeded_streams_are_reproducible(seed in any::<u64>(), stream in any::<u64>()) {
        let spec = AnsatzSpec::build(3, 2, &Topology::ChainClosed).unwrap();
        for init in [InitSpec::Uniform, InitSpec::Gaussian { sigma2: 0.1 }, InitSpec::Reduced { a: 0.3 }] {
            let a = sample_params(&spec, &init, &mut SeededRng::new(seed, stream)).unwrap();
            let b = sample_params(&spec, &init, &mut SeededRng::new(seed, stream)).unwrap();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn reduced_and_translated_stay_in_domain(a in 1e-6f64..0.999_999, center in -3.0f64..3.0, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed, 0);
        for _ in 0..200 {
            let r = InitSpec::Reduced { a }.sample(&mut rng);
            prop_assert!(r.abs() <= a * PI);
            let t = InitSpec::Translated { a, center }.sample(&mut rng);
            prop_assert!((t - center).abs() <= a * PI * (1.0 + 1e-15));
        }
    }

    #[test]
    fn moment_identities(a in 1e-4f64..0.9999) {
        let m = moments(a).unwrap();
        prop_assert_eq!(m.alpha + m.beta, 1.0);
        let s = (2.0 * a * PI).sin() / (a * PI);
        prop_assert!((4.0 * (m.alpha - m.beta) - 2.0 * s).abs() < 1e-15);
        prop_assert!(m.gamma > 0.0 && m.gamma <= 1.0);
        prop_assert!(m.alpha >= m.gamma * m.gamma);
    }

    #[test]
    fn bounds_are_nonnegative(a in 1e-4f64..0.9999, n in 2usize..40, l in 1usize..64, s in 1usize..5, terms in 1usize..50) {
        prop_assert!(bounds::bound_theorem1(n, l, a).unwrap() >= 0.0);
        prop_assert!(bounds::bound_theorem2(terms, s, l, a).unwrap() >= 0.0);
        prop_assert!(bounds::bound_theorem4(s, l, a).unwrap() >= 0.0);
        for pos in [QubitPosition::Edge, QubitPosition::Bulk] {
            prop_assert!(bounds::f_theorem3(pos, l, a).unwrap() >= 0.0);
        }
    }

    #[test]
    fn theorem2_solver_residual(s in 1usize..4, l in 1usize..200) {
        let (sf, lf) = (s as f64, l as f64);
        let t = (sf * (2.0 * lf - 1.0) - 2.0) / (sf * (2.0 * lf + 1.0));
        match init::solve_a_theorem2(s, l) {
            Ok(a) => {
                prop_assert!(a > 0.0 && a <= 0.5);
                prop_assert!((init::sinc(2.0 * a * PI) - t).abs() < 1e-12);
            }
            Err(_) => prop_assert!(t < 0.0),
        }
    }

    #[test]
    fn estimator_reproducible(seed in any::<u64>()) {
        let spec = AnsatzSpec::build(2, 2, &Topology::ChainClosed).unwrap();
        let h = crate::pauli::zz_chain(2).unwrap();
        let a = mc_grad_norm_sq(&spec, &h, &InitSpec::Uniform, 8, seed).unwrap();
        let b = mc_grad_norm_sq(&spec, &h, &InitSpec::Uniform, 8, seed).unwrap();
        prop_assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        prop_assert_eq!(a.stderr.to_bits(), b.stderr.to_bits());
        prop_assert!(a.mean >= 0.0 && a.stderr >= 0.0);
    }

    #[test]
    fn rmsprop_state(grads in prop::collection::vec(prop::collection::vec(-10.0f64..10.0, 4), 1..20)) {
        let mut state = RmspropState::new(4, RmspropConfig::qnn()).unwrap();
        let mut params = vec![0.0; 4];
        for (k, g) in grads.iter().enumerate() {
            state.step(&mut params, g, 0.01).unwrap();
            prop_assert_eq!(state.steps(), k + 1);
            prop_assert!(state.accumulator().iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn qnn_loss_is_separable(theta in prop::collection::vec(-PI..PI, 1..12)) {
        let model = QnnModel::new(theta.len()).unwrap();
        let one = QnnModel::new(1).unwrap();
        let loss = qnn_loss(&model, &theta).unwrap();
        let mean = theta.iter().map(|&t| qnn_loss(&one, &[t]).unwrap()).sum::<f64>() / theta.len() as f64;
        prop_assert!((loss - mean).abs() < 1e-15);
        prop_assert!(loss >= 0.0);
        let g = qnn_grad(&model, &theta).unwrap();
        for i in 0..theta.len() {
            let mut up = theta.clone();
            let mut down = theta.clone();
            up[i] += 1e-6;
            down[i] -= 1e-6;
            let fd = (qnn_loss(&model, &up).unwrap() - qnn_loss(&model, &down).unwrap()) / 2e-6;
            prop_assert!((g[i] - fd).abs() < 1e-7);
        }
    }

    #[test]
    fn qnn_minimum_is_periodic(p in 1usize..20, shifts in prop::collection::vec(-3i32..4, 20)) {
        let model = QnnModel::new(p).unwrap();
        let theta: Vec<f64> = (0..p).map(|l| PI / 100.0 + shifts[l] as f64 * PI).collect();
        prop_assert!(qnn_loss(&model, &theta).unwrap() < 1e-28);
    }

    #[test]
    fn csv_reals_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let mut t = Table::new(vec!["x"]);
        t.push(vec![Cell::Real(v)]);
        let text = t.to_csv(&[]);
        let last = text.lines().last().unwrap();
        prop_assert_eq!(last.parse::<f64>().unwrap().to_bits(), v.to_bits());
    }

    #[test]
    fn config_hash_ignores_line_order(seed in any::<u64>(), samples in 2usize..1000, rotate in 0usize..4) {
        let mut lines = [
            format!("seed = {seed}"),
            format!("samples = {samples}"),
            "n_qubits = 2,4".to_string(),
            "blocks = 5N".to_string(),
        ];
        let a = Settings::resolve(Experiment::GradnormScan, &RawConfig::parse(&lines.join("\n")).unwrap()).unwrap();
        lines.rotate_left(rotate);
        let b = Settings::resolve(Experiment::GradnormScan, &RawConfig::parse(&lines.join("\n")).unwrap()).unwrap();
        prop_assert_eq!(a.config_hash(), b.config_hash());
    }
}
