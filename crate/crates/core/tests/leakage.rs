use approx::assert_abs_diff_eq;
use proptest::prelude::*;
use qleak_core::leakage::{
    compute_leakage, leakage_ceiling, leakage_objective, mutual_information, noisy_leakage_global, two_state_leakage,
    AscentConfig,
};
use qleak_core::model::{
    depolarizing_global, encode_amplitude_3bit, encode_index, random_povm, DensityOperator, Ensemble,
};
use qleak_core::numerics::trace_distance;

fn quick(restarts: usize) -> AscentConfig {
    AscentConfig { restarts, ..AscentConfig::default() }
}

/// Random states from normalized POVM elements, alternating rank one and rank two.
fn random_states(d: usize, n: usize, seed: u64) -> Vec<DensityOperator> {
    let povm = random_povm(d, 2 * n, seed).unwrap();
    povm.elements()
        .chunks(2)
        .enumerate()
        .map(|(i, pair)| {
            let m = if i % 2 == 0 { pair[0].clone() } else { &pair[0] + &pair[1] };
            DensityOperator::new(m.scale(1.0 / m.trace().re)).unwrap()
        })
        .collect()
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("s{i}")).collect()
}

fn skewed(n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|i| (i + 1) as f64).collect();
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

#[test]
fn index_encodings_reach_log_d() {
    for d in [2, 4, 8] {
        let r = compute_leakage(&encode_index(d).unwrap(), &quick(3)).unwrap();
        assert_abs_diff_eq!(r.leakage_bits, (d as f64).log2(), epsilon = 1e-6);
        assert!(r.all_converged());
        assert!(r.traces.iter().all(|t| t.is_monotone(1e-12)));
    }
}

#[test]
fn amplitude_encoding_value() {
    let r = compute_leakage(&encode_amplitude_3bit(), &quick(4)).unwrap();
    assert!((r.leakage_bits - 1.9).abs() <= 0.05);
    assert_abs_diff_eq!(r.leakage_bits, (2.0 + 3f64.sqrt()).log2(), epsilon = 1e-5);
}

#[test]
fn priors_never_change_the_result() {
    for e in [encode_index(4).unwrap(), encode_amplitude_3bit()] {
        let cfg = quick(2);
        let a = compute_leakage(&e, &cfg).unwrap();
        let b = compute_leakage(&e.with_priors(skewed(e.len())).unwrap(), &cfg).unwrap();
        assert_eq!(a.leakage_bits.to_bits(), b.leakage_bits.to_bits());
        assert_eq!(a.restart_leakages, b.restart_leakages);
    }
}

#[test]
fn depolarized_index4_matches_closed_form() {
    let e = encode_index(4).unwrap();
    for p in [0.1, 0.5, 0.9] {
        let noisy = e.map_channel(&depolarizing_global(p, 4).unwrap()).unwrap();
        let q = compute_leakage(&noisy, &quick(3)).unwrap().leakage_bits;
        assert_abs_diff_eq!(q, (p + (1.0 - p) * 4.0).log2(), epsilon = 1e-6);
        assert_abs_diff_eq!(q, noisy_leakage_global(2.0, p).unwrap(), epsilon = 1e-6);
    }
}

#[test]
fn identical_states_leak_nothing() {
    let rho = DensityOperator::maximally_mixed(3);
    let e = Ensemble::uniform(labels(4), vec![rho; 4]).unwrap();
    let r = compute_leakage(&e, &quick(2)).unwrap();
    assert!(r.leakage_bits.abs() < 1e-9);
}

#[test]
fn two_state_ensembles_match_trace_distance_formula() {
    for seed in 0..10u64 {
        let pair = random_states(2, 2, 1000 + seed);
        let t = trace_distance(pair[0].matrix(), pair[1].matrix()).unwrap();
        let e = Ensemble::uniform(labels(2), pair.clone()).unwrap();
        let q = compute_leakage(&e, &quick(3)).unwrap().leakage_bits;
        assert_abs_diff_eq!(q, (1.0 + t).log2(), epsilon = 1e-4);
        assert_abs_diff_eq!(two_state_leakage(&pair[0], &pair[1]).unwrap(), (1.0 + t).log2(), epsilon = 1e-12);
    }
}

#[test]
fn optimal_povm_reproduces_reported_objective() {
    let e = Ensemble::uniform(labels(3), random_states(3, 3, 7)).unwrap();
    let r = compute_leakage(&e, &quick(2)).unwrap();
    let v = leakage_objective(&e, &r.optimal_povm).unwrap();
    assert_eq!(v.objective.to_bits(), r.objective.to_bits());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn leakage_sits_between_zero_and_ceiling(d in 2usize..5, n in 2usize..7, seed in 0u64..10_000) {
        let e = Ensemble::uniform(labels(n), random_states(d, n, seed)).unwrap();
        let r = compute_leakage(&e, &quick(2)).unwrap();
        prop_assert!(r.leakage_bits >= -1e-9);
        prop_assert!(r.leakage_bits <= leakage_ceiling(n, d) + 1e-6);
        prop_assert!(r.traces.iter().all(|t| t.is_monotone(1e-12)));
    }

    #[test]
    fn mutual_information_never_exceeds_povm_objective(
        d in 2usize..5, n in 2usize..7, m in 2usize..10, seed in 0u64..10_000, skew in any::<bool>()
    ) {
        let uniform = Ensemble::uniform(labels(n), random_states(d, n, seed)).unwrap();
        let e = if skew { uniform.with_priors(skewed(n)).unwrap() } else { uniform };
        let f = random_povm(d, m.max(d), seed ^ 0x5eed).unwrap();
        let info = mutual_information(&e, &f).unwrap();
        let bound = leakage_objective(&e, &f).unwrap().leakage_bits;
        prop_assert!(info <= bound + 1e-9, "I = {info}, log2 objective = {bound}");
    }
}
