mod common;

use colorz::colex::{generate_hexagonal, generate_hexagonal_twisted};
use colorz::estimator::{
    compare_methods, estimate_expectation, estimate_overlap_baseline, estimate_overlap_baseline_with, BaselinePlan,
    SamplePlan,
};
use colorz::gf2::DEFAULT_ENUMERATION_CAP as CAP;
use colorz::ising::{exact_expectation_codeword_sum, exact_ln_overlap, IsingModel};
use colorz::qsim::{emulate_quantum_protocol, DEFAULT_QUBIT_CAP};

fn model(beta: f64, seed: u64) -> IsingModel {
    let colex = generate_hexagonal(4, 3).unwrap();
    let j = common::random_couplings(&mut common::rng(seed), colex.vertex_count(), 2.0);
    IsingModel::new(colex, beta, j).unwrap()
}

const MILLION: usize = 1_000_000;

#[test]
fn main_estimator_is_unbiased() {
    let m = model(0.25, 1);
    let exact = exact_expectation_codeword_sum(&m, CAP).unwrap();
    let plan = SamplePlan::with_samples(MILLION, 0.95).unwrap();
    let r = estimate_expectation(&m, &plan, 17, 4).unwrap();
    // |Re f| <= 1, so the standard error is at most 1/sqrt(K)
    let se = 1.0 / (MILLION as f64).sqrt();
    assert!(
        (r.expectation_estimate.re - exact).abs() < 5.0 * se,
        "{} vs {exact}",
        r.expectation_estimate.re
    );
    assert!(r.imag_diagnostic < 5.0 * se);
}

#[test]
fn baseline_is_unbiased() {
    let m = model(0.25, 2);
    let exact = exact_ln_overlap(&m, CAP).unwrap().exp();
    let plan = BaselinePlan {
        groups: 1,
        group_size: MILLION,
    };
    let r = estimate_overlap_baseline_with(&m, 0.1, 0.9, plan, 5, 4).unwrap();
    let se = 1.0 / (MILLION as f64).sqrt();
    assert!((r.expectation_estimate.re - exact).abs() < 5.0 * se);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let m = model(0.7, 3);
    let plan = SamplePlan::with_samples(5000, 0.9).unwrap();
    let one = estimate_expectation(&m, &plan, 99, 1).unwrap();
    assert!(one.same_outcome(&estimate_expectation(&m, &plan, 99, 3).unwrap()));
    assert!(!one.same_outcome(&estimate_expectation(&m, &plan, 100, 1).unwrap()));

    let base = estimate_overlap_baseline(&m, 0.2, 0.9, 4, 1).unwrap();
    assert!(base.same_outcome(&estimate_overlap_baseline(&m, 0.2, 0.9, 4, 5).unwrap()));

    let q = emulate_quantum_protocol(&m, &plan, 8, 1, DEFAULT_QUBIT_CAP, CAP).unwrap();
    assert!(q.same_outcome(&emulate_quantum_protocol(&m, &plan, 8, 2, DEFAULT_QUBIT_CAP, CAP).unwrap()));
}

#[test]
fn quantum_emulation_limits() {
    let colex = generate_hexagonal_twisted(3, 3, 1).unwrap();
    let plan = SamplePlan::with_samples(20_000, 0.95).unwrap();
    let hot = IsingModel::uniform(colex.clone(), 0.0, 1.0).unwrap();
    let r = emulate_quantum_protocol(&hot, &plan, 1, 2, DEFAULT_QUBIT_CAP, CAP).unwrap();
    assert!((r.expectation_estimate.re - 0.25).abs() < plan.epsilon);
    assert!((r.z_estimate / 2f64.powi(9) - 1.0).abs() < 4.0 * plan.epsilon);

    let cold = IsingModel::uniform(colex, 1.0, 5.0).unwrap();
    let r = emulate_quantum_protocol(&cold, &plan, 1, 2, DEFAULT_QUBIT_CAP, CAP).unwrap();
    assert!(r.expectation_estimate.re > 0.99);
}

#[test]
fn high_temperature_overlap_bound_is_meaningless() {
    // at β = 0 the genus-1 partition function is 2^F, far below γ ε
    let m = IsingModel::uniform(generate_hexagonal_twisted(3, 6, 1).unwrap(), 0.0, 1.0).unwrap();
    let r = compare_methods(&m, 0.1, 0.9, 3, 2, CAP).unwrap();
    assert!((r.exact_z / 2f64.powi(18) - 1.0).abs() < 1e-10);
    assert!(r.delta_old_exceeds_z);
    assert!(!r.delta_new_exceeds_z);
    assert_eq!(r.bound_ratio_log2, -8.0);
    assert!((r.exact_expectation - 0.25).abs() < 1e-12);
}

#[test]
fn coverage_of_main_bound() {
    let m = model(0.5, 4);
    let exact = exact_expectation_codeword_sum(&m, CAP).unwrap();
    let plan = colorz::estimator::plan_samples(0.2, 0.9).unwrap();
    let hits = (0..100)
        .filter(|&s| {
            (estimate_expectation(&m, &plan, s, 2).unwrap().expectation_estimate.re - exact).abs() <= plan.epsilon
        })
        .count();
    assert!(hits >= 81, "{hits}");
}
