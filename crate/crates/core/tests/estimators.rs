mod common;

use common::{random_circuit, random_mixture, rng};
use nalgebra::DVector;
use rand::Rng;
use schatten_core::hadamard::{
    cross_term_spec, expectation, hadamard_full_circuit_probability, hadamard_probability, hadamard_shot_budget,
    hadamard_shot_estimate, mixed_xuux, HadamardTestSpec, Part,
};
use schatten_core::linalg::{exact_schatten2, mixed_matrix};
use schatten_core::rng::{stream_rng, Domain};
use schatten_core::sampler::{build_x_vector, equispaced_thetas, exact_grid_size, uniform_thetas};
use schatten_core::schatten::{quantum_schatten2_with_thetas, sampling_circuit};
use schatten_core::{Complex64, MixedOperation};

#[test]
fn expansion_matches_dense_quadratic_form() {
    let mut r = rng(7);
    for case in 0..100 {
        let n = 1 + case % 4;
        let k = 1 + (case / 4) % 4;
        let mixed = random_mixture(n, k, r.random_range(0.3..1.0), &mut r);
        let m = mixed_matrix(&mixed).unwrap();
        let gram = &m * m.adjoint();
        let theta = uniform_thetas(1, case as u64)[0];
        let x = build_x_vector(theta, n, 1 << n).unwrap();
        let xv = DVector::from_iterator(x.len(), x.iter().map(|&v| Complex64::new(v, 0.0)));
        let dense = xv.dotc(&(&gram * &xv)).re;
        let got = mixed_xuux(&mixed, theta, 0, &mut rng(0)).unwrap();
        assert!((got - dense).abs() <= 1e-9, "case {case}: {got} vs {dense}");
    }
}

#[test]
fn literal_cross_term_circuits_agree() {
    let mut r = rng(8);
    for _ in 0..20 {
        let mixed = random_mixture(2, 3, 1.0, &mut r);
        let theta = uniform_thetas(1, r.random())[0];
        let x = schatten_core::StateVector::zero(2).unwrap().apply_circuit(&sampling_circuit(2, theta)).unwrap();
        for k1 in 0..3 {
            for k2 in k1 + 1..3 {
                let spec = cross_term_spec(&mixed, theta, k1, k2, Part::Real, 0).unwrap();
                let z = expectation(&spec).unwrap();
                let a = x.apply_circuit(&mixed.terms()[k1].circuit.adjoint()).unwrap();
                let b = x.apply_circuit(&mixed.terms()[k2].circuit.adjoint()).unwrap();
                assert!((z - a.inner(&b).unwrap()).norm() <= 1e-12);
            }
        }
    }
}

#[test]
fn analytic_and_full_circuit_probabilities_agree() {
    let mut r = rng(9);
    for i in 0..1000 {
        let n = 1 + i % 5;
        let spec = HadamardTestSpec {
            state_prep: random_circuit(n, 6, &mut r),
            controlled_ops: (0..1 + i % 3).map(|_| random_circuit(n, 5, &mut r)).collect(),
            part: if i % 2 == 0 { Part::Real } else { Part::Imaginary },
            shots: 0,
        };
        let a = hadamard_probability(&spec).unwrap();
        let b = hadamard_full_circuit_probability(&spec).unwrap();
        assert!((a - b).abs() <= 1e-10, "spec {i}: {a} vs {b}");
    }
}

#[test]
fn shot_estimates_concentrate() {
    let shots = hadamard_shot_budget(0.1, 0.05).unwrap();
    assert_eq!(shots, 738);
    let mut r = rng(10);
    let mut hits = 0;
    for t in 0..200u64 {
        let spec = HadamardTestSpec {
            state_prep: random_circuit(2, 6, &mut r),
            controlled_ops: vec![random_circuit(2, 6, &mut r)],
            part: Part::Real,
            shots,
        };
        let truth = expectation(&spec).unwrap().re;
        let est = hadamard_shot_estimate(&spec, &mut stream_rng(77, Domain::Shots, t)).unwrap();
        if (est.estimate - truth).abs() <= 0.1 {
            hits += 1;
        }
    }
    assert!(hits >= 186, "{hits}/200");
}

#[test]
fn grid_estimator_matches_dense_norm() {
    let mut r = rng(11);
    for case in 0..30 {
        let n = 1 + case % 4;
        let mixed = random_mixture(n, 1 + case % 3, 1.0, &mut r);
        let est = quantum_schatten2_with_thetas(&mixed, &equispaced_thetas(exact_grid_size(n)), 0, 0).unwrap();
        let exact = exact_schatten2(&mixed_matrix(&mixed).unwrap());
        assert!((est.value - exact).abs() <= 1e-9);
        assert!(est.value <= mixed.coefficient_l1() + 1e-6);
    }
}

#[test]
fn estimate_ignores_term_order() {
    let mut r = rng(12);
    let mixed = random_mixture(3, 4, 0.9, &mut r);
    let mut terms = mixed.terms().to_vec();
    terms.reverse();
    let rev = MixedOperation::new(terms).unwrap();
    let thetas = uniform_thetas(40, 1);
    let a = quantum_schatten2_with_thetas(&mixed, &thetas, 0, 0).unwrap().value;
    let b = quantum_schatten2_with_thetas(&rev, &thetas, 0, 0).unwrap().value;
    assert!((a - b).abs() <= 1e-12);
}
