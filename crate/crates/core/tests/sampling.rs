mod common;

use common::rng;
use proptest::prelude::*;
use schatten_core::linalg::{exact_normalized_trace, haar_random_unitary};
use schatten_core::sampler::{
    build_x_vector, classical_schatten2_estimate, classical_trace_estimate, equispaced_thetas, exact_grid_size,
    sqrt_error_propagation_holds, uniform_thetas, FrequencyLadder,
};
use schatten_core::linalg::exact_schatten2;
use schatten_core::CMatrix;
use schatten_core::Complex64;
use rand::Rng;

#[test]
fn grid_second_moments_are_exact() {
    for n in 1..=6 {
        let dim = 1 << n;
        let grid = equispaced_thetas(exact_grid_size(n));
        let mut acc = vec![0.0; dim * dim];
        for &t in &grid {
            let x = build_x_vector(t, n, dim).unwrap();
            for j in 0..dim {
                for k in 0..dim {
                    acc[j * dim + k] += x[j] * x[k];
                }
            }
        }
        for j in 0..dim {
            for k in 0..dim {
                let avg = acc[j * dim + k] / grid.len() as f64;
                let want = if j == k { 1.0 / dim as f64 } else { 0.0 };
                assert!((avg - want).abs() <= 1e-9, "n={n} ({j},{k}): {avg}");
            }
        }
    }
}

#[test]
fn grid_trace_estimate_is_exact() {
    for n in 1..=6 {
        let grid = equispaced_thetas(exact_grid_size(n));
        for s in 0..20 {
            let u = haar_random_unitary(n, 100 * n as u64 + s).unwrap();
            let est = classical_trace_estimate(&u, &grid).unwrap();
            let exact = exact_normalized_trace(&u).unwrap();
            assert!((est - exact).norm() <= 1e-9);
        }
    }
}

#[test]
fn grid_schatten_estimate_is_exact_for_non_power_of_two() {
    let mut r = rng(3);
    for dim in [3usize, 5, 6, 7, 12] {
        let a = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)));
        let n = schatten_core::sampler::qubits_for_dim(dim);
        let est = classical_schatten2_estimate(&a, &equispaced_thetas(exact_grid_size(n))).unwrap();
        let exact = exact_schatten2(&a);
        assert!((est - exact).abs() <= 1e-9, "dim {dim}: {est} vs {exact}");
    }
}

#[test]
fn monte_carlo_trace_is_unbiased() {
    let u = haar_random_unitary(3, 5).unwrap();
    let exact = exact_normalized_trace(&u).unwrap();
    let reps = 200;
    let ests: Vec<Complex64> = (0..reps)
        .map(|s| classical_trace_estimate(&u, &uniform_thetas(50, s)).unwrap())
        .collect();
    let mean = ests.iter().sum::<Complex64>() / reps as f64;
    let var = ests.iter().map(|e| (e - mean).norm_sqr()).sum::<f64>() / (reps - 1) as f64;
    let se = (var / reps as f64).sqrt();
    assert!((mean - exact).norm() <= 4.0 * se, "{mean} vs {exact} (se {se})");
}

#[test]
fn frequency_ladder_sums_nonzero() {
    for n in 1..=10 {
        assert!(FrequencyLadder::new(n).unwrap().signed_sums_nonzero());
    }
}

proptest! {
    #[test]
    fn sqrt_error_propagation(s in 0.0f64..3.0, eps in 1e-4f64..1.0, u in -1.0f64..1.0) {
        let m_hat = (s * s + u * eps * eps.max(s)).max(0.0);
        prop_assume!(sqrt_error_propagation_holds(m_hat, s, eps));
        prop_assert!((m_hat.sqrt() - s).abs() <= eps * (1.0 + 1e-12));
    }

    #[test]
    fn x_vector_is_unit(theta in -std::f64::consts::PI..std::f64::consts::PI, n in 1usize..8) {
        let x = build_x_vector(schatten_core::ThetaSample::new(theta).unwrap(), n, 1 << n).unwrap();
        let norm: f64 = x.iter().map(|v| v * v).sum();
        prop_assert!((norm - 1.0).abs() <= 1e-12);
    }
}
