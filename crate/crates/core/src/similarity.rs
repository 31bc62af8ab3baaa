//! Fidelity-based similarity of quantum operations.
//!
//! Two unitaries are pure-state `(ε, δ)`-similar when a Haar-random input
//! `|ψ⟩` gives `F(U_1ψ, U_2ψ) >= 1 - ε` with probability at least `1 - δ`.
//! A small normalized Schatten distance implies this; the bounds below and
//! [`decide_similarity`] turn an estimated distance into a verdict.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, MixedOperation};
use crate::error::{Error, Result};
use crate::par;
use crate::rng::{stream_rng, Domain};
use crate::sampler::{check_eps_delta, SampleBudget};
use crate::schatten::{estimate_difference_norm, quantum_schatten2_estimate};
use crate::state::StateVector;

/// Floor replacing the unknown true distance in the second slack branch.
pub const SLACK_NORM_FLOOR: f64 = 1e-6;

/// `|⟨ψ_1|ψ_2⟩|²`.
pub fn fidelity(psi1: &StateVector, psi2: &StateVector) -> Result<f64> {
    Ok(psi1.inner(psi2)?.norm_sqr())
}

/// Uniformly random pure state: normalized vector of complex Gaussians.
pub fn haar_random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<StateVector> {
    let dim = 1usize
        .checked_shl(n as u32)
        .ok_or_else(|| Error::domain("too many qubits"))?;
    let mut amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex64::new(re, im)
        })
        .collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::from_amplitudes(amps)
}

/// Haar state number `index` under `seed`.
pub fn haar_state_indexed(n: usize, seed: u64, index: u64) -> Result<StateVector> {
    haar_random_state(n, &mut stream_rng(seed, Domain::HaarState, index))
}

fn check_similarity_domain(epsilon: f64, delta: f64) -> Result<()> {
    check_eps_delta(epsilon, delta)
}

/// Largest `‖U_1 - U_2‖_{S_2}` guaranteeing `(ε, δ)`-similarity:
/// `ε / (1 + sqrt(2(1/δ - 1)))`.
pub fn unitary_similarity_bound(epsilon: f64, delta: f64) -> Result<f64> {
    check_similarity_domain(epsilon, delta)?;
    Ok(epsilon / (1.0 + (2.0 * (1.0 / delta - 1.0)).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MixedBound {
    Bound(f64),
    /// The radicand is negative: no distance is small enough.
    NotApplicable,
}

/// Distance bound for mixed operations:
/// `sqrt((ε² - k(τ - τ⁴)) / (2τ(ε + kτ²)))` with `k = 1/δ - 1`.
pub fn mixed_similarity_bound(epsilon: f64, delta: f64, tau: f64) -> Result<MixedBound> {
    check_similarity_domain(epsilon, delta)?;
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::Domain(format!("tau must be in (0, 1], got {tau}")));
    }
    let k = 1.0 / delta - 1.0;
    let num = epsilon * epsilon - k * (tau - tau.powi(4));
    let den = 2.0 * tau * (epsilon + k * tau * tau);
    if num < 0.0 {
        return Ok(MixedBound::NotApplicable);
    }
    Ok(MixedBound::Bound((num / den).sqrt()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauEstimate {
    pub tau: f64,
    pub m: usize,
}

/// `τ = E_ψ ⟨ψ|Ũ_1Ũ_1^† + Ũ_2Ũ_2^†|ψ⟩ / 2 = (‖Ũ_1‖² + ‖Ũ_2‖²) / 2`, each norm
/// from the sampling estimator. Clamped into `(0, 1]`.
pub fn estimate_tau(
    u1: &MixedOperation,
    u2: &MixedOperation,
    budget: SampleBudget,
    shots: u64,
    seed: u64,
) -> Result<TauEstimate> {
    if u1.num_qubits() != u2.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: u1.num_qubits(),
            got: u2.num_qubits(),
        });
    }
    let v1 = quantum_schatten2_estimate(u1, budget, shots, seed)?.value;
    let v2 = quantum_schatten2_estimate(u2, budget, shots, seed)?.value;
    let tau = ((v1 * v1 + v2 * v2) / 2.0).clamp(f64::MIN_POSITIVE, 1.0);
    Ok(TauEstimate { tau, m: budget.m })
}

/// Fidelities `F(U_1ψ, U_2ψ)` over Haar-random `ψ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelitySurvey {
    pub fidelities: Vec<f64>,
}

impl FidelitySurvey {
    pub fn mean(&self) -> f64 {
        self.fidelities.iter().sum::<f64>() / self.fidelities.len() as f64
    }

    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        let k = self.fidelities.len();
        if k < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let var = self.fidelities.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / (k - 1) as f64;
        (var / k as f64).sqrt()
    }

    /// Fraction of states with `F >= 1 - epsilon`.
    pub fn fraction_at_least(&self, epsilon: f64) -> f64 {
        let hits = self.fidelities.iter().filter(|&&f| f >= 1.0 - epsilon).count();
        hits as f64 / self.fidelities.len() as f64
    }
}

/// Applies both circuits to `num_states` Haar states drawn under `seed`.
pub fn fidelity_survey(u1: &Circuit, u2: &Circuit, num_states: usize, seed: u64) -> Result<FidelitySurvey> {
    if num_states == 0 {
        return Err(Error::EmptySamples);
    }
    if u1.num_qubits() != u2.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: u1.num_qubits(),
            got: u2.num_qubits(),
        });
    }
    let n = u1.num_qubits();
    let fidelities = par::try_map_indexed(num_states, |i| {
        let psi = haar_state_indexed(n, seed, i as u64)?;
        fidelity(&psi.apply_circuit(u1)?, &psi.apply_circuit(u2)?)
    })?;
    Ok(FidelitySurvey { fidelities })
}

/// Fraction of Haar states with `F(U_1ψ, U_2ψ) >= 1 - ε`.
pub fn monte_carlo_similarity(
    u1: &Circuit,
    u2: &Circuit,
    epsilon: f64,
    num_states: usize,
    seed: u64,
) -> Result<f64> {
    Ok(fidelity_survey(u1, u2, num_states, seed)?.fraction_at_least(epsilon))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecisionParams {
    pub epsilon: f64,
    pub delta: f64,
    pub delta_hat: f64,
    pub m: usize,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityVerdict {
    pub similar: bool,
    pub epsilon: f64,
    pub delta: f64,
    pub delta_hat: f64,
    pub m: usize,
    pub shots: u64,
    pub seed: u64,
    /// Estimated `‖U_1 - U_2‖_{S_2}`.
    pub estimate: f64,
    pub slack_term: f64,
    /// `ε / (1 + sqrt(2(1/δ - 1)))`.
    pub threshold: f64,
}

/// `min((2 ln(2/δ̂)/m)^{1/4}, sqrt(2 ln(2/δ̂)/m) / max(norm, floor))`.
pub fn slack_term(delta_hat: f64, m: usize, norm: f64) -> f64 {
    let r = 2.0 * (2.0 / delta_hat).ln() / m as f64;
    r.powf(0.25).min(r.sqrt() / norm.max(SLACK_NORM_FLOOR))
}

/// Declares `U_1`, `U_2` `(ε, δ)`-similar (with confidence `1 - δ̂`) when
/// `estimate + slack <= threshold`. The estimate stands in for the true
/// distance inside the slack's second branch.
pub fn decide_similarity(u1: &Circuit, u2: &Circuit, p: DecisionParams) -> Result<SimilarityVerdict> {
    if !(p.epsilon > 0.0 && p.epsilon <= 2.0) {
        return Err(Error::Domain(format!("epsilon must be in (0, 2], got {}", p.epsilon)));
    }
    check_eps_delta(p.epsilon, p.delta)?;
    if !(p.delta_hat > 0.0 && p.delta_hat < 1.0) {
        return Err(Error::Domain(format!(
            "delta_hat must be in (0, 1), got {}",
            p.delta_hat
        )));
    }
    let budget = SampleBudget::fixed(p.m)?;
    let estimate = estimate_difference_norm(u1, u2, budget, p.shots, p.seed)?.value;
    let slack = slack_term(p.delta_hat, p.m, estimate);
    let threshold = unitary_similarity_bound(p.epsilon, p.delta)?;
    Ok(SimilarityVerdict {
        similar: estimate + slack <= threshold,
        epsilon: p.epsilon,
        delta: p.delta,
        delta_hat: p.delta_hat,
        m: p.m,
        shots: p.shots,
        seed: p.seed,
        estimate,
        slack_term: slack,
        threshold,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::MixedTerm;
    use crate::gate::Gate;
    use crate::linalg::{circuit_matrix, mixed_matrix};
    use crate::sampler::{equispaced_thetas, exact_grid_size};
    use crate::schatten::quantum_schatten2_with_thetas;
    use std::f64::consts::SQRT_2;

    fn one(g: Gate) -> Circuit {
        Circuit::new(1).with(g, &[0]).unwrap()
    }

    #[test]
    fn fidelity_examples() {
        let z = StateVector::zero(1).unwrap();
        let o = StateVector::basis(1, 1).unwrap();
        let plus = z.apply_circuit(&one(Gate::H)).unwrap();
        assert!((fidelity(&z, &z).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&z, &o).unwrap(), 0.0);
        assert!((fidelity(&z, &plus).unwrap() - 0.5).abs() < 1e-15);
        assert!(fidelity(&z, &StateVector::zero(2).unwrap()).is_err());
    }

    #[test]
    fn haar_states_normalized_and_deterministic() {
        for i in 0..50 {
            let s = haar_state_indexed(4, 3, i).unwrap();
            assert!((s.norm_sqr() - 1.0).abs() <= 1e-12);
        }
        assert_eq!(
            haar_state_indexed(3, 1, 7).unwrap(),
            haar_state_indexed(3, 1, 7).unwrap()
        );
    }

    #[test]
    fn haar_first_moment() {
        let n = 3;
        let draws = 10_000;
        let p: Vec<f64> = (0..draws)
            .map(|i| haar_state_indexed(n, 21, i).unwrap().amplitudes()[0].norm_sqr())
            .collect();
        let mean = p.iter().sum::<f64>() / draws as f64;
        let var = p.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        let se = (var / draws as f64).sqrt();
        assert!((mean - 1.0 / 8.0).abs() <= 3.0 * se, "mean {mean} se {se}");
    }

    #[test]
    fn unitary_bound_examples() {
        let b = unitary_similarity_bound(0.1, 0.2).unwrap();
        assert!((b - 0.1 / (1.0 + 8f64.sqrt())).abs() < 1e-15);
        assert!((b - 0.026120).abs() < 1e-6);
        assert!((unitary_similarity_bound(0.3, 0.5).unwrap() - 0.3 / (1.0 + SQRT_2)).abs() < 1e-15);
        assert!((unitary_similarity_bound(0.1, 1.0 - 1e-12).unwrap() - 0.1).abs() < 1e-6);
        assert!(unitary_similarity_bound(0.1, 0.0).is_err());
        assert!(unitary_similarity_bound(-0.1, 0.5).is_err());
    }

    #[test]
    fn unitary_bound_monotone() {
        let eps = [0.01, 0.05, 0.1, 0.5, 1.0, 2.0];
        let deltas = [0.01, 0.1, 0.2, 0.5, 0.9];
        for w in eps.windows(2) {
            for &d in &deltas {
                assert!(unitary_similarity_bound(w[0], d).unwrap() < unitary_similarity_bound(w[1], d).unwrap());
            }
        }
        for w in deltas.windows(2) {
            for &e in &eps {
                assert!(unitary_similarity_bound(e, w[0]).unwrap() < unitary_similarity_bound(e, w[1]).unwrap());
            }
        }
    }

    #[test]
    fn mixed_bound_examples() {
        let (e, d) = (0.1, 0.2);
        let k = 1.0 / d - 1.0;
        match mixed_similarity_bound(e, d, 1.0).unwrap() {
            MixedBound::Bound(b) => assert!((b - (e * e / (2.0 * (e + k))).sqrt()).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert_eq!(mixed_similarity_bound(e, d, 0.9).unwrap(), MixedBound::NotApplicable);
        let tau = 0.7;
        match mixed_similarity_bound(e, 1.0 - 1e-12, tau).unwrap() {
            MixedBound::Bound(b) => assert!((b - (e / (2.0 * tau)).sqrt()).abs() < 1e-5),
            other => panic!("{other:?}"),
        }
        assert!(mixed_similarity_bound(e, d, 0.0).is_err());
        assert!(mixed_similarity_bound(e, d, 1.5).is_err());
    }

    #[test]
    fn tau_examples() {
        let b = SampleBudget::fixed(16).unwrap();
        let u = MixedOperation::single(one(Gate::Ry(0.3)));
        let t = estimate_tau(&u, &u, b, 0, 0).unwrap();
        assert!((t.tau - 1.0).abs() < 1e-14);
        let half = MixedOperation::new(vec![MixedTerm {
            coeff: Complex64::new(0.5, 0.0),
            circuit: Circuit::new(1),
        }])
        .unwrap();
        let t = estimate_tau(&half, &half, b, 0, 0).unwrap();
        assert!((t.tau - 0.25).abs() < 1e-14);
    }

    #[test]
    fn tau_grid_matches_dense() {
        let a = MixedOperation::scaled_difference(&one(Gate::Ry(0.5)), &one(Gate::Rz(1.0))).unwrap();
        let b = MixedOperation::new(vec![
            MixedTerm {
                coeff: Complex64::new(0.2, 0.3),
                circuit: one(Gate::H),
            },
            MixedTerm {
                coeff: Complex64::new(0.4, 0.0),
                circuit: one(Gate::T),
            },
        ])
        .unwrap();
        let grid = equispaced_thetas(exact_grid_size(1));
        let v1 = quantum_schatten2_with_thetas(&a, &grid, 0, 0).unwrap().value;
        let v2 = quantum_schatten2_with_thetas(&b, &grid, 0, 0).unwrap().value;
        let tau = (v1 * v1 + v2 * v2) / 2.0;
        let (ma, mb) = (mixed_matrix(&a).unwrap(), mixed_matrix(&b).unwrap());
        let dense = ((&ma * ma.adjoint()).trace() + (&mb * mb.adjoint()).trace()).re / 4.0;
        assert!((tau - dense).abs() < 1e-9);
    }

    #[test]
    fn monte_carlo_examples() {
        let u = one(Gate::Ry(0.2));
        assert_eq!(monte_carlo_similarity(&u, &u, 1e-9, 200, 0).unwrap(), 1.0);
        let frac = monte_carlo_similarity(&Circuit::new(1), &one(Gate::X), 0.01, 10_000, 1).unwrap();
        // |⟨ψ|X|ψ⟩|² >= 0.99 on a thin cap of the Bloch sphere (~0.5% of states)
        assert!(frac < 0.02, "{frac}");
        assert!(monte_carlo_similarity(&u, &u, 0.1, 0, 0).is_err());
    }

    #[test]
    fn decision_examples() {
        let u = one(Gate::Ry(0.2));
        let p = DecisionParams {
            epsilon: 2.0,
            delta: 0.9,
            delta_hat: 0.05,
            m: 1_000_000,
            shots: 0,
            seed: 0,
        };
        let r = 2.0 * (2.0f64 / 0.05).ln() / 1e6;
        assert!((slack_term(0.05, 1_000_000, 0.0) - r.powf(0.25)).abs() < 1e-15);
        assert!((r.powf(0.25) - 0.052117).abs() < 1e-5);

        // zero-distance case with a loose threshold: slack alone decides
        let same = decide_similarity(&u, &u, DecisionParams { m: 2000, ..p }).unwrap();
        assert!(same.estimate < 1e-6);
        assert!(same.similar, "{same:?}");

        // tight threshold: even a zero estimate fails at m = 10^6
        let tight = DecisionParams {
            epsilon: 0.1,
            delta: 0.2,
            ..p
        };
        let slack = slack_term(0.05, 1_000_000, 0.0);
        let threshold = unitary_similarity_bound(0.1, 0.2).unwrap();
        assert!(slack > threshold && !(0.0 + slack <= threshold));

        let far = decide_similarity(&Circuit::new(1), &one(Gate::X), DecisionParams { m: 500, ..tight }).unwrap();
        assert!((far.estimate - SQRT_2).abs() < 0.1);
        assert!(!far.similar);
        assert!(decide_similarity(&u, &u, DecisionParams { epsilon: 2.5, ..p }).is_err());
        assert!(decide_similarity(&u, &u, DecisionParams { delta_hat: 1.0, ..p }).is_err());
    }

    #[test]
    fn slack_decreases_in_m() {
        let est = 0.01;
        let mut prev = f64::INFINITY;
        for m in [10, 100, 1000, 10_000, 100_000] {
            let s = slack_term(0.05, m, est);
            assert!(s < prev);
            prev = s;
        }
    }

    #[test]
    fn fidelity_chain_single_pair() {
        let u1 = circuit_matrix(&one(Gate::Ry(0.3))).unwrap();
        let u2 = circuit_matrix(&one(Gate::Rx(0.2))).unwrap();
        let diff = &u1 - &u2;
        let svd = diff.clone().svd(true, false);
        let w = svd.u.unwrap();
        for i in 0..20 {
            let psi = haar_state_indexed(1, 5, i).unwrap();
            let a = psi.amplitudes();
            let f = {
                let v1 = &u1 * nalgebra::DVector::from_column_slice(a);
                let v2 = &u2 * nalgebra::DVector::from_column_slice(a);
                v1.dotc(&v2).norm_sqr()
            };
            let s: f64 = (0..2)
                .map(|k| {
                    let proj: Complex64 = (0..2).map(|r| w[(r, k)].conj() * a[r]).sum();
                    svd.singular_values[k].powi(2) * proj.norm_sqr()
                })
                .sum();
            assert!(f - (1.0 - s / 2.0).powi(2) >= -1e-10);
            assert!((1.0 - s / 2.0).powi(2) - (1.0 - s) >= -1e-10);
        }
    }
}
