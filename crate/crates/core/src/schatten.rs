//! Sampling-circuit estimator of the normalized Schatten 2-norm of a mixed
//! quantum operation.

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, MixedOperation};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::hadamard::{mixed_xuux_with_adjoints, term_adjoints};
use crate::par;
use crate::rng::{stream_rng, Domain};
use crate::sampler::{uniform_thetas, SampleBudget, ThetaSample};

/// `S(θ) = ⊗_i R_y(2 ω_i θ)` with `ω_i = 2^i` on qubit `i - 1`, so that
/// `S(θ)|0…0⟩` is the classical sampling vector `x(θ)`.
pub fn sampling_circuit(n: usize, theta: ThetaSample) -> Circuit {
    let mut c = Circuit::new(n);
    for q in 0..n {
        let omega = (1u64 << (q + 1)) as f64;
        c.push(Gate::Ry(2.0 * omega * theta.value()), &[q])
            .expect("qubit index in range by construction");
    }
    c
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchattenEstimate {
    /// `sqrt(max(mean(per_sample_values), 0))`.
    pub value: f64,
    pub m: usize,
    pub shots_per_test: u64,
    /// `⟨x(θ_i)|Ũ Ũ^†|x(θ_i)⟩` in sample order.
    pub per_sample_values: Vec<f64>,
    pub seed: u64,
    /// True when shot noise drove the mean negative and it was clamped.
    pub clamped: bool,
}

impl SchattenEstimate {
    pub fn mean(&self) -> f64 {
        self.per_sample_values.iter().sum::<f64>() / self.per_sample_values.len() as f64
    }

    /// Unbiased sample variance of the per-sample values.
    pub fn variance(&self) -> f64 {
        let m = self.per_sample_values.len();
        if m < 2 {
            return 0.0;
        }
        let mean = self.mean();
        self.per_sample_values
            .iter()
            .map(|v| (v - mean).powi(2))
            .sum::<f64>()
            / (m - 1) as f64
    }

    fn from_values(values: Vec<f64>, shots_per_test: u64, seed: u64) -> Self {
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let clamped = mean < 0.0;
        Self {
            value: mean.max(0.0).sqrt(),
            m: values.len(),
            shots_per_test,
            per_sample_values: values,
            seed,
            clamped,
        }
    }
}

/// Estimates `‖Ũ‖_{S_2}` from `budget.m` uniform angles drawn under `seed`.
pub fn quantum_schatten2_estimate(
    mixed: &MixedOperation,
    budget: SampleBudget,
    shots_per_test: u64,
    seed: u64,
) -> Result<SchattenEstimate> {
    if budget.m == 0 {
        return Err(Error::EmptySamples);
    }
    quantum_schatten2_with_thetas(mixed, &uniform_thetas(budget.m, seed), shots_per_test, seed)
}

/// Same estimator over a caller-supplied angle set, e.g. an exact quadrature
/// grid. Shot noise for sample `i` comes from stream `i` of `seed`.
pub fn quantum_schatten2_with_thetas(
    mixed: &MixedOperation,
    thetas: &[ThetaSample],
    shots_per_test: u64,
    seed: u64,
) -> Result<SchattenEstimate> {
    if thetas.is_empty() {
        return Err(Error::EmptySamples);
    }
    let adjoints = term_adjoints(mixed);
    let values = par::try_map_indexed(thetas.len(), |i| {
        let mut rng = stream_rng(seed, Domain::Shots, i as u64);
        mixed_xuux_with_adjoints(mixed, &adjoints, thetas[i], shots_per_test, &mut rng)
    })?;
    Ok(SchattenEstimate::from_values(values, shots_per_test, seed))
}

/// Estimates `‖U_1 - U_2‖_{S_2}` by running the estimator on
/// `(U_1 - U_2)/√2` and rescaling by `√2`. The per-sample values stay those
/// of the scaled operation.
pub fn estimate_difference_norm(
    u1: &Circuit,
    u2: &Circuit,
    budget: SampleBudget,
    shots_per_test: u64,
    seed: u64,
) -> Result<SchattenEstimate> {
    let mixed = MixedOperation::scaled_difference(u1, u2)?;
    let mut est = quantum_schatten2_estimate(&mixed, budget, shots_per_test, seed)?;
    est.value *= std::f64::consts::SQRT_2;
    Ok(est)
}
