//! Simulated Hadamard tests.
//!
//! A clean qubit in `|+⟩` controls `V`; after a final `H`, `1 - 2·Pr(1)` on
//! the clean qubit equals `Re⟨ψ|V|ψ⟩`. Inserting `S^†` after the first `H`
//! yields `Im⟨ψ|V|ψ⟩` instead. Probabilities are either computed directly
//! from `⟨ψ|V|ψ⟩` (analytic mode) or from the full `(n+1)`-qubit circuit, and
//! finite-shot estimates are drawn as Bernoulli samples of that probability.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, MixedOperation};
use crate::error::{Error, Result};
use crate::gate::Gate;
use crate::sampler::{check_eps_delta, ThetaSample};
use crate::schatten::sampling_circuit;
use crate::state::{StateVector, STATEVECTOR_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Part {
    Real,
    Imaginary,
}

impl Part {
    pub fn of(self, z: Complex64) -> f64 {
        match self {
            Part::Real => z.re,
            Part::Imaginary => z.im,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HadamardTestSpec {
    /// Prepares `|ψ⟩` from `|0…0⟩`.
    pub state_prep: Circuit,
    /// Applied in order, each controlled on the clean qubit; `V` is their product.
    pub controlled_ops: Vec<Circuit>,
    pub part: Part,
    /// `0` selects exact (shot-free) evaluation.
    pub shots: u64,
}

impl HadamardTestSpec {
    pub fn num_qubits(&self) -> usize {
        self.state_prep.num_qubits()
    }

    fn check(&self) -> Result<usize> {
        let n = self.num_qubits();
        for c in &self.controlled_ops {
            if c.num_qubits() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.num_qubits(),
                });
            }
        }
        Ok(n)
    }
}

/// Outcome of a finite-shot Hadamard test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotResult {
    /// `1 - 2·p1_hat`.
    pub estimate: f64,
    pub shots_used: u64,
    pub p1_hat: f64,
}

/// `⟨ψ|V|ψ⟩` for the spec's state and controlled product.
pub fn expectation(spec: &HadamardTestSpec) -> Result<Complex64> {
    let n = spec.check()?;
    let psi = StateVector::zero(n)?.apply_circuit(&spec.state_prep)?;
    let mut v_psi = psi.clone();
    for c in &spec.controlled_ops {
        v_psi.apply_circuit_in_place(c)?;
    }
    psi.inner(&v_psi)
}

fn p1_from_value(value: f64) -> f64 {
    ((1.0 - value) / 2.0).clamp(0.0, 1.0)
}

/// Exact probability of reading `1` on the clean qubit, from `⟨ψ|V|ψ⟩`.
pub fn hadamard_probability(spec: &HadamardTestSpec) -> Result<f64> {
    let z = expectation(spec)?;
    Ok(p1_from_value(spec.part.of(z)))
}

/// Same probability obtained by simulating the literal `(n+1)`-qubit circuit
/// with the clean qubit as qubit 0.
pub fn hadamard_full_circuit_probability(spec: &HadamardTestSpec) -> Result<f64> {
    let n = spec.check()?;
    if n + 1 > STATEVECTOR_CAP {
        return Err(Error::CapExceeded {
            what: "hadamard test register",
            n: n + 1,
            cap: STATEVECTOR_CAP,
        });
    }
    let mut state = StateVector::zero(n + 1)?;
    state.apply_circuit_in_place(&spec.state_prep.shifted(1))?;
    let mut head = Circuit::new(n + 1).with(Gate::H, &[0])?;
    if spec.part == Part::Imaginary {
        head.push(Gate::Sdg, &[0])?;
    }
    state.apply_circuit_in_place(&head)?;
    for c in &spec.controlled_ops {
        state.apply_controlled_in_place(&c.shifted(1), 0)?;
    }
    state.apply_circuit_in_place(&Circuit::new(n + 1).with(Gate::H, &[0])?)?;
    state.probability_one(0)
}

/// Draws `shots` Bernoulli(`p1`) outcomes.
pub fn sample_shots<R: Rng + ?Sized>(p1: f64, shots: u64, rng: &mut R) -> ShotResult {
    let ones = (0..shots).filter(|_| rng.random::<f64>() < p1).count() as u64;
    let p1_hat = if shots == 0 {
        0.0
    } else {
        ones as f64 / shots as f64
    };
    ShotResult {
        estimate: 1.0 - 2.0 * p1_hat,
        shots_used: shots,
        p1_hat,
    }
}

pub fn hadamard_shot_estimate<R: Rng + ?Sized>(
    spec: &HadamardTestSpec,
    rng: &mut R,
) -> Result<ShotResult> {
    if spec.shots == 0 {
        return Err(Error::domain(
            "shot estimate needs shots >= 1; use hadamard_probability for exact mode",
        ));
    }
    let p1 = hadamard_probability(spec)?;
    Ok(sample_shots(p1, spec.shots, rng))
}

/// Shots for one Hadamard test to reach precision `ε` with probability
/// `1 - δ`: `⌈2 ln(2/δ) / ε²⌉`.
pub fn hadamard_shot_budget(epsilon: f64, delta: f64) -> Result<u64> {
    check_eps_delta(epsilon, delta)?;
    Ok(((2.0 * (2.0 / delta).ln() / (epsilon * epsilon)).ceil() as u64).max(1))
}

/// The Hadamard test measuring `Re`/`Im ⟨x(θ)|U_{k1} U_{k2}^†|x(θ)⟩` for terms
/// `k1`, `k2` of a mixture: prepare with `S(θ)`, then control `U_{k2}^†`
/// followed by `U_{k1}`.
pub fn cross_term_spec(
    mixed: &MixedOperation,
    theta: ThetaSample,
    k1: usize,
    k2: usize,
    part: Part,
    shots: u64,
) -> Result<HadamardTestSpec> {
    let terms = mixed.terms();
    let get = |k: usize| {
        terms
            .get(k)
            .ok_or_else(|| Error::Domain(format!("term index {k} out of range")))
    };
    let (u1, u2) = (&get(k1)?.circuit, &get(k2)?.circuit);
    Ok(HadamardTestSpec {
        state_prep: sampling_circuit(mixed.num_qubits(), theta),
        controlled_ops: vec![u2.adjoint(), u1.clone()],
        part,
        shots,
    })
}

/// `⟨x(θ)|Ũ Ũ^†|x(θ)⟩` for `Ũ = Σ α_κ U_κ`, expanded as
/// `Σ|α_κ|² + Σ_{κ1<κ2} 2Re(α_{κ1}α*_{κ2})·Re⟨x|U_{κ1}U_{κ2}^†|x⟩
///  - 2Im(α_{κ1}α*_{κ2})·Im⟨x|U_{κ1}U_{κ2}^†|x⟩`.
///
/// With `shots_per_test == 0` each bracket is exact. Otherwise each real and
/// imaginary bracket is a separate Bernoulli-sampled Hadamard test drawing
/// from `rng` in `(κ1, κ2, Re, Im)` order.
///
/// The brackets are computed as `⟨U_{κ1}^† x | U_{κ2}^† x⟩`, which needs `K`
/// circuit applications instead of `K²`; [`cross_term_spec`] gives the
/// equivalent literal test circuits.
pub fn mixed_xuux<R: Rng + ?Sized>(
    mixed: &MixedOperation,
    theta: ThetaSample,
    shots_per_test: u64,
    rng: &mut R,
) -> Result<f64> {
    let adjoints = term_adjoints(mixed);
    mixed_xuux_with_adjoints(mixed, &adjoints, theta, shots_per_test, rng)
}

pub(crate) fn term_adjoints(mixed: &MixedOperation) -> Vec<Circuit> {
    mixed.terms().iter().map(|t| t.circuit.adjoint()).collect()
}

/// [`mixed_xuux`] with the term adjoints `U_κ^†` precomputed.
pub(crate) fn mixed_xuux_with_adjoints<R: Rng + ?Sized>(
    mixed: &MixedOperation,
    adjoints: &[Circuit],
    theta: ThetaSample,
    shots_per_test: u64,
    rng: &mut R,
) -> Result<f64> {
    let n = mixed.num_qubits();
    let x = StateVector::zero(n)?.apply_circuit(&sampling_circuit(n, theta))?;
    let pulled_back = adjoints
        .iter()
        .map(|a| x.apply_circuit(a))
        .collect::<Result<Vec<_>>>()?;

    let terms = mixed.terms();
    let mut total: f64 = terms.iter().map(|t| t.coeff.norm_sqr()).sum();
    for k1 in 0..terms.len() {
        for k2 in k1 + 1..terms.len() {
            let z = pulled_back[k1].inner(&pulled_back[k2])?;
            let (re, im) = if shots_per_test == 0 {
                (z.re, z.im)
            } else {
                let re = sample_shots(p1_from_value(z.re), shots_per_test, rng).estimate;
                let im = sample_shots(p1_from_value(z.im), shots_per_test, rng).estimate;
                (re, im)
            };
            let c = terms[k1].coeff * terms[k2].coeff.conj();
            total += 2.0 * c.re * re - 2.0 * c.im * im;
        }
    }
    Ok(total)
}

/// Measurement plan for estimating `⟨x|Ũ Ũ^†|x⟩` to precision `ε` with
/// probability `1 - δ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedMeasurementPlan {
    /// `⌈32 K⁴ ln(4K²/δ) / ε²⌉`.
    pub total_shots: u64,
    /// Number of Hadamard tests, `2·C(K,2)` (real and imaginary per pair).
    pub tests: u64,
    /// Precision each test must reach, `ε / (4K²)`.
    pub per_test_epsilon: f64,
    /// Failure probability allotted to each test, `δ / (2K²)`.
    pub per_test_delta: f64,
}

pub fn measurement_plan_mixed(epsilon: f64, delta: f64, k: usize) -> Result<MixedMeasurementPlan> {
    check_eps_delta(epsilon, delta)?;
    if k == 0 {
        return Err(Error::EmptyMixture);
    }
    let k = k as f64;
    let k2 = k * k;
    let total = 32.0 * k2 * k2 * (4.0 * k2 / delta).ln() / (epsilon * epsilon);
    let kk = k as u64;
    Ok(MixedMeasurementPlan {
        total_shots: total.ceil() as u64,
        tests: kk * kk.saturating_sub(1),
        per_test_epsilon: epsilon / (4.0 * k2),
        per_test_delta: delta / (2.0 * k2),
    })
}

/// Total shot count of [`measurement_plan_mixed`].
pub fn measurement_budget_mixed(epsilon: f64, delta: f64, k: usize) -> Result<u64> {
    measurement_plan_mixed(epsilon, delta, k).map(|p| p.total_shots)
}
