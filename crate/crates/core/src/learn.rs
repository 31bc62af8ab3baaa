//! Sample-based circuit learning.
//!
//! The cost `f(ξ) = 2 - (2/m) Σ_i Re⟨x(θ_i)|V^† U(ξ)|x(θ_i)⟩` estimates
//! `‖U(ξ) - V‖²_{S_2}` on a fixed set of `m` angles. Each term is one
//! Hadamard test; the optimizer is plain gradient descent on central finite
//! differences.

use rand::Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::{Gate, GateKind, GateOp};
use crate::hadamard::{hadamard_probability, sample_shots, HadamardTestSpec, Part};
use crate::par;
use crate::rng::{child_seed, stream_rng, Domain};
use crate::sampler::{uniform_thetas, ThetaSample};
use crate::schatten::sampling_circuit;

/// A gate parameter: a fixed angle or an index into `ξ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ParamSpec {
    Value(f64),
    Slot(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub enum TemplateOp {
    /// A gate without free parameters (including dense unitaries).
    Fixed(GateOp),
    Param {
        kind: GateKind,
        qubits: Vec<usize>,
        params: Vec<ParamSpec>,
    },
}

impl TemplateOp {
    fn bind(&self, xi: &[f64]) -> Result<GateOp> {
        match self {
            TemplateOp::Fixed(op) => Ok(op.clone()),
            TemplateOp::Param { kind, qubits, params } => {
                let values: Vec<f64> = params
                    .iter()
                    .map(|p| match *p {
                        ParamSpec::Value(v) => Ok(v),
                        ParamSpec::Slot(k) => xi.get(k).copied().ok_or(Error::ParamCount {
                            gate: "ansatz",
                            expected: k + 1,
                            got: xi.len(),
                        }),
                    })
                    .collect::<Result<_>>()?;
                GateOp::new(Gate::from_kind(*kind, &values)?, qubits.clone())
            }
        }
    }

    fn max_slot(&self) -> Option<usize> {
        match self {
            TemplateOp::Fixed(_) => None,
            TemplateOp::Param { params, .. } => params
                .iter()
                .filter_map(|p| match p {
                    ParamSpec::Slot(k) => Some(*k),
                    ParamSpec::Value(_) => None,
                })
                .max(),
        }
    }
}

/// Parameterized circuit template, applied `repeat` times when bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Ansatz {
    n: usize,
    ops: Vec<TemplateOp>,
    num_params: usize,
    repeat: usize,
}

impl Ansatz {
    /// `num_params` is one past the largest slot index used.
    pub fn new(n: usize, ops: Vec<TemplateOp>, repeat: usize) -> Result<Self> {
        if repeat == 0 {
            return Err(Error::domain("ansatz repeat must be >= 1"));
        }
        let num_params = ops.iter().filter_map(TemplateOp::max_slot).max().map_or(0, |k| k + 1);
        let ansatz = Self {
            n,
            ops,
            num_params,
            repeat,
        };
        ansatz.bind_once(&vec![0.0; num_params])?;
        Ok(ansatz)
    }

    /// Copy with a different repeat count.
    pub fn with_repeat(&self, repeat: usize) -> Result<Self> {
        Self::new(self.n, self.ops.clone(), repeat)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn repeat(&self) -> usize {
        self.repeat
    }

    pub fn ops(&self) -> &[TemplateOp] {
        &self.ops
    }

    fn check_len(&self, xi: &[f64]) -> Result<()> {
        if xi.len() != self.num_params {
            return Err(Error::ParamCount {
                gate: "ansatz",
                expected: self.num_params,
                got: xi.len(),
            });
        }
        Ok(())
    }

    /// One copy of the template.
    pub fn bind_once(&self, xi: &[f64]) -> Result<Circuit> {
        self.check_len(xi)?;
        let ops = self.ops.iter().map(|op| op.bind(xi)).collect::<Result<_>>()?;
        Circuit::from_ops(self.n, ops)
    }

    /// `U(ξ)^repeat`.
    pub fn bind(&self, xi: &[f64]) -> Result<Circuit> {
        let once = self.bind_once(xi)?;
        let mut c = Circuit::new(self.n);
        for _ in 0..self.repeat {
            c.extend(&once)?;
        }
        Ok(c)
    }
}

/// Builds the cost function for a fixed angle set.
#[derive(Clone, Debug)]
pub struct LossEvaluator {
    ansatz: Ansatz,
    target_adjoint: Circuit,
    preps: Vec<Circuit>,
    shots: u64,
}

impl LossEvaluator {
    pub fn new(ansatz: &Ansatz, target: &Circuit, thetas: &[ThetaSample], shots: u64) -> Result<Self> {
        if ansatz.num_qubits() != target.num_qubits() {
            return Err(Error::DimensionMismatch {
                expected: ansatz.num_qubits(),
                got: target.num_qubits(),
            });
        }
        if thetas.is_empty() {
            return Err(Error::EmptySamples);
        }
        let n = target.num_qubits();
        Ok(Self {
            ansatz: ansatz.clone(),
            target_adjoint: target.adjoint(),
            preps: thetas.iter().map(|&t| sampling_circuit(n, t)).collect(),
            shots,
        })
    }

    /// `f(ξ)`; with shots, test `i` draws from stream `i` of `shot_seed`, so
    /// equal seeds give common random numbers across different `ξ`.
    pub fn eval(&self, xi: &[f64], shot_seed: u64) -> Result<f64> {
        let u = self.ansatz.bind(xi)?;
        let values = par::try_map_indexed(self.preps.len(), |i| {
            let spec = HadamardTestSpec {
                state_prep: self.preps[i].clone(),
                controlled_ops: vec![u.clone(), self.target_adjoint.clone()],
                part: Part::Real,
                shots: self.shots,
            };
            let p1 = hadamard_probability(&spec)?;
            if self.shots == 0 {
                Ok(1.0 - 2.0 * p1)
            } else {
                let mut rng = stream_rng(shot_seed, Domain::Shots, i as u64);
                Ok(sample_shots(p1, self.shots, &mut rng).estimate)
            }
        })?;
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        Ok(2.0 - 2.0 * mean)
    }
}

/// One-shot form of [`LossEvaluator::eval`].
pub fn loss(
    ansatz: &Ansatz,
    xi: &[f64],
    target: &Circuit,
    thetas: &[ThetaSample],
    shots: u64,
    shot_seed: u64,
) -> Result<f64> {
    LossEvaluator::new(ansatz, target, thetas, shots)?.eval(xi, shot_seed)
}

/// Central differences `(f(ξ + h e_j) - f(ξ - h e_j)) / 2h`, coordinates in
/// parallel.
pub fn finite_diff_gradient<F>(f: F, xi: &[f64], fd_eps: f64) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64> + Sync + Send,
{
    if !(fd_eps > 0.0 && fd_eps.is_finite()) {
        return Err(Error::Domain(format!("fd_eps must be > 0, got {fd_eps}")));
    }
    par::try_map_indexed(xi.len(), |j| {
        let mut x = xi.to_vec();
        x[j] = xi[j] + fd_eps;
        let up = f(&x)?;
        x[j] = xi[j] - fd_eps;
        let down = f(&x)?;
        Ok((up - down) / (2.0 * fd_eps))
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnConfig {
    pub m: usize,
    pub eta: f64,
    pub fd_eps: f64,
    pub max_iters: usize,
    pub tol: f64,
    /// `0` evaluates every Hadamard test exactly.
    pub shots_per_test: u64,
    pub seed: u64,
}

impl Default for LearnConfig {
    fn default() -> Self {
        Self {
            m: 64,
            eta: 0.1,
            fd_eps: 1e-3,
            max_iters: 1000,
            tol: 1e-4,
            shots_per_test: 0,
            seed: 0,
        }
    }
}

impl LearnConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 {
            return Err(Error::domain("m must be >= 1"));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(Error::Domain(format!("eta must be > 0, got {}", self.eta)));
        }
        if !(self.fd_eps > 0.0 && self.fd_eps.is_finite()) {
            return Err(Error::Domain(format!("fd_eps must be > 0, got {}", self.fd_eps)));
        }
        if !(self.tol >= 0.0) {
            return Err(Error::Domain(format!("tol must be >= 0, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnResult {
    pub xi: Vec<f64>,
    /// Cost at each visited `ξ`, starting with the initial point.
    pub cost_history: Vec<f64>,
    pub converged: bool,
    pub final_cost: f64,
}

/// Initial parameters, uniform on `[-π, π)`.
pub fn initial_params(num_params: usize, seed: u64) -> Vec<f64> {
    (0..num_params)
        .map(|j| {
            let u: f64 = stream_rng(seed, Domain::Init, j as u64).random();
            -PI + 2.0 * PI * u
        })
        .collect()
}

/// Learns `ξ` with `U(ξ) ≈ V` starting from random parameters.
pub fn learn_circuit(ansatz: &Ansatz, target: &Circuit, config: &LearnConfig) -> Result<LearnResult> {
    config.validate()?;
    let xi0 = initial_params(ansatz.num_params(), config.seed);
    learn_circuit_from(ansatz, target, config, xi0)
}

/// [`learn_circuit`] from a given starting point.
///
/// Iteration `t` evaluates the cost and gradient with shot seed
/// `child_seed(seed, t)`, shared by every evaluation in that iteration.
pub fn learn_circuit_from(
    ansatz: &Ansatz,
    target: &Circuit,
    config: &LearnConfig,
    xi0: Vec<f64>,
) -> Result<LearnResult> {
    config.validate()?;
    if xi0.len() != ansatz.num_params() {
        return Err(Error::ParamCount {
            gate: "ansatz",
            expected: ansatz.num_params(),
            got: xi0.len(),
        });
    }
    let thetas = uniform_thetas(config.m, config.seed);
    let eval = LossEvaluator::new(ansatz, target, &thetas, config.shots_per_test)?;
    let mut xi = xi0;
    let mut history = Vec::new();
    let mut converged = false;
    for it in 0..=config.max_iters {
        let shot_seed = child_seed(config.seed, it as u64);
        let cost = eval.eval(&xi, shot_seed)?;
        history.push(cost);
        if cost <= config.tol {
            converged = true;
            break;
        }
        if it == config.max_iters {
            break;
        }
        let grad = finite_diff_gradient(|x| eval.eval(x, shot_seed), &xi, config.fd_eps)?;
        for (x, g) in xi.iter_mut().zip(&grad) {
            *x -= config.eta * g;
        }
    }
    let final_cost = *history.last().expect("at least one iteration");
    Ok(LearnResult {
        xi,
        cost_history: history,
        converged,
        final_cost,
    })
}

/// Learns `ξ` with `U(ξ)² ≈ V`.
pub fn learn_square_root(target: &Circuit, ansatz: &Ansatz, config: &LearnConfig) -> Result<LearnResult> {
    if ansatz.repeat() != 2 {
        return Err(Error::Domain(format!(
            "square-root learning needs repeat = 2, got {}",
            ansatz.repeat()
        )));
    }
    learn_circuit(ansatz, target, config)
}
