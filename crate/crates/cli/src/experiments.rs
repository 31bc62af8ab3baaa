//! Experiment runners behind the `fig2` and `similarity` commands.

use serde::{Deserialize, Serialize};

use schatten_core::gate::Gate;
use schatten_core::linalg::{circuit_matrix, exact_schatten2, haar_random_unitary, mixed_matrix};
use schatten_core::par;
use schatten_core::rng::child_seed;
use schatten_core::schatten::quantum_schatten2_estimate;
use schatten_core::similarity::{fidelity_survey, unitary_similarity_bound};
use schatten_core::{Circuit, MixedOperation, SampleBudget};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2Config {
    pub n: usize,
    pub seeds: usize,
    pub m_values: Vec<usize>,
    pub shots: u64,
    pub seed: u64,
}

impl Default for Fig2Config {
    fn default() -> Self {
        Self {
            n: 6,
            seeds: 30,
            m_values: vec![10, 100, 1000, 10_000],
            shots: 0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig2Row {
    pub m: usize,
    pub mean_error: f64,
    /// Standard error of `mean_error` over the seeds.
    pub std_error: f64,
}

/// A circuit consisting of one dense `n`-qubit gate.
pub fn dense_circuit(n: usize, seed: u64) -> CliResult<Circuit> {
    let u = haar_random_unitary(n, seed)?;
    let qubits: Vec<usize> = (0..n).collect();
    Ok(Circuit::new(n).with(Gate::unitary(&u)?, &qubits)?)
}

/// For each seed, draws Haar `U_1`, `U_2` and estimates `‖(U_1 - U_2)/√2‖_{S_2}`
/// at every `m`; reports mean and standard error of the absolute error.
pub fn fig2(cfg: &Fig2Config) -> CliResult<Vec<Fig2Row>> {
    if cfg.n == 0 || cfg.seeds == 0 || cfg.m_values.is_empty() || cfg.m_values.contains(&0) {
        return Err(CliError::Domain(
            "fig2 needs n >= 1, seeds >= 1 and a non-empty list of positive m".into(),
        ));
    }
    let errors: Vec<Vec<f64>> = par::try_map_indexed(cfg.seeds, |s| {
        let s = s as u64;
        let u1 = dense_circuit(cfg.n, child_seed(cfg.seed, 2 * s))?;
        let u2 = dense_circuit(cfg.n, child_seed(cfg.seed, 2 * s + 1))?;
        let mixed = MixedOperation::scaled_difference(&u1, &u2)?;
        let exact = exact_schatten2(&mixed_matrix(&mixed)?);
        let run_seed = child_seed(cfg.seed ^ 0x5eed_f162, s);
        cfg.m_values
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let est = quantum_schatten2_estimate(
                    &mixed,
                    SampleBudget::fixed(m)?,
                    cfg.shots,
                    child_seed(run_seed, i as u64),
                )?;
                Ok((est.value - exact).abs())
            })
            .collect::<CliResult<Vec<f64>>>()
    })?;
    Ok(cfg
        .m_values
        .iter()
        .enumerate()
        .map(|(i, &m)| {
            let col: Vec<f64> = errors.iter().map(|row| row[i]).collect();
            let (mean, se) = mean_and_stderr(&col);
            Fig2Row {
                m,
                mean_error: mean,
                std_error: se,
            }
        })
        .collect())
}

pub fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let k = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / k;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (k - 1.0);
    (mean, (var / k).sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimilarityConfig {
    pub n: usize,
    pub pairs: usize,
    pub states: usize,
    pub min_norm: f64,
    pub max_norm: f64,
    pub delta: f64,
    pub seed: u64,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        Self {
            n: 6,
            pairs: 20,
            states: 1000,
            min_norm: 0.02,
            max_norm: 0.5,
            delta: 0.2,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarityRow {
    pub pair_id: usize,
    /// Exact `‖U_1 - U_2‖_{S_2}`.
    pub schatten: f64,
    pub mean_fidelity: f64,
    /// Fraction of states with `F >= 1 - (1 + sqrt(2(1/δ - 1)))·schatten`.
    pub frac_above_threshold: f64,
    pub fidelity_stderr: f64,
    pub rotation_angle: f64,
}

/// Angle `a` such that appending `R_y(a)` to every qubit moves a unitary by
/// `‖·‖_{S_2} = target`: `‖I - R_y(a)^{⊗n}‖² = 2 - 2cos(a/2)^n`. Valid for
/// `target <= √2`.
pub fn rotation_angle_for(target: f64, n: usize) -> f64 {
    let c = (1.0 - target * target / 2.0).max(0.0).powf(1.0 / n as f64);
    2.0 * c.min(1.0).acos()
}

/// Target distances spaced geometrically over `[min_norm, max_norm]`.
pub fn target_norms(cfg: &SimilarityConfig) -> Vec<f64> {
    if cfg.pairs == 1 {
        return vec![cfg.min_norm];
    }
    let ratio = (cfg.max_norm / cfg.min_norm).ln();
    (0..cfg.pairs)
        .map(|i| cfg.min_norm * (ratio * i as f64 / (cfg.pairs - 1) as f64).exp())
        .collect()
}

/// One Haar `U_1`; each `U_2` is `U_1` followed by `R_y(a_i)` on every qubit.
pub fn similarity(cfg: &SimilarityConfig) -> CliResult<Vec<SimilarityRow>> {
    if cfg.n == 0 || cfg.pairs == 0 || cfg.states == 0 {
        return Err(CliError::Domain("similarity needs n, pairs, states >= 1".into()));
    }
    if !(cfg.min_norm > 0.0 && cfg.min_norm <= cfg.max_norm && cfg.max_norm <= std::f64::consts::SQRT_2) {
        return Err(CliError::Domain(format!(
            "norm range must satisfy 0 < min <= max <= sqrt(2), got [{}, {}]",
            cfg.min_norm, cfg.max_norm
        )));
    }
    // validates delta
    let slope = 1.0 / unitary_similarity_bound(1.0, cfg.delta)?;
    let u1 = dense_circuit(cfg.n, child_seed(cfg.seed, 0))?;
    let m1 = circuit_matrix(&u1)?;
    let targets = target_norms(cfg);
    par::try_map_indexed(targets.len(), |i| {
        let angle = rotation_angle_for(targets[i], cfg.n);
        let mut u2 = u1.clone();
        for q in 0..cfg.n {
            u2.push(Gate::Ry(angle), &[q])?;
        }
        let schatten = exact_schatten2(&(&m1 - circuit_matrix(&u2)?));
        let survey = fidelity_survey(&u1, &u2, cfg.states, child_seed(cfg.seed, 1 + i as u64))?;
        Ok(SimilarityRow {
            pair_id: i,
            schatten,
            mean_fidelity: survey.mean(),
            frac_above_threshold: survey.fraction_at_least(slope * schatten),
            fidelity_stderr: survey.std_error(),
            rotation_angle: angle,
        })
    })
}
