//! Subcommand implementations.

use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use schatten_core::learn::{learn_circuit, learn_square_root, LearnConfig};
use schatten_core::linalg::{circuit_matrix, exact_schatten2, MATRIX_CAP};
use schatten_core::sampler::sample_budget_schatten2;
use schatten_core::schatten::{estimate_difference_norm, quantum_schatten2_estimate, SchattenEstimate};
use schatten_core::similarity::{decide_similarity, DecisionParams, SimilarityVerdict};
use schatten_core::SampleBudget;

use crate::cli::{Common, DecideArgs, EstimateArgs, Fig2Args, LearnArgs, SimilarityArgs};
use crate::error::{CliError, CliResult};
use crate::experiments::{fig2, similarity, Fig2Config, SimilarityConfig};
use crate::io::{read_ansatz, read_circuit, read_config, read_mixed, write_csv, write_json};

macro_rules! apply {
    ($cfg:ident, $args:ident, $($field:ident),+) => {
        $( if let Some(v) = $args.$field.clone() { $cfg.$field = v.into(); } )+
    };
}

fn load<T: Default + serde::de::DeserializeOwned>(common: &Common) -> CliResult<T> {
    match &common.config {
        Some(path) => read_config(path),
        None => Ok(T::default()),
    }
}

fn required<'a>(p: &'a Option<PathBuf>, what: &str) -> CliResult<&'a Path> {
    p.as_deref()
        .ok_or_else(|| CliError::Parse(format!("missing required input: {what}")))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateConfig {
    pub mixed: Option<PathBuf>,
    pub u1: Option<PathBuf>,
    pub u2: Option<PathBuf>,
    /// Sample count; when absent, derived from `epsilon`/`delta`/`norm_hint`
    /// or 1000.
    pub samples: Option<usize>,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
    pub norm_hint: Option<f64>,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    /// `"mixed"` or `"difference"` (`‖U_1 - U_2‖_{S_2}`).
    pub target: String,
    pub value: f64,
    pub m: usize,
    pub shots: u64,
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub clamped: bool,
    pub epsilon: Option<f64>,
    pub delta: Option<f64>,
}

impl EstimateReport {
    fn new(target: &str, est: &SchattenEstimate, budget: SampleBudget) -> Self {
        let finite = |x: f64| x.is_finite().then_some(x);
        Self {
            target: target.to_owned(),
            value: est.value,
            m: est.m,
            shots: est.shots_per_test,
            seed: est.seed,
            mean: est.mean(),
            variance: est.variance(),
            clamped: est.clamped,
            epsilon: finite(budget.epsilon),
            delta: finite(budget.delta),
        }
    }
}

pub fn estimate(args: &EstimateArgs) -> CliResult<()> {
    let mut cfg: EstimateConfig = load(&args.common)?;
    if let Some(v) = &args.mixed {
        cfg.mixed = Some(v.clone());
    }
    if let Some(v) = &args.u1 {
        cfg.u1 = Some(v.clone());
    }
    if let Some(v) = &args.u2 {
        cfg.u2 = Some(v.clone());
    }
    for (slot, v) in [(&mut cfg.epsilon, args.epsilon), (&mut cfg.delta, args.delta), (&mut cfg.norm_hint, args.norm_hint)] {
        if v.is_some() {
            *slot = v;
        }
    }
    if args.samples.is_some() {
        cfg.samples = args.samples;
    }
    apply!(cfg, args, shots);
    if let Some(seed) = args.common.seed {
        cfg.seed = seed;
    }

    let budget = match (cfg.samples, cfg.epsilon, cfg.delta) {
        (Some(m), _, _) => SampleBudget::fixed(m)?,
        (None, Some(e), Some(d)) => sample_budget_schatten2(e, d, cfg.norm_hint.unwrap_or(0.0))?,
        (None, None, None) => SampleBudget::fixed(1000)?,
        _ => return Err(CliError::Parse("epsilon and delta must be given together".into())),
    };
    let report = match (&cfg.mixed, &cfg.u1, &cfg.u2) {
        (Some(path), None, None) => {
            let mixed = read_mixed(path)?;
            eprintln!("estimate: {} terms, n = {}, m = {}", mixed.num_terms(), mixed.num_qubits(), budget.m);
            let est = quantum_schatten2_estimate(&mixed, budget, cfg.shots, cfg.seed)?;
            EstimateReport::new("mixed", &est, budget)
        }
        (None, Some(p1), Some(p2)) => {
            let (u1, u2) = (read_circuit(p1)?, read_circuit(p2)?);
            eprintln!("estimate: difference norm, n = {}, m = {}", u1.num_qubits(), budget.m);
            let est = estimate_difference_norm(&u1, &u2, budget, cfg.shots, cfg.seed)?;
            EstimateReport::new("difference", &est, budget)
        }
        _ => {
            return Err(CliError::Parse(
                "give either --mixed, or both --u1 and --u2".into(),
            ))
        }
    };
    write_json(args.common.out.as_deref(), &report)
}

pub fn run_fig2(args: &Fig2Args) -> CliResult<()> {
    let mut cfg: Fig2Config = load(&args.common)?;
    apply!(cfg, args, n, seeds, shots);
    if let Some(m) = &args.m_values {
        cfg.m_values = m.clone();
    }
    if let Some(seed) = args.common.seed {
        cfg.seed = seed;
    }
    eprintln!("fig2: n = {}, {} seeds, m in {:?}", cfg.n, cfg.seeds, cfg.m_values);
    let rows = fig2(&cfg)?;
    write_csv(args.common.out.as_deref(), &rows)
}

pub fn run_similarity(args: &SimilarityArgs) -> CliResult<()> {
    let mut cfg: SimilarityConfig = load(&args.common)?;
    apply!(cfg, args, n, pairs, states, min_norm, max_norm, delta);
    if let Some(seed) = args.common.seed {
        cfg.seed = seed;
    }
    eprintln!("similarity: n = {}, {} pairs, {} states each", cfg.n, cfg.pairs, cfg.states);
    let rows = similarity(&cfg)?;
    write_csv(args.common.out.as_deref(), &rows)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LearnCommandConfig {
    pub ansatz: Option<PathBuf>,
    pub target: Option<PathBuf>,
    pub sqrt: bool,
    pub history: Option<PathBuf>,
    pub m: usize,
    pub eta: f64,
    pub fd_eps: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub shots: u64,
    pub seed: u64,
}

impl Default for LearnCommandConfig {
    fn default() -> Self {
        let d = LearnConfig::default();
        Self {
            ansatz: None,
            target: None,
            sqrt: false,
            history: None,
            m: d.m,
            eta: d.eta,
            fd_eps: d.fd_eps,
            max_iters: d.max_iters,
            tol: d.tol,
            shots: d.shots_per_test,
            seed: d.seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnReport {
    pub xi: Vec<f64>,
    pub cost_history: Vec<f64>,
    pub converged: bool,
    pub final_cost: f64,
    pub iterations: usize,
    pub sqrt: bool,
    /// Exact `‖U(ξ)^r - V‖_{S_2}` when the register is small enough for
    /// dense matrices.
    pub schatten_distance: Option<f64>,
    pub m: usize,
    pub eta: f64,
    pub fd_eps: f64,
    pub max_iters: usize,
    pub tol: f64,
    pub shots: u64,
    pub seed: u64,
}

#[derive(Serialize)]
struct CostRow {
    iteration: usize,
    cost: f64,
}

pub fn learn(args: &LearnArgs) -> CliResult<()> {
    let mut cfg: LearnCommandConfig = load(&args.common)?;
    apply!(cfg, args, m, eta, fd_eps, max_iters, tol, shots);
    if let Some(v) = &args.ansatz {
        cfg.ansatz = Some(v.clone());
    }
    if let Some(v) = &args.target {
        cfg.target = Some(v.clone());
    }
    if let Some(v) = &args.history {
        cfg.history = Some(v.clone());
    }
    if args.sqrt {
        cfg.sqrt = true;
    }
    if let Some(seed) = args.common.seed {
        cfg.seed = seed;
    }
    let ansatz = read_ansatz(required(&cfg.ansatz, "--ansatz")?)?;
    let target = read_circuit(required(&cfg.target, "--target")?)?;
    let lc = LearnConfig {
        m: cfg.m,
        eta: cfg.eta,
        fd_eps: cfg.fd_eps,
        max_iters: cfg.max_iters,
        tol: cfg.tol,
        shots_per_test: cfg.shots,
        seed: cfg.seed,
    };
    eprintln!(
        "learn: n = {}, {} parameters, repeat = {}{}",
        ansatz.num_qubits(),
        ansatz.num_params(),
        ansatz.repeat(),
        if cfg.sqrt { ", square root" } else { "" }
    );
    let result = if cfg.sqrt {
        learn_square_root(&target, &ansatz, &lc)?
    } else {
        learn_circuit(&ansatz, &target, &lc)?
    };
    let schatten_distance = if target.num_qubits() <= MATRIX_CAP {
        let u = circuit_matrix(&ansatz.bind(&result.xi)?)?;
        Some(exact_schatten2(&(u - circuit_matrix(&target)?)))
    } else {
        None
    };
    eprintln!(
        "learn: final cost {:.3e} after {} iterations (converged: {})",
        result.final_cost,
        result.cost_history.len() - 1,
        result.converged
    );
    let history: Vec<CostRow> = result
        .cost_history
        .iter()
        .enumerate()
        .map(|(iteration, &cost)| CostRow { iteration, cost })
        .collect();
    let report = LearnReport {
        iterations: result.cost_history.len() - 1,
        xi: result.xi,
        cost_history: result.cost_history,
        converged: result.converged,
        final_cost: result.final_cost,
        sqrt: cfg.sqrt,
        schatten_distance,
        m: cfg.m,
        eta: cfg.eta,
        fd_eps: cfg.fd_eps,
        max_iters: cfg.max_iters,
        tol: cfg.tol,
        shots: cfg.shots,
        seed: cfg.seed,
    };
    let out = args.common.out.as_deref();
    write_json(out, &report)?;
    let history_path = cfg.history.clone().or_else(|| out.map(|p| p.with_extension("csv")));
    if let Some(path) = history_path {
        write_csv(Some(&path), &history)?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DecideConfig {
    pub u1: Option<PathBuf>,
    pub u2: Option<PathBuf>,
    pub epsilon: f64,
    pub delta: f64,
    pub delta_hat: f64,
    pub samples: usize,
    pub shots: u64,
    pub seed: u64,
}

impl Default for DecideConfig {
    fn default() -> Self {
        Self {
            u1: None,
            u2: None,
            epsilon: 0.1,
            delta: 0.2,
            delta_hat: 0.05,
            samples: 10_000,
            shots: 0,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecideReport {
    pub u1: String,
    pub u2: String,
    #[serde(flatten)]
    pub verdict: SimilarityVerdict,
}

pub fn decide(args: &DecideArgs) -> CliResult<()> {
    let mut cfg: DecideConfig = load(&args.common)?;
    apply!(cfg, args, epsilon, delta, delta_hat, samples, shots);
    if let Some(v) = &args.u1 {
        cfg.u1 = Some(v.clone());
    }
    if let Some(v) = &args.u2 {
        cfg.u2 = Some(v.clone());
    }
    if let Some(seed) = args.common.seed {
        cfg.seed = seed;
    }
    let p1 = required(&cfg.u1, "--u1")?;
    let p2 = required(&cfg.u2, "--u2")?;
    let (u1, u2) = (read_circuit(p1)?, read_circuit(p2)?);
    let verdict = decide_similarity(
        &u1,
        &u2,
        DecisionParams {
            epsilon: cfg.epsilon,
            delta: cfg.delta,
            delta_hat: cfg.delta_hat,
            m: cfg.samples,
            shots: cfg.shots,
            seed: cfg.seed,
        },
    )?;
    eprintln!(
        "decide: estimate {:.4} + slack {:.4} vs threshold {:.4}: {}",
        verdict.estimate,
        verdict.slack_term,
        verdict.threshold,
        if verdict.similar { "similar" } else { "not shown similar" }
    );
    let report = DecideReport {
        u1: p1.display().to_string(),
        u2: p2.display().to_string(),
        verdict,
    };
    write_json(args.common.out.as_deref(), &report)
}
