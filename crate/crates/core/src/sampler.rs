//! Classical random-vector sampling for normalized traces.
//!
//! A single uniform angle `θ` generates the real vector `x(θ)` whose entry `i`
//! is a product of `cos(ω_j θ)` / `sin(ω_j θ)` factors selected by the bits of
//! `i` (bit 0 → cos, bit 1 → sin, most significant bit first) with the
//! frequency ladder `ω_j = 2^j`. Averaging `⟨x(θ)|A|x(θ)⟩` over `θ` gives
//! `Tr(A)/N` for any unitarily diagonalizable `A`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::par;
use crate::rng::{stream_rng, Domain};

/// Frequencies `ω_j = 2^j` for `j = 1..=n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrequencyLadder {
    n: usize,
}

impl FrequencyLadder {
    pub fn new(n: usize) -> Result<Self> {
        if n > 60 {
            return Err(Error::domain("frequency ladder supports n <= 60"));
        }
        Ok(Self { n })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// `ω_j` for 1-based `j`.
    pub fn omega(&self, j: usize) -> u64 {
        1u64 << j
    }

    pub fn omegas(&self) -> Vec<u64> {
        (1..=self.n).map(|j| self.omega(j)).collect()
    }

    /// Checks by enumeration that every signed sum over a non-empty subset is
    /// nonzero. Exponential in `n`; intended for `n <= 12` or so.
    pub fn signed_sums_nonzero(&self) -> bool {
        let omegas = self.omegas();
        // each ω is either absent, added, or subtracted
        let total = 3u64.pow(self.n as u32);
        (1..total).all(|mut code| {
            let mut sum: i64 = 0;
            for &w in &omegas {
                match code % 3 {
                    1 => sum += w as i64,
                    2 => sum -= w as i64,
                    _ => {}
                }
                code /= 3;
            }
            sum != 0
        })
    }
}

/// An angle in `[-π, π]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct ThetaSample(f64);

impl ThetaSample {
    pub fn new(theta: f64) -> Result<Self> {
        if !(-PI..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta {theta} outside [-pi, pi]")));
        }
        Ok(Self(theta))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// `m` i.i.d. angles from `Uni[-π, π)`; angle `i` depends only on `(seed, i)`.
pub fn uniform_thetas(m: usize, seed: u64) -> Vec<ThetaSample> {
    (0..m)
        .map(|i| {
            let u: f64 = stream_rng(seed, Domain::Theta, i as u64).random();
            ThetaSample(-PI + 2.0 * PI * u)
        })
        .collect()
}

/// `g` equally spaced angles `-π + 2πk/g`. Averaging over them integrates any
/// trigonometric polynomial of degree `< g` exactly.
pub fn equispaced_thetas(g: usize) -> Vec<ThetaSample> {
    (0..g)
        .map(|k| ThetaSample(-PI + 2.0 * PI * k as f64 / g as f64))
        .collect()
}

/// Grid size that makes the equispaced average exact for `n`-qubit quadratic
/// forms `⟨x(θ)|A|x(θ)⟩` (their top frequency is `2^{n+2} - 4`).
pub fn exact_grid_size(n: usize) -> usize {
    (1usize << (n + 2)) + 1
}

/// Smallest `n` with `2^n >= dim`.
pub fn qubits_for_dim(dim: usize) -> usize {
    dim.next_power_of_two().trailing_zeros() as usize
}

/// The real vector `x(θ)` truncated to its first `dim` entries.
///
/// Requires `2^{n-1} < dim <= 2^n`.
pub fn build_x_vector(theta: ThetaSample, n: usize, dim: usize) -> Result<Vec<f64>> {
    let full = 1usize
        .checked_shl(n as u32)
        .filter(|_| n < usize::BITS as usize - 1)
        .ok_or_else(|| Error::domain("n too large"))?;
    if dim == 0 || dim > full || (n > 0 && dim <= full / 2) {
        return Err(Error::Domain(format!(
            "dimension {dim} not in (2^{}, 2^{n}]",
            n as i64 - 1
        )));
    }
    let ladder = FrequencyLadder::new(n)?;
    let t = theta.value();
    let trig: Vec<(f64, f64)> = (1..=n)
        .map(|j| (ladder.omega(j) as f64 * t).sin_cos())
        .map(|(s, c)| (c, s))
        .collect();
    let scale = (full as f64 / dim as f64).sqrt();
    Ok((0..dim)
        .map(|i| {
            trig.iter().enumerate().fold(scale, |acc, (j, &(c, s))| {
                if (i >> (n - 1 - j)) & 1 == 0 {
                    acc * c
                } else {
                    acc * s
                }
            })
        })
        .collect())
}

fn quadratic_form(x: &[f64], a: &CMatrix) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (j, &xj) in x.iter().enumerate() {
        if xj == 0.0 {
            continue;
        }
        let row: Complex64 = x.iter().enumerate().map(|(k, &xk)| a[(j, k)] * xk).sum();
        acc += row * xj;
    }
    acc
}

/// `(1/m) Σ_i ⟨x(θ_i)|A|x(θ_i)⟩`, an unbiased estimate of `Tr(A)/N` for
/// unitarily diagonalizable `A` (not checked).
pub fn classical_trace_estimate(a: &CMatrix, thetas: &[ThetaSample]) -> Result<Complex64> {
    if a.nrows() != a.ncols() {
        return Err(Error::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if thetas.is_empty() {
        return Err(Error::EmptySamples);
    }
    let dim = a.nrows();
    let n = qubits_for_dim(dim);
    let terms = par::try_map_indexed(thetas.len(), |i| {
        build_x_vector(thetas[i], n, dim).map(|x| quadratic_form(&x, a))
    })?;
    let sum: Complex64 = terms.iter().sum();
    Ok(sum / thetas.len() as f64)
}

/// `sqrt` of the trace estimate of `A A^†`; negative radicands clamp to 0.
pub fn classical_schatten2_estimate(a: &CMatrix, thetas: &[ThetaSample]) -> Result<f64> {
    let gram = a * a.adjoint();
    let est = classical_trace_estimate(&gram, thetas)?;
    Ok(est.re.max(0.0).sqrt())
}

/// Precision target, failure probability, and the resulting sample count.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SampleBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub m: usize,
}

impl SampleBudget {
    /// A budget with an explicit sample count, bypassing the bounds.
    pub fn fixed(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("sample count must be >= 1"));
        }
        Ok(Self {
            epsilon: f64::NAN,
            delta: f64::NAN,
            m,
        })
    }
}

pub(crate) fn check_eps_delta(epsilon: f64, delta: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Domain(format!("epsilon must be > 0, got {epsilon}")));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must be in (0, 1), got {delta}")));
    }
    Ok(())
}

fn ceil_count(x: f64) -> usize {
    (x.ceil() as usize).max(1)
}

/// Samples for the normalized trace: `⌈ln(2/δ) / (4ε²)⌉`.
pub fn sample_budget_trace(epsilon: f64, delta: f64) -> Result<SampleBudget> {
    check_eps_delta(epsilon, delta)?;
    let m = ceil_count((2.0 / delta).ln() / (4.0 * epsilon * epsilon));
    Ok(SampleBudget { epsilon, delta, m })
}

/// Samples for the Schatten 2-norm:
/// `⌈ln(2/δ)/(2ε²) · min(ε^{-2}, ‖A‖^{-2})⌉`, with `norm_hint` standing in
/// for `‖A‖_{S_2}`. A zero hint selects the `ε^{-2}` branch.
pub fn sample_budget_schatten2(epsilon: f64, delta: f64, norm_hint: f64) -> Result<SampleBudget> {
    check_eps_delta(epsilon, delta)?;
    if !(norm_hint >= 0.0) {
        return Err(Error::Domain(format!("norm hint must be >= 0, got {norm_hint}")));
    }
    let inv_eps2 = 1.0 / (epsilon * epsilon);
    let factor = if norm_hint == 0.0 {
        inv_eps2
    } else {
        inv_eps2.min(1.0 / (norm_hint * norm_hint))
    };
    let m = ceil_count((2.0 / delta).ln() / (2.0 * epsilon * epsilon) * factor);
    Ok(SampleBudget { epsilon, delta, m })
}

/// Whether `|M̂ - s²| <= ε·max(ε, s)`, the premise under which `|√M̂ - s| <= ε`.
pub fn sqrt_error_propagation_holds(m_hat: f64, s: f64, epsilon: f64) -> bool {
    (m_hat - s * s).abs() <= epsilon * epsilon.max(s)
}
