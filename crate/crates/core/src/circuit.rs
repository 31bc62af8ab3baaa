use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gate::{Gate, GateOp};

/// Slack allowed on `Σ|α_κ| <= 1`.
pub const COEFF_NORM_SLACK: f64 = 1e-12;

/// An ordered gate list over `n` qubits. Gates are applied first to last.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    ops: Vec<GateOp>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self { n, ops: Vec::new() }
    }

    pub fn from_ops(n: usize, ops: Vec<GateOp>) -> Result<Self> {
        let mut c = Circuit::new(n);
        for op in ops {
            c.push_op(op)?;
        }
        Ok(c)
    }

    /// Builder-style append.
    pub fn with(mut self, gate: Gate, qubits: &[usize]) -> Result<Self> {
        self.push(gate, qubits)?;
        Ok(self)
    }

    pub fn push(&mut self, gate: Gate, qubits: &[usize]) -> Result<()> {
        self.push_op(GateOp::new(gate, qubits)?)
    }

    pub fn push_op(&mut self, op: GateOp) -> Result<()> {
        if let Some(&q) = op.qubits().iter().find(|&&q| q >= self.n) {
            return Err(Error::QubitOutOfRange { qubit: q, n: self.n });
        }
        self.ops.push(op);
        Ok(())
    }

    /// Appends all gates of `other`, which must act on the same register.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        self.ops.extend(other.ops.iter().cloned());
        Ok(())
    }

    pub fn then(mut self, other: &Circuit) -> Result<Self> {
        self.extend(other)?;
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// The conjugate-transposed circuit: every gate daggered, order reversed.
    pub fn adjoint(&self) -> Circuit {
        Circuit {
            n: self.n,
            ops: self.ops.iter().rev().map(GateOp::adjoint).collect(),
        }
    }

    /// Same gates re-indexed onto a register of `n + offset` qubits.
    pub(crate) fn shifted(&self, offset: usize) -> Circuit {
        Circuit {
            n: self.n + offset,
            ops: self.ops.iter().map(|op| op.shifted(offset)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MixedTerm {
    pub coeff: Complex64,
    pub circuit: Circuit,
}

/// A finite linear combination `Σ α_κ U_κ` of unitary circuits with `Σ|α_κ| <= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedOperation {
    terms: Vec<MixedTerm>,
}

impl MixedOperation {
    pub fn new(terms: Vec<MixedTerm>) -> Result<Self> {
        check_dims(&terms)?;
        let l1: f64 = terms.iter().map(|t| t.coeff.norm()).sum();
        if !l1.is_finite() || l1 > 1.0 + COEFF_NORM_SLACK {
            return Err(Error::CoefficientNorm(l1));
        }
        Ok(Self { terms })
    }

    pub fn single(circuit: Circuit) -> Self {
        Self {
            terms: vec![MixedTerm {
                coeff: Complex64::new(1.0, 0.0),
                circuit,
            }],
        }
    }

    /// `(U_1 - U_2)/√2`.
    ///
    /// This is the one mixture admitted with `Σ|α_κ| = √2 > 1`. The estimator
    /// only needs every `|α_κ1 α_κ2^*| <= 1`, which still holds, and
    /// `‖(U_1 - U_2)/√2‖_{S_2} <= √2`.
    pub fn scaled_difference(u1: &Circuit, u2: &Circuit) -> Result<Self> {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let terms = vec![
            MixedTerm {
                coeff: a,
                circuit: u1.clone(),
            },
            MixedTerm {
                coeff: -a,
                circuit: u2.clone(),
            },
        ];
        check_dims(&terms)?;
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[MixedTerm] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.terms[0].circuit.num_qubits()
    }

    pub fn coefficient_l1(&self) -> f64 {
        self.terms.iter().map(|t| t.coeff.norm()).sum()
    }
}

fn check_dims(terms: &[MixedTerm]) -> Result<()> {
    let first = terms.first().ok_or(Error::EmptyMixture)?;
    let n = first.circuit.num_qubits();
    for t in &terms[1..] {
        if t.circuit.num_qubits() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: t.circuit.num_qubits(),
            });
        }
    }
    Ok(())
}
