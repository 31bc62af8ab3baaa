//! Gate set and per-gate matrices.
//!
//! Local matrices are stored row-major. For multi-qubit gates the first
//! listed qubit is the most significant bit of the local index, so `CNOT`
//! on `[control, target]` has the familiar block form.

use std::borrow::Cow;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Tolerance used when accepting user-supplied dense unitaries.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Phase,
    Rx,
    Ry,
    Rz,
    Cnot,
    GlobalPhase,
    Unitary,
}

impl GateKind {
    pub const ALL: [GateKind; 15] = [
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::H,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::Phase,
        GateKind::Rx,
        GateKind::Ry,
        GateKind::Rz,
        GateKind::Cnot,
        GateKind::GlobalPhase,
        GateKind::Unitary,
    ];

    /// Lowercase wire name.
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::H => "h",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::Phase => "phase",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::Cnot => "cnot",
            GateKind::GlobalPhase => "globalphase",
            GateKind::Unitary => "unitary",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownGate(name.to_owned()))
    }

    pub fn num_params(self) -> usize {
        match self {
            GateKind::Phase | GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::GlobalPhase => 1,
            _ => 0,
        }
    }

    /// Fixed arity, or `None` for dense unitaries whose arity follows the matrix.
    pub fn num_qubits(self) -> Option<usize> {
        match self {
            GateKind::GlobalPhase => Some(0),
            GateKind::Cnot => Some(2),
            GateKind::Unitary => None,
            _ => Some(1),
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A dense unitary acting on `log2(dim)` qubits, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseUnitary {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseUnitary {
    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let dim = m.nrows();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidMatrix(format!(
                "dimension {dim} is not a power of two"
            )));
        }
        let dev = crate::linalg::unitarity_deviation(m);
        if dev > UNITARY_TOL {
            return Err(Error::InvalidMatrix(format!(
                "not unitary (max |MM^† - I| = {dev:.3e})"
            )));
        }
        let data = (0..dim)
            .flat_map(|r| (0..dim).map(move |c| (r, c)))
            .map(|(r, c)| m[(r, c)])
            .collect();
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_qubits(&self) -> usize {
        self.dim.trailing_zeros() as usize
    }

    pub fn row_major(&self) -> &[Complex64] {
        &self.data
    }

    pub fn to_matrix(&self) -> CMatrix {
        CMatrix::from_row_slice(self.dim, self.dim, &self.data)
    }

    fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        Self { dim: d, data }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X,
    Y,
    Z,
    H,
    S,
    Sdg,
    T,
    Tdg,
    Phase(f64),
    Rx(f64),
    Ry(f64),
    Rz(f64),
    Cnot,
    /// Multiplies the whole state by `e^{iφ}`; acts on no qubits.
    GlobalPhase(f64),
    Unitary(Arc<DenseUnitary>),
}

impl Gate {
    /// Builds a parameterized or fixed gate from its kind and angles.
    /// Dense unitaries go through [`Gate::unitary`] instead.
    pub fn from_kind(kind: GateKind, params: &[f64]) -> Result<Self> {
        if params.len() != kind.num_params() {
            return Err(Error::ParamCount {
                gate: kind.name(),
                expected: kind.num_params(),
                got: params.len(),
            });
        }
        let p = params.first().copied().unwrap_or_default();
        Ok(match kind {
            GateKind::X => Gate::X,
            GateKind::Y => Gate::Y,
            GateKind::Z => Gate::Z,
            GateKind::H => Gate::H,
            GateKind::S => Gate::S,
            GateKind::Sdg => Gate::Sdg,
            GateKind::T => Gate::T,
            GateKind::Tdg => Gate::Tdg,
            GateKind::Phase => Gate::Phase(p),
            GateKind::Rx => Gate::Rx(p),
            GateKind::Ry => Gate::Ry(p),
            GateKind::Rz => Gate::Rz(p),
            GateKind::Cnot => Gate::Cnot,
            GateKind::GlobalPhase => Gate::GlobalPhase(p),
            GateKind::Unitary => {
                return Err(Error::InvalidMatrix(
                    "unitary gate requires a matrix".to_owned(),
                ))
            }
        })
    }

    pub fn unitary(m: &CMatrix) -> Result<Self> {
        Ok(Gate::Unitary(Arc::new(DenseUnitary::from_matrix(m)?)))
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X => GateKind::X,
            Gate::Y => GateKind::Y,
            Gate::Z => GateKind::Z,
            Gate::H => GateKind::H,
            Gate::S => GateKind::S,
            Gate::Sdg => GateKind::Sdg,
            Gate::T => GateKind::T,
            Gate::Tdg => GateKind::Tdg,
            Gate::Phase(_) => GateKind::Phase,
            Gate::Rx(_) => GateKind::Rx,
            Gate::Ry(_) => GateKind::Ry,
            Gate::Rz(_) => GateKind::Rz,
            Gate::Cnot => GateKind::Cnot,
            Gate::GlobalPhase(_) => GateKind::GlobalPhase,
            Gate::Unitary(_) => GateKind::Unitary,
        }
    }

    pub fn params(&self) -> Vec<f64> {
        match *self {
            Gate::Phase(p) | Gate::Rx(p) | Gate::Ry(p) | Gate::Rz(p) | Gate::GlobalPhase(p) => {
                vec![p]
            }
            _ => Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            Gate::Unitary(u) => u.num_qubits(),
            g => g.kind().num_qubits().unwrap_or(0),
        }
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::S => Gate::Sdg,
            Gate::Sdg => Gate::S,
            Gate::T => Gate::Tdg,
            Gate::Tdg => Gate::T,
            Gate::Phase(p) => Gate::Phase(-p),
            Gate::Rx(t) => Gate::Rx(-t),
            Gate::Ry(t) => Gate::Ry(-t),
            Gate::Rz(t) => Gate::Rz(-t),
            Gate::GlobalPhase(p) => Gate::GlobalPhase(-p),
            Gate::Unitary(u) => Gate::Unitary(Arc::new(u.adjoint())),
            g => g.clone(),
        }
    }

    /// Row-major local matrix of dimension `2^num_qubits()`.
    pub fn local_matrix(&self) -> Cow<'_, [Complex64]> {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let owned = match *self {
            Gate::X => vec![ZERO, ONE, ONE, ZERO],
            Gate::Y => vec![ZERO, -I, I, ZERO],
            Gate::Z => vec![ONE, ZERO, ZERO, -ONE],
            Gate::H => vec![h, h, h, -h],
            Gate::S => vec![ONE, ZERO, ZERO, I],
            Gate::Sdg => vec![ONE, ZERO, ZERO, -I],
            Gate::T => vec![ONE, ZERO, ZERO, Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
            Gate::Tdg => vec![ONE, ZERO, ZERO, Complex64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)],
            Gate::Phase(p) => vec![ONE, ZERO, ZERO, Complex64::from_polar(1.0, p)],
            Gate::Rx(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                vec![c.into(), -I * s, -I * s, c.into()]
            }
            Gate::Ry(t) => {
                let (s, c) = (t / 2.0).sin_cos();
                vec![c.into(), (-s).into(), s.into(), c.into()]
            }
            Gate::Rz(t) => vec![
                Complex64::from_polar(1.0, -t / 2.0),
                ZERO,
                ZERO,
                Complex64::from_polar(1.0, t / 2.0),
            ],
            Gate::Cnot => {
                let mut m = vec![ZERO; 16];
                m[0] = ONE;
                m[5] = ONE;
                m[11] = ONE;
                m[14] = ONE;
                m
            }
            Gate::GlobalPhase(p) => vec![Complex64::from_polar(1.0, p)],
            Gate::Unitary(ref u) => return Cow::Borrowed(u.row_major()),
        };
        Cow::Owned(owned)
    }

    pub fn matrix(&self) -> CMatrix {
        let d = 1usize << self.num_qubits();
        CMatrix::from_row_slice(d, d, &self.local_matrix())
    }
}

/// A gate placed on specific qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct GateOp {
    gate: Gate,
    qubits: Vec<usize>,
}

impl GateOp {
    pub fn new(gate: Gate, qubits: impl Into<Vec<usize>>) -> Result<Self> {
        let qubits = qubits.into();
        let expected = gate.num_qubits();
        if qubits.len() != expected {
            return Err(Error::QubitCount {
                gate: gate.kind().name(),
                expected,
                got: qubits.len(),
            });
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(Error::DuplicateQubit {
                    gate: gate.kind().name(),
                    qubit: *q,
                });
            }
        }
        Ok(Self { gate, qubits })
    }

    pub fn gate(&self) -> &Gate {
        &self.gate
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn adjoint(&self) -> GateOp {
        GateOp {
            gate: self.gate.adjoint(),
            qubits: self.qubits.clone(),
        }
    }

    pub(crate) fn shifted(&self, offset: usize) -> GateOp {
        GateOp {
            gate: self.gate.clone(),
            qubits: self.qubits.iter().map(|q| q + offset).collect(),
        }
    }
}
