//! JSON file formats for circuits, mixtures and ansätze.
//!
//! ```json
//! {"n": 2, "ops": [{"gate": "ry", "qubits": [0], "params": [1.5707963267948966]},
//!                  {"gate": "cnot", "qubits": [0, 1]}]}
//! ```
//!
//! A mixture is `{"terms": [{"coeff": [re, im], "circuit": {...}}, ...]}`. An
//! ansatz is a circuit whose params may be `{"slot": k}`, plus `"repeat": r`.
//! Dense gates use `"gate": "unitary"` with `"matrix"` given as rows of
//! `[re, im]` pairs.
//!
//! Reading happens in two stages: syntax errors surface as [`Error::Parse`],
//! well-formed files describing invalid objects as the corresponding
//! validation error.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, MixedOperation, MixedTerm};
use crate::error::{Error, Result};
use crate::gate::{Gate, GateKind, GateOp};
use crate::learn::{Ansatz, ParamSpec, TemplateOp};
use crate::linalg::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamFile {
    Value(f64),
    Slot { slot: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OpFile {
    pub gate: String,
    #[serde(default)]
    pub qubits: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<ParamFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitFile {
    pub n: usize,
    pub ops: Vec<OpFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermFile {
    pub coeff: [f64; 2],
    pub circuit: CircuitFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixedFile {
    pub terms: Vec<TermFile>,
}

fn one() -> usize {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnsatzFile {
    pub n: usize,
    pub ops: Vec<OpFile>,
    #[serde(default = "one")]
    pub repeat: usize,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

impl OpFile {
    fn kind(&self) -> Result<GateKind> {
        GateKind::from_name(&self.gate)
    }

    fn dense(&self) -> Result<GateOp> {
        let rows = self
            .matrix
            .as_ref()
            .ok_or_else(|| Error::InvalidMatrix("unitary gate requires \"matrix\"".to_owned()))?;
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: bad.len(),
            });
        }
        let m = CMatrix::from_fn(dim, dim, |r, c| Complex64::new(rows[r][c][0], rows[r][c][1]));
        GateOp::new(Gate::unitary(&m)?, self.qubits.clone())
    }

    fn to_template(&self) -> Result<TemplateOp> {
        let kind = self.kind()?;
        if kind == GateKind::Unitary {
            if !self.params.is_empty() {
                return Err(Error::ParamCount {
                    gate: kind.name(),
                    expected: 0,
                    got: self.params.len(),
                });
            }
            return Ok(TemplateOp::Fixed(self.dense()?));
        }
        if self.matrix.is_some() {
            return Err(Error::InvalidMatrix(format!(
                "gate `{}` does not take a matrix",
                kind.name()
            )));
        }
        let params = self
            .params
            .iter()
            .map(|p| match *p {
                ParamFile::Value(v) => ParamSpec::Value(v),
                ParamFile::Slot { slot } => ParamSpec::Slot(slot),
            })
            .collect();
        Ok(TemplateOp::Param {
            kind,
            qubits: self.qubits.clone(),
            params,
        })
    }

    fn to_op(&self) -> Result<GateOp> {
        if self.params.iter().any(|p| matches!(p, ParamFile::Slot { .. })) {
            return Err(Error::Parse(format!(
                "gate `{}`: parameter slots are only allowed in ansatz files",
                self.gate
            )));
        }
        let kind = self.kind()?;
        if kind == GateKind::Unitary {
            return match self.to_template()? {
                TemplateOp::Fixed(op) => Ok(op),
                TemplateOp::Param { .. } => unreachable!("unitary gates are always fixed"),
            };
        }
        if self.matrix.is_some() {
            return Err(Error::InvalidMatrix(format!(
                "gate `{}` does not take a matrix",
                kind.name()
            )));
        }
        let values: Vec<f64> = self
            .params
            .iter()
            .map(|p| match *p {
                ParamFile::Value(v) => v,
                ParamFile::Slot { .. } => unreachable!("checked above"),
            })
            .collect();
        GateOp::new(Gate::from_kind(kind, &values)?, self.qubits.clone())
    }

    fn from_op(op: &GateOp) -> Self {
        let gate = op.gate();
        let matrix = match gate {
            Gate::Unitary(u) => {
                let m = u.to_matrix();
                Some(
                    (0..m.nrows())
                        .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                        .collect(),
                )
            }
            _ => None,
        };
        Self {
            gate: gate.kind().name().to_owned(),
            qubits: op.qubits().to_vec(),
            params: gate.params().into_iter().map(ParamFile::Value).collect(),
            matrix,
        }
    }
}

impl CircuitFile {
    pub fn to_circuit(&self) -> Result<Circuit> {
        let ops = self.ops.iter().map(OpFile::to_op).collect::<Result<_>>()?;
        Circuit::from_ops(self.n, ops)
    }

    pub fn from_circuit(c: &Circuit) -> Self {
        Self {
            n: c.num_qubits(),
            ops: c.ops().iter().map(OpFile::from_op).collect(),
        }
    }
}

impl MixedFile {
    pub fn to_mixed(&self) -> Result<MixedOperation> {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(MixedTerm {
                    coeff: Complex64::new(t.coeff[0], t.coeff[1]),
                    circuit: t.circuit.to_circuit()?,
                })
            })
            .collect::<Result<_>>()?;
        MixedOperation::new(terms)
    }

    pub fn from_mixed(m: &MixedOperation) -> Self {
        Self {
            terms: m
                .terms()
                .iter()
                .map(|t| TermFile {
                    coeff: [t.coeff.re, t.coeff.im],
                    circuit: CircuitFile::from_circuit(&t.circuit),
                })
                .collect(),
        }
    }
}

impl AnsatzFile {
    pub fn to_ansatz(&self) -> Result<Ansatz> {
        let ops = self.ops.iter().map(OpFile::to_template).collect::<Result<_>>()?;
        Ansatz::new(self.n, ops, self.repeat)
    }

    pub fn from_ansatz(a: &Ansatz) -> Self {
        let ops = a
            .ops()
            .iter()
            .map(|op| match op {
                TemplateOp::Fixed(g) => OpFile::from_op(g),
                TemplateOp::Param { kind, qubits, params } => OpFile {
                    gate: kind.name().to_owned(),
                    qubits: qubits.clone(),
                    params: params
                        .iter()
                        .map(|p| match *p {
                            ParamSpec::Value(v) => ParamFile::Value(v),
                            ParamSpec::Slot(k) => ParamFile::Slot { slot: k },
                        })
                        .collect(),
                    matrix: None,
                },
            })
            .collect();
        Self {
            n: a.num_qubits(),
            ops,
            repeat: a.repeat(),
        }
    }
}

pub fn parse_circuit(text: &str) -> Result<Circuit> {
    parse::<CircuitFile>(text)?.to_circuit()
}

pub fn parse_mixed(text: &str) -> Result<MixedOperation> {
    parse::<MixedFile>(text)?.to_mixed()
}

pub fn parse_ansatz(text: &str) -> Result<Ansatz> {
    parse::<AnsatzFile>(text)?.to_ansatz()
}

pub fn circuit_to_json(c: &Circuit) -> String {
    serde_json::to_string_pretty(&CircuitFile::from_circuit(c)).expect("circuit serializes")
}

pub fn mixed_to_json(m: &MixedOperation) -> String {
    serde_json::to_string_pretty(&MixedFile::from_mixed(m)).expect("mixture serializes")
}

pub fn ansatz_to_json(a: &Ansatz) -> String {
    serde_json::to_string_pretty(&AnsatzFile::from_ansatz(a)).expect("ansatz serializes")
}
