//! Dense statevector simulation.
//!
//! Qubit 0 is the most significant bit of the basis index, so the basis state
//! `|b_0 b_1 … b_{n-1}⟩` sits at index `Σ b_q 2^{n-1-q}`.

use num_complex::Complex64;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::gate::GateOp;

/// Largest register a statevector may hold.
pub const STATEVECTOR_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n` qubits.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_cap(n)?;
        let dim = 1usize << n;
        if index >= dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: index,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Wraps raw amplitudes. The length must be a power of two; the norm is
    /// not checked so callers may build intermediate vectors.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Domain(format!(
                "statevector length {len} is not a power of two"
            )));
        }
        let n = len.trailing_zeros() as usize;
        check_cap(n)?;
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Returns the state after applying `c`.
    pub fn apply_circuit(&self, c: &Circuit) -> Result<StateVector> {
        let mut out = self.clone();
        out.apply_circuit_in_place(c)?;
        Ok(out)
    }

    pub fn apply_circuit_in_place(&mut self, c: &Circuit) -> Result<()> {
        self.check_register(c)?;
        for op in c.ops() {
            apply_op(&mut self.amps, self.n, op, None);
        }
        Ok(())
    }

    /// Applies `c` only on the branch where `control` is `|1⟩`. The circuit's
    /// qubits are taken as-is and must not include `control`.
    pub fn apply_controlled_in_place(&mut self, c: &Circuit, control: usize) -> Result<()> {
        self.check_register(c)?;
        if control >= self.n {
            return Err(Error::QubitOutOfRange {
                qubit: control,
                n: self.n,
            });
        }
        if let Some(op) = c.ops().iter().find(|op| op.qubits().contains(&control)) {
            return Err(Error::DuplicateQubit {
                gate: op.gate().kind().name(),
                qubit: control,
            });
        }
        for op in c.ops() {
            apply_op(&mut self.amps, self.n, op, Some(control));
        }
        Ok(())
    }

    /// Probability that measuring `qubit` yields 1.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n {
            return Err(Error::QubitOutOfRange { qubit, n: self.n });
        }
        let bit = 1usize << (self.n - 1 - qubit);
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    fn check_register(&self, c: &Circuit) -> Result<()> {
        if c.num_qubits() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: c.num_qubits(),
            });
        }
        Ok(())
    }
}

fn check_cap(n: usize) -> Result<()> {
    if n > STATEVECTOR_CAP {
        return Err(Error::CapExceeded {
            what: "statevector",
            n,
            cap: STATEVECTOR_CAP,
        });
    }
    Ok(())
}

/// Applies one gate, optionally controlled on a single qubit. Qubit indices
/// are assumed validated against `n`.
fn apply_op(amps: &mut [Complex64], n: usize, op: &GateOp, control: Option<usize>) {
    let m = op.gate().local_matrix();
    let bitpos = |q: usize| n - 1 - q;
    let ctrl_mask = control.map_or(0, |c| 1usize << bitpos(c));
    let qubits = op.qubits();

    match qubits.len() {
        0 => {
            let phase = m[0];
            for (i, a) in amps.iter_mut().enumerate() {
                if i & ctrl_mask == ctrl_mask {
                    *a *= phase;
                }
            }
        }
        1 => {
            let bit = 1usize << bitpos(qubits[0]);
            let (m00, m01, m10, m11) = (m[0], m[1], m[2], m[3]);
            for i in 0..amps.len() {
                if i & bit != 0 || i & ctrl_mask != ctrl_mask {
                    continue;
                }
                let j = i | bit;
                let (a0, a1) = (amps[i], amps[j]);
                amps[i] = m00 * a0 + m01 * a1;
                amps[j] = m10 * a0 + m11 * a1;
            }
        }
        k => {
            let dim = 1usize << k;
            // offsets[l]: global index bits for local index l (first qubit = MSB)
            let offsets: Vec<usize> = (0..dim)
                .map(|l| {
                    qubits.iter().enumerate().fold(0, |acc, (j, &q)| {
                        if l >> (k - 1 - j) & 1 == 1 {
                            acc | 1usize << bitpos(q)
                        } else {
                            acc
                        }
                    })
                })
                .collect();
            let target_mask = offsets[dim - 1];
            let mut buf = vec![Complex64::new(0.0, 0.0); dim];
            for base in 0..amps.len() {
                if base & target_mask != 0 || base & ctrl_mask != ctrl_mask {
                    continue;
                }
                for (b, off) in buf.iter_mut().zip(&offsets) {
                    *b = amps[base | off];
                }
                for (r, off) in offsets.iter().enumerate() {
                    let row = &m[r * dim..(r + 1) * dim];
                    amps[base | off] = row.iter().zip(&buf).map(|(x, y)| x * y).sum();
                }
            }
        }
    }
}
