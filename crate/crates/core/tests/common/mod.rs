#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use schatten_core::gate::{Gate, GateKind};
use schatten_core::learn::{Ansatz, ParamSpec, TemplateOp};
use schatten_core::{Circuit, Complex64, GateOp, MixedOperation, MixedTerm};
use std::f64::consts::PI;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const KINDS: [GateKind; 14] = [
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
];

/// Random circuit over the named gate set.
pub fn random_circuit<R: Rng>(n: usize, len: usize, rng: &mut R) -> Circuit {
    let mut c = Circuit::new(n);
    while c.len() < len {
        let kind = KINDS[rng.random_range(0..KINDS.len())];
        if kind == GateKind::Cnot && n < 2 {
            continue;
        }
        let params: Vec<f64> = (0..kind.num_params()).map(|_| rng.random_range(-PI..PI)).collect();
        let gate = Gate::from_kind(kind, &params).unwrap();
        let qubits: Vec<usize> = match kind.num_qubits().unwrap() {
            0 => vec![],
            1 => vec![rng.random_range(0..n)],
            _ => {
                let a = rng.random_range(0..n);
                let b = (a + rng.random_range(1..n)) % n;
                vec![a, b]
            }
        };
        c.push(gate, &qubits).unwrap();
    }
    c
}

/// Random mixture with `k` terms and `Σ|α| = scale <= 1`.
pub fn random_mixture<R: Rng>(n: usize, k: usize, scale: f64, rng: &mut R) -> MixedOperation {
    let raw: Vec<Complex64> = (0..k)
        .map(|_| Complex64::from_polar(rng.random_range(0.1..1.0), rng.random_range(-PI..PI)))
        .collect();
    let l1: f64 = raw.iter().map(|a| a.norm()).sum();
    let terms = raw
        .into_iter()
        .map(|a| MixedTerm {
            coeff: a * (scale / l1),
            circuit: random_circuit(n, 3 + 2 * n, rng),
        })
        .collect();
    MixedOperation::new(terms).unwrap()
}

fn slot(kind: GateKind, q: &[usize], k: usize) -> TemplateOp {
    TemplateOp::Param {
        kind,
        qubits: q.to_vec(),
        params: vec![ParamSpec::Slot(k)],
    }
}

/// Ry/Rz layers around one CNOT on two qubits.
pub fn two_qubit_ansatz() -> Ansatz {
    Ansatz::new(
        2,
        vec![
            slot(GateKind::Ry, &[0], 0),
            slot(GateKind::Ry, &[1], 1),
            TemplateOp::Fixed(GateOp::new(Gate::Cnot, vec![0, 1]).unwrap()),
            slot(GateKind::Rz, &[0], 2),
            slot(GateKind::Rz, &[1], 3),
            slot(GateKind::Ry, &[0], 4),
            slot(GateKind::Ry, &[1], 5),
        ],
        1,
    )
    .unwrap()
}

pub fn phase_rz_ansatz(repeat: usize) -> Ansatz {
    Ansatz::new(
        1,
        vec![slot(GateKind::GlobalPhase, &[], 0), slot(GateKind::Rz, &[0], 1)],
        repeat,
    )
    .unwrap()
}

/// Random ansatz over 1-parameter rotations with some fixed CNOTs.
pub fn random_ansatz<R: Rng>(n: usize, rng: &mut R) -> Ansatz {
    let rot = [GateKind::Rx, GateKind::Ry, GateKind::Rz, GateKind::Phase, GateKind::GlobalPhase];
    let mut ops = Vec::new();
    for k in 0..(2 * n + 1) {
        let kind = rot[rng.random_range(0..rot.len())];
        let q = if kind == GateKind::GlobalPhase {
            vec![]
        } else {
            vec![rng.random_range(0..n)]
        };
        ops.push(slot(kind, &q, k));
        if n > 1 && rng.random_bool(0.5) {
            let a = rng.random_range(0..n);
            let b = (a + rng.random_range(1..n)) % n;
            ops.push(TemplateOp::Fixed(GateOp::new(Gate::Cnot, vec![a, b]).unwrap()));
        }
    }
    Ansatz::new(n, ops, 1).unwrap()
}
