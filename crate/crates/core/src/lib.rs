//! Stochastic estimation of normalized traces and Schatten 2-norms of
//! quantum operations, with a small statevector simulator, simulated
//! Hadamard tests, fidelity-based similarity checks and sample-based circuit
//! learning.
//!
//! Qubit 0 is the most significant bit of a basis index. All randomness is
//! addressed by `(seed, domain, index)` (see [`rng`]), so results do not
//! depend on thread count or on the `parallel` feature.

pub mod circuit;
pub mod error;
pub mod format;
pub mod gate;
pub mod hadamard;
pub mod learn;
pub mod linalg;
pub mod par;
pub mod rng;
pub mod sampler;
pub mod schatten;
pub mod similarity;
pub mod state;

pub use circuit::{Circuit, MixedOperation, MixedTerm};
pub use error::{Error, Result};
pub use gate::{Gate, GateKind, GateOp};
pub use linalg::CMatrix;
pub use num_complex::Complex64;
pub use sampler::{SampleBudget, ThetaSample};
pub use state::StateVector;
