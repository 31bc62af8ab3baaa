//! Exact dense-matrix quantities used as ground truth for the estimators.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand_distr::{Distribution, StandardNormal};

use crate::circuit::{Circuit, MixedOperation};
use crate::error::{Error, Result};
use crate::rng::{stream_rng, Domain};
use crate::state::StateVector;

pub type CMatrix = DMatrix<Complex64>;

/// Default largest register for which dense matrices are built.
pub const MATRIX_CAP: usize = 10;

/// Dense matrix of `c`, built column by column from basis states.
pub fn circuit_matrix(c: &Circuit) -> Result<CMatrix> {
    circuit_matrix_capped(c, MATRIX_CAP)
}

pub fn circuit_matrix_capped(c: &Circuit, cap: usize) -> Result<CMatrix> {
    let n = c.num_qubits();
    if n > cap {
        return Err(Error::CapExceeded {
            what: "circuit matrix",
            n,
            cap,
        });
    }
    let dim = 1usize << n;
    let mut m = CMatrix::zeros(dim, dim);
    for j in 0..dim {
        let col = StateVector::basis(n, j)?.apply_circuit(c)?;
        for (i, a) in col.amplitudes().iter().enumerate() {
            m[(i, j)] = *a;
        }
    }
    Ok(m)
}

/// `Σ_κ α_κ U_κ` as a dense matrix.
pub fn mixed_matrix(mixed: &MixedOperation) -> Result<CMatrix> {
    let dim = 1usize << mixed.num_qubits();
    let mut acc = CMatrix::zeros(dim, dim);
    for t in mixed.terms() {
        acc += circuit_matrix(&t.circuit)? * t.coeff;
    }
    Ok(acc)
}

/// `max |M M^† - I|` entrywise.
pub fn unitarity_deviation(m: &CMatrix) -> f64 {
    if m.nrows() != m.ncols() {
        return f64::INFINITY;
    }
    let prod = m * m.adjoint();
    let id = CMatrix::identity(m.nrows(), m.ncols());
    max_abs_diff(&prod, &id)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Normalized Schatten 2-norm `sqrt(Tr(M M^†) / N)` for an `N`-row matrix,
/// evaluated as the Frobenius norm over `sqrt(N)`.
pub fn exact_schatten2(m: &CMatrix) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    let fro: f64 = m.iter().map(|z| z.norm_sqr()).sum();
    (fro / m.nrows() as f64).sqrt()
}

/// `Tr(M) / N`.
pub fn exact_normalized_trace(m: &CMatrix) -> Result<Complex64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    if m.nrows() == 0 {
        return Err(Error::domain("normalized trace of an empty matrix"));
    }
    Ok(m.trace() / m.nrows() as f64)
}

/// Singular values via SVD, for oracles that need the spectrum itself.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    m.clone().svd(false, false).singular_values.iter().copied().collect()
}

/// Haar-distributed `2^n × 2^n` unitary: QR of a complex Ginibre matrix with
/// the phases of `R`'s diagonal folded back into `Q`.
pub fn haar_random_unitary(n: usize, seed: u64) -> Result<CMatrix> {
    if n > MATRIX_CAP {
        return Err(Error::CapExceeded {
            what: "haar unitary",
            n,
            cap: MATRIX_CAP,
        });
    }
    let dim = 1usize << n;
    let mut rng = stream_rng(seed, Domain::HaarUnitary, n as u64);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let mut g = CMatrix::zeros(dim, dim);
    // column-major fill order is part of the determinism contract
    for z in g.iter_mut() {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        *z = Complex64::new(re * scale, im * scale);
    }
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}
