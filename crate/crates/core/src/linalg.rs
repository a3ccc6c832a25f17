//! Small dense complex linear algebra helpers shared by the oracles and the
//! simulators. Dimensions here never exceed 32, so everything is dense.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Projector `|v><v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn kron_vec(a: &CVector, b: &CVector) -> CVector {
    a.kronecker(b)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// Largest entrywise deviation of `m` from its adjoint.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Eigenvalues of a Hermitian matrix, ascending. The anti-Hermitian part is
/// discarded, so callers should check [`hermiticity_defect`] first.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * c(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    vals
}

/// `M^{+1/2}` of a Hermitian positive-semidefinite matrix: eigenvalues at or
/// below `rel_tol` times the largest are treated as zero.
pub fn pseudo_inverse_sqrt_psd(m: &CMatrix, rel_tol: f64) -> CMatrix {
    let sym = (m + m.adjoint()) * c(0.5);
    let eig = sym.symmetric_eigen();
    let cutoff = rel_tol * eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let d = CMatrix::from_diagonal(&eig.eigenvalues.map(|l| {
        if l > cutoff {
            c(1.0 / l.sqrt())
        } else {
            ZERO
        }
    }));
    &eig.eigenvectors * d * eig.eigenvectors.adjoint()
}

/// `max |A_ij - B_ij|`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Overlap `|tr(A^† B)| / d`; equals 1 exactly when two unitaries agree up to
/// a global phase.
pub fn phase_insensitive_overlap(a: &CMatrix, b: &CMatrix) -> f64 {
    trace(&(a.adjoint() * b)).norm() / a.nrows() as f64
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    let n = m.nrows();
    m.ncols() == n && max_abs_diff(&(m.adjoint() * m), &CMatrix::identity(n, n)) <= tol
}

/// Lift an operator on `targets` (first target is the most significant index
/// bit of `op`) into an `n`-qubit register where qubit 0 is the most
/// significant bit of the basis index.
pub fn embed(op: &CMatrix, targets: &[usize], n: usize) -> CMatrix {
    let k = targets.len();
    assert_eq!(op.nrows(), 1 << k, "operator size does not match target count");
    let dim = 1usize << n;
    let masks: Vec<usize> = targets.iter().map(|&q| 1 << (n - 1 - q)).collect();
    let all: usize = masks.iter().sum();
    let sub = |i: usize| -> usize {
        masks
            .iter()
            .fold(0, |acc, &m| (acc << 1) | usize::from(i & m != 0))
    };
    let mut out = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in 0..dim {
            if i & !all == j & !all {
                out[(i, j)] = op[(sub(i), sub(j))];
            }
        }
    }
    out
}

pub fn pauli(index: usize) -> CMatrix {
    match index {
        0 => CMatrix::identity(2, 2),
        1 => CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]),
        2 => CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO]),
        3 => CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE]),
        _ => panic!("pauli index {index} out of range"),
    }
}
