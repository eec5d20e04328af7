//! Small dense complex linear-algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{FloquetError, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Pauli matrices in the basis `(|↑⟩, |↓⟩)`, i.e. `σ_z = diag(1, −1)`.
pub fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn sigma_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

/// `σ₊ = |↑⟩⟨↓|`.
pub fn sigma_plus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

/// `σ₋ = |↓⟩⟨↑|`.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ZERO, ONE, ZERO])
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Lifts a single-qubit operator onto `site` of an `n`-qubit register.
/// Qubit 0 is the most significant tensor factor.
pub fn embed_single(op: &CMatrix, site: usize, n: usize) -> CMatrix {
    assert_eq!(op.shape(), (2, 2));
    assert!(site < n);
    let mut out = CMatrix::identity(1, 1);
    for q in 0..n {
        let factor = if q == site { op.clone() } else { CMatrix::identity(2, 2) };
        out = kron(&out, &factor);
    }
    out
}

/// Lifts a two-qubit operator (4×4, first factor on `first`) onto an
/// `n`-qubit register. `first` may be larger than `second`.
pub fn embed_pair(op: &CMatrix, first: usize, second: usize, n: usize) -> CMatrix {
    assert_eq!(op.shape(), (4, 4));
    assert!(first < n && second < n && first != second);
    let dim = 1usize << n;
    let shift_a = n - 1 - first;
    let shift_b = n - 1 - second;
    let mask = (1usize << shift_a) | (1usize << shift_b);
    let mut out = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let ca = (col >> shift_a) & 1;
        let cb = (col >> shift_b) & 1;
        let local_col = 2 * ca + cb;
        let rest = col & !mask;
        for ra in 0..2 {
            for rb in 0..2 {
                let amp = op[(2 * ra + rb, local_col)];
                if amp == ZERO {
                    continue;
                }
                let row = rest | (ra << shift_a) | (rb << shift_b);
                out[(row, col)] += amp;
            }
        }
    }
    out
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖A − A†‖ / ‖A‖` (absolute defect when `A = 0`).
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let diff = frobenius(&(m - m.adjoint()));
    let scale = frobenius(m);
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

pub fn ensure_hermitian(m: &CMatrix, tol: f64) -> Result<()> {
    let defect = hermiticity_defect(m);
    if defect > tol {
        Err(FloquetError::NonHermitian { defect })
    } else {
        Ok(())
    }
}

/// Hermitian eigendecomposition with ascending eigenvalues; eigenvectors are
/// the columns of the returned matrix.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    // symmetrize to shave off rounding noise before the solver reads one triangle
    let sym = (m + m.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// `exp(−i K)` for Hermitian `K`, exactly unitary up to rounding.
pub fn expm_neg_i(k: &CMatrix) -> CMatrix {
    let (values, vectors) = eigh(k);
    let phases = CVector::from_iterator(values.len(), values.iter().map(|&v| (-I * v).exp()));
    let mut scaled = vectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        col *= phases[j];
    }
    scaled * vectors.adjoint()
}

/// Eigendecomposition of a normal matrix (unitary in practice) through the
/// complex Schur form, whose triangular factor is diagonal for normal input.
pub fn normal_eigen(u: &CMatrix) -> (Vec<C64>, CMatrix) {
    let n = u.nrows();
    let schur = u.clone().schur();
    let (q, t) = schur.unpack();
    let values = (0..n).map(|i| t[(i, i)]).collect();
    (values, q)
}

/// Diagonalizes a small matrix that is unitary or Hermitian on its support.
/// Returns eigenvalues and an orthonormal eigenbasis.
pub fn unitary_or_hermitian_eigen(m: &CMatrix) -> (Vec<C64>, CMatrix) {
    if hermiticity_defect(m) < 1e-12 {
        let (vals, vecs) = eigh(m);
        (vals.into_iter().map(|v| c(v, 0.0)).collect(), vecs)
    } else {
        let (vals, q) = normal_eigen(m);
        (vals, orthonormalize_columns(&q))
    }
}

/// Modified Gram-Schmidt on the columns, two passes.
pub fn orthonormalize_columns(m: &CMatrix) -> CMatrix {
    let mut out = m.clone();
    for j in 0..out.ncols() {
        for _ in 0..2 {
            for i in 0..j {
                let proj = out.column(i).dotc(&out.column(j));
                let prev = out.column(i).clone_owned();
                let mut col = out.column_mut(j);
                col -= prev * proj;
            }
        }
        let norm = out.column(j).norm();
        if norm > 0.0 {
            out.column_mut(j).unscale_mut(norm);
        }
    }
    out
}

/// Commutator `[A, B]`.
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}
