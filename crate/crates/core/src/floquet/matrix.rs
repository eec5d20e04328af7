//! Fourier components of `H(t)` and the extended-space Floquet matrix.

use std::collections::BTreeMap;

use crate::error::{FloquetError, Result};
use crate::linalg::{c, ensure_hermitian, frobenius, CMatrix};
use crate::model::{DrivenModel, QubitSystem};

/// `H(t) = Σ_j H̃_j e^{−ijωt}` with `H̃_{−j} = H̃_j†`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierBlocks {
    pub dim: usize,
    pub omega: f64,
    pub blocks: BTreeMap<i32, CMatrix>,
}

impl FourierBlocks {
    /// Validates shapes and conjugate pairing.
    pub fn new(dim: usize, omega: f64, blocks: BTreeMap<i32, CMatrix>) -> Result<Self> {
        if !(omega > 0.0) {
            return Err(FloquetError::InvalidArgument("omega must be positive".into()));
        }
        for (&j, b) in &blocks {
            if b.shape() != (dim, dim) {
                return Err(FloquetError::DimensionMismatch {
                    expected: dim,
                    found: b.nrows(),
                });
            }
            let partner = blocks.get(&-j);
            let scale = frobenius(b).max(1.0);
            let defect = match partner {
                Some(p) => frobenius(&(p - b.adjoint())) / scale,
                None => frobenius(b) / scale,
            };
            if defect > 1e-12 {
                return Err(FloquetError::NonHermitian { defect });
            }
        }
        if let Some(b0) = blocks.get(&0) {
            ensure_hermitian(b0, 1e-12)?;
        }
        Ok(FourierBlocks { dim, omega, blocks })
    }

    pub fn block(&self, j: i32) -> Option<&CMatrix> {
        self.blocks.get(&j)
    }

    /// Highest harmonic present.
    pub fn max_harmonic(&self) -> i32 {
        self.blocks.keys().map(|j| j.abs()).max().unwrap_or(0)
    }

    /// `H(t)` rebuilt from the blocks.
    pub fn hamiltonian_at(&self, t: f64) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim, self.dim);
        for (&j, b) in &self.blocks {
            h += b * c(0.0, -(j as f64) * self.omega * t).exp();
        }
        h
    }
}

/// Fourier blocks of the full `2^N`-dimensional Hamiltonian.
pub fn fourier_components(system: &QubitSystem) -> Result<FourierBlocks> {
    DrivenModel::full(system)?.fourier_blocks()
}

/// Block `(k, l)` is `H̃_{l−k} + δ_kl kω`, Fourier indices `k ∈ (−M, M]`.
#[derive(Clone, Debug, PartialEq)]
pub struct FloquetMatrix {
    pub block_dim: usize,
    pub m_max: usize,
    pub omega: f64,
    pub blocks: BTreeMap<i32, CMatrix>,
    pub assembled: CMatrix,
}

impl FloquetMatrix {
    /// Fourier index of block row `r`.
    pub fn fourier_index(&self, r: usize) -> i64 {
        r as i64 + 1 - self.m_max as i64
    }

    pub fn size(&self) -> usize {
        self.assembled.nrows()
    }
}

pub fn build_floquet_matrix(blocks: &FourierBlocks, m_max: usize) -> Result<FloquetMatrix> {
    if m_max == 0 {
        return Err(FloquetError::InvalidArgument("truncation M must be at least 1".into()));
    }
    // revalidate: callers may have edited the public map
    let blocks = FourierBlocks::new(blocks.dim, blocks.omega, blocks.blocks.clone())?;
    let d = blocks.dim;
    let n = 2 * m_max;
    let mut a = CMatrix::zeros(n * d, n * d);
    for r in 0..n {
        let k = r as i64 + 1 - m_max as i64;
        for s in 0..n {
            let l = s as i64 + 1 - m_max as i64;
            if let Some(b) = blocks.blocks.get(&((l - k) as i32)) {
                a.view_mut((r * d, s * d), (d, d)).copy_from(b);
            }
        }
        let shift = c(k as f64 * blocks.omega, 0.0);
        for i in 0..d {
            a[(r * d + i, r * d + i)] += shift;
        }
    }
    ensure_hermitian(&a, 1e-12)?;
    Ok(FloquetMatrix {
        block_dim: d,
        m_max,
        omega: blocks.omega,
        blocks: blocks.blocks,
        assembled: a,
    })
}
