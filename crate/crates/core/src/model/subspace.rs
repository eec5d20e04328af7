//! Symmetry-reduced working subspaces and collective spin operators.

use std::f64::consts::TAU;

use crate::error::{FloquetError, Result};
use crate::linalg::{c, embed_single, sigma_minus, sigma_plus, sigma_x, sigma_y, sigma_z, CMatrix, CVector, ONE, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub enum SubspaceKind {
    Full,
    /// Span of the Dicke states `|N, m⟩`, ordered by the number of down
    /// spins (column `i` has `N − i` up spins).
    SymmetricDicke,
    /// Two-qubit singlet.
    Antisymmetric2q,
    /// Eigenspace of the cyclic shift with eigenvalue `e^{2πi q/N}`.
    CyclicSector(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    pub kind: SubspaceKind,
    pub n_qubits: usize,
    /// Orthonormal basis vectors as columns (`2^N × dim`).
    pub basis_vectors: CMatrix,
}

impl SubspaceBasis {
    pub fn full(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        SubspaceBasis {
            kind: SubspaceKind::Full,
            n_qubits,
            basis_vectors: CMatrix::identity(dim, dim),
        }
    }

    pub fn symmetric_dicke(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        let mut b = CMatrix::zeros(dim, n_qubits + 1);
        for i in 0..=n_qubits {
            let v = dicke_state(n_qubits, n_qubits - i).expect("m within range");
            b.set_column(i, &v);
        }
        SubspaceBasis {
            kind: SubspaceKind::SymmetricDicke,
            n_qubits,
            basis_vectors: b,
        }
    }

    pub fn antisymmetric_2q() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = CMatrix::from_column_slice(4, 1, &[ZERO, c(s, 0.0), c(-s, 0.0), ZERO]);
        SubspaceBasis {
            kind: SubspaceKind::Antisymmetric2q,
            n_qubits: 2,
            basis_vectors: b,
        }
    }

    pub fn cyclic_sector(n_qubits: usize, q: usize) -> Result<Self> {
        if n_qubits == 0 || q >= n_qubits {
            return Err(FloquetError::InvalidArgument(format!(
                "cyclic sector {q} does not exist for {n_qubits} qubits"
            )));
        }
        let dim = 1 << n_qubits;
        let cyc = cyclic_permutation(n_qubits);
        let a = c(0.0, -TAU * q as f64 / n_qubits as f64).exp();
        // P_q = (1/N) Σ_j a^{-qj} C^j
        let mut proj = CMatrix::zeros(dim, dim);
        let mut power = CMatrix::identity(dim, dim);
        let mut phase = ONE;
        for _ in 0..n_qubits {
            proj += &power * phase;
            power = &cyc * power;
            phase *= a;
        }
        proj /= c(n_qubits as f64, 0.0);
        let mut cols: Vec<CVector> = Vec::new();
        for j in 0..dim {
            let mut v = proj.column(j).clone_owned();
            for _ in 0..2 {
                for u in &cols {
                    let overlap = u.dotc(&v);
                    v -= u * overlap;
                }
            }
            let norm = v.norm();
            if norm > 1e-8 {
                cols.push(v.unscale(norm));
            }
        }
        Ok(SubspaceBasis {
            kind: SubspaceKind::CyclicSector(q),
            n_qubits,
            basis_vectors: CMatrix::from_columns(&cols),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis_vectors.ncols()
    }

    /// `B† O B`.
    pub fn restrict(&self, op: &CMatrix) -> CMatrix {
        self.basis_vectors.adjoint() * op * &self.basis_vectors
    }

    /// Relative norm of the part of `op B` that leaves the subspace.
    pub fn leakage(&self, op: &CMatrix) -> f64 {
        let b = &self.basis_vectors;
        let image = op * b;
        let inside = b * (b.adjoint() * &image);
        let scale = crate::linalg::frobenius(op).max(f64::MIN_POSITIVE);
        crate::linalg::frobenius(&(image - inside)) / scale
    }

    /// Maps a subspace vector to the full register.
    pub fn embed(&self, v: &CVector) -> CVector {
        &self.basis_vectors * v
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `|N, m⟩`: equal-weight superposition of all basis states with `m` up spins.
pub fn dicke_state(n_qubits: usize, m: usize) -> Result<CVector> {
    if m > n_qubits {
        return Err(FloquetError::InvalidArgument(format!(
            "Dicke index m = {m} exceeds N = {n_qubits}"
        )));
    }
    let dim = 1usize << n_qubits;
    let amp = c(binomial(n_qubits, m).powf(-0.5), 0.0);
    // up spin = bit 0, so m up spins = N − m set bits
    Ok(CVector::from_fn(dim, |i, _| {
        if (i.count_ones() as usize) == n_qubits - m {
            amp
        } else {
            ZERO
        }
    }))
}

/// Collective spin `J_a = ½ Σ_n σ_a⁽ⁿ⁾`.
#[derive(Clone, Debug)]
pub struct CollectiveSpin {
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub j_squared: CMatrix,
    pub j_plus: CMatrix,
    pub j_minus: CMatrix,
}

pub fn collective_spin_operators(n_qubits: usize) -> CollectiveSpin {
    let sum = |op: CMatrix| {
        let dim = 1 << n_qubits;
        let mut acc = CMatrix::zeros(dim, dim);
        for q in 0..n_qubits {
            acc += embed_single(&op, q, n_qubits);
        }
        acc
    };
    let jx = sum(sigma_x()).scale(0.5);
    let jy = sum(sigma_y()).scale(0.5);
    let jz = sum(sigma_z()).scale(0.5);
    let j_squared = &jx * &jx + &jy * &jy + &jz * &jz;
    CollectiveSpin {
        jx,
        jy,
        jz,
        j_squared,
        j_plus: sum(sigma_plus()),
        j_minus: sum(sigma_minus()),
    }
}

/// Permutation matrix sending qubit `q` to qubit `q + 1 (mod N)`.
pub fn cyclic_permutation(n_qubits: usize) -> CMatrix {
    permutation_operator(n_qubits, |q| (q + 1) % n_qubits)
}

/// Exchanges qubits `a` and `b`.
pub fn swap_permutation(n_qubits: usize, a: usize, b: usize) -> CMatrix {
    permutation_operator(n_qubits, |q| {
        if q == a {
            b
        } else if q == b {
            a
        } else {
            q
        }
    })
}

/// Unitary that moves the state of qubit `q` to qubit `target(q)`.
pub fn permutation_operator(n_qubits: usize, target: impl Fn(usize) -> usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    let mut p = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut row = 0usize;
        for q in 0..n_qubits {
            let bit = (col >> (n_qubits - 1 - q)) & 1;
            row |= bit << (n_qubits - 1 - target(q));
        }
        p[(row, col)] = ONE;
    }
    p
}

/// `⊗_n σ_z⁽ⁿ⁾`, the spin part of the generalized parity.
pub fn parity_operator(n_qubits: usize) -> CMatrix {
    let dim = 1usize << n_qubits;
    CMatrix::from_fn(dim, dim, |i, j| {
        if i != j {
            ZERO
        } else if i.count_ones() % 2 == 0 {
            ONE
        } else {
            -ONE
        }
    })
}
