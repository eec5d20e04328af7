//! Model construction: drives, qubit systems, coupling operators and
//! symmetry-reduced working subspaces.

mod drive;
mod noninteracting;
mod subspace;
mod system;

pub use drive::{period, DriveKind, PeriodicDrive, DEFAULT_SAWTOOTH_HARMONICS};
pub use noninteracting::{noninteracting_floquet_states, product_stack, symmetric_noninteracting_states, ProductState};
pub use subspace::{
    collective_spin_operators, cyclic_permutation, dicke_state, parity_operator, permutation_operator,
    swap_permutation, CollectiveSpin, SubspaceBasis, SubspaceKind,
};
pub use system::{Coupling, CouplingKind, QubitSystem};

use crate::error::{FloquetError, Result};
use crate::floquet::FourierBlocks;
use crate::linalg::{ensure_hermitian, CMatrix, CVector};

/// Largest tolerated relative leakage out of a requested subspace.
pub const SUBSPACE_LEAKAGE_TOL: f64 = 1e-10;

/// `H(t) = H_static + f(t) D` expressed in a working basis (the full
/// register or a symmetry sector). Both Floquet backends consume this.
#[derive(Clone, Debug, PartialEq)]
pub struct DrivenModel {
    pub n_qubits: usize,
    pub static_part: CMatrix,
    pub drive_operator: CMatrix,
    pub drive: PeriodicDrive,
    pub subspace: SubspaceBasis,
    /// `⊗σ_z` restricted to the working basis, when the basis is closed under it.
    pub parity: Option<CMatrix>,
}

impl DrivenModel {
    /// Full `2^N`-dimensional model.
    pub fn full(system: &QubitSystem) -> Result<Self> {
        Self::project(system, &SubspaceBasis::full(system.n_qubits))
    }

    /// Model restricted to `subspace`; fails if `H(t)` leaks out of it.
    pub fn project(system: &QubitSystem, subspace: &SubspaceBasis) -> Result<Self> {
        system.validate()?;
        if subspace.n_qubits != system.n_qubits {
            return Err(FloquetError::DimensionMismatch {
                expected: system.n_qubits,
                found: subspace.n_qubits,
            });
        }
        let h0 = system.splitting_operator() + system.interaction_operator();
        let d = system.drive_operator();
        ensure_hermitian(&h0, 1e-12)?;
        let full = subspace.kind == SubspaceKind::Full;
        if !full {
            let defect = subspace.leakage(&h0).max(subspace.leakage(&d));
            if defect > SUBSPACE_LEAKAGE_TOL {
                return Err(FloquetError::SymmetryViolation { defect });
            }
        }
        let z = parity_operator(system.n_qubits);
        let parity = (full || subspace.leakage(&z) < SUBSPACE_LEAKAGE_TOL).then(|| subspace.restrict(&z));
        Ok(DrivenModel {
            n_qubits: system.n_qubits,
            static_part: if full { h0 } else { subspace.restrict(&h0) },
            drive_operator: if full { d } else { subspace.restrict(&d) },
            drive: system.drive.clone(),
            subspace: subspace.clone(),
            parity,
        })
    }

    pub fn dim(&self) -> usize {
        self.static_part.nrows()
    }

    pub fn omega(&self) -> f64 {
        self.drive.omega()
    }

    pub fn period(&self) -> f64 {
        self.drive.period()
    }

    /// Instantaneous Hamiltonian; δ-kicks are not included.
    pub fn hamiltonian_at(&self, t: f64) -> CMatrix {
        &self.static_part + self.drive_operator.scale(self.drive.value(t))
    }

    /// `H̃_0 = H_static`, `H̃_k = c_k D`.
    pub fn fourier_blocks(&self) -> Result<FourierBlocks> {
        if self.drive.is_delta_kick() {
            return Err(FloquetError::DeltaKickFourier);
        }
        let mut blocks = std::collections::BTreeMap::new();
        let mut h0 = self.static_part.clone();
        if let Some(c0) = self.drive.fourier_coeffs().get(&0) {
            h0 += self.drive_operator.map(|z| z * c0);
        }
        blocks.insert(0, h0);
        for (&k, &ck) in self.drive.fourier_coeffs() {
            if k != 0 {
                blocks.insert(k, self.drive_operator.map(|z| z * ck));
            }
        }
        FourierBlocks::new(self.dim(), self.omega(), blocks)
    }

    /// Amplitude bound entering the truncation rule: `max|f| · ‖D‖`.
    pub fn drive_strength(&self) -> f64 {
        let (vals, _) = crate::linalg::eigh(&self.drive_operator);
        let norm = vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        // ‖Σ s_n σ_x‖ = Σ|s_n|; the eigenvalue bound is the same for the full space
        self.drive.peak_amplitude() * norm
    }

    /// `(1/T)∫ Tr H dt`, the right-hand side of the quasi-energy sum rule.
    pub fn mean_trace(&self) -> f64 {
        let mean_drive = self.drive.mean();
        (self.static_part.trace() + self.drive_operator.trace() * mean_drive).re
    }

    /// Working-basis vector lifted to the full register.
    pub fn embed(&self, v: &CVector) -> CVector {
        self.subspace.embed(v)
    }

    /// Full-register operator in the working basis.
    pub fn restrict(&self, op: &CMatrix) -> CMatrix {
        self.subspace.restrict(op)
    }
}

/// Fourier blocks of `system` restricted to `subspace`.
pub fn build_hamiltonian_blocks(system: &QubitSystem, subspace: &SubspaceBasis) -> Result<FourierBlocks> {
    DrivenModel::project(system, subspace)?.fourier_blocks()
}
