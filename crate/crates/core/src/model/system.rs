//! `N` driven qubits with pairwise couplings:
//!
//! `H(t) = Σ_n [β_n ω₀⁽ⁿ⁾/2 σ_z⁽ⁿ⁾ + s_n f(t) σ_x⁽ⁿ⁾] + Σ_(n,m) C α_nm A_nm`
//!
//! where `A_nm` is one of the coupling operators of [`CouplingKind`].
//! Qubit indices are zero-based; qubit 0 is the most significant tensor factor.

use crate::error::{FloquetError, Result};
use crate::linalg::{
    embed_pair, embed_single, frobenius, hermiticity_defect, kron, sigma_minus, sigma_plus, sigma_x, sigma_z, CMatrix,
};

use super::drive::PeriodicDrive;

#[derive(Clone, Debug, PartialEq)]
pub enum CouplingKind {
    /// `σ₊σ₋ + σ₋σ₊`
    Exchange,
    /// `σ_x σ_x`
    Xx,
    /// `(σ_x + σ_z)(σ_x + σ_z)/2`
    TiltedDipole,
    /// Any Hermitian 4×4 operator, first tensor factor on the first qubit.
    Custom(CMatrix),
}

impl CouplingKind {
    pub fn operator(&self) -> CMatrix {
        match self {
            CouplingKind::Exchange => kron(&sigma_plus(), &sigma_minus()) + kron(&sigma_minus(), &sigma_plus()),
            CouplingKind::Xx => kron(&sigma_x(), &sigma_x()),
            CouplingKind::TiltedDipole => {
                let a = sigma_x() + sigma_z();
                kron(&a, &a).scale(0.5)
            }
            CouplingKind::Custom(m) => m.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Coupling {
    pub pair: (usize, usize),
    pub kind: CouplingKind,
    /// Full prefactor `C α_nm`.
    pub strength: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QubitSystem {
    pub n_qubits: usize,
    pub splittings: Vec<f64>,
    pub splitting_weights: Vec<f64>,
    pub couplings: Vec<Coupling>,
    pub drive: PeriodicDrive,
    pub drive_per_qubit: Option<Vec<f64>>,
}

impl QubitSystem {
    /// `n` identical, uncoupled qubits sharing one drive.
    pub fn identical(n_qubits: usize, omega0: f64, drive: PeriodicDrive) -> Self {
        QubitSystem {
            n_qubits,
            splittings: vec![omega0; n_qubits],
            splitting_weights: vec![1.0; n_qubits],
            couplings: Vec::new(),
            drive,
            drive_per_qubit: None,
        }
    }

    /// Adds `strength · A` on every pair `n < m`.
    pub fn with_all_to_all(mut self, kind: CouplingKind, strength: f64) -> Self {
        for n in 0..self.n_qubits {
            for m in n + 1..self.n_qubits {
                self.couplings.push(Coupling {
                    pair: (n, m),
                    kind: kind.clone(),
                    strength,
                });
            }
        }
        self
    }

    /// Adds `strength · weight · A` on each listed pair.
    pub fn with_weighted_pairs(mut self, kind: CouplingKind, strength: f64, pairs: &[((usize, usize), f64)]) -> Self {
        for &(pair, weight) in pairs {
            self.couplings.push(Coupling {
                pair,
                kind: kind.clone(),
                strength: strength * weight,
            });
        }
        self
    }

    pub fn with_splitting_weights(mut self, weights: Vec<f64>) -> Self {
        self.splitting_weights = weights;
        self
    }

    pub fn with_drive_scales(mut self, scales: Vec<f64>) -> Self {
        self.drive_per_qubit = Some(scales);
        self
    }

    pub fn omega(&self) -> f64 {
        self.drive.omega()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// `β_n ω₀⁽ⁿ⁾`.
    pub fn effective_splitting(&self, n: usize) -> f64 {
        self.splittings[n] * self.splitting_weights[n]
    }

    pub fn drive_scale(&self, n: usize) -> f64 {
        self.drive_per_qubit.as_ref().map(|s| s[n]).unwrap_or(1.0)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if n == 0 {
            return Err(FloquetError::InvalidSystem("at least one qubit is required".into()));
        }
        if n > 12 {
            return Err(FloquetError::InvalidSystem(format!(
                "{n} qubits exceed the dense limit"
            )));
        }
        if self.splittings.len() != n || self.splitting_weights.len() != n {
            return Err(FloquetError::InvalidSystem(
                "one splitting and one weight per qubit are required".into(),
            ));
        }
        if let Some(s) = &self.drive_per_qubit {
            if s.len() != n {
                return Err(FloquetError::InvalidSystem(
                    "one drive scale per qubit is required".into(),
                ));
            }
        }
        if !(self.omega() > 0.0) {
            return Err(FloquetError::InvalidSystem("drive frequency must be positive".into()));
        }
        for cpl in &self.couplings {
            let (a, b) = cpl.pair;
            if a >= n || b >= n || a == b {
                return Err(FloquetError::InvalidSystem(format!(
                    "coupling pair ({a}, {b}) must name two distinct qubits below {n}"
                )));
            }
            if let CouplingKind::Custom(m) = &cpl.kind {
                if m.shape() != (4, 4) {
                    return Err(FloquetError::InvalidSystem("custom couplings must be 4x4".into()));
                }
                let defect = hermiticity_defect(m);
                if defect > 1e-12 {
                    return Err(FloquetError::NonHermitian { defect });
                }
            }
        }
        Ok(())
    }

    /// Static single-qubit part `Σ β_n ω₀⁽ⁿ⁾/2 σ_z⁽ⁿ⁾`.
    pub fn splitting_operator(&self) -> CMatrix {
        let n = self.n_qubits;
        let mut h = CMatrix::zeros(self.dim(), self.dim());
        for q in 0..n {
            h += embed_single(&sigma_z(), q, n).scale(self.effective_splitting(q) / 2.0);
        }
        h
    }

    /// `H_qq = Σ C α_nm A_nm`.
    pub fn interaction_operator(&self) -> CMatrix {
        let mut h = CMatrix::zeros(self.dim(), self.dim());
        for cpl in &self.couplings {
            let op = cpl.kind.operator();
            h += embed_pair(&op, cpl.pair.0, cpl.pair.1, self.n_qubits).scale(cpl.strength);
        }
        h
    }

    /// Drive operator `D = Σ s_n σ_x⁽ⁿ⁾`, so the drive term is `f(t) D`.
    pub fn drive_operator(&self) -> CMatrix {
        let n = self.n_qubits;
        let mut d = CMatrix::zeros(self.dim(), self.dim());
        for q in 0..n {
            d += embed_single(&sigma_x(), q, n).scale(self.drive_scale(q));
        }
        d
    }

    /// Instantaneous Hamiltonian (δ-kicks excluded).
    pub fn hamiltonian_at(&self, t: f64) -> CMatrix {
        self.splitting_operator() + self.interaction_operator() + self.drive_operator().scale(self.drive.value(t))
    }

    /// The same system with every coupling switched off.
    pub fn without_couplings(&self) -> Self {
        QubitSystem {
            couplings: Vec::new(),
            ..self.clone()
        }
    }

    /// True when all qubits share splitting, weight and drive scale and all
    /// pairs are coupled identically, i.e. `H(t)` is permutation invariant.
    pub fn is_permutation_symmetric(&self) -> bool {
        let perm = super::subspace::cyclic_permutation(self.n_qubits);
        let h0 = self.splitting_operator() + self.interaction_operator();
        let d = self.drive_operator();
        let leak = |m: &CMatrix| frobenius(&(&perm * m - m * &perm)) / frobenius(m).max(1.0);
        let swap_ok = if self.n_qubits > 2 {
            let swap = super::subspace::swap_permutation(self.n_qubits, 0, 1);
            frobenius(&(&swap * &h0 - &h0 * &swap)) / frobenius(&h0).max(1.0) < 1e-12
                && frobenius(&(&swap * &d - &d * &swap)) / frobenius(&d).max(1.0) < 1e-12
        } else {
            true
        };
        leak(&h0) < 1e-12 && leak(&d) < 1e-12 && swap_ok
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVector};

    fn basis(dim: usize, i: usize) -> CVector {
        let mut v = CVector::zeros(dim);
        v[i] = c(1.0, 0.0);
        v
    }

    #[test]
    fn exchange_swaps_single_excitations() {
        let sys = QubitSystem::identical(2, 1.0, PeriodicDrive::monochromatic(0.0, 1.0))
            .with_all_to_all(CouplingKind::Exchange, 0.3);
        let h = sys.interaction_operator();
        // |↑↓⟩ = index 1, |↓↑⟩ = index 2
        let out = &h * basis(4, 1);
        assert!((out[2] - c(0.3, 0.0)).norm() < 1e-15);
        assert!(out[1].norm() < 1e-15);
        assert!((&h * basis(4, 0)).norm() < 1e-15);
    }

    #[test]
    fn coupling_library_is_hermitian() {
        for kind in [CouplingKind::Exchange, CouplingKind::Xx, CouplingKind::TiltedDipole] {
            assert!(hermiticity_defect(&kind.operator()) < 1e-15);
        }
    }

    #[test]
    fn validate_rejects_bad_pairs_and_non_hermitian_custom() {
        let d = PeriodicDrive::monochromatic(0.1, 1.0);
        let bad = QubitSystem::identical(2, 1.0, d.clone()).with_weighted_pairs(
            CouplingKind::Exchange,
            0.1,
            &[((0, 0), 1.0)],
        );
        assert!(bad.validate().is_err());
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 1)] = c(1.0, 0.0);
        let nh = QubitSystem::identical(2, 1.0, d).with_all_to_all(CouplingKind::Custom(m), 0.1);
        assert!(matches!(nh.validate(), Err(FloquetError::NonHermitian { .. })));
    }

    #[test]
    fn identical_parameters_are_permutation_symmetric() {
        let d = PeriodicDrive::monochromatic(0.7, 1.0);
        let sys = QubitSystem::identical(3, 1.1, d.clone()).with_all_to_all(CouplingKind::Xx, 0.05);
        assert!(sys.is_permutation_symmetric());
        let dis = sys.clone().with_splitting_weights(vec![0.9, 1.0, 1.1]);
        assert!(!dis.is_permutation_symmetric());
        let weighted = QubitSystem::identical(3, 1.1, d).with_weighted_pairs(
            CouplingKind::Xx,
            0.05,
            &[((0, 1), 0.9), ((1, 2), 1.0), ((2, 0), 1.1)],
        );
        assert!(!weighted.is_permutation_symmetric());
    }
}
