//! Pure-state entanglement measures and their averages over one period.

use crate::error::{FloquetError, Result};
use crate::floquet::FloquetSpectrum;
use crate::linalg::{CVector, C64};

pub const DEFAULT_SAMPLES: usize = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EntanglementMeasure {
    /// Two qubits.
    Concurrence,
    /// Three qubits.
    ThreeTangle,
}

impl EntanglementMeasure {
    pub fn for_qubits(n: usize) -> Option<Self> {
        match n {
            2 => Some(Self::Concurrence),
            3 => Some(Self::ThreeTangle),
            _ => None,
        }
    }

    pub fn qubits(self) -> usize {
        match self {
            Self::Concurrence => 2,
            Self::ThreeTangle => 3,
        }
    }

    pub fn evaluate(self, psi: &CVector) -> Result<f64> {
        match self {
            Self::Concurrence => concurrence(psi),
            Self::ThreeTangle => three_tangle(psi),
        }
    }
}

fn check_state(psi: &CVector, len: usize) -> Result<()> {
    if psi.len() != len {
        return Err(FloquetError::DimensionMismatch {
            expected: len,
            found: psi.len(),
        });
    }
    let norm = psi.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(FloquetError::Unnormalized { norm });
    }
    Ok(())
}

/// `|⟨ψ*|σ_y⊗σ_y|ψ⟩| = 2|a₀₀a₁₁ − a₀₁a₁₀|`.
pub fn concurrence(psi: &CVector) -> Result<f64> {
    check_state(psi, 4)?;
    let v = 2.0 * (psi[0] * psi[3] - psi[1] * psi[2]).norm();
    Ok(v.clamp(0.0, 1.0))
}

/// Pure-state three-tangle `τ = 4|d₁ − 2d₂ + 4d₃|` (Cayley hyperdeterminant).
pub fn three_tangle(psi: &CVector) -> Result<f64> {
    check_state(psi, 8)?;
    let a = |i: usize, j: usize, k: usize| -> C64 { psi[4 * i + 2 * j + k] };
    let (a000, a001, a010, a011) = (a(0, 0, 0), a(0, 0, 1), a(0, 1, 0), a(0, 1, 1));
    let (a100, a101, a110, a111) = (a(1, 0, 0), a(1, 0, 1), a(1, 1, 0), a(1, 1, 1));
    let sq = |z: C64| z * z;
    let d1 = sq(a000) * sq(a111) + sq(a001) * sq(a110) + sq(a010) * sq(a101) + sq(a100) * sq(a011);
    let d2 = a000 * a111 * a011 * a100
        + a000 * a111 * a101 * a010
        + a000 * a111 * a110 * a001
        + a011 * a100 * a101 * a010
        + a011 * a100 * a110 * a001
        + a101 * a010 * a110 * a001;
    let d3 = a000 * a110 * a101 * a011 + a111 * a001 * a010 * a100;
    let tau = 4.0 * (d1 - d2 * 2.0 + d3 * 4.0).norm();
    Ok(tau.clamp(0.0, 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementReport {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    /// `|Ē(n) − Ē(n/2)|` from halving the time grid.
    pub error: f64,
    pub n_samples: usize,
}

/// Uniform-grid average of the measure along `Φ_i(t)` over one period.
pub fn time_averaged_entanglement(
    spectrum: &FloquetSpectrum,
    i: usize,
    measure: EntanglementMeasure,
    n_samples: usize,
) -> Result<EntanglementReport> {
    if n_samples < 8 {
        return Err(FloquetError::InvalidArgument(format!(
            "{n_samples} samples; at least 8 are required"
        )));
    }
    let period = spectrum.period();
    let mut values = Vec::with_capacity(n_samples);
    for s in 0..n_samples {
        let t = period * s as f64 / n_samples as f64;
        let psi = spectrum.full_state_at(i, t)?;
        values.push(measure.evaluate(&psi)?);
    }
    let mean = values.iter().sum::<f64>() / n_samples as f64;
    let coarse: Vec<f64> = values.iter().step_by(2).copied().collect();
    let coarse_mean = coarse.iter().sum::<f64>() / coarse.len() as f64;
    Ok(EntanglementReport {
        mean,
        min: values.iter().copied().fold(f64::INFINITY, f64::min),
        max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        error: (mean - coarse_mean).abs(),
        n_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn state(amps: &[(usize, C64)], len: usize) -> CVector {
        let mut v = CVector::zeros(len);
        for &(i, a) in amps {
            v[i] = a;
        }
        v
    }

    #[test]
    fn two_qubit_anchors() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = state(&[(1, c(s, 0.0)), (2, c(-s, 0.0))], 4);
        assert!((concurrence(&singlet).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(concurrence(&state(&[(0, c(1.0, 0.0))], 4)).unwrap(), 0.0);
        let th = std::f64::consts::PI / 6.0;
        let psi = state(&[(0, c(th.cos(), 0.0)), (3, c(th.sin(), 0.0))], 4);
        assert!((concurrence(&psi).unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn three_qubit_anchors() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let ghz = state(&[(0, c(s, 0.0)), (7, c(s, 0.0))], 8);
        assert!((three_tangle(&ghz).unwrap() - 1.0).abs() < 1e-15);
        let w3 = 1.0 / 3f64.sqrt();
        let w = state(&[(6, c(w3, 0.0)), (5, c(w3, 0.0)), (3, c(w3, 0.0))], 8);
        assert_eq!(three_tangle(&w).unwrap(), 0.0);
    }

    #[test]
    fn rejects_unnormalized() {
        let v = state(&[(0, c(2.0, 0.0))], 4);
        assert!(matches!(concurrence(&v), Err(FloquetError::Unnormalized { .. })));
        assert!(matches!(
            three_tangle(&state(&[(0, c(1.0, 0.0))], 4)),
            Err(FloquetError::DimensionMismatch { .. })
        ));
    }
}
