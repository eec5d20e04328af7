//! Periodic scalar drive profiles `f(t) = f(t + T)`.
//!
//! Fourier convention: `f(t) = Σ_k c_k e^{−ikωt}` with
//! `c_k = (1/T)∫₀ᵀ f(t) e^{ikωt} dt`, so a real drive has `c_{−k} = c_k*`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use crate::error::{FloquetError, Result};
use crate::linalg::{c, C64};

/// Number of harmonics kept for the saw-tooth series unless overridden.
pub const DEFAULT_SAWTOOTH_HARMONICS: i32 = 64;

#[derive(Clone, Debug, PartialEq)]
pub enum DriveKind {
    /// `F cos ωt`
    Monochromatic { amplitude: f64 },
    /// `F cos ωt + F′ cos 2ωt`
    Bichromatic { amplitude: f64, second: f64 },
    /// `F [(t/T mod 1) − ½]`
    Sawtooth { amplitude: f64 },
    /// `F T Σ_m δ(t − mT)`
    DeltaKick { amplitude: f64 },
    /// Arbitrary real profile given by its Fourier coefficients.
    Custom,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicDrive {
    kind: DriveKind,
    omega: f64,
    fourier_coeffs: BTreeMap<i32, C64>,
    half_period_antisymmetric: bool,
}

impl PeriodicDrive {
    pub fn monochromatic(amplitude: f64, omega: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        if amplitude != 0.0 {
            coeffs.insert(1, c(amplitude / 2.0, 0.0));
            coeffs.insert(-1, c(amplitude / 2.0, 0.0));
        }
        Self::assemble(DriveKind::Monochromatic { amplitude }, omega, coeffs)
    }

    pub fn bichromatic(amplitude: f64, second: f64, omega: f64) -> Self {
        let mut coeffs = BTreeMap::new();
        for (k, a) in [(1, amplitude), (2, second)] {
            if a != 0.0 {
                coeffs.insert(k, c(a / 2.0, 0.0));
                coeffs.insert(-k, c(a / 2.0, 0.0));
            }
        }
        Self::assemble(DriveKind::Bichromatic { amplitude, second }, omega, coeffs)
    }

    pub fn sawtooth(amplitude: f64, omega: f64) -> Self {
        Self::sawtooth_with_harmonics(amplitude, omega, DEFAULT_SAWTOOTH_HARMONICS)
    }

    /// Saw-tooth with its (slowly decaying, `∝ 1/k`) series cut at `harmonics`.
    pub fn sawtooth_with_harmonics(amplitude: f64, omega: f64, harmonics: i32) -> Self {
        let mut coeffs = BTreeMap::new();
        if amplitude != 0.0 {
            for k in 1..=harmonics {
                let ck = c(0.0, -amplitude / (TAU * k as f64));
                coeffs.insert(k, ck);
                coeffs.insert(-k, ck.conj());
            }
        }
        Self::assemble(DriveKind::Sawtooth { amplitude }, omega, coeffs)
    }

    /// δ-kick train. Its Fourier series (`c_k = F` for all `k`) does not
    /// truncate, so no coefficients are stored.
    pub fn delta_kick(amplitude: f64, omega: f64) -> Self {
        PeriodicDrive {
            kind: DriveKind::DeltaKick { amplitude },
            omega,
            fourier_coeffs: BTreeMap::new(),
            half_period_antisymmetric: amplitude == 0.0,
        }
    }

    /// Custom drive from Fourier coefficients; fails unless `c_{−k} = c_k*`.
    pub fn custom(coeffs: BTreeMap<i32, C64>, omega: f64) -> Result<Self> {
        for (&k, &ck) in &coeffs {
            let partner = coeffs.get(&-k).copied().unwrap_or_default();
            let scale = ck.norm().max(partner.norm()).max(1.0);
            if (partner - ck.conj()).norm() > 1e-12 * scale {
                return Err(FloquetError::InvalidArgument(format!(
                    "drive coefficients violate c(-k) = conj(c(k)) at k = {k}"
                )));
            }
        }
        Ok(Self::assemble(DriveKind::Custom, omega, coeffs))
    }

    fn assemble(kind: DriveKind, omega: f64, mut coeffs: BTreeMap<i32, C64>) -> Self {
        coeffs.retain(|_, v| *v != c(0.0, 0.0));
        let antisymmetric = coeffs.keys().all(|k| k % 2 != 0);
        PeriodicDrive {
            kind,
            omega,
            fourier_coeffs: coeffs,
            half_period_antisymmetric: antisymmetric,
        }
    }

    pub fn kind(&self) -> &DriveKind {
        &self.kind
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn fourier_coeffs(&self) -> &BTreeMap<i32, C64> {
        &self.fourier_coeffs
    }

    /// `true` iff `f(t + T/2) = −f(t)`.
    pub fn half_period_antisymmetric(&self) -> bool {
        self.half_period_antisymmetric
    }

    pub fn is_delta_kick(&self) -> bool {
        matches!(self.kind, DriveKind::DeltaKick { .. })
    }

    /// Kick strength `F` for δ-kick drives.
    pub fn kick_amplitude(&self) -> Option<f64> {
        match self.kind {
            DriveKind::DeltaKick { amplitude } => Some(amplitude),
            _ => None,
        }
    }

    /// Bound on `|f(t)|` used by the truncation rule.
    pub fn peak_amplitude(&self) -> f64 {
        match self.kind {
            DriveKind::Monochromatic { amplitude } => amplitude.abs(),
            DriveKind::Bichromatic { amplitude, second } => amplitude.abs() + second.abs(),
            DriveKind::Sawtooth { amplitude } => amplitude.abs() / 2.0,
            DriveKind::DeltaKick { amplitude } => amplitude.abs(),
            DriveKind::Custom => self.fourier_coeffs.values().map(|z| z.norm()).sum(),
        }
    }

    /// Instantaneous value. δ-kicks evaluate to zero between kicks.
    pub fn value(&self, t: f64) -> f64 {
        let w = self.omega;
        match self.kind {
            DriveKind::Monochromatic { amplitude } => amplitude * (w * t).cos(),
            DriveKind::Bichromatic { amplitude, second } => amplitude * (w * t).cos() + second * (2.0 * w * t).cos(),
            DriveKind::Sawtooth { amplitude } => {
                let phase = (t / self.period()).rem_euclid(1.0);
                amplitude * (phase - 0.5)
            }
            DriveKind::DeltaKick { .. } => 0.0,
            DriveKind::Custom => self
                .fourier_coeffs
                .iter()
                .map(|(&k, &ck)| (ck * c(0.0, -(k as f64) * w * t).exp()).re)
                .sum(),
        }
    }

    /// Time average over one period (the `c_0` coefficient).
    pub fn mean(&self) -> f64 {
        match self.kind {
            DriveKind::DeltaKick { amplitude } => amplitude,
            _ => self.fourier_coeffs.get(&0).map(|z| z.re).unwrap_or(0.0),
        }
    }
}

/// Period of a drive with frequency `omega`.
pub fn period(omega: f64) -> f64 {
    2.0 * PI / omega
}
