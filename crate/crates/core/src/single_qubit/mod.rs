//! Single-qubit quasi-energies `μ` for `h(t) = (ω₀/2)σ_z + f(t)σ_x`:
//! numerics, closed forms, approximations, and generalized-parity labels.
//!
//! All `μ` values are folded into `[0, ω/2]`.

mod bessel;
mod kummer;

pub use bessel::{bessel_j0, J0_FIRST_ZERO, J0_SECOND_ZERO};
pub use kummer::{kummer_1f1, KUMMER_TERM_BUDGET};

use std::f64::consts::TAU;

use crate::error::{FloquetError, Result};
use crate::floquet::{fold_to_zone, solve, Backend, FloquetSpectrum, FourierStack, SolveOptions};
use crate::linalg::{c, sigma_z, CMatrix, C64};
use crate::model::{DrivenModel, PeriodicDrive, QubitSystem};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleQubitParams {
    pub omega0: f64,
    pub omega: f64,
    pub f: f64,
    /// Second-harmonic amplitude; bichromatic driving only.
    pub f_prime: f64,
}

impl SingleQubitParams {
    pub fn new(omega0: f64, omega: f64, f: f64) -> Self {
        SingleQubitParams {
            omega0,
            omega,
            f,
            f_prime: 0.0,
        }
    }

    pub fn period(&self) -> f64 {
        TAU / self.omega
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0) {
            return Err(FloquetError::InvalidArgument("omega must be positive".into()));
        }
        if self.f < 0.0 || self.f_prime < 0.0 {
            return Err(FloquetError::InvalidArgument(
                "drive amplitudes must be non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn drive(&self, class: DriveClass) -> PeriodicDrive {
        match class {
            DriveClass::Monochromatic => PeriodicDrive::monochromatic(self.f, self.omega),
            DriveClass::Bichromatic => PeriodicDrive::bichromatic(self.f, self.f_prime, self.omega),
            DriveClass::Sawtooth => PeriodicDrive::sawtooth(self.f, self.omega),
            DriveClass::DeltaKick => PeriodicDrive::delta_kick(self.f, self.omega),
        }
    }

    pub fn system(&self, class: DriveClass) -> QubitSystem {
        QubitSystem::identical(1, self.omega0, self.drive(class))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DriveClass {
    Monochromatic,
    Bichromatic,
    Sawtooth,
    DeltaKick,
}

/// `|fold(ε)|`, the `[0, ω/2]` representative of `±ε`.
pub fn fold_positive(eps: f64, omega: f64) -> f64 {
    fold_to_zone(eps, omega).abs()
}

/// `μ` from a solved two-level spectrum, symmetrized with `μ₊ = −μ₋`.
pub fn mu_from_spectrum(spec: &FloquetSpectrum) -> f64 {
    let eps = spec.quasi_energies();
    let w = spec.omega;
    0.5 * (fold_positive(eps[0], w) + fold_positive(eps[1], w))
}

/// Numerical `μ`. Fourier diagonalization for smooth drives, the
/// one-period propagator for saw-tooth (whose series converges slowly) and
/// δ-kicks.
pub fn mu_numeric(params: &SingleQubitParams, class: DriveClass) -> Result<f64> {
    let backend = match class {
        DriveClass::Monochromatic | DriveClass::Bichromatic => Backend::Fourier,
        DriveClass::Sawtooth | DriveClass::DeltaKick => Backend::Monodromy,
    };
    mu_numeric_with(params, class, backend)
}

pub fn mu_numeric_with(params: &SingleQubitParams, class: DriveClass, backend: Backend) -> Result<f64> {
    params.validate()?;
    let model = DrivenModel::full(&params.system(class))?;
    let mut options = SolveOptions {
        backend,
        ..SolveOptions::default()
    };
    options.monodromy.store_table = false;
    Ok(mu_from_spectrum(&solve(&model, &options)?))
}

/// Rotating-wave result `μ = ½(ω + √((ω − ω₀)² + F²))`, folded.
pub fn mu_rwa(params: &SingleQubitParams) -> f64 {
    let w = params.omega;
    let raw = 0.5 * (w + ((w - params.omega0).powi(2) + params.f * params.f).sqrt());
    fold_positive(raw, w)
}

/// High-frequency result `μ = (ω₀/2) J₀(2F/ω)`, folded.
pub fn mu_bessel(params: &SingleQubitParams) -> f64 {
    let raw = 0.5 * params.omega0 * bessel_j0(2.0 * params.f / params.omega);
    fold_positive(raw, params.omega)
}

/// Landau-Zener propagator entries for `h(t) = (αt/2)σ_z + Vσ_x`:
/// `U(0,t) = [[a, −b], [b*, a*]]`.
pub fn landau_zener_amplitudes(alpha: f64, v: f64, t: f64) -> Result<(C64, C64)> {
    if alpha == 0.0 {
        return Err(FloquetError::Domain("sweep rate must be non-zero".into()));
    }
    let ka = c(0.0, v * v / (2.0 * alpha));
    let z = c(0.0, alpha * t * t / 2.0);
    let phase = c(0.0, -alpha * t * t / 4.0).exp();
    let a = kummer_1f1(ka, c(0.5, 0.0), z)? * phase;
    let b = kummer_1f1(ka + 0.5, c(1.5, 0.0), z)? * c(0.0, v * t) * phase;
    Ok((a, b))
}

/// Exact saw-tooth quasi-energy for `f(t) = F[(t/T mod 1) − ½]`.
///
/// Over `[−T/2, T/2)` the problem is a Landau-Zener sweep with `V = ω₀/2`
/// and `α = 2F/T` (after exchanging `σ_x` and `σ_z`), and
/// `cos μT = |a|² − |b|²` at `t = T/2`. The phase is taken from `atan2`
/// of `(2|a||b|, |a|² − |b|²)`, which stays accurate near `μ = 0, ω/2`.
pub fn mu_sawtooth(params: &SingleQubitParams) -> Result<f64> {
    params.validate()?;
    let w = params.omega;
    if params.f == 0.0 {
        return Ok(fold_positive(params.omega0 / 2.0, w));
    }
    let t = params.period();
    let (a, b) = landau_zener_amplitudes(2.0 * params.f / t, params.omega0 / 2.0, t / 2.0)?;
    let (aa, bb) = (a.norm_sqr(), b.norm_sqr());
    let arg = 2.0 * aa - 1.0;
    if arg.abs() > 1.0 + 1e-9 || (aa + bb - 1.0).abs() > 1e-9 {
        return Err(FloquetError::Domain(format!(
            "Landau-Zener amplitudes lost normalization (|a|² + |b|² = {})",
            aa + bb
        )));
    }
    let theta = (2.0 * a.norm() * b.norm()).atan2(aa - bb);
    Ok(fold_positive(theta / t, w))
}

/// Exact δ-kick quasi-energy, `cos μT = cos(ω₀T/2) cos(FT)`.
///
/// Evaluated as `atan2(|q|, q₀)` of the quaternion components of
/// `U = e^{−iFTσ_x} e^{−iω₀Tσ_z/2}`.
pub fn mu_delta_kick(params: &SingleQubitParams) -> Result<f64> {
    params.validate()?;
    let t = params.period();
    let (s1, c1) = (params.f * t).sin_cos();
    let (s2, c2) = (params.omega0 * t / 2.0).sin_cos();
    let q0 = c1 * c2;
    let q = (s1 * s1 + c1 * c1 * s2 * s2).sqrt();
    Ok(fold_positive(q.atan2(q0) / t, params.omega))
}

/// `arccos` with the argument clamped when it overshoots `[−1, 1]` by
/// at most `1e-9`.
pub fn guarded_acos(x: f64) -> Result<f64> {
    if x.abs() > 1.0 + 1e-9 {
        return Err(FloquetError::Domain(format!("arccos argument {x} outside [-1, 1]")));
    }
    Ok(x.clamp(-1.0, 1.0).acos())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParityLabel {
    pub value: i8,
    /// `|⟨𝒮_P⟩ − value|`.
    pub defect: f64,
}

/// Generalized parity `Σ_k (−1)^k ⟨Φ̃(k)|Z|Φ̃(k)⟩` with `Z = ⊗σ_z` given in
/// the working basis. Pass `None` for a single qubit (`Z = σ_z`).
pub fn parity_classify(stack: &FourierStack, z: Option<&CMatrix>) -> Result<ParityLabel> {
    let single;
    let z = match z {
        Some(z) => z,
        None => {
            single = sigma_z();
            &single
        }
    };
    if z.nrows() != stack.dim() {
        return Err(FloquetError::DimensionMismatch {
            expected: z.nrows(),
            found: stack.dim(),
        });
    }
    let norm = stack.norm_sqr();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(FloquetError::Unnormalized { norm: norm.sqrt() });
    }
    let p = stack.parity_expectation(z);
    let value: i8 = if p >= 0.0 { 1 } else { -1 };
    Ok(ParityLabel {
        value,
        defect: (p - value as f64).abs(),
    })
}

/// Single-qubit Floquet pair `φ±` as zone stacks (`φ₊` has `ε ≥ 0`).
#[derive(Clone, Debug)]
pub struct SingleQubitFloquet {
    pub mu: f64,
    pub omega: f64,
    pub plus: FourierStack,
    pub minus: FourierStack,
    /// Folded quasi-energies of `φ₊` and `φ₋`.
    pub eps_plus: f64,
    pub eps_minus: f64,
}

/// Solves the single-qubit problem on the Fourier backend.
pub fn single_qubit_floquet(omega0: f64, drive: &PeriodicDrive, m_max: Option<usize>) -> Result<SingleQubitFloquet> {
    let model = DrivenModel::full(&QubitSystem::identical(1, omega0, drive.clone()))?;
    let mut options = SolveOptions::default();
    if let Some(m) = m_max {
        options.truncation = crate::floquet::Truncation::Fixed(m);
    }
    let spec = solve(&model, &options)?;
    let zone = |i: usize| spec.states[i].zone_stack().expect("Fourier backend keeps stacks");
    Ok(SingleQubitFloquet {
        mu: mu_from_spectrum(&spec),
        omega: spec.omega,
        plus: zone(1),
        minus: zone(0),
        eps_plus: spec.states[1].quasi_energy,
        eps_minus: spec.states[0].quasi_energy,
    })
}

/// `μ` such that the unperturbed levels `(N − 2i)μ` and `(N − 2j)μ` differ by `nω`.
pub fn resonant_mu(n: i64, level_gap: i64, omega: f64) -> f64 {
    // 2(j − i)μ = nω
    (n as f64 * omega / (2.0 * level_gap as f64)).abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(omega0: f64, f: f64) -> SingleQubitParams {
        SingleQubitParams::new(omega0, 1.0, f)
    }

    #[test]
    fn undriven_and_sigma_x_only() {
        assert!((mu_numeric(&p(0.6, 0.0), DriveClass::Monochromatic).unwrap() - 0.3).abs() < 1e-12);
        assert!(mu_numeric(&p(0.0, 1.5), DriveClass::Monochromatic).unwrap().abs() < 1e-8);
    }

    #[test]
    fn near_resonance_folds_to_045() {
        let mu = mu_numeric(&p(1.0, 0.1), DriveClass::Monochromatic).unwrap();
        assert!((mu - 0.45).abs() < 2e-3, "{mu}");
        assert!((mu_rwa(&p(1.0, 0.1)) - 0.45).abs() < 1e-15);
        assert!((mu_rwa(&p(1.0, 0.0)) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rwa_circle_condition() {
        // (ω − ω₀)² + F² = (ω/2)² ⇒ raw μ = 3ω/4 ⇒ folded ω/4, i.e. 4μ/ω = 1
        let theta: f64 = 0.7;
        let params = p(1.0 - 0.5 * theta.cos(), 0.5 * theta.sin());
        assert!((4.0 * mu_rwa(&params) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn bessel_limits() {
        assert_eq!(mu_bessel(&p(0.0, 1.0)), 0.0);
        assert!(mu_bessel(&p(0.3, J0_FIRST_ZERO / 2.0)) < 1e-15);
        let params = p(0.01, 0.5);
        let num = mu_numeric(&params, DriveClass::Monochromatic).unwrap();
        assert!((mu_bessel(&params) - num).abs() < 1e-3);
    }

    #[test]
    fn delta_kick_closed_form_examples() {
        assert!((mu_delta_kick(&p(0.6, 0.0)).unwrap() - 0.3).abs() < 1e-14);
        // ω₀T = 2π, FT = π/3
        assert!((mu_delta_kick(&p(1.0, 1.0 / 6.0)).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        // FT = π/2 ⇒ ω/4 for any ω₀
        for omega0 in [0.0, 0.37, 1.9] {
            assert!((mu_delta_kick(&p(omega0, 0.25)).unwrap() - 0.25).abs() < 1e-14);
        }
    }

    #[test]
    fn sawtooth_closed_form_matches_propagation() {
        // values from an independent fourth-order Magnus propagation (4000 steps)
        let refs = [
            (1.0, 1.0, 0.3431354361722319),
            (0.7, 2.3, 0.15379642651095562),
            (2.5, 0.4, 0.25500334345826964),
        ];
        for (omega0, f, want) in refs {
            let got = mu_sawtooth(&p(omega0, f)).unwrap();
            assert!((got - want).abs() < 1e-9, "{omega0} {f}: {got} vs {want}");
        }
        assert_eq!(mu_sawtooth(&p(0.0, 1.3)).unwrap(), 0.0);
        assert!((mu_sawtooth(&p(0.8, 0.0)).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn landau_zener_unitarity() {
        for (alpha, v, t) in [(0.8, 0.35, 1.7), (-1.3, 0.2, 2.0), (2.0, 1.1, 0.4)] {
            let (a, b) = landau_zener_amplitudes(alpha, v, t).unwrap();
            assert!((a.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn parity_of_static_states() {
        use crate::linalg::{CVector, ONE, ZERO};
        let up = FourierStack::constant(&CVector::from_vec(vec![ONE, ZERO]), 2);
        let down = FourierStack::constant(&CVector::from_vec(vec![ZERO, ONE]), 2);
        assert_eq!(parity_classify(&up, None).unwrap().value, 1);
        assert_eq!(parity_classify(&down, None).unwrap().value, -1);
        assert_eq!(parity_classify(&up.shifted(1), None).unwrap().value, -1);
    }

    #[test]
    fn driven_states_have_sharp_parity() {
        let q = single_qubit_floquet(0.8, &PeriodicDrive::monochromatic(1.1, 1.0), None).unwrap();
        let lp = parity_classify(&q.plus, None).unwrap();
        let lm = parity_classify(&q.minus, None).unwrap();
        assert!(lp.defect < 1e-8 && lm.defect < 1e-8);
        assert_eq!(lp.value, -lm.value);
    }
}
