//! Fourier truncation `M` and the backend-agnostic solver entry point.

use crate::error::{FloquetError, Result};
use crate::model::{DrivenModel, SubspaceKind};

use super::matrix::build_floquet_matrix;
use super::monodromy::{monodromy_propagator, spectral_drift, MonodromyOptions};
use super::spectrum::{diagonalize_floquet, Backend, DiagonalizeOptions, FloquetSpectrum};

pub const DEFAULT_MARGIN: usize = 4;

/// `M = ⌈2 F_total / ω⌉ + margin`.
pub fn truncation_rule(f_total: f64, omega: f64, margin: usize) -> usize {
    let base = (2.0 * f_total.abs() / omega).ceil();
    base as usize + margin
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Truncation {
    Fixed(usize),
    Rule {
        margin: usize,
    },
    /// Start from the rule and add 4 indices until every quasi-energy moves
    /// by less than `tol·ω` and no state keeps more than `tol` amplitude in
    /// the outermost Fourier components. Quasi-energies converge quadratically
    /// in that amplitude, time-domain states only linearly, hence both checks.
    Adaptive {
        margin: usize,
        tol: f64,
        max_m: usize,
    },
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation::Rule { margin: DEFAULT_MARGIN }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveOptions {
    pub backend: Backend,
    pub truncation: Truncation,
    pub diagonalize: DiagonalizeOptions,
    pub monodromy: MonodromyOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            backend: Backend::Fourier,
            truncation: Truncation::default(),
            diagonalize: DiagonalizeOptions::default(),
            monodromy: MonodromyOptions::default(),
        }
    }
}

impl SolveOptions {
    pub fn monodromy() -> Self {
        SolveOptions {
            backend: Backend::Monodromy,
            ..Self::default()
        }
    }

    /// Backend able to handle `model`: δ-kicks force the propagator.
    pub fn for_model(model: &DrivenModel) -> Self {
        if model.drive.is_delta_kick() {
            Self::monodromy()
        } else {
            Self::default()
        }
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }
}

/// Fourier-backend spectrum at a fixed truncation.
pub fn solve_fourier(model: &DrivenModel, m_max: usize, options: &DiagonalizeOptions) -> Result<FloquetSpectrum> {
    let blocks = model.fourier_blocks()?;
    let matrix = build_floquet_matrix(&blocks, m_max)?;
    diagonalize_floquet(&matrix, model.dim(), options)
}

/// Solves the Floquet problem of `model` with the requested backend.
pub fn solve(model: &DrivenModel, options: &SolveOptions) -> Result<FloquetSpectrum> {
    let mut spec = solve_in_working_basis(model, options)?;
    if model.subspace.kind != SubspaceKind::Full {
        spec.embedding = Some(model.subspace.basis_vectors.clone());
    }
    Ok(spec)
}

fn solve_in_working_basis(model: &DrivenModel, options: &SolveOptions) -> Result<FloquetSpectrum> {
    match options.backend {
        Backend::Monodromy => monodromy_propagator(model, &options.monodromy).map(|(_, s)| s),
        Backend::Fourier => {
            let omega = model.omega();
            let f = model.drive_strength();
            match options.truncation {
                Truncation::Fixed(m) => solve_fourier(model, m, &options.diagonalize),
                Truncation::Rule { margin } => {
                    solve_fourier(model, truncation_rule(f, omega, margin).max(1), &options.diagonalize)
                }
                Truncation::Adaptive { margin, tol, max_m } => {
                    let mut m = truncation_rule(f, omega, margin).max(1);
                    let mut spec = solve_fourier(model, m, &options.diagonalize)?;
                    loop {
                        let next_m = m + 4;
                        let next = solve_fourier(model, next_m, &options.diagonalize)?;
                        let drift = spectral_drift(&spec.quasi_energies(), &next.quasi_energies(), omega);
                        spec = next;
                        m = next_m;
                        if drift < tol * omega && edge_amplitude(&spec) < tol {
                            return Ok(spec);
                        }
                        if m + 4 > max_m {
                            return Err(FloquetError::NonConvergence {
                                drift,
                                tolerance: tol * omega,
                            });
                        }
                    }
                }
            }
        }
    }
}

/// Largest norm of a state's components at the window edges `−M+1` and `M`.
pub fn edge_amplitude(spec: &FloquetSpectrum) -> f64 {
    let Some(m) = spec.m_max else { return 0.0 };
    let m = m as i64;
    spec.states
        .iter()
        .filter_map(|s| s.stack.as_ref())
        .map(|st| st.component(1 - m).norm().max(st.component(m).norm()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_examples() {
        assert_eq!(truncation_rule(0.0, 1.0, 4), 4);
        assert_eq!(truncation_rule(2.0, 1.0, 4), 8);
        assert_eq!(truncation_rule(0.3, 1.0, 4), 5);
        assert_eq!(truncation_rule(6.0, 2.0, 0), 6);
    }

    #[test]
    fn adaptive_run_leaves_negligible_edge_weight() {
        use crate::model::{PeriodicDrive, QubitSystem};
        let sys = QubitSystem::identical(1, 1.0, PeriodicDrive::bichromatic(1.8, 1.8, 1.0));
        let model = DrivenModel::full(&sys).unwrap();
        let opts = SolveOptions::default().with_truncation(Truncation::Adaptive {
            margin: 4,
            tol: 1e-10,
            max_m: 96,
        });
        let spec = solve(&model, &opts).unwrap();
        assert!(edge_amplitude(&spec) < 1e-10);
        for i in 0..2 {
            for s in 0..32 {
                let t = spec.period() * s as f64 / 32.0;
                assert!((spec.state_at(i, t).unwrap().norm() - 1.0).abs() < 1e-9);
            }
        }
    }
}
