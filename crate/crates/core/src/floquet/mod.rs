//! Floquet solvers: extended-space Fourier diagonalization and the
//! one-period propagator, with zone folding and state reconstruction.

mod matrix;
mod monodromy;
mod spectrum;
mod stack;
mod truncation;

pub use matrix::{build_floquet_matrix, fourier_components, FloquetMatrix, FourierBlocks};
pub use monodromy::{floquet_multiplier, monodromy_propagator, MonodromyOptions, Stepper};
pub use spectrum::{
    diagonalize_floquet, fold_to_zone, zone_distance, Backend, DiagonalizeOptions, FloquetSpectrum, FloquetState,
    Symmetry, DEGENERACY_TOL,
};
pub use stack::FourierStack;
pub use truncation::{edge_amplitude, solve, solve_fourier, truncation_rule, SolveOptions, Truncation, DEFAULT_MARGIN};

/// `|Φ_i(t)⟩` of a spectrum (free-function form of [`FloquetSpectrum::state_at`]).
pub fn floquet_state_at(spectrum: &FloquetSpectrum, i: usize, t: f64) -> crate::Result<crate::linalg::CVector> {
    spectrum.state_at(i, t)
}
