//! Floquet engine for periodically driven, weakly coupled qubits.
//!
//! The crate computes quasi-energy spectra and Floquet states of `N` driven
//! two-level systems (extended-space Fourier diagonalization or one-period
//! propagation), time-averaged entanglement of the Floquet states, and
//! predicts where entanglement resonances appear from the quasi-energy of a
//! *single* driven qubit.
//!
//! Units: `ħ = 1`; energies and frequencies share one unit, usually the
//! driving frequency `ω`.

// `!(x > 0.0)` style guards reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entanglement;
pub mod error;
pub mod floquet;
pub mod linalg;
pub mod model;
pub mod resonance;
pub mod single_qubit;

pub use error::{FloquetError, Result};
pub use floquet::{
    diagonalize_floquet, fold_to_zone, fourier_components, monodromy_propagator, truncation_rule, Backend,
    DiagonalizeOptions, FloquetMatrix, FloquetSpectrum, FloquetState, FourierBlocks, FourierStack, MonodromyOptions,
    Symmetry,
};
pub use model::{
    Coupling, CouplingKind, DriveKind, DrivenModel, PeriodicDrive, QubitSystem, SubspaceBasis, SubspaceKind,
};

/// Crate version, recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
