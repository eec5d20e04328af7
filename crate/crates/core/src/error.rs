use thiserror::Error;

pub type Result<T> = std::result::Result<T, FloquetError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FloquetError {
    #[error("invalid system: {0}")]
    InvalidSystem(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operator is not Hermitian (relative defect {defect:.3e})")]
    NonHermitian { defect: f64 },

    #[error("delta-kick drives have no truncating Fourier series; use the monodromy backend")]
    DeltaKickFourier,

    #[error("found {found} quasi-energies in the central zone, expected {expected} (increase the truncation or check for degeneracies)")]
    ZoneCount { found: usize, expected: usize },

    #[error(
        "propagation did not converge: step doubling moved a quasi-energy by {drift:.3e} (tolerance {tolerance:.3e})"
    )]
    NonConvergence { drift: f64, tolerance: f64 },

    #[error("Kummer series did not converge within {terms} terms")]
    KummerNonConvergence { terms: usize },

    #[error("state is not normalized (norm {norm})")]
    Unnormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("system breaks the symmetry of the requested subspace (leakage {defect:.3e})")]
    SymmetryViolation { defect: f64 },

    #[error("closed form out of domain: {0}")]
    Domain(String),

    #[error("no avoided crossing found in the scanned range")]
    NoCrossing,
}
