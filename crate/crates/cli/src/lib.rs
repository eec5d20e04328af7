//! Configuration-driven sweeps over the Floquet engine: parameter-plane
//! grids of quasi-energies, time-averaged entanglement and resonance
//! predictions, written as deterministic CSV or JSON with a metadata
//! sidecar and an optional plotting script.

pub mod config;
pub mod plot;
pub mod run;
pub mod tasks;

pub use config::{ConfigError, SweepConfig, Task};
pub use run::{run, RunOptions, RunSummary};

/// Process exit codes.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    pub const RUNTIME: i32 = 1;
    pub const CONFIG: i32 = 2;
    pub const FAILURE_THRESHOLD: i32 = 3;
}
