//! Declarative sweep configuration (TOML).
//!
//! Energies in `[system]`, `[drive]` and on the grid axes are given in units
//! of the driving frequency `ω` (`[drive].omega`).

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Sweep,
    Spectrum,
    Predict,
    SingleQubit,
    Validate,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Sweep => "sweep",
            Task::Spectrum => "spectrum",
            Task::Predict => "predict",
            Task::SingleQubit => "single-qubit",
            Task::Validate => "validate",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Used when no task is given on the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    pub system: SystemSection,
    pub drive: DriveSection,
    pub grid: GridSection,
    #[serde(default)]
    pub numerics: NumericsSection,
    #[serde(default)]
    pub output: OutputSection,
    #[serde(default)]
    pub predict: PredictSection,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingName {
    None,
    Exchange,
    Xx,
    TiltedDipole,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SubspaceName {
    Full,
    Symmetric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSection {
    pub n_qubits: usize,
    /// Bare splitting `ω₀/ω`.
    #[serde(default = "one")]
    pub omega0: f64,
    #[serde(default = "coupling_none")]
    pub coupling: CouplingName,
    /// All-to-all coupling strength `C/ω`.
    #[serde(default)]
    pub c: f64,
    /// Per-qubit splitting weights `β_n`; all ones when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default = "subspace_full")]
    pub subspace: SubspaceName,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DriveName {
    Monochromatic,
    Bichromatic,
    Sawtooth,
    DeltaKick,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    pub kind: DriveName,
    /// Absolute driving frequency; sets the energy unit.
    #[serde(default = "one")]
    pub omega: f64,
    /// `F/ω`.
    #[serde(default)]
    pub amplitude: f64,
    /// `F′/F` for bichromatic driving.
    #[serde(default = "one")]
    pub second_ratio: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parameter {
    /// Drive amplitude `F/ω`.
    F,
    /// Splitting `ω₀/ω`.
    #[serde(rename = "omega0")]
    Omega0,
    /// Coupling `C/ω`.
    C,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::F => "F",
            Parameter::Omega0 => "omega0",
            Parameter::C => "C",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: Parameter,
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Axis {
    /// `points` equally spaced values from `min` to `max` inclusive.
    pub fn values(&self) -> Vec<f64> {
        let last = (self.points.max(2) - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i + 1 == self.points {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / last
                }
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub x: Axis,
    pub y: Axis,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationName {
    Adaptive,
    Rule,
    Fixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BackendName {
    Fourier,
    Monodromy,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NumericsSection {
    pub truncation: TruncationName,
    /// Added to `⌈2F_total/ω⌉` by the rule and the adaptive start.
    pub margin: usize,
    /// Fourier cut-off for `truncation = "fixed"`.
    pub m: usize,
    /// Adaptive convergence tolerance (relative to `ω`, and on edge amplitudes).
    pub tolerance: f64,
    pub max_m: usize,
    /// Time samples per period for entanglement averages.
    pub n_samples: usize,
    /// Worker threads; all cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub backend: BackendName,
    /// Largest tolerated fraction of failed grid points.
    pub failure_threshold: f64,
    /// Backend disagreement, in units of `ω`, above which `validate` flags a point.
    pub validate_tolerance: f64,
}

impl Default for NumericsSection {
    fn default() -> Self {
        NumericsSection {
            truncation: TruncationName::Adaptive,
            margin: 4,
            m: 16,
            tolerance: 1e-10,
            max_m: 128,
            n_samples: 128,
            workers: None,
            backend: BackendName::Fourier,
            failure_threshold: 0.05,
            validate_tolerance: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    pub format: Format,
    /// Also write `plot.py`.
    pub plot: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            dir: "out".into(),
            format: Format::Csv,
            plot: true,
        }
    }
}

/// Level pair whose degeneracy corridors are reported.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictSection {
    /// Dicke indices `(i, j)` of the levels `(N − 2i)μ`, `(N − 2j)μ`;
    /// defaults to the outermost pair `(0, N)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pair: Option<[usize; 2]>,
}

fn one() -> f64 {
    1.0
}

fn coupling_none() -> CouplingName {
    CouplingName::None
}

fn subspace_full() -> SubspaceName {
    SubspaceName::Full
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Dotted key path, when the problem is tied to one field.
    pub field: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn at(field: &str, message: impl Into<String>) -> Self {
        ConfigError {
            field: Some(field.into()),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(field) => write!(f, "{field}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

impl SweepConfig {
    /// Parses and validates. TOML errors carry line and column.
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let config: SweepConfig = toml::from_str(text).map_err(|e| ConfigError {
            field: None,
            message: e.to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            field: None,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_toml(&text).map_err(|mut e| {
            e.message = format!("{}: {}", path.display(), e.message);
            e
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Compact JSON with fields in declaration order.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of [`Self::canonical_json`].
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn n_points(&self) -> usize {
        self.grid.x.points * self.grid.y.points
    }

    /// Index of the first level of the tracked pair and its Dicke distance.
    pub fn pair(&self) -> (usize, usize) {
        let [i, j] = self.predict.pair.unwrap_or([0, self.system.n_qubits]);
        (i.min(j), i.max(j))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let s = &self.system;
        if !(1..=6).contains(&s.n_qubits) {
            return Err(ConfigError::at("system.n_qubits", "must be between 1 and 6"));
        }
        finite_nonneg("system.omega0", s.omega0)?;
        finite_nonneg("system.c", s.c)?;
        if let Some(w) = &s.weights {
            if w.len() != s.n_qubits {
                return Err(ConfigError::at(
                    "system.weights",
                    format!("expected {} entries", s.n_qubits),
                ));
            }
            if w.iter().any(|x| !x.is_finite()) {
                return Err(ConfigError::at("system.weights", "entries must be finite"));
            }
            if s.subspace == SubspaceName::Symmetric && w.iter().any(|&x| x != w[0]) {
                return Err(ConfigError::at(
                    "system.subspace",
                    "symmetric subspace needs equal weights",
                ));
            }
        }
        if s.coupling != CouplingName::None && s.n_qubits < 2 {
            return Err(ConfigError::at("system.coupling", "coupling needs at least two qubits"));
        }
        let d = &self.drive;
        if !(d.omega.is_finite() && d.omega > 0.0) {
            return Err(ConfigError::at("drive.omega", "must be positive"));
        }
        finite_nonneg("drive.amplitude", d.amplitude)?;
        finite_nonneg("drive.second_ratio", d.second_ratio)?;
        for (name, axis) in [("grid.x", &self.grid.x), ("grid.y", &self.grid.y)] {
            if axis.points < 2 {
                return Err(ConfigError::at(
                    &format!("{name}.points"),
                    "need at least 2 points per axis",
                ));
            }
            if !(axis.min.is_finite() && axis.max.is_finite()) || axis.min < 0.0 || axis.max < axis.min {
                return Err(ConfigError::at(name, "need finite 0 <= min <= max"));
            }
        }
        if self.grid.x.param == self.grid.y.param {
            return Err(ConfigError::at("grid.y.param", "both axes scan the same parameter"));
        }
        let n = &self.numerics;
        for (name, v) in [
            ("numerics.tolerance", n.tolerance),
            ("numerics.validate_tolerance", n.validate_tolerance),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ConfigError::at(name, "must be positive"));
            }
        }
        if !(0.0..=1.0).contains(&n.failure_threshold) {
            return Err(ConfigError::at("numerics.failure_threshold", "must lie in [0, 1]"));
        }
        if n.n_samples < 8 || !n.n_samples.is_multiple_of(2) {
            return Err(ConfigError::at("numerics.n_samples", "must be even and at least 8"));
        }
        if n.workers == Some(0) {
            return Err(ConfigError::at("numerics.workers", "must be at least 1"));
        }
        if n.truncation == TruncationName::Fixed && n.m == 0 {
            return Err(ConfigError::at("numerics.m", "must be at least 1"));
        }
        if d.kind == DriveName::DeltaKick && n.backend == BackendName::Fourier {
            return Err(ConfigError::at(
                "numerics.backend",
                "delta-kick drives need the monodromy backend",
            ));
        }
        let (i, j) = self.pair();
        if i == j || j > s.n_qubits {
            return Err(ConfigError::at(
                "predict.pair",
                format!("need two distinct indices in 0..={}", s.n_qubits),
            ));
        }
        Ok(())
    }
}

fn finite_nonneg(field: &str, v: f64) -> Result<(), ConfigError> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(ConfigError::at(field, "must be finite and non-negative"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
[system]
n_qubits = 2
omega0 = 1.0
coupling = "exchange"
c = 0.02

[drive]
kind = "monochromatic"

[grid]
x = { param = "F", min = 0.0, max = 3.0, points = 8 }
y = { param = "omega0", min = 0.0, max = 3.0, points = 8 }
"#;

    #[test]
    fn parses_with_defaults() {
        let c = SweepConfig::from_toml(EXAMPLE).unwrap();
        assert_eq!(c.numerics, NumericsSection::default());
        assert_eq!(c.output, OutputSection::default());
        assert_eq!(c.pair(), (0, 2));
        assert_eq!(c.n_points(), 64);
    }

    #[test]
    fn round_trips_through_toml() {
        let mut c = SweepConfig::from_toml(EXAMPLE).unwrap();
        c.system.weights = Some(vec![1.0, 0.1 + 0.2]);
        c.numerics.workers = Some(3);
        c.predict.pair = Some([0, 1]);
        c.task = Some(Task::Predict);
        let back = SweepConfig::from_toml(&c.to_toml()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
    }

    #[test]
    fn axis_values_hit_both_ends() {
        let a = Axis {
            param: Parameter::F,
            min: 0.1,
            max: 0.7,
            points: 7,
        };
        let v = a.values();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[6], 0.7);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = EXAMPLE.replace("points = 8 }\ny", "points = 1 }\ny");
        let e = SweepConfig::from_toml(&bad).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("grid.x.points"));
        let e = SweepConfig::from_toml(&EXAMPLE.replace("n_qubits", "qubits")).unwrap_err();
        assert!(e.message.contains("line"), "{e}");
        let e = SweepConfig::from_toml(&EXAMPLE.replace("\"monochromatic\"", "\"delta-kick\"")).unwrap_err();
        assert_eq!(e.field.as_deref(), Some("numerics.backend"));
    }
}
