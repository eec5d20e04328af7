//! Per-grid-point evaluation for each task.

use floquet_core::entanglement::{time_averaged_entanglement, EntanglementMeasure};
use floquet_core::floquet::{solve, zone_distance, Backend, FloquetSpectrum, SolveOptions, Symmetry, Truncation};
use floquet_core::resonance::{corridor_mask, generalized_parity_holds, predict};
use floquet_core::single_qubit::{
    mu_bessel, mu_delta_kick, mu_numeric_with, mu_rwa, mu_sawtooth, DriveClass, SingleQubitParams,
};
use floquet_core::{CouplingKind, DrivenModel, PeriodicDrive, QubitSystem, SubspaceBasis};

use crate::config::{BackendName, CouplingName, DriveName, Parameter, SubspaceName, SweepConfig, Task, TruncationName};

/// One output cell.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Int(i64),
    Float(f64),
    Bool(bool),
    Text(String),
}

/// Physical parameters of one grid point, in units of `ω`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub f: f64,
    pub omega0: f64,
    pub c: f64,
}

impl Point {
    pub fn at(config: &SweepConfig, x: f64, y: f64) -> Self {
        let mut p = Point {
            f: config.drive.amplitude,
            omega0: config.system.omega0,
            c: config.system.c,
        };
        for (axis, v) in [(&config.grid.x, x), (&config.grid.y, y)] {
            match axis.param {
                Parameter::F => p.f = v,
                Parameter::Omega0 => p.omega0 = v,
                Parameter::C => p.c = v,
            }
        }
        p
    }
}

/// Column names following `ix, iy, x, y`; the last one is always `status`.
pub fn value_columns(config: &SweepConfig, task: Task) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    let push = |cols: &mut Vec<String>, names: &[&str]| cols.extend(names.iter().map(|s| s.to_string()));
    let dim = working_dim(config);
    match task {
        Task::Predict => push(&mut cols, &["mu", "n", "deviation", "corridor", "allowed"]),
        Task::SingleQubit => {
            push(&mut cols, &["mu"]);
            match config.drive.kind {
                DriveName::Monochromatic => push(&mut cols, &["mu_rwa", "mu_bessel"]),
                DriveName::Sawtooth | DriveName::DeltaKick => push(&mut cols, &["mu_closed"]),
                DriveName::Bichromatic => {}
            }
        }
        Task::Spectrum => {
            cols.extend((0..dim).map(|i| format!("eps_{i}")));
            push(&mut cols, &["m", "orthonormality_defect", "degenerate"]);
        }
        Task::Sweep => {
            push(&mut cols, &["mu", "n", "deviation", "corridor", "allowed"]);
            cols.extend((0..dim).map(|i| format!("eps_{i}")));
            if measure(config).is_some() {
                cols.extend((0..dim).map(|i| format!("ent_{i}")));
                push(&mut cols, &["ent_min", "ent_max"]);
            }
            push(&mut cols, &["degenerate"]);
        }
        Task::Validate => push(&mut cols, &["max_diff", "m"]),
    }
    cols.push("status".into());
    cols
}

fn working_dim(config: &SweepConfig) -> usize {
    let n = config.system.n_qubits;
    match config.system.subspace {
        SubspaceName::Full => 1 << n,
        SubspaceName::Symmetric => n + 1,
    }
}

fn measure(config: &SweepConfig) -> Option<EntanglementMeasure> {
    EntanglementMeasure::for_qubits(config.system.n_qubits)
}

/// Values for `value_columns(config, task)`. A numerical failure yields NaN
/// in every column and the error text as status.
pub fn evaluate(config: &SweepConfig, task: Task, x: f64, y: f64) -> Vec<Value> {
    let p = Point::at(config, x, y);
    let result = match task {
        Task::Predict => prediction(config, p),
        Task::SingleQubit => single_qubit(config, p),
        Task::Spectrum => spectrum(config, p),
        Task::Sweep => sweep(config, p),
        Task::Validate => validate(config, p),
    };
    let n = value_columns(config, task).len() - 1;
    match result {
        Ok((mut values, status)) => {
            debug_assert_eq!(values.len(), n);
            values.push(Value::Text(status.into()));
            values
        }
        Err(e) => {
            let mut values = vec![Value::Float(f64::NAN); n];
            values.push(Value::Text(sanitize(&e)));
            values
        }
    }
}

type PointResult = Result<(Vec<Value>, &'static str), String>;

/// Keeps status fields free of separators and quotes.
fn sanitize(message: &str) -> String {
    let cleaned: String = message
        .chars()
        .map(|c| {
            if c == ',' || c == '"' || c == ';' || c.is_control() {
                ' '
            } else {
                c
            }
        })
        .collect();
    format!("error: {}", cleaned.trim())
}

fn drive(config: &SweepConfig, f: f64) -> PeriodicDrive {
    let w = config.drive.omega;
    let amp = f * w;
    match config.drive.kind {
        DriveName::Monochromatic => PeriodicDrive::monochromatic(amp, w),
        DriveName::Bichromatic => PeriodicDrive::bichromatic(amp, config.drive.second_ratio * amp, w),
        DriveName::Sawtooth => PeriodicDrive::sawtooth(amp, w),
        DriveName::DeltaKick => PeriodicDrive::delta_kick(amp, w),
    }
}

pub fn system(config: &SweepConfig, p: Point) -> QubitSystem {
    let s = &config.system;
    let w = config.drive.omega;
    let mut sys = QubitSystem::identical(s.n_qubits, p.omega0 * w, drive(config, p.f));
    if let Some(weights) = &s.weights {
        sys = sys.with_splitting_weights(weights.clone());
    }
    let kind = match s.coupling {
        CouplingName::None => return sys,
        CouplingName::Exchange => CouplingKind::Exchange,
        CouplingName::Xx => CouplingKind::Xx,
        CouplingName::TiltedDipole => CouplingKind::TiltedDipole,
    };
    sys.with_all_to_all(kind, p.c * w)
}

fn subspace(config: &SweepConfig) -> SubspaceBasis {
    match config.system.subspace {
        SubspaceName::Full => SubspaceBasis::full(config.system.n_qubits),
        SubspaceName::Symmetric => SubspaceBasis::symmetric_dicke(config.system.n_qubits),
    }
}

fn drive_class(config: &SweepConfig) -> DriveClass {
    match config.drive.kind {
        DriveName::Monochromatic => DriveClass::Monochromatic,
        DriveName::Bichromatic => DriveClass::Bichromatic,
        DriveName::Sawtooth => DriveClass::Sawtooth,
        DriveName::DeltaKick => DriveClass::DeltaKick,
    }
}

fn single_params(config: &SweepConfig, p: Point) -> SingleQubitParams {
    let w = config.drive.omega;
    let mut params = SingleQubitParams::new(p.omega0 * w, w, p.f * w);
    if config.drive.kind == DriveName::Bichromatic {
        params.f_prime = config.drive.second_ratio * p.f * w;
    }
    params
}

/// Single-qubit `μ`: Fourier for smooth drives, the propagator otherwise.
fn mu(config: &SweepConfig, p: Point) -> Result<f64, String> {
    let backend = match config.drive.kind {
        DriveName::Monochromatic | DriveName::Bichromatic => Backend::Fourier,
        DriveName::Sawtooth | DriveName::DeltaKick => Backend::Monodromy,
    };
    mu_numeric_with(&single_params(config, p), drive_class(config), backend).map_err(|e| e.to_string())
}

/// `mu, n, deviation, corridor, allowed` for the configured level pair.
///
/// The product levels `(N − 2i)μ` and `(N − 2j)μ` have generalized parities
/// differing by `(−1)^{j−i}`, which is all the selection rule needs.
fn prediction_values(config: &SweepConfig, p: Point) -> Result<Vec<Value>, String> {
    let w = config.drive.omega;
    let mu = mu(config, p)?;
    let (i, j) = config.pair();
    let denom = 2 * (j - i) as i64;
    let parities =
        generalized_parity_holds(&system(config, p)).then_some((1i8, if (j - i) % 2 == 0 { 1i8 } else { -1 }));
    let tol = p.c * w;
    let pred = predict(mu, w, denom, parities, tol);
    let corridor = corridor_mask(&[mu], w, denom, tol)[0];
    Ok(vec![
        Value::Float(mu / w),
        Value::Int(pred.n),
        Value::Float(pred.deviation),
        Value::Bool(corridor),
        Value::Bool(pred.allowed),
    ])
}

fn prediction(config: &SweepConfig, p: Point) -> PointResult {
    Ok((prediction_values(config, p)?, "ok"))
}

fn single_qubit(config: &SweepConfig, p: Point) -> PointResult {
    let w = config.drive.omega;
    let params = single_params(config, p);
    let mut values = vec![Value::Float(mu(config, p)? / w)];
    match config.drive.kind {
        DriveName::Monochromatic => {
            values.push(Value::Float(mu_rwa(&params) / w));
            values.push(Value::Float(mu_bessel(&params) / w));
        }
        DriveName::Sawtooth => values.push(Value::Float(mu_sawtooth(&params).map_err(|e| e.to_string())? / w)),
        DriveName::DeltaKick => values.push(Value::Float(mu_delta_kick(&params).map_err(|e| e.to_string())? / w)),
        DriveName::Bichromatic => {}
    }
    Ok((values, "ok"))
}

pub fn solve_options(config: &SweepConfig, backend: BackendName) -> SolveOptions {
    let n = &config.numerics;
    let mut options = match backend {
        BackendName::Fourier => SolveOptions::default(),
        BackendName::Monodromy => SolveOptions::monodromy(),
    };
    options.truncation = match n.truncation {
        TruncationName::Adaptive => Truncation::Adaptive {
            margin: n.margin,
            tol: n.tolerance,
            max_m: n.max_m,
        },
        TruncationName::Rule => Truncation::Rule { margin: n.margin },
        TruncationName::Fixed => Truncation::Fixed(n.m),
    };
    options
}

fn solve_point(config: &SweepConfig, p: Point, backend: BackendName) -> Result<FloquetSpectrum, String> {
    let sys = system(config, p);
    let model = DrivenModel::project(&sys, &subspace(config)).map_err(|e| e.to_string())?;
    let mut options = solve_options(config, backend);
    if backend == BackendName::Fourier && generalized_parity_holds(&sys) {
        if let Some(z) = &model.parity {
            options
                .diagonalize
                .symmetries
                .push(Symmetry::GeneralizedParity(z.clone()));
        }
    }
    solve(&model, &options).map_err(|e| e.to_string())
}

fn quasi_energies(spec: &FloquetSpectrum, w: f64) -> impl Iterator<Item = Value> + '_ {
    spec.quasi_energies().into_iter().map(move |e| Value::Float(e / w))
}

fn spectrum(config: &SweepConfig, p: Point) -> PointResult {
    let spec = solve_point(config, p, config.numerics.backend)?;
    let mut values: Vec<Value> = quasi_energies(&spec, config.drive.omega).collect();
    values.push(Value::Int(spec.m_max.unwrap_or(0) as i64));
    values.push(Value::Float(spec.orthonormality_defect()));
    values.push(Value::Bool(spec.any_degenerate()));
    Ok((values, "ok"))
}

fn sweep(config: &SweepConfig, p: Point) -> PointResult {
    let mut values = prediction_values(config, p)?;
    let spec = solve_point(config, p, config.numerics.backend)?;
    values.extend(quasi_energies(&spec, config.drive.omega));
    if let Some(m) = measure(config) {
        let ent = (0..spec.len())
            .map(|i| time_averaged_entanglement(&spec, i, m, config.numerics.n_samples).map(|r| r.mean))
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| e.to_string())?;
        let lo = ent.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = ent.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        values.extend(ent.into_iter().map(Value::Float));
        values.push(Value::Float(lo));
        values.push(Value::Float(hi));
    }
    values.push(Value::Bool(spec.any_degenerate()));
    Ok((values, "ok"))
}

/// Largest distance, in units of `ω`, from a quasi-energy of one backend to
/// the nearest one of the other, taken both ways.
pub fn backend_disagreement(a: &[f64], b: &[f64], omega: f64) -> f64 {
    let one_way = |p: &[f64], q: &[f64]| {
        p.iter()
            .map(|&x| {
                q.iter()
                    .map(|&y| zone_distance(x, y, omega))
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a)) / omega
}

fn validate(config: &SweepConfig, p: Point) -> PointResult {
    if config.drive.kind == DriveName::DeltaKick {
        return Err("delta-kick drives have no Fourier backend to compare".into());
    }
    let fourier = solve_point(config, p, BackendName::Fourier)?;
    let mut mono_config = config.clone();
    mono_config.numerics.backend = BackendName::Monodromy;
    let mono = solve_point(&mono_config, p, BackendName::Monodromy)?;
    let diff = backend_disagreement(&fourier.quasi_energies(), &mono.quasi_energies(), config.drive.omega);
    let status = if diff <= config.numerics.validate_tolerance {
        "ok"
    } else {
        "mismatch"
    };
    Ok((
        vec![Value::Float(diff), Value::Int(fourier.m_max.unwrap_or(0) as i64)],
        status,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(task_cols: &str) -> SweepConfig {
        SweepConfig::from_toml(&format!(
            r#"
[system]
n_qubits = 2
coupling = "exchange"
c = 0.02
{task_cols}
[drive]
kind = "monochromatic"
[grid]
x = {{ param = "F", min = 0.0, max = 3.0, points = 2 }}
y = {{ param = "omega0", min = 0.0, max = 3.0, points = 2 }}
"#
        ))
        .unwrap()
    }

    #[test]
    fn axes_override_defaults() {
        let c = config("");
        let p = Point::at(&c, 0.7, 1.3);
        assert_eq!(
            p,
            Point {
                f: 0.7,
                omega0: 1.3,
                c: 0.02
            }
        );
    }

    #[test]
    fn every_task_fills_its_columns() {
        for sub in ["", "subspace = \"symmetric\""] {
            let c = config(sub);
            for task in [
                Task::Sweep,
                Task::Spectrum,
                Task::Predict,
                Task::SingleQubit,
                Task::Validate,
            ] {
                let v = evaluate(&c, task, 0.5, 1.0);
                assert_eq!(v.len(), value_columns(&c, task).len(), "{task:?}");
                assert_eq!(v.last(), Some(&Value::Text("ok".into())), "{task:?} {v:?}");
            }
        }
    }

    #[test]
    fn failures_become_flagged_nan_rows() {
        let mut c = config("");
        c.numerics.truncation = TruncationName::Adaptive;
        c.numerics.max_m = 8;
        c.numerics.tolerance = 1e-15;
        let v = evaluate(&c, Task::Spectrum, 3.0, 1.0);
        let Value::Text(status) = v.last().unwrap() else {
            panic!()
        };
        assert!(status.starts_with("error: "), "{status}");
        assert!(!status.contains(','));
        assert!(v[..v.len() - 1]
            .iter()
            .all(|x| matches!(x, Value::Float(f) if f.is_nan())));
    }

    #[test]
    fn disagreement_wraps_around_the_zone() {
        assert!(backend_disagreement(&[0.4999999], &[-0.5], 1.0) < 2e-7);
        assert!((backend_disagreement(&[0.1, 0.2], &[0.1], 1.0) - 0.1).abs() < 1e-15);
    }
}
