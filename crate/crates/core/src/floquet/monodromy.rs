//! One-period propagator `U(0, T)` by exponential time stepping, and the
//! quasi-energies from its eigenphases.

use std::sync::Arc;

use crate::error::{FloquetError, Result};
use crate::linalg::{c, commutator, expm_neg_i, frobenius, normal_eigen, CMatrix, CVector, I};
use crate::model::DrivenModel;

use super::spectrum::{
    fold_to_zone, gauge_phase, resolve_cluster, sort_states, zone_distance, Backend, FloquetSpectrum, FloquetState,
    Symmetry, DEGENERACY_TOL,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stepper {
    /// Fourth-order Magnus step on two Gauss nodes.
    Magnus4,
    /// `exp(−i h H(t + h/2))`.
    Midpoint,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonodromyOptions {
    pub steps: usize,
    pub stepper: Stepper,
    /// Allowed quasi-energy drift under step doubling, in units of `ω`.
    pub tolerance: f64,
    pub max_doublings: usize,
    /// Keep `U(0, t_n)` on the step grid for time-domain reconstruction.
    pub store_table: bool,
    /// Only [`Symmetry::Static`] is meaningful here.
    pub symmetries: Vec<Symmetry>,
    pub degeneracy_tol: f64,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions {
            steps: 2048,
            stepper: Stepper::Magnus4,
            tolerance: 1e-10,
            max_doublings: 6,
            store_table: true,
            symmetries: Vec::new(),
            degeneracy_tol: DEGENERACY_TOL,
        }
    }
}

/// Propagators `U(0, t_n)` on a uniform grid plus what is needed to step
/// to intermediate times.
#[derive(Debug)]
pub(crate) struct PropagatorTable {
    model: DrivenModel,
    stepper: Stepper,
    h: f64,
    table: Vec<CMatrix>,
    kick: bool,
}

impl PropagatorTable {
    pub(crate) fn propagator_to(&self, t: f64) -> CMatrix {
        if self.kick {
            // kicks sit at the end of each period
            return expm_neg_i(&self.model.static_part.scale(t));
        }
        let n = ((t / self.h).floor() as usize).min(self.table.len() - 1);
        let tau = t - n as f64 * self.h;
        if tau <= 0.0 {
            return self.table[n].clone();
        }
        step_propagator(&self.model, self.stepper, n as f64 * self.h, tau) * &self.table[n]
    }
}

/// Propagator over `[t, t + h]`.
fn step_propagator(model: &DrivenModel, stepper: Stepper, t: f64, h: f64) -> CMatrix {
    let k = match stepper {
        Stepper::Midpoint => model.hamiltonian_at(t + h / 2.0).scale(h),
        Stepper::Magnus4 => {
            let off = 3f64.sqrt() / 6.0;
            let h1 = model.hamiltonian_at(t + (0.5 - off) * h);
            let h2 = model.hamiltonian_at(t + (0.5 + off) * h);
            let comm = commutator(&h2, &h1);
            (&h1 + &h2).scale(h / 2.0) - comm * (I * (3f64.sqrt() * h * h / 12.0))
        }
    };
    expm_neg_i(&k)
}

fn propagate(model: &DrivenModel, stepper: Stepper, steps: usize, keep: bool) -> (CMatrix, Vec<CMatrix>) {
    let h = model.period() / steps as f64;
    let d = model.dim();
    let mut u = CMatrix::identity(d, d);
    let mut table = Vec::new();
    for n in 0..steps {
        if keep {
            table.push(u.clone());
        }
        u = step_propagator(model, stepper, n as f64 * h, h) * u;
    }
    (u, table)
}

fn quasi_energies_of(u: &CMatrix, omega: f64) -> Vec<f64> {
    let period = std::f64::consts::TAU / omega;
    let (vals, _) = normal_eigen(u);
    let mut eps: Vec<f64> = vals.iter().map(|l| fold_to_zone(-l.arg() / period, omega)).collect();
    eps.sort_by(f64::total_cmp);
    eps
}

/// Largest distance from a quasi-energy in `a` to its nearest partner in `b`.
pub(crate) fn spectral_drift(a: &[f64], b: &[f64], omega: f64) -> f64 {
    a.iter()
        .map(|&x| {
            b.iter()
                .map(|&y| zone_distance(x, y, omega))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

/// `U(0, T)` and the Floquet spectrum read off its eigen-decomposition.
///
/// δ-kick drives are composed exactly as `U = e^{−iFT·D} e^{−iH_static T}`.
/// Otherwise the step count is doubled until the quasi-energies settle.
pub fn monodromy_propagator(model: &DrivenModel, options: &MonodromyOptions) -> Result<(CMatrix, FloquetSpectrum)> {
    if options.steps == 0 {
        return Err(FloquetError::InvalidArgument(
            "at least one time step is required".into(),
        ));
    }
    if options.symmetries.iter().any(|s| !matches!(s, Symmetry::Static(_))) {
        return Err(FloquetError::InvalidArgument(
            "the propagator backend only resolves degeneracies with static symmetries".into(),
        ));
    }
    let omega = model.omega();
    let period = model.period();
    let (u, table, steps) = if let Some(f) = model.drive.kick_amplitude() {
        let kick = expm_neg_i(&model.drive_operator.scale(f * period));
        let free = expm_neg_i(&model.static_part.scale(period));
        (kick * free, Vec::new(), 0)
    } else {
        let mut steps = options.steps;
        let (mut u, mut table) = propagate(model, options.stepper, steps, false);
        let mut eps = quasi_energies_of(&u, omega);
        let mut doublings = 0;
        loop {
            let (u2, _) = propagate(model, options.stepper, 2 * steps, false);
            let eps2 = quasi_energies_of(&u2, omega);
            let drift = spectral_drift(&eps, &eps2, omega).max(spectral_drift(&eps2, &eps, omega));
            steps *= 2;
            u = u2;
            eps = eps2;
            if drift <= options.tolerance * omega {
                break;
            }
            doublings += 1;
            if doublings > options.max_doublings {
                return Err(FloquetError::NonConvergence {
                    drift,
                    tolerance: options.tolerance * omega,
                });
            }
        }
        if options.store_table {
            let (u_again, t) = propagate(model, options.stepper, steps, true);
            u = u_again;
            table = t;
        }
        (u, table, steps)
    };

    let d = model.dim();
    let unitarity_defect = frobenius(&(u.adjoint() * &u - CMatrix::identity(d, d)));
    let (lambdas, q) = normal_eigen(&u);
    let mut raw: Vec<(f64, CVector)> = lambdas
        .iter()
        .enumerate()
        .map(|(j, l)| (fold_to_zone(-l.arg() / period, omega), q.column(j).clone_owned()))
        .collect();
    raw.sort_by(|a, b| a.0.total_cmp(&b.0));

    let dtol = options.degeneracy_tol * omega;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for j in 0..raw.len() {
        match clusters.last_mut() {
            Some(cl) if zone_distance(raw[j].0, raw[*cl.last().unwrap()].0, omega) <= dtol => cl.push(j),
            _ => clusters.push(vec![j]),
        }
    }
    // the cluster straddling the zone edge wraps around
    if clusters.len() > 1 {
        let first = clusters[0][0];
        let last = *clusters.last().unwrap().last().unwrap();
        if zone_distance(raw[first].0, raw[last].0, omega) <= dtol {
            let tail = clusters.pop().unwrap();
            clusters[0].extend(tail);
        }
    }

    let syms: Vec<&CMatrix> = options
        .symmetries
        .iter()
        .map(|s| match s {
            Symmetry::Static(m) => m,
            Symmetry::GeneralizedParity(m) => m,
        })
        .collect();
    let mut states = Vec::with_capacity(d);
    for cl in clusters {
        let degenerate = cl.len() > 1;
        let group: Vec<CVector> = cl.iter().map(|&j| raw[j].1.clone()).collect();
        let group = if degenerate {
            let orth = crate::linalg::orthonormalize_columns(&CMatrix::from_columns(&group));
            orth.column_iter().map(|col| col.clone_owned()).collect()
        } else {
            group
        };
        let resolved = if degenerate {
            resolve_cluster(group, syms.len(), |s, v| syms[s] * v)
        } else {
            let v = group.into_iter().next().unwrap();
            let labels = syms.iter().map(|s| v.dotc(&(*s * &v))).collect();
            vec![(v, labels)]
        };
        for (v, labels) in resolved {
            let uv = &u * &v;
            let lambda = v.dotc(&uv);
            let residual = (&uv - &v * lambda).norm();
            let eps = fold_to_zone(-lambda.arg() / period, omega);
            let v = &v * gauge_phase(&v);
            states.push(FloquetState {
                quasi_energy: eps,
                zone_offset: 0,
                residual,
                initial: v,
                stack: None,
                symmetry_labels: labels,
                degenerate,
            });
        }
    }
    sort_states(&mut states);

    let propagator = (options.store_table || model.drive.is_delta_kick()).then(|| {
        Arc::new(PropagatorTable {
            model: model.clone(),
            stepper: options.stepper,
            h: if steps > 0 { period / steps as f64 } else { period },
            table,
            kick: model.drive.is_delta_kick(),
        })
    });
    Ok((
        u,
        FloquetSpectrum {
            omega,
            dim: d,
            backend: Backend::Monodromy,
            states,
            m_max: None,
            unitarity_defect: Some(unitarity_defect),
            embedding: None,
            propagator,
        },
    ))
}

/// Phase factor `e^{−iεT}` for a quasi-energy.
pub fn floquet_multiplier(eps: f64, omega: f64) -> crate::linalg::C64 {
    c(0.0, -eps * std::f64::consts::TAU / omega).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{PeriodicDrive, QubitSystem};

    #[test]
    fn undriven_propagator_is_diagonal_phase() {
        let sys = QubitSystem::identical(1, 0.6, PeriodicDrive::monochromatic(0.0, 1.0));
        let model = DrivenModel::full(&sys).unwrap();
        let (u, spec) = monodromy_propagator(&model, &MonodromyOptions::default()).unwrap();
        let t = std::f64::consts::TAU;
        assert!((u[(0, 0)] - c(0.0, -0.3 * t).exp()).norm() < 1e-12);
        assert!((u[(1, 1)] - c(0.0, 0.3 * t).exp()).norm() < 1e-12);
        let eps = spec.quasi_energies();
        assert!((eps[0] + 0.3).abs() < 1e-12 && (eps[1] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn delta_kick_closed_form_point() {
        // ω₀T = 2π, FT = π/3 ⇒ μ = ω/3
        let omega = 1.0;
        let f = omega / 6.0;
        let sys = QubitSystem::identical(1, omega, PeriodicDrive::delta_kick(f, omega));
        let model = DrivenModel::full(&sys).unwrap();
        let (_, spec) = monodromy_propagator(&model, &MonodromyOptions::default()).unwrap();
        let eps = spec.quasi_energies();
        assert!((eps[1] - omega / 3.0).abs() < 1e-12, "{eps:?}");
        assert!((eps[0] + omega / 3.0).abs() < 1e-12);
    }

    #[test]
    fn midpoint_rejects_impossible_tolerance() {
        let sys = QubitSystem::identical(1, 1.0, PeriodicDrive::monochromatic(2.0, 1.0));
        let model = DrivenModel::full(&sys).unwrap();
        let opts = MonodromyOptions {
            steps: 16,
            stepper: Stepper::Midpoint,
            tolerance: 1e-15,
            max_doublings: 1,
            ..MonodromyOptions::default()
        };
        assert!(matches!(
            monodromy_propagator(&model, &opts),
            Err(FloquetError::NonConvergence { .. })
        ));
    }

    #[test]
    fn table_reconstruction_is_periodic() {
        let sys = QubitSystem::identical(1, 0.7, PeriodicDrive::monochromatic(0.9, 1.0));
        let model = DrivenModel::full(&sys).unwrap();
        let (_, spec) = monodromy_propagator(&model, &MonodromyOptions::default()).unwrap();
        let t = spec.period();
        for i in 0..2 {
            let a = spec.state_at(i, 0.0).unwrap();
            let b = spec.state_at(i, t * (1.0 - 1e-12)).unwrap();
            assert!((a - b).norm() < 1e-8);
            assert!((spec.state_at(i, 1.234).unwrap().norm() - 1.0).abs() < 1e-10);
        }
    }
}
