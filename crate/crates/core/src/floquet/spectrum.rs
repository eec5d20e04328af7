//! Floquet spectra: zone selection, degenerate-subspace resolution, gauge
//! fixing and time-domain reconstruction.

use std::sync::Arc;

use crate::error::{FloquetError, Result};
use crate::linalg::{c, eigh, unitary_or_hermitian_eigen, CMatrix, CVector, C64};

use super::matrix::FloquetMatrix;
use super::monodromy::PropagatorTable;
use super::stack::FourierStack;

/// Relative tolerance (in units of `ω`) below which quasi-energies count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Backend {
    Fourier,
    Monodromy,
}

/// A symmetry used to pick a basis inside degenerate quasi-energy clusters.
#[derive(Clone, Debug, PartialEq)]
pub enum Symmetry {
    /// Time-independent unitary commuting with `H(t)`, applied to every component.
    Static(CMatrix),
    /// `P` combined with a half-period shift: acts as `(−1)^k P` on `Φ̃(k)`.
    GeneralizedParity(CMatrix),
}

impl Symmetry {
    fn apply(&self, s: &FourierStack) -> FourierStack {
        match self {
            Symmetry::Static(u) => s.apply_static(u),
            Symmetry::GeneralizedParity(p) => s.apply_generalized_parity(p),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagonalizeOptions {
    /// Applied in order inside each degenerate cluster.
    pub symmetries: Vec<Symmetry>,
    /// Degeneracy tolerance in units of `ω`.
    pub degeneracy_tol: f64,
    /// Width (in units of `ω`) of the window around `±ω/2` treated as a tie.
    pub boundary_tol: f64,
}

impl Default for DiagonalizeOptions {
    fn default() -> Self {
        DiagonalizeOptions {
            symmetries: Vec::new(),
            degeneracy_tol: DEGENERACY_TOL,
            boundary_tol: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FloquetState {
    /// Folded quasi-energy in `[−ω/2, ω/2)`.
    pub quasi_energy: f64,
    /// The stored stack has eigenvalue `quasi_energy + zone_offset·ω`.
    pub zone_offset: i64,
    pub residual: f64,
    /// `Φ(0)`.
    pub initial: CVector,
    /// Fourier components (Fourier backend only).
    pub stack: Option<FourierStack>,
    /// Eigenvalue (or expectation value) of each requested symmetry.
    pub symmetry_labels: Vec<C64>,
    /// Member of a degenerate cluster.
    pub degenerate: bool,
}

impl FloquetState {
    /// Stack whose eigenvalue is the folded quasi-energy itself.
    pub fn zone_stack(&self) -> Option<FourierStack> {
        self.stack.as_ref().map(|s| s.shifted(-self.zone_offset))
    }
}

#[derive(Clone, Debug)]
pub struct FloquetSpectrum {
    pub omega: f64,
    pub dim: usize,
    pub backend: Backend,
    /// Sorted by quasi-energy.
    pub states: Vec<FloquetState>,
    pub m_max: Option<usize>,
    pub unitarity_defect: Option<f64>,
    /// Working basis inside the full register (`None` for the full space).
    pub embedding: Option<CMatrix>,
    pub(crate) propagator: Option<Arc<PropagatorTable>>,
}

impl FloquetSpectrum {
    pub fn quasi_energies(&self) -> Vec<f64> {
        self.states.iter().map(|s| s.quasi_energy).collect()
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `|Φ_i(t)⟩`; `t` is reduced modulo `T`.
    pub fn state_at(&self, i: usize, t: f64) -> Result<CVector> {
        let state = self.states.get(i).ok_or_else(|| {
            FloquetError::InvalidArgument(format!("state index {i} out of range ({} states)", self.len()))
        })?;
        let t = t.rem_euclid(self.period());
        if let Some(stack) = &state.stack {
            return Ok(stack.value_at(t, self.omega));
        }
        let table = self.propagator.as_ref().ok_or_else(|| {
            FloquetError::InvalidArgument("spectrum carries neither Fourier stacks nor a propagator table".into())
        })?;
        let u = table.propagator_to(t);
        Ok((u * &state.initial) * c(0.0, state.quasi_energy * t).exp())
    }

    /// `|Φ_i(t)⟩` lifted to the full register.
    pub fn full_state_at(&self, i: usize, t: f64) -> Result<CVector> {
        let v = self.state_at(i, t)?;
        Ok(match &self.embedding {
            Some(b) => b * v,
            None => v,
        })
    }

    /// Largest deviation of the `t = 0` Gram matrix from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, a) in self.states.iter().enumerate() {
            for (j, b) in self.states.iter().enumerate() {
                let g = a.initial.dotc(&b.initial);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - c(target, 0.0)).norm());
            }
        }
        worst
    }

    /// `|Σ ε_i − mean_trace|` reduced modulo `ω`.
    pub fn sum_rule_defect(&self, mean_trace: f64) -> f64 {
        let total: f64 = self.quasi_energies().iter().sum();
        fold_to_zone(total - mean_trace, self.omega).abs()
    }

    pub fn any_degenerate(&self) -> bool {
        self.states.iter().any(|s| s.degenerate)
    }
}

/// Maps `energy` into the centered, half-open zone `[−ω/2, ω/2)`.
pub fn fold_to_zone(energy: f64, omega: f64) -> f64 {
    let mut r = energy - omega * (energy / omega + 0.5).floor();
    if r >= omega / 2.0 {
        r -= omega;
    }
    if r < -omega / 2.0 {
        r += omega;
    }
    r
}

/// Distance between two quasi-energies on the circle of circumference `ω`.
pub fn zone_distance(a: f64, b: f64, omega: f64) -> f64 {
    fold_to_zone(a - b, omega).abs()
}

/// Makes the largest-magnitude entry of `v` real and positive; returns the phase used.
pub(crate) fn gauge_phase(v: &CVector) -> C64 {
    let max = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return c(1.0, 0.0);
    }
    // first entry within rounding of the maximum, so ties resolve by index
    let pivot = v.iter().find(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap();
    pivot.conj() / pivot.norm()
}

/// Splits `group` (orthonormal columns) into symmetry-adapted subgroups.
pub(crate) fn resolve_cluster<F>(group: Vec<CVector>, n_symmetries: usize, apply: F) -> Vec<(CVector, Vec<C64>)>
where
    F: Fn(usize, &CVector) -> CVector,
{
    let mut groups: Vec<(Vec<CVector>, Vec<Vec<C64>>)> = vec![(group.clone(), vec![Vec::new(); group.len()])];
    for s in 0..n_symmetries {
        let mut next = Vec::new();
        for (vecs, labels) in groups {
            let m = vecs.len();
            let v = CMatrix::from_columns(&vecs);
            let images: Vec<CVector> = vecs.iter().map(|x| apply(s, x)).collect();
            let g = v.adjoint() * CMatrix::from_columns(&images);
            let (vals, w) = if m == 1 {
                (vec![g[(0, 0)]], CMatrix::identity(1, 1))
            } else {
                unitary_or_hermitian_eigen(&g)
            };
            let rotated = &v * &w;
            let mut order: Vec<usize> = (0..m).collect();
            order.sort_by(|&a, &b| label_key(vals[a]).total_cmp(&label_key(vals[b])));
            let mut current: (Vec<CVector>, Vec<Vec<C64>>) = (Vec::new(), Vec::new());
            let mut last: Option<C64> = None;
            for &j in &order {
                if let Some(prev) = last {
                    if (vals[j] - prev).norm() > 1e-6 {
                        next.push(std::mem::take(&mut current));
                    }
                }
                // labels of earlier symmetries are shared by the whole group
                let mut lab = labels[0].clone();
                lab.push(vals[j]);
                current.0.push(rotated.column(j).clone_owned());
                current.1.push(lab);
                last = Some(vals[j]);
            }
            next.push(current);
        }
        groups = next;
    }
    groups
        .into_iter()
        .flat_map(|(vecs, labels)| vecs.into_iter().zip(labels))
        .collect()
}

/// Sort key for symmetry eigenvalues: phase angle in `(−π, π]`, then modulus.
fn label_key(z: C64) -> f64 {
    let mut a = z.arg();
    if a <= -std::f64::consts::PI + 1e-9 {
        a = std::f64::consts::PI;
    }
    a + 1e-3 * z.norm()
}

/// Full Hermitian diagonalization of the extended-space matrix and selection
/// of one representative per rest class in `[−ω/2, ω/2)`.
pub fn diagonalize_floquet(
    matrix: &FloquetMatrix,
    hilbert_dim: usize,
    options: &DiagonalizeOptions,
) -> Result<FloquetSpectrum> {
    if hilbert_dim != matrix.block_dim {
        return Err(FloquetError::DimensionMismatch {
            expected: matrix.block_dim,
            found: hilbert_dim,
        });
    }
    let omega = matrix.omega;
    let half = omega / 2.0;
    let d = hilbert_dim;
    let m = matrix.m_max;
    let (vals, vecs) = eigh(&matrix.assembled);
    let btol = options.boundary_tol * omega;

    let stack_of = |j: usize| FourierStack::from_flat(d, m, vecs.column(j).clone_owned());
    let mut chosen: Vec<usize> = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for (j, &v) in vals.iter().enumerate() {
        if (v + half).abs() <= btol {
            lower.push(j);
        } else if (v - half).abs() <= btol {
            upper.push(j);
        } else if v > -half && v < half {
            chosen.push(j);
        }
    }
    // pair homologues across the boundary: shifting an upper-edge stack down
    // by one index lands on a lower-edge stack
    let mut lower_free = lower.clone();
    for &u in &upper {
        let down = stack_of(u).shifted(-1);
        let best = lower_free
            .iter()
            .enumerate()
            .map(|(pos, &l)| (pos, stack_of(l).inner(&down).norm()))
            .max_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((pos, overlap)) if overlap > 0.5 => {
                let l = lower_free.remove(pos);
                let keep_upper = stack_of(u).centroid().abs() < stack_of(l).centroid().abs();
                chosen.push(if keep_upper { u } else { l });
            }
            _ => {
                if vals[u] < half {
                    chosen.push(u);
                }
            }
        }
    }
    chosen.extend(lower_free.into_iter().filter(|&l| vals[l] >= -half));
    if chosen.len() != d {
        return Err(FloquetError::ZoneCount {
            found: chosen.len(),
            expected: d,
        });
    }
    chosen.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]).then(a.cmp(&b)));

    // clusters of (nearly) equal raw eigenvalues
    let dtol = options.degeneracy_tol * omega;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &j in &chosen {
        match clusters.last_mut() {
            Some(cl) if vals[j] - vals[*cl.last().unwrap()] <= dtol => cl.push(j),
            _ => clusters.push(vec![j]),
        }
    }

    let syms = &options.symmetries;
    let a = &matrix.assembled;
    let mut states = Vec::with_capacity(d);
    for cl in clusters {
        let degenerate = cl.len() > 1;
        let group: Vec<CVector> = cl.iter().map(|&j| vecs.column(j).clone_owned()).collect();
        let resolved = if degenerate {
            resolve_cluster(group, syms.len(), |s, v| {
                syms[s].apply(&FourierStack::from_flat(d, m, v.clone())).flat().clone()
            })
        } else {
            let v = group.into_iter().next().unwrap();
            let labels = syms
                .iter()
                .map(|s| {
                    let sv = s.apply(&FourierStack::from_flat(d, m, v.clone()));
                    v.dotc(sv.flat())
                })
                .collect();
            vec![(v, labels)]
        };
        for (v, labels) in resolved {
            let av = a * &v;
            let lambda = v.dotc(&av).re;
            let residual = (&av - &v * c(lambda, 0.0)).norm();
            let stack = FourierStack::from_flat(d, m, v);
            let phase = gauge_phase(&stack.at_zero());
            let stack = stack.scaled(phase);
            let eps = fold_to_zone(lambda, omega);
            let zone_offset = ((lambda - eps) / omega).round() as i64;
            states.push(FloquetState {
                quasi_energy: eps,
                zone_offset,
                residual,
                initial: stack.at_zero(),
                stack: Some(stack),
                symmetry_labels: labels,
                degenerate,
            });
        }
    }
    sort_states(&mut states);
    Ok(FloquetSpectrum {
        omega,
        dim: d,
        backend: Backend::Fourier,
        states,
        m_max: Some(m),
        unitarity_defect: None,
        embedding: None,
        propagator: None,
    })
}

/// Stable sort by folded quasi-energy.
pub(crate) fn sort_states(states: &mut [FloquetState]) {
    states.sort_by(|a, b| a.quasi_energy.total_cmp(&b.quasi_energy));
}
