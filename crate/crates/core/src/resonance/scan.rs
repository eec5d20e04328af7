//! One-parameter scans across an avoided crossing.
//!
//! Every scan point is solved independently. The two Floquet states taking
//! part in the crossing are identified by their weight on the rest classes
//! of two unperturbed reference states, so no information flows between
//! neighbouring points and the points can be evaluated in parallel.

use rayon::prelude::*;

use crate::entanglement::{time_averaged_entanglement, EntanglementMeasure, DEFAULT_SAMPLES};
use crate::error::{FloquetError, Result};
use crate::floquet::{
    solve, truncation_rule, zone_distance, Backend, FourierBlocks, FourierStack, SolveOptions, Truncation,
    DEFAULT_MARGIN,
};
use crate::linalg::{CMatrix, C64};
use crate::model::{symmetric_noninteracting_states, DrivenModel, QubitSystem, SubspaceBasis, SubspaceKind};
use crate::single_qubit::single_qubit_floquet;

use super::{coupling_matrix_element, interaction_blocks, rest_class_weight};

/// Two unperturbed Floquet states in the working basis of the scanned model.
#[derive(Clone, Debug)]
pub struct ReferencePair {
    pub a: FourierStack,
    pub b: FourierStack,
    /// Extended-space eigenvalues of the stacks (unfolded).
    pub energy_a: f64,
    pub energy_b: f64,
    /// Perturbation whose first-order element splits the pair.
    pub perturbation: Option<FourierBlocks>,
}

impl ReferencePair {
    /// `n` such that `energy_a + nω` is closest to `energy_b`.
    pub fn photon_index(&self, omega: f64) -> i64 {
        ((self.energy_b - self.energy_a) / omega).round() as i64
    }

    /// Signed `energy_a + nω − energy_b`.
    pub fn detuning(&self, omega: f64) -> f64 {
        self.energy_a + self.photon_index(omega) as f64 * omega - self.energy_b
    }

    /// `c_ab` between `a` moved into the zone of `b` and `b`.
    pub fn coupling(&self, omega: f64) -> Option<Result<C64>> {
        let v = self.perturbation.as_ref()?;
        let n = self.photon_index(omega);
        let a = self.a.resized(self.a.m_max() + n.unsigned_abs() as usize).shifted(n);
        Some(coupling_matrix_element(&a, &self.b, v))
    }
}

/// Symmetrized products `S_i`, `S_j` of identical driven qubits (`S_i` has
/// `i` factors `φ₋`), restricted to `subspace`, with the couplings of
/// `system` as perturbation.
pub fn dicke_reference(system: &QubitSystem, subspace: &SubspaceBasis, i: usize, j: usize) -> Result<ReferencePair> {
    let n = system.n_qubits;
    if i > n || j > n || i == j {
        return Err(FloquetError::InvalidArgument(format!(
            "level pair ({i}, {j}) invalid for {n} qubits"
        )));
    }
    let w0 = system.effective_splitting(0);
    let uniform = (0..n).all(|q| system.effective_splitting(q) == w0 && system.drive_scale(q) == 1.0);
    if !uniform {
        return Err(FloquetError::InvalidArgument(
            "reference states need identical qubits with unit drive scale".into(),
        ));
    }
    // generous window: the references set the accuracy of overlaps and c_ab
    let m = truncation_rule(system.drive.peak_amplitude(), system.omega(), DEFAULT_MARGIN) + 12;
    let qubit = single_qubit_floquet(w0, &system.drive, Some(m))?;
    let states = symmetric_noninteracting_states(&qubit, n)?;
    let to_working = |s: &FourierStack| -> FourierStack {
        if subspace.kind == SubspaceKind::Full {
            s.clone()
        } else {
            let bt: CMatrix = subspace.basis_vectors.adjoint();
            s.apply_static(&bt)
        }
    };
    Ok(ReferencePair {
        a: to_working(&states[i].stack),
        b: to_working(&states[j].stack),
        energy_a: states[i].raw_energy,
        energy_b: states[j].raw_energy,
        perturbation: Some(interaction_blocks(system, subspace)?),
    })
}

/// Statistic over all Floquet states used to locate the entanglement peak.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    LeastEntangled,
    MostEntangled,
}

impl Objective {
    fn evaluate(self, values: &[f64]) -> f64 {
        match self {
            Objective::LeastEntangled => values.iter().copied().fold(f64::INFINITY, f64::min),
            Objective::MostEntangled => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub solve: SolveOptions,
    pub measure: Option<EntanglementMeasure>,
    pub objective: Objective,
    pub n_samples: usize,
    /// Golden-section termination, relative to the parameter value.
    pub rel_tol: f64,
    /// Points of the dense scan around the gap minimum.
    pub local_points: usize,
    /// Half-width of the dense scan in units of the crossing width.
    pub local_widths: f64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            // near-resonant stacks decay slowly; the plain rule leaves norm
            // defects far above what the entanglement measures accept
            solve: SolveOptions::default().with_truncation(Truncation::Adaptive {
                margin: DEFAULT_MARGIN,
                tol: 1e-10,
                max_m: 128,
            }),
            measure: None,
            objective: Objective::LeastEntangled,
            n_samples: DEFAULT_SAMPLES,
            rel_tol: 1e-6,
            local_points: 41,
            local_widths: 4.0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanPoint {
    pub x: f64,
    pub quasi_energies: Vec<f64>,
    /// Indices of the two states with the largest weight on the reference pair.
    pub pair: (usize, usize),
    /// Weights `(on a, on b)` of the two pair states.
    pub weights: [(f64, f64); 2],
    pub gap: f64,
    /// Time-averaged entanglement of every state (empty without a measure).
    pub entanglement: Vec<f64>,
    /// Unperturbed detuning `ε_a + nω − ε_b`.
    pub detuning: f64,
}

impl ScanPoint {
    pub fn least_entangled(&self) -> f64 {
        Objective::LeastEntangled.evaluate(&self.entanglement)
    }

    pub fn most_entangled(&self) -> f64 {
        Objective::MostEntangled.evaluate(&self.entanglement)
    }
}

#[derive(Clone, Debug)]
pub struct CrossingReport {
    /// Coarse scan, in parameter order.
    pub points: Vec<ScanPoint>,
    /// Point of minimal gap after golden-section refinement.
    pub center: ScanPoint,
    /// First-order element of the reference pair at the center.
    pub coupling: Option<C64>,
    pub photon_index: i64,
    /// Dense scan around the center.
    pub local: Vec<ScanPoint>,
    /// Maximum of the objective after refinement (center when no measure is set).
    pub peak: ScanPoint,
}

impl CrossingReport {
    pub fn min_gap(&self) -> f64 {
        self.center.gap
    }
}

struct Evaluator<'a, M, R> {
    model_at: &'a M,
    reference_at: &'a R,
    config: &'a ScanConfig,
}

impl<M, R> Evaluator<'_, M, R>
where
    M: Fn(f64) -> Result<DrivenModel> + Sync,
    R: Fn(f64) -> Result<ReferencePair> + Sync,
{
    fn point(&self, x: f64) -> Result<ScanPoint> {
        let model = (self.model_at)(x)?;
        let reference = (self.reference_at)(x)?;
        let omega = model.omega();
        let spec = solve(&model, &self.config.solve)?;
        let mut scored = Vec::with_capacity(spec.len());
        for (i, st) in spec.states.iter().enumerate() {
            let stack = st
                .stack
                .as_ref()
                .ok_or_else(|| FloquetError::InvalidArgument("crossing scans need Fourier stacks".into()))?;
            let wa = rest_class_weight(&reference.a, stack)?;
            let wb = rest_class_weight(&reference.b, stack)?;
            scored.push((i, wa, wb));
        }
        scored.sort_by(|p, q| (q.1 + q.2).total_cmp(&(p.1 + p.2)).then(p.0.cmp(&q.0)));
        let (mut p, mut q) = (scored[0], scored[1]);
        if p.0 > q.0 {
            std::mem::swap(&mut p, &mut q);
        }
        let eps = spec.quasi_energies();
        let entanglement = match self.config.measure {
            Some(measure) => (0..spec.len())
                .map(|i| time_averaged_entanglement(&spec, i, measure, self.config.n_samples).map(|r| r.mean))
                .collect::<Result<Vec<f64>>>()?,
            None => Vec::new(),
        };
        Ok(ScanPoint {
            x,
            gap: zone_distance(eps[p.0], eps[q.0], omega),
            quasi_energies: eps,
            pair: (p.0, q.0),
            weights: [(p.1, p.2), (q.1, q.2)],
            entanglement,
            detuning: reference.detuning(omega),
        })
    }

    fn objective(&self, x: f64) -> Result<f64> {
        Ok(self.config.objective.evaluate(&self.point(x)?.entanglement))
    }
}

/// Scans `x` over `n_points` equidistant values in `range`, locates the
/// minimal gap between the two states that carry the reference pair, and
/// the entanglement peak next to it.
///
/// Fails with [`FloquetError::NoCrossing`] when the smallest coarse gap sits
/// on the boundary of the range.
pub fn crossing_scan<M, R>(
    model_at: M,
    reference_at: R,
    range: (f64, f64),
    n_points: usize,
    config: &ScanConfig,
) -> Result<CrossingReport>
where
    M: Fn(f64) -> Result<DrivenModel> + Sync,
    R: Fn(f64) -> Result<ReferencePair> + Sync,
{
    if n_points < 3 || !(range.1 > range.0) {
        return Err(FloquetError::InvalidArgument(
            "a scan needs at least 3 points on a non-empty range".into(),
        ));
    }
    if config.solve.backend != Backend::Fourier {
        return Err(FloquetError::InvalidArgument(
            "crossing scans need the Fourier backend".into(),
        ));
    }
    let ev = Evaluator {
        model_at: &model_at,
        reference_at: &reference_at,
        config,
    };
    let step = (range.1 - range.0) / (n_points - 1) as f64;
    let xs: Vec<f64> = (0..n_points).map(|i| range.0 + step * i as f64).collect();
    let points = xs.par_iter().map(|&x| ev.point(x)).collect::<Result<Vec<_>>>()?;

    let imin = (0..n_points)
        .min_by(|&a, &b| points[a].gap.total_cmp(&points[b].gap))
        .unwrap();
    if imin == 0 || imin == n_points - 1 {
        return Err(FloquetError::NoCrossing);
    }
    let gap_at = |x: f64| ev.point(x).map(|p| p.gap);
    let tol = config.rel_tol * xs[imin].abs().max(step);
    let x0 = golden_section_min(gap_at, xs[imin - 1], xs[imin + 1], tol)?;
    let center = ev.point(x0)?;
    let reference = reference_at(x0)?;
    let omega = model_at(x0)?.omega();
    let coupling = reference.coupling(omega).transpose()?;

    // crossing width from the unperturbed detuning slope
    let h = step * 1e-3;
    let slope = ((reference_at(x0 + h)?.detuning(omega) - reference_at(x0 - h)?.detuning(omega)) / (2.0 * h)).abs();
    let width = if slope > 0.0 {
        (center.gap / slope).min(step)
    } else {
        step
    };
    let half = config.local_widths * width;
    let m = config.local_points.max(3);
    let local_x: Vec<f64> = (0..m)
        .map(|i| x0 - half + 2.0 * half * i as f64 / (m - 1) as f64)
        .collect();
    let local = local_x.par_iter().map(|&x| ev.point(x)).collect::<Result<Vec<_>>>()?;

    let peak = if config.measure.is_some() {
        let best = (0..m)
            .max_by(|&a, &b| {
                let fa = config.objective.evaluate(&local[a].entanglement);
                let fb = config.objective.evaluate(&local[b].entanglement);
                fa.total_cmp(&fb)
            })
            .unwrap();
        let spacing = 2.0 * half / (m - 1) as f64;
        let xp = golden_section_min(
            |x| ev.objective(x).map(|v| -v),
            local_x[best] - spacing,
            local_x[best] + spacing,
            (tol * 1e-3).max(spacing * 1e-6),
        )?;
        let refined = ev.point(xp)?;
        let better =
            config.objective.evaluate(&refined.entanglement) >= config.objective.evaluate(&local[best].entanglement);
        if better {
            refined
        } else {
            local[best].clone()
        }
    } else {
        center.clone()
    };

    Ok(CrossingReport {
        points,
        photon_index: reference.photon_index(omega),
        center,
        coupling,
        local,
        peak,
    })
}

/// Golden-section search for a minimum of `f` on `[a, b]`, stopping once the
/// bracket is narrower than `tol`.
pub fn golden_section_min<F>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc < fd { c } else { d })
}
