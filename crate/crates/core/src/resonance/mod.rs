//! Entanglement-resonance prediction from single-qubit quasi-energies,
//! first-order coupling matrix elements, parity selection rules and
//! avoided-crossing scans.

mod scan;

pub use scan::{
    crossing_scan, dicke_reference, golden_section_min, CrossingReport, Objective, ReferencePair, ScanConfig, ScanPoint,
};

use std::collections::BTreeMap;

use crate::error::{FloquetError, Result};
use crate::floquet::{FourierBlocks, FourierStack};
use crate::linalg::{frobenius, C64, ZERO};
use crate::model::{parity_operator, QubitSystem, SubspaceBasis, SubspaceKind};

/// Where a level pair sits relative to its nearest degeneracy corridor.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonancePrediction {
    /// Photon index of the nearest degeneracy.
    pub n: i64,
    /// `2|i − j|` for levels `(N − 2i)μ` and `(N − 2j)μ`.
    pub denom: i64,
    /// `|denom·μ/ω − n|`.
    pub deviation: f64,
    pub allowed: bool,
    pub corridor_tolerance: f64,
}

impl ResonancePrediction {
    /// Unperturbed level distance `|ε_i − ε_j − nω|`.
    pub fn level_gap(&self, omega: f64) -> f64 {
        self.deviation * omega
    }

    pub fn in_corridor(&self, omega: f64) -> bool {
        in_corridor(self.deviation, omega, self.corridor_tolerance)
    }
}

/// Nearest `n` to `denom·μ/ω` and the distance `|denom·μ/ω − n|`.
pub fn degeneracy_deviation(mu: f64, omega: f64, denom: i64) -> (i64, f64) {
    let x = denom as f64 * mu / omega;
    let n = x.round();
    (n as i64, (x - n).abs())
}

/// Opposite generalized parities couple only across an odd number of zones.
pub fn parity_selection(parity_i: i8, parity_j: i8, n: i64) -> bool {
    let shifted = if n.rem_euclid(2) == 0 { parity_i } else { -parity_i };
    shifted == parity_j
}

/// Prediction for one level pair. `parities` is `None` when the generalized
/// parity is broken (by the drive or the coupling), which lifts the rule.
pub fn predict(mu: f64, omega: f64, denom: i64, parities: Option<(i8, i8)>, tolerance: f64) -> ResonancePrediction {
    let (n, deviation) = degeneracy_deviation(mu, omega, denom);
    let allowed = parities.is_none_or(|(pi, pj)| parity_selection(pi, pj, n));
    ResonancePrediction {
        n,
        denom,
        deviation,
        allowed,
        corridor_tolerance: tolerance,
    }
}

fn in_corridor(deviation: f64, omega: f64, tolerance: f64) -> bool {
    // levels closer than 2C
    deviation == 0.0 || deviation * omega < 2.0 * tolerance
}

/// `true` where the unperturbed pair comes closer than `2·tolerance`.
pub fn corridor_mask(mu_grid: &[f64], omega: f64, denom: i64, tolerance: f64) -> Vec<bool> {
    mu_grid
        .iter()
        .map(|&mu| in_corridor(degeneracy_deviation(mu, omega, denom).1, omega, tolerance))
        .collect()
}

/// `c = Σ_{k,l} ⟨a(k)|V_{l−k}|b(l)⟩`, the period average of `⟨a(t)|V(t)|b(t)⟩`.
/// The stacks may use different windows.
pub fn coupling_matrix_element(a: &FourierStack, b: &FourierStack, v: &FourierBlocks) -> Result<C64> {
    for d in [a.dim(), b.dim()] {
        if d != v.dim {
            return Err(FloquetError::DimensionMismatch {
                expected: v.dim,
                found: d,
            });
        }
    }
    let images: Vec<(i64, Vec<(i32, crate::linalg::CVector)>)> = b
        .indices()
        .map(|l| {
            let bl = b.component(l);
            (l, v.blocks.iter().map(|(&j, h)| (j, h * &bl)).collect())
        })
        .collect();
    let mut acc = ZERO;
    for k in a.indices() {
        let ak = a.component(k);
        if ak.norm_squared() == 0.0 {
            continue;
        }
        for (l, imgs) in &images {
            for (j, hb) in imgs {
                if (*l - k) == *j as i64 {
                    acc += ak.dotc(hb);
                }
            }
        }
    }
    Ok(acc)
}

/// Weight of `state` on the whole rest class of `reference`,
/// `Σ_s |⟨reference shifted by s|state⟩|²`.
pub fn rest_class_weight(reference: &FourierStack, state: &FourierStack) -> Result<f64> {
    if reference.dim() != state.dim() {
        return Err(FloquetError::DimensionMismatch {
            expected: reference.dim(),
            found: state.dim(),
        });
    }
    let mut overlaps: BTreeMap<i64, C64> = BTreeMap::new();
    let rc: Vec<_> = reference.indices().map(|k| (k, reference.component(k))).collect();
    for kv in state.indices() {
        let v = state.component(kv);
        if v.norm_squared() == 0.0 {
            continue;
        }
        for (kr, r) in &rc {
            *overlaps.entry(kv - kr).or_insert(ZERO) += r.dotc(&v);
        }
    }
    Ok(overlaps.values().map(|z| z.norm_sqr()).sum())
}

/// Static perturbation `H_qq` of `system` as Fourier blocks in `subspace`.
pub fn interaction_blocks(system: &QubitSystem, subspace: &SubspaceBasis) -> Result<FourierBlocks> {
    let v = system.interaction_operator();
    let v = if subspace.kind == SubspaceKind::Full {
        v
    } else {
        subspace.restrict(&v)
    };
    let mut blocks = BTreeMap::new();
    blocks.insert(0, v);
    FourierBlocks::new(subspace.dim(), system.omega(), blocks)
}

/// Whether drive and coupling both respect the generalized parity, so that
/// [`parity_selection`] applies.
pub fn generalized_parity_holds(system: &QubitSystem) -> bool {
    if !system.drive.half_period_antisymmetric() {
        return false;
    }
    let z = parity_operator(system.n_qubits);
    let v = system.interaction_operator();
    let scale = frobenius(&v).max(1.0);
    frobenius(&(&z * &v - &v * &z)) < 1e-12 * scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, CVector};
    use crate::model::{CouplingKind, PeriodicDrive};

    #[test]
    fn deviation_examples() {
        assert_eq!(degeneracy_deviation(0.0, 1.0, 4), (0, 0.0));
        assert_eq!(degeneracy_deviation(0.25, 1.0, 4), (1, 0.0));
        let (n, d) = degeneracy_deviation(0.3, 1.0, 4);
        assert_eq!(n, 1);
        assert!((d - 0.2).abs() < 1e-15);
        let (n, d) = degeneracy_deviation(1.0 / 3.0, 1.0, 6);
        assert_eq!(n, 2);
        assert!(d < 1e-15);
    }

    #[test]
    fn selection_rule_table() {
        assert!(parity_selection(1, 1, 0));
        assert!(parity_selection(-1, -1, 2));
        assert!(!parity_selection(1, 1, 1));
        assert!(!parity_selection(1, 1, -3));
        assert!(parity_selection(1, -1, 1));
        assert!(!parity_selection(1, -1, 2));
        assert!(predict(0.26, 1.0, 4, None, 0.02).allowed);
        assert!(!predict(0.26, 1.0, 4, Some((1, 1)), 0.02).allowed);
    }

    #[test]
    fn mask_follows_level_gap() {
        let mus = [0.0, 0.004, 0.006, 0.25, 0.2, 0.5];
        let mask = corridor_mask(&mus, 1.0, 4, 0.01);
        assert_eq!(mask, vec![true, true, false, true, false, true]);
        let exact = corridor_mask(&mus, 1.0, 4, 0.0);
        assert_eq!(exact, vec![true, false, false, true, false, true]);
    }

    fn basis_stack(index: usize, dim: usize) -> FourierStack {
        let mut v = CVector::zeros(dim);
        v[index] = c(1.0, 0.0);
        FourierStack::constant(&v, 1)
    }

    #[test]
    fn undriven_exchange_elements() {
        let sys = QubitSystem::identical(2, 1.0, PeriodicDrive::monochromatic(0.0, 1.0))
            .with_all_to_all(CouplingKind::Exchange, 0.02);
        let v = interaction_blocks(&sys, &SubspaceBasis::full(2)).unwrap();
        let (uu, dd) = (basis_stack(0, 4), basis_stack(3, 4));
        assert_eq!(coupling_matrix_element(&uu, &dd, &v).unwrap(), ZERO);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut t = CVector::zeros(4);
        t[1] = c(s, 0.0);
        t[2] = c(s, 0.0);
        let triplet = FourierStack::constant(&t, 1);
        let ct = coupling_matrix_element(&triplet, &triplet, &v).unwrap();
        assert!((ct - c(0.02, 0.0)).norm() < 1e-16);
    }

    #[test]
    fn rest_class_weight_sees_shifted_copies() {
        let s = basis_stack(1, 2);
        let shifted = s.resized(3).shifted(2);
        assert!((rest_class_weight(&s, &shifted).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(rest_class_weight(&basis_stack(0, 2), &shifted).unwrap(), 0.0);
    }

    #[test]
    fn parity_rule_applicability() {
        let mono = QubitSystem::identical(2, 1.0, PeriodicDrive::monochromatic(0.5, 1.0));
        assert!(generalized_parity_holds(
            &mono.clone().with_all_to_all(CouplingKind::Exchange, 0.02)
        ));
        assert!(generalized_parity_holds(
            &mono.clone().with_all_to_all(CouplingKind::Xx, 0.02)
        ));
        assert!(!generalized_parity_holds(
            &mono.with_all_to_all(CouplingKind::TiltedDipole, 0.02)
        ));
        let bi = QubitSystem::identical(2, 1.0, PeriodicDrive::bichromatic(0.5, 0.5, 1.0))
            .with_all_to_all(CouplingKind::Exchange, 0.02);
        assert!(!generalized_parity_holds(&bi));
    }
}
