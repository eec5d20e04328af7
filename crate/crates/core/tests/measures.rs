use floquet_core::entanglement::{concurrence, three_tangle};
use floquet_core::linalg::{c, expm_neg_i, kron, CMatrix, CVector, C64};
use proptest::prelude::*;

fn normalized(v: Vec<C64>) -> CVector {
    let v = CVector::from_vec(v);
    let n = v.norm();
    v / C64::from(n)
}

fn w_mix(a: C64, b: C64) -> CVector {
    let s = 1.0 / 3f64.sqrt();
    let mut v = CVector::zeros(8);
    for i in [1, 2, 4] {
        v[i] += a * s;
    }
    for i in [3, 5, 6] {
        v[i] += b * s;
    }
    v
}

fn unitary(p: &[f64; 4]) -> CMatrix {
    let h = CMatrix::from_row_slice(2, 2, &[c(p[0], 0.0), c(p[1], p[2]), c(p[1], -p[2]), c(p[3], 0.0)]);
    expm_neg_i(&h)
}

fn complex_vec(n: usize) -> impl Strategy<Value = CVector> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), n)
        .prop_filter("nonzero", |v| v.iter().any(|(a, b)| a.abs() + b.abs() > 1e-3))
        .prop_map(|v| normalized(v.into_iter().map(|(a, b)| c(a, b)).collect()))
}

fn local_params() -> impl Strategy<Value = [f64; 4]> {
    [-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64]
}

// Reference values from the monogamy identity τ = C²_A(BC) − C²_AB − C²_AC
// with mixed-state concurrences, evaluated independently of this crate.
#[test]
fn three_tangle_matches_monogamy_oracle() {
    let generic = normalized(
        [
            (1.0, 0.0),
            (0.0, 2.0),
            (0.5, 0.0),
            (-1.0, 0.0),
            (0.3, 0.2),
            (0.0, 0.0),
            (1.5, 0.0),
            (0.0, -0.7),
        ]
        .iter()
        .map(|&(a, b)| c(a, b))
        .collect(),
    );
    assert!((three_tangle(&generic).unwrap() - 0.667_214_35).abs() < 1e-6);

    let h = 0.5f64.sqrt();
    assert!((three_tangle(&w_mix(c(h, 0.0), c(h, 0.0))).unwrap() - 1.0 / 3.0).abs() < 1e-14);
    assert!((three_tangle(&w_mix(c(0.6, 0.0), c(0.0, 0.8))).unwrap() - 0.3072).abs() < 1e-14);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn concurrence_of_schmidt_form(theta in 0.0..std::f64::consts::PI, phase in 0.0..6.3f64) {
        let (a, b) = (c(theta.cos(), 0.0), c(0.0, phase).exp() * theta.sin());
        let psi = CVector::from_vec(vec![a, c(0.0, 0.0), c(0.0, 0.0), b]);
        prop_assert!((concurrence(&psi).unwrap() - 2.0 * (a * b).norm()).abs() < 1e-14);
    }

    #[test]
    fn concurrence_is_local_unitary_invariant(psi in complex_vec(4), p in local_params(), q in local_params()) {
        let u = kron(&unitary(&p), &unitary(&q));
        let before = concurrence(&psi).unwrap();
        let after = concurrence(&(u * &psi)).unwrap();
        prop_assert!((before - after).abs() < 1e-12);
    }

    #[test]
    fn three_tangle_is_local_unitary_invariant(
        psi in complex_vec(8),
        p in local_params(),
        q in local_params(),
        r in local_params(),
    ) {
        let u = kron(&kron(&unitary(&p), &unitary(&q)), &unitary(&r));
        let before = three_tangle(&psi).unwrap();
        let after = three_tangle(&(u * &psi)).unwrap();
        prop_assert!((before - after).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&before));
    }

    #[test]
    fn three_tangle_of_w_mixtures(theta in 0.0..std::f64::consts::FRAC_PI_2, phase in 0.0..6.3f64) {
        let (a, b) = (c(theta.cos(), 0.0), c(0.0, phase).exp() * theta.sin());
        let expected = 4.0 / 3.0 * (a * b).norm_sqr();
        prop_assert!((three_tangle(&w_mix(a, b)).unwrap() - expected).abs() < 1e-13);
    }
}
