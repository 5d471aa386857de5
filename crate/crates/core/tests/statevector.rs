use mbqc_core::{Gate2x2, Site, StateVector, StateVector32, C};
use proptest::prelude::*;

fn labels(n: usize) -> Vec<Site> {
    (1..=n as u32).map(Site).collect()
}

fn random_state(n: usize) -> impl Strategy<Value = StateVector<f64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1 << n).prop_filter_map("zero vector", move |v| {
        let amps: Vec<C<f64>> = v.into_iter().map(|(a, b)| C::new(a, b)).collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        (norm > 1e-3).then(|| StateVector::from_amplitudes(&labels(n), amps.into_iter().map(|a| a / norm).collect()).unwrap())
    })
}

fn close(a: &StateVector<f64>, b: &StateVector<f64>, tol: f64) -> bool {
    a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cphases_commute(st in random_state(4), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0, a in 1u32..5, b in 1u32..5, c in 1u32..5) {
        prop_assume!(a != b && b != c);
        let mut x = st.clone();
        x.apply_cphase(Site(a), Site(b), t1).unwrap();
        x.apply_cphase(Site(b), Site(c), t2).unwrap();
        let mut y = st.clone();
        y.apply_cphase(Site(b), Site(c), t2).unwrap();
        y.apply_cphase(Site(a), Site(b), t1).unwrap();
        prop_assert!(close(&x, &y, 1e-12));
        let mut z = st;
        z.apply_cphase(Site(b), Site(a), t1).unwrap();
        z.apply_cphase(Site(c), Site(b), t2).unwrap();
        prop_assert!(close(&x, &z, 1e-12));
    }

    #[test]
    fn gates_preserve_norm(st in random_state(3), alpha in -6.0f64..6.0, site in 1u32..4, t in -3.0f64..3.0) {
        let mut s = st;
        s.apply_1q(Site(site), &Gate2x2::rz(alpha)).unwrap();
        s.apply_1q(Site(site), &Gate2x2::h()).unwrap();
        s.apply_cphase(Site(1), Site(if site == 1 { 2 } else { site }), t).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn outcome_probabilities_sum_to_one(st in random_state(3), alpha in -6.0f64..6.0, site in 1u32..4) {
        let p0 = st.project_xy(Site(site), alpha, false).unwrap().probability;
        let p1 = st.project_xy(Site(site), alpha, true).unwrap().probability;
        prop_assert!((p0 + p1 - 1.0).abs() < 1e-12);
        let kept = st.project_xy(Site(site), alpha, false).unwrap();
        if let Ok(s) = kept.state() {
            prop_assert_eq!(s.num_qubits(), 2);
            prop_assert!(!s.contains(Site(site)));
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn reorder_is_a_relabelling(st in random_state(3)) {
        let order = [Site(3), Site(1), Site(2)];
        let r = st.reordered(&order).unwrap();
        prop_assert_eq!(r.labels(), &order[..]);
        for k in 0..8usize {
            let bits: Vec<(Site, bool)> = (0..3).map(|j| (Site(j as u32 + 1), k >> j & 1 == 1)).collect();
            prop_assert!((st.amplitude_of(&bits).unwrap() - r.amplitude_of(&bits).unwrap()).norm() < 1e-15);
        }
        prop_assert!((st.fidelity(&r).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn single_precision_tracks_double() {
    let mut a = StateVector::<f64>::new_plus_state(4, &labels(4)).unwrap();
    let mut b = StateVector32::new_plus_state(4, &labels(4)).unwrap();
    for (i, t) in [(1, 0.3), (2, -0.7), (3, 1.1)] {
        a.apply_cphase(Site(i), Site(i + 1), t).unwrap();
        b.apply_cphase(Site(i), Site(i + 1), t as f32).unwrap();
    }
    let pa = a.project_xy(Site(2), 0.4, true).unwrap();
    let pb = b.project_xy(Site(2), 0.4f32, true).unwrap();
    assert!((pa.probability - pb.probability as f64).abs() < 1e-5);
    for (x, y) in pa.state().unwrap().amplitudes().iter().zip(pb.state().unwrap().amplitudes()) {
        assert!((x.re - y.re as f64).abs() < 1e-5 && (x.im - y.im as f64).abs() < 1e-5);
    }
}
