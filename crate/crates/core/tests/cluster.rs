mod common;

use std::f64::consts::FRAC_PI_2;

use common::{builtin_params, random_state, rng};
use mbqc_core::cluster::{
    bbb1, bbb2, builtin_layout, concat, correlation_eigencheck, encode_inputs, entangle_all, insert_redundant, linear, remove_redundant, Angle,
    ClusterLayout, Edge, EdgePhases, PhaseAssignment, Role, BUILTIN_NAMES,
};
use mbqc_core::protocols::{execute, Plan};
use mbqc_core::protocols::{OutcomeMode, Protocol, Schedule};
use mbqc_core::{EigenCheck, Error, Gate2x2, InputState, Site, StateVector, C};
use rand::Rng;

fn s(i: u32) -> Site {
    Site(i)
}

#[test]
fn every_builtin_round_trips_through_toml() {
    for name in BUILTIN_NAMES.iter().copied().chain(["linear(1)", "linear(6)"]) {
        let l = builtin_layout(name).unwrap();
        let text = l.to_toml().unwrap();
        let back = ClusterLayout::from_toml(&text).unwrap();
        assert_eq!(back, l, "{name}");
        assert_eq!(back.to_toml().unwrap(), text);
    }
}

#[test]
fn tampered_toml_is_rejected() {
    let text = builtin_layout("rot5").unwrap().to_toml().unwrap();
    let broken = text.replacen("sites = [", "sites = [99, ", 1);
    assert!(ClusterLayout::from_toml(&broken).is_err());
    assert!(matches!(ClusterLayout::from_toml("name = 3"), Err(Error::Parse(_))));
}

#[test]
fn builtin_shapes() {
    let b3 = builtin_layout("bbb3").unwrap();
    assert_eq!(b3.sites, vec![s(1), s(2), s(3)]);
    assert_eq!(b3.edges, vec![Edge::of(1, 2), Edge::of(2, 3)]);
    assert_eq!(b3.input_sites(), vec![s(1), s(3)]);
    assert_eq!(b3.output_sites(), vec![s(1), s(3)]);
    assert_eq!(b3.role(s(2)).unwrap(), Role::Body);

    let r5 = builtin_layout("rot5").unwrap();
    assert_eq!(r5.edges, (1..5).map(|i| Edge::of(i, i + 1)).collect::<Vec<_>>());
    assert_eq!(r5.input_sites(), vec![s(1)]);
    assert_eq!(r5.output_sites(), vec![s(5)]);
    assert_eq!(r5.pattern.iter().map(|m| m.site).collect::<Vec<_>>(), vec![s(1), s(2), s(3), s(4)]);

    let c4 = builtin_layout("cnot4").unwrap();
    assert_eq!(c4.input_sites(), vec![s(1), s(3)]);
    assert_eq!(c4.output_sites(), vec![s(2), s(4)]);
    assert_eq!(c4.pattern.iter().map(|m| m.site).collect::<Vec<_>>(), vec![s(1), s(3)]);

    let h = builtin_layout("helix").unwrap();
    assert_eq!(h.sites.len(), 10);
    for e in [(1, 2), (1, 3), (2, 4), (3, 4)] {
        assert!(h.edges.contains(&Edge::of(e.0, e.1)));
    }

    assert_eq!(builtin_layout("squashed-i").unwrap().sites.len(), 15);
    assert_eq!(builtin_layout("squashed-i-redundant").unwrap().sites.len(), 16);
    assert_eq!(builtin_layout("rot7").unwrap().redundant.len(), 2);
    assert!(matches!(builtin_layout("nope"), Err(Error::UnknownLayout(_))));
}

#[test]
fn four_bbb1_make_the_rotation_chain() {
    let parts: Vec<_> = (1..5).map(|i| (bbb1(s(i), s(i + 1), Angle::fixed(0.0)), vec![0])).collect();
    let l = concat("chain", &parts).unwrap();
    assert_eq!(l.edges, builtin_layout("rot5").unwrap().edges);
    assert_eq!(l.edges, linear(5).unwrap().edges);
}

#[test]
fn two_bbb1_two_bbb2_make_the_box() {
    let l = concat(
        "box",
        &[
            (bbb2(s(1), s(2)), vec![0, 1]),
            (bbb1(s(1), s(3), Angle::fixed(0.0)), vec![0]),
            (bbb1(s(2), s(4), Angle::fixed(0.0)), vec![1]),
            (bbb2(s(3), s(4)), vec![0, 1]),
        ],
    )
    .unwrap();
    assert_eq!(l.edges, builtin_layout("box").unwrap().edges);
    assert_eq!(l.input_sites(), vec![s(1), s(2)]);
    assert_eq!(l.output_sites(), vec![s(3), s(4)]);
}

#[test]
fn concat_is_associative() {
    let a = (bbb1(s(1), s(2), Angle::fixed(0.0)), vec![0]);
    let b = (bbb1(s(2), s(3), Angle::param("xi", -1.0)), vec![0]);
    let c = (bbb1(s(3), s(4), Angle::fixed(FRAC_PI_2).flipped_by(&[s(2)])), vec![0]);
    let left = concat("x", &[(concat("ab", &[a.clone(), b.clone()]).unwrap(), vec![0]), c.clone()]).unwrap();
    let right = concat("x", &[a.clone(), (concat("bc", &[b.clone(), c.clone()]).unwrap(), vec![0])]).unwrap();
    let flat = concat("x", &[a, b, c]).unwrap();
    assert_eq!(left, right);
    assert_eq!(left, flat);
}

#[test]
fn concat_rejects_bad_glue() {
    let a = (bbb1(s(1), s(2), Angle::fixed(0.0)), vec![0]);
    let wrong_start = (bbb1(s(3), s(4), Angle::fixed(0.0)), vec![0]);
    assert!(matches!(concat("x", &[a.clone(), wrong_start]), Err(Error::OverlapViolation(_))));
    let reuses_site = (bbb1(s(1), s(5), Angle::fixed(0.0)), vec![1]);
    assert!(matches!(concat("x", &[a, reuses_site]), Err(Error::RoleConflict(_))));
}

#[test]
fn linear_two_is_the_textbook_pair() {
    let st = entangle_all::<f64>(&linear(2).unwrap(), &EdgePhases::zero(&linear(2).unwrap())).unwrap();
    let want = [0.5, 0.5, 0.5, -0.5];
    for (a, w) in st.amplitudes().iter().zip(want) {
        assert!((a - C::new(w, 0.0)).norm() < 1e-12);
    }
    let one = entangle_all::<f64>(&linear(1).unwrap(), &EdgePhases::zero(&linear(1).unwrap())).unwrap();
    assert!((one.amplitudes()[1] - C::new(0.5f64.sqrt(), 0.0)).norm() < 1e-12);
}

/// Amplitude of a noisy linear cluster, written out term by term.
fn chain_amplitude(z: &[bool], thetas: &[f64]) -> C<f64> {
    let mut a = C::new(2f64.powf(-(z.len() as f64) / 2.0), 0.0);
    for (j, th) in thetas.iter().enumerate() {
        if z[j] && z[j + 1] {
            a *= -C::from_polar(1.0, *th);
        }
    }
    a
}

#[test]
fn noisy_chain_amplitudes() {
    let mut r = rng(3);
    for n in 2..7usize {
        let l = linear(n).unwrap();
        let thetas: Vec<f64> = (1..n).map(|_| r.random_range(-3.0..3.0)).collect();
        let mut ph = EdgePhases::zero(&l);
        for (j, t) in thetas.iter().enumerate() {
            ph.set(Edge::of(j as u32 + 1, j as u32 + 2), *t);
        }
        let st = entangle_all::<f64>(&l, &ph).unwrap();
        for idx in 0..1usize << n {
            let z: Vec<bool> = (0..n).map(|b| idx >> b & 1 == 1).collect();
            let bits: Vec<_> = z.iter().enumerate().map(|(j, v)| (s(j as u32 + 1), *v)).collect();
            let got = st.amplitude_of(&bits).unwrap();
            assert!((got - chain_amplitude(&z, &thetas)).norm() < 1e-12);
        }
    }
    let l = linear(3).unwrap();
    let th = 0.7;
    let st = entangle_all::<f64>(&l, &EdgePhases::common(&l, th)).unwrap();
    let a = st.amplitude_of(&[(s(1), true), (s(2), true), (s(3), false)]).unwrap();
    assert!((a + C::from_polar(2f64.powf(-1.5), th)).norm() < 1e-12);
}

#[test]
fn encoded_bbb1_inputs() {
    let l = builtin_layout("bbb1").unwrap();
    let ph = EdgePhases::zero(&l);
    let h = 0.5f64.sqrt();
    let zero = encode_inputs::<f64>(&l, &[InputState::basis(false)], &ph).unwrap();
    let one = encode_inputs::<f64>(&l, &[InputState::basis(true)], &ph).unwrap();
    let plus = StateVector::product(&[(s(1), [C::new(1.0, 0.0), C::new(0.0, 0.0)]), (s(2), [C::new(h, 0.0), C::new(h, 0.0)])]).unwrap();
    let minus = StateVector::product(&[(s(1), [C::new(0.0, 0.0), C::new(1.0, 0.0)]), (s(2), [C::new(h, 0.0), C::new(-h, 0.0)])]).unwrap();
    assert!((zero.fidelity(&plus).unwrap() - 1.0).abs() < 1e-12);
    assert!((one.fidelity(&minus).unwrap() - 1.0).abs() < 1e-12);
    assert!(matches!(encode_inputs::<f64>(&l, &[], &ph), Err(Error::InputCount { .. })));
}

#[test]
fn encoded_rotation_chain_splits_on_the_input() {
    // a|0>(eta + mu) + b|1>(eta - e^{i th1} mu), eta/mu = rest of the chain with site 2 in |0>/|1>.
    let mut r = rng(4);
    let l = builtin_layout("rot5").unwrap();
    for _ in 0..5 {
        let a: f64 = r.random_range(0.0..1.0);
        let b = (1.0 - a * a).sqrt();
        let th: Vec<f64> = (0..4).map(|_| r.random_range(-2.0..2.0)).collect();
        let mut ph = EdgePhases::zero(&l);
        for j in 0..4 {
            ph.set(Edge::of(j + 1, j + 2), th[j as usize]);
        }
        let st = encode_inputs(&l, &[InputState::from_real(a).unwrap()], &ph).unwrap();
        for idx in 0..32usize {
            let z: Vec<bool> = (0..5).map(|k| idx >> k & 1 == 1).collect();
            let rest = chain_amplitude(&z[1..], &th[1..]);
            let want = if !z[0] {
                C::new(a, 0.0) * rest
            } else if z[1] {
                -C::new(b, 0.0) * C::from_polar(1.0, th[0]) * rest
            } else {
                C::new(b, 0.0) * rest
            };
            let bits: Vec<_> = z.iter().enumerate().map(|(j, v)| (s(j as u32 + 1), *v)).collect();
            assert!((st.amplitude_of(&bits).unwrap() - want).norm() < 1e-12);
        }
    }
}

#[test]
fn ideal_clusters_pass_every_eigencheck() {
    for name in BUILTIN_NAMES {
        let l = builtin_layout(name).unwrap();
        let st = entangle_all::<f64>(&l, &EdgePhases::zero(&l)).unwrap();
        for site in &l.sites {
            assert_eq!(correlation_eigencheck(&st, &l, *site).unwrap(), EigenCheck::Eigenvalue(1), "{name} {site}");
        }
    }
}

#[test]
fn noisy_clusters_fail_the_eigencheck() {
    for name in BUILTIN_NAMES {
        let l = builtin_layout(name).unwrap();
        let st = entangle_all::<f64>(&l, &EdgePhases::common(&l, 0.5)).unwrap();
        for site in &l.sites {
            match correlation_eigencheck(&st, &l, *site).unwrap() {
                EigenCheck::NotEigen { residual } => assert!(residual > 1e-3, "{name} {site}"),
                other => panic!("{name} {site}: {other:?}"),
            }
        }
    }
}

#[test]
fn removing_the_middle_of_three_leaves_a_pair() {
    let l = insert_redundant(&bbb2(s(1), s(2)), Edge::of(1, 2), s(3), s(2), "split").unwrap();
    let pair = bbb2(s(1), s(2));
    let ideal = entangle_all::<f64>(&pair, &EdgePhases::zero(&pair)).unwrap();
    let st = entangle_all::<f64>(&l, &EdgePhases::zero(&l)).unwrap();
    let mut total = 0.0;
    for o in [false, true] {
        let (p, mut reduced, rec) = remove_redundant(&st, &l, s(3), o).unwrap();
        total += p;
        assert!((p - 0.5).abs() < 1e-12);
        assert!(reduced.fidelity(&ideal).unwrap() < 1.0 - 1e-3 || !o);
        rec.apply(&mut reduced).unwrap();
        assert!((reduced.fidelity(&ideal).unwrap() - 1.0).abs() < 1e-12);
    }
    assert!((total - 1.0).abs() < 1e-12);
    assert!(matches!(remove_redundant(&st, &l, s(1), false), Err(Error::NotRedundant(_))));
}

/// rot7 with sites 3 and 6 removed at outcome 0 and corrected, before the
/// output-side edges, compared with the ideal rot5-shaped chain 1-2-4-5-7.
fn rot7_reduction_fidelity(theta: f64) -> f64 {
    let l = builtin_layout("rot7").unwrap();
    let chain = [1u32, 2, 4, 5, 7];
    let mut st = StateVector::<f64>::new_plus_state(7, &(1..=7).map(s).collect::<Vec<_>>()).unwrap();
    for (a, b) in [(2, 3), (3, 4), (5, 6), (6, 7)] {
        st.apply_cphase(s(a), s(b), theta).unwrap();
    }
    for r in [3, 6] {
        let (_, mut reduced, rec) = remove_redundant(&st, &l, s(r), false).unwrap();
        rec.apply(&mut reduced).unwrap();
        st = reduced;
    }
    for (a, b) in [(1, 2), (4, 5)] {
        st.apply_cphase(s(a), s(b), theta).unwrap();
    }
    let mut ideal = StateVector::<f64>::new_plus_state(5, &chain.map(s)).unwrap();
    for w in chain.windows(2) {
        ideal.apply_cphase(s(w[0]), s(w[1]), 0.0).unwrap();
    }
    st.fidelity(&ideal).unwrap()
}

#[test]
fn redundant_removal_is_harmless_only_without_noise() {
    assert!((rot7_reduction_fidelity(0.0) - 1.0).abs() < 1e-12);
    assert!(rot7_reduction_fidelity(0.3) < 1.0 - 1e-6);
    let f: Vec<f64> = (0..=10).map(|k| rot7_reduction_fidelity(k as f64 * 0.1)).collect();
    for w in f.windows(2) {
        assert!(w[1] <= w[0] + 1e-12, "{f:?}");
    }
}

#[test]
fn rot7_and_rot5_agree_at_zero_phase() {
    use mbqc_core::protocols::{Euler, RotationVariant};
    let e = Euler::new(0.3, -1.1, 0.8);
    let mut r = rng(5);
    for _ in 0..5 {
        let inp = [random_state(&mut r)];
        for v in [RotationVariant::Rot5, RotationVariant::Rot7] {
            let p = Protocol::rotation(v, e).unwrap();
            let res = p.run(&EdgePhases::<f64>::zero(&p.layout), &inp, OutcomeMode::Exhaustive, Schedule::Lazy).unwrap();
            assert!((res.average_fidelity() - 1.0).abs() < 1e-10);
        }
    }
}

fn compare_schedules(name: &str, seed: u64) {
    let mut r = rng(seed);
    let l = builtin_layout(name).unwrap();
    let params = builtin_params(name, &mut r);
    let staged = Plan::new(&l, Schedule::Staged).unwrap();
    let mono = Plan::new(&l, Schedule::Monolithic).unwrap();
    let lazy = Plan::new(&l, Schedule::Lazy).unwrap();
    for trial in 0..3 {
        let ph = if trial == 0 {
            EdgePhases::zero(&l)
        } else {
            PhaseAssignment::IidGaussian { sigma: 0.7, seed: seed * 10 + trial }.resolve::<f64>(&l).unwrap()
        };
        let inputs: Vec<_> = (0..l.lines).map(|_| random_state(&mut r)).collect();
        let a = execute(&l, &staged, &ph, &params, &inputs, OutcomeMode::Exhaustive).unwrap();
        for other in [&mono, &lazy] {
            let b = execute(&l, other, &ph, &params, &inputs, OutcomeMode::Exhaustive).unwrap();
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.outcomes, y.outcomes);
                assert_eq!(x.state.labels(), y.state.labels());
                for (u, v) in x.state.amplitudes().iter().zip(y.state.amplitudes()) {
                    assert!((u - v).norm() < 1e-10, "{name}");
                }
            }
        }
    }
}

#[test]
fn staged_and_monolithic_entangling_agree() {
    for (i, name) in ["box", "cnot4", "rot5", "bridge-ebb", "helix", "squashed-i"].iter().enumerate() {
        compare_schedules(name, 100 + i as u64);
    }
}

#[test]
fn staged_schedule_needs_blocks_without_redundancy() {
    let l = builtin_layout("rot7").unwrap();
    assert!(matches!(Plan::new(&l, Schedule::Staged), Err(Error::NotConcatenated)));
    assert!(Plan::new(&l, Schedule::Monolithic).is_ok());
}

#[test]
fn gaussian_phase_assignment_is_seeded() {
    let l = builtin_layout("squashed-i").unwrap();
    let a = PhaseAssignment::IidGaussian { sigma: 0.4, seed: 9 }.resolve::<f64>(&l).unwrap();
    let b = PhaseAssignment::IidGaussian { sigma: 0.4, seed: 9 }.resolve::<f64>(&l).unwrap();
    let c = PhaseAssignment::IidGaussian { sigma: 0.4, seed: 10 }.resolve::<f64>(&l).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    let _ = Gate2x2::<f64>::identity();
}
