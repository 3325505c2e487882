use proptest::prelude::*;
use xcs2d::units::HBAR_EV_FS;
use xcs2d::{
    build_product_manifold, cross_peak_direct, random_manifold, DecayConvention, EdgeLabel,
    EdgeSpec, ElectronicManifold, ElectronicState, Envelope, FrequencyGrid, PulseSequence,
    RandomManifoldSpec, ResponseFunction, StateBlock,
};

fn seq() -> PulseSequence {
    PulseSequence::two_color(401.0, 535.0, Envelope::rectangular(5.0)).unwrap()
}

fn small_grid() -> FrequencyGrid {
    FrequencyGrid::centered(2.0, 0.1).unwrap()
}

fn manifold(seed: u64) -> ElectronicManifold {
    random_manifold(seed, &RandomManifoldSpec::default()).unwrap()
}

fn rel_diff(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / scale.max(f64::MIN_POSITIVE)
}

/// Adds an EA state at 450 eV whose transitions to `g0` and to every
/// F state lie outside both pulse envelopes.
fn with_dark_state(m: &ElectronicManifold) -> ElectronicManifold {
    let id = m.states().iter().map(|s| s.id).max().unwrap() + 1;
    let mut states = m.states().to_vec();
    states.push(ElectronicState::new(id, StateBlock::EA, 450.0));
    let mut t = m.transitions().clone();
    t.insert(0, id, 0.2, 0.1);
    for f in m.block(StateBlock::F) {
        t.insert(id, f.id, 0.2, 0.1);
    }
    ElectronicManifold::new(states, t).validated().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn response_is_quartic_in_dipoles(seed in 0u64..1000, c in 0.1f64..10.0, t1 in 0.0f64..20.0, t3 in 0.0f64..20.0) {
        let m = manifold(seed);
        let a = ResponseFunction::new(&m, &seq(), DecayConvention::Coherence).unwrap();
        let b = ResponseFunction::new(&m.with_scaled_dipoles(c), &seq(), DecayConvention::Coherence).unwrap();
        let (ra, rb) = (a.response(t3, 0.0, t1).unwrap(), b.response(t3, 0.0, t1).unwrap());
        let expected = ra * c.powi(4);
        prop_assert!((rb - expected).norm() <= 1e-12 * expected.norm().max(1e-300));
        let (sa, sb) = (a.signal(t3, 0.0, t1).unwrap(), b.signal(t3, 0.0, t1).unwrap());
        prop_assert!((sb - sa * c.powi(4)).abs() <= 1e-12 * ra.norm() * c.powi(4));
    }

    #[test]
    fn cross_peak_is_quartic_in_dipoles(seed in 0u64..1000, c in 0.1f64..10.0) {
        let m = manifold(seed);
        let g = small_grid();
        let a = cross_peak_direct(&m, &seq(), &g, &g).unwrap().total();
        let b = cross_peak_direct(&m.with_scaled_dipoles(c), &seq(), &g, &g).unwrap().total();
        let scale = a.max_abs() * c.powi(4);
        for (x, y) in a.values.iter().zip(b.values.iter()) {
            prop_assert!(rel_diff(*y, x * c.powi(4), scale) <= 1e-12);
        }
    }

    #[test]
    fn cross_peak_shift_covariance(seed in 0u64..1000, k in -8i32..=8) {
        let delta = f64::from(k) * 0.25;
        let m = manifold(seed);
        let shifted = m.with_shifted_blocks(&[StateBlock::EA, StateBlock::F], delta);
        let s2 = PulseSequence::two_color(401.0 + delta, 535.0, Envelope::rectangular(5.0)).unwrap();
        let g = small_grid();
        let a = cross_peak_direct(&m, &seq(), &g, &g).unwrap();
        let b = cross_peak_direct(&shifted, &s2, &g, &g).unwrap();
        for c in [xcs2d::Component::Gsb, xcs2d::Component::Esa, xcs2d::Component::Total] {
            let (x, y) = (a.component(c), b.component(c));
            let scale = x.max_abs();
            for (u, v) in x.values.iter().zip(y.values.iter()) {
                prop_assert!(rel_diff(*u, *v, scale) <= 1e-12);
            }
        }
    }

    #[test]
    fn dark_states_change_nothing(seed in 0u64..1000, t1 in 0.0f64..20.0, t3 in 0.0f64..20.0) {
        let m = manifold(seed);
        let dark = with_dark_state(&m);
        let a = ResponseFunction::new(&m, &seq(), DecayConvention::Coherence).unwrap();
        let b = ResponseFunction::new(&dark, &seq(), DecayConvention::Coherence).unwrap();
        prop_assert_eq!(a.response(t3, 0.0, t1).unwrap(), b.response(t3, 0.0, t1).unwrap());
        let g = small_grid();
        let x = cross_peak_direct(&m, &seq(), &g, &g).unwrap().total();
        let y = cross_peak_direct(&dark, &seq(), &g, &g).unwrap().total();
        prop_assert_eq!(x.values, y.values);
    }

    #[test]
    fn response_decays_with_slowest_rate(seed in 0u64..1000, t1 in 0.0f64..200.0, t3 in 0.0f64..200.0) {
        let m = manifold(seed);
        let rf = ResponseFunction::new(&m, &seq(), DecayConvention::Coherence).unwrap();
        let gamma_min = m.transitions().iter().map(|(_, _, t)| t.dephasing).fold(f64::INFINITY, f64::min);
        let bound: f64 = rf.pathways().iter().map(|p| p.weight.abs()).sum::<f64>()
            * (-gamma_min * (t1 + t3) / HBAR_EV_FS).exp();
        let r = rf.response(t3, 0.0, t1).unwrap().norm();
        prop_assert!(r <= bound * (1.0 + 1e-12), "{} > {}", r, bound);
    }

    #[test]
    fn product_models_cancel(
        a in proptest::collection::vec((398.0f64..404.0, 0.01f64..0.3, 0.05f64..0.5), 1..4),
        b in proptest::collection::vec((532.0f64..538.0, 0.01f64..0.3, 0.05f64..0.5), 1..4),
    ) {
        let m = build_product_manifold(
            &EdgeSpec::from_triples(EdgeLabel::A, &a),
            &EdgeSpec::from_triples(EdgeLabel::B, &b),
        ).unwrap();
        let g = small_grid();
        let cp = cross_peak_direct(&m, &seq(), &g, &g).unwrap();
        let scale = cp.gsb().max_abs().max(cp.esa().max_abs());
        prop_assert!(cp.total().max_abs() <= 1e-10 * scale);
    }
}

#[test]
fn grid_evaluation_is_order_independent() {
    let m = manifold(3);
    let rf = ResponseFunction::new(&m, &seq(), DecayConvention::Coherence).unwrap();
    let t1s: Vec<f64> = (0..37).map(|k| k as f64 * 0.6).collect();
    let t3s: Vec<f64> = (0..29).map(|k| k as f64 * 0.9).collect();
    let a = rf.complex_signal_grid(&t1s, 0.0, &t3s).unwrap();
    let b = rf.complex_signal_grid(&t1s, 0.0, &t3s).unwrap();
    assert_eq!(a, b);
    for (r, &t3) in t3s.iter().enumerate() {
        for (c, &t1) in t1s.iter().enumerate() {
            let z = rf.complex_signal(t3, 0.0, t1).unwrap();
            assert!((a[[r, c]] - z).norm() <= 1e-12 * z.norm().max(1e-12));
        }
    }
}

#[test]
fn dyadic_shift_is_bitwise_exact() {
    let m = manifold(11);
    let shifted = m.with_shifted_blocks(&[StateBlock::EA, StateBlock::F], 0.5);
    let s2 = PulseSequence::two_color(401.5, 535.0, Envelope::rectangular(5.0)).unwrap();
    let g = small_grid();
    let a = cross_peak_direct(&m, &seq(), &g, &g).unwrap().total();
    let b = cross_peak_direct(&shifted, &s2, &g, &g).unwrap().total();
    assert_eq!(a.values, b.values);
}
