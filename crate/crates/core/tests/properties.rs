use proptest::prelude::*;

use sdic_core::strong::{layer_rates, strong_scheme};
use sdic_core::weak::{weak_ic_sum_capacity, weak_zic_sum_capacity};
use sdic_core::{classify, Basis, Channel, GaussianScene, IcParams, LogBase, RegimeKind};

const NATS: LogBase = LogBase::NATS;
const BITS: LogBase = LogBase::BITS;

/// Four variables over a five-element basis, so every subset is
/// nondegenerate with probability one.
fn scene(vars: &[f64], coeffs: &[f64]) -> GaussianScene {
    let mut basis = Basis::new();
    for (j, v) in vars.iter().enumerate() {
        basis.push(format!("Z{j}"), *v).unwrap();
    }
    let mut s = GaussianScene::new(basis);
    for (i, row) in coeffs.chunks(vars.len()).enumerate() {
        let terms: Vec<(String, f64)> = row.iter().enumerate().map(|(j, c)| (format!("Z{j}"), *c)).collect();
        let refs: Vec<(&str, f64)> = terms.iter().map(|(n, c)| (n.as_str(), *c)).collect();
        s.define(&format!("A{i}"), &refs).unwrap();
    }
    s
}

fn scene_strategy() -> impl Strategy<Value = GaussianScene> {
    (
        prop::collection::vec(0.1f64..4.0, 5),
        prop::collection::vec(-2.0f64..2.0, 20),
    )
        .prop_map(|(v, c)| scene(&v, &c))
}

fn params_strategy() -> impl Strategy<Value = IcParams> {
    (
        -4.0f64..4.0,
        -4.0f64..4.0,
        0.05f64..6.0,
        0.05f64..6.0,
        0.05f64..4.0,
        0.05f64..4.0,
        -1.0f64..=1.0,
    )
        .prop_map(|(a, b, p1, p2, q1, q2, rho)| IcParams::new(a, b, p1, p2, q1, q2, rho).unwrap())
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * (1.0 + x.abs().max(y.abs()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mi_is_symmetric(s in scene_strategy()) {
        let ab = s.mutual_info(&["A0", "A1"], &["A2"], NATS).unwrap();
        let ba = s.mutual_info(&["A2"], &["A0", "A1"], NATS).unwrap();
        prop_assert!(close(ab, ba));
    }

    #[test]
    fn mi_is_nonnegative(s in scene_strategy()) {
        prop_assert!(s.mutual_info(&["A0"], &["A1"], NATS).unwrap() >= -1e-12);
        prop_assert!(s.cond_mutual_info(&["A0"], &["A1"], &["A2", "A3"], NATS).unwrap() >= -1e-12);
    }

    #[test]
    fn chain_rule(s in scene_strategy()) {
        let joint = s.mutual_info(&["A0"], &["A1", "A2"], NATS).unwrap();
        let split = s.mutual_info(&["A0"], &["A1"], NATS).unwrap()
            + s.cond_mutual_info(&["A0"], &["A2"], &["A1"], NATS).unwrap();
        prop_assert!(close(joint, split), "{joint} vs {split}");
    }

    #[test]
    fn scaling_invariance(s in scene_strategy(), k in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0]) {
        let scaled = s.var("A0").unwrap().scaled("B0", k);
        let mut t = s.clone();
        t.insert(scaled).unwrap();
        let before = s.mutual_info(&["A0"], &["A1", "A2"], NATS).unwrap();
        let after = t.mutual_info(&["B0"], &["A1", "A2"], NATS).unwrap();
        prop_assert!(close(before, after));
    }

    #[test]
    fn base_conversion(s in scene_strategy()) {
        let nats = s.mutual_info(&["A0"], &["A3"], NATS).unwrap();
        let bits = s.mutual_info(&["A0"], &["A3"], BITS).unwrap();
        prop_assert!(close(bits, nats / std::f64::consts::LN_2));
    }

    #[test]
    fn ic_regimes_partition(p in params_strategy()) {
        let r = classify(&p, Channel::Ic).unwrap();
        let m = |k: &str| r.margins[k];
        let vs = m("very_strong_rx1") > 0.0 && m("very_strong_rx2") > 0.0;
        match r.kind {
            RegimeKind::VeryStrongIc => prop_assert!(vs),
            RegimeKind::StrongNotVeryStrongIc => {
                prop_assert!(!vs);
                prop_assert!(p.a * p.a >= 1.0 - 1e-9 && p.b * p.b >= 1.0 - 1e-9);
            }
            RegimeKind::WeakIc => prop_assert!(!vs && m("weak") >= -1e-9),
            RegimeKind::Unclassified => prop_assert!(!vs && m("weak") < 0.0),
            other => prop_assert!(false, "Z-IC kind {other:?} for an IC"),
        }
    }

    #[test]
    fn zic_regimes_partition(p in params_strategy()) {
        let p = p.as_zic();
        let a2 = p.a * p.a;
        let expected = if a2 > 1.0 + p.p1 {
            RegimeKind::VeryStrongZic
        } else if a2 <= 1.0 {
            RegimeKind::WeakZic
        } else {
            RegimeKind::StrongNotVeryStrongZic
        };
        prop_assert_eq!(classify(&p, Channel::Zic).unwrap().kind, expected);
    }

    #[test]
    fn weak_capacity_decreases_with_cross_gain(p in params_strategy(), shrink in 0.0f64..1.0) {
        let weaker = IcParams { a: p.a * shrink, b: p.b * shrink, ..p };
        if let (Ok(hi), Ok(lo)) = (weak_ic_sum_capacity(&weaker, BITS), weak_ic_sum_capacity(&p, BITS)) {
            prop_assert!(hi >= lo - 1e-12);
        }
        let (z, zw) = (p.as_zic(), weaker.as_zic());
        if let (Ok(hi), Ok(lo)) = (weak_zic_sum_capacity(&zw, BITS), weak_zic_sum_capacity(&z, BITS)) {
            prop_assert!(hi >= lo - 1e-12);
        }
    }

    #[test]
    fn strong_layers_are_nonnegative(p in params_strategy(), t in 0.0f64..=1.0) {
        let x = t * p.p1;
        let r = layer_rates(&p, x, BITS).unwrap();
        prop_assert!(r.u1 >= 0.0 && r.u2 >= 0.0 && r.v >= 0.0);
        if let Ok(s) = strong_scheme(&p, x) {
            prop_assert!(close(s.alpha1 + s.alpha2 + s.beta, (p.p1 + p.a * p.a * p.p2) / (p.p1 + p.a * p.a * p.p2 + 1.0)));
        }
    }
}
