use anosov_core::distinguisher::{distinguish, proven_pairs, Certificate, Orientation};
use anosov_core::gluing::{locate_periodic_orbit, CrossingModel};
use anosov_core::handedness::{extendable_to_even, frame_consistency, SAAnnulus};
use anosov_core::orbit_space::{classify_maximal, old_fan_cluster, photo, photo_inverse, Classification};
use anosov_core::{build_plug, PlugSpec};
use proptest::prelude::*;

fn branch_witnesses(c: &Certificate) -> Vec<(Orientation, u32)> {
    c.branches.iter().map(|b| (b.orientation, b.witness_torus)).collect()
}

proptest! {
    #[test]
    fn verdict_is_symmetric(n in 1u32..6, a in 0u32..11, b in 0u32..11, k in prop_oneof![-50i64..0, 1i64..50]) {
        let (a, b) = (a % (2 * n + 1), b % (2 * n + 1));
        prop_assume!(a != b);
        let x = distinguish(n, a, b, k).unwrap();
        let y = distinguish(n, b, a, k).unwrap();
        prop_assert_eq!(&x.verdict, &y.verdict);
        prop_assert!(x.verify().unwrap());
    }

    #[test]
    fn only_the_sign_of_k_matters(n in 1u32..6, scale in 1i64..200) {
        for (a, b) in proven_pairs(n) {
            for sign in [1i64, -1] {
                let unit = distinguish(n, a, b, sign).unwrap();
                let big = distinguish(n, a, b, sign * scale).unwrap();
                prop_assert_eq!(&unit.verdict, &big.verdict);
                prop_assert_eq!(branch_witnesses(&unit), branch_witnesses(&big));
            }
        }
    }

    #[test]
    fn extension_depends_on_sign_only(n in 1u32..5, i in 1u32..17, m in 0u32..9, k in 1i64..1000) {
        let (i, m) = (1 + (i - 1) % (4 * n), m % (2 * n + 1));
        let sa = SAAnnulus::old(n, i, m).unwrap();
        prop_assert_eq!(extendable_to_even(&sa, k).unwrap().is_yes(), extendable_to_even(&sa, 1).unwrap().is_yes());
        prop_assert_eq!(extendable_to_even(&sa, -k).unwrap().is_yes(), extendable_to_even(&sa, -1).unwrap().is_yes());
    }
}

#[test]
fn every_proven_pair_is_refuted() {
    for n in 1..=5 {
        for k in [-3, 3] {
            for (a, b) in proven_pairs(n) {
                let c = distinguish(n, a, b, k).unwrap();
                assert!(c.is_inequivalent(), "n={n} ({a},{b})");
            }
        }
    }
}

#[test]
fn certificate_json_round_trip() {
    let c = distinguish(3, 2, 5, -7).unwrap();
    let text = serde_json::to_string_pretty(&c).unwrap();
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["pair", "branches", "verdict"] {
        assert!(value.get(key).is_some(), "missing {key}");
    }
    let branch = &value["branches"][0];
    for key in ["orientation", "witness_torus", "lemma", "table_cells"] {
        assert!(branch.get(key).is_some(), "missing branch.{key}");
    }
    let back: Certificate = serde_json::from_str(&text).unwrap();
    assert_eq!(back, c);
    assert!(back.verify().unwrap());
}

#[test]
fn plug_json_round_trip() {
    for n in 1..=3 {
        let plug = build_plug(n).unwrap();
        let text = serde_json::to_string(&plug).unwrap();
        let back: PlugSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, plug);
    }
}

#[test]
fn old_annulus_photo_is_the_old_fan() {
    for i in 1..=6 {
        let sa = SAAnnulus::old(2, i, 1).unwrap();
        assert!(frame_consistency(&sa).unwrap());
        let fan = photo(&sa).unwrap();
        assert_eq!(fan.lozenges, old_fan_cluster(i).unwrap().lozenges);
        assert_eq!(photo_inverse(&fan).unwrap(), sa);
        assert!(matches!(classify_maximal(&fan.lozenges, 7).unwrap(), Classification::Shape(_)));
    }
}

#[test]
fn periodic_orbits_stay_in_their_rectangles() {
    let model = CrossingModel::default();
    for m in 0..=4 {
        for j in 1..=4 {
            for component in [-2, -1, 0, 1, 2] {
                let orbit = locate_periodic_orbit(&model, 2, m, j, component).unwrap();
                let r = orbit.rectangle;
                for (rect, p) in [(r.odd, orbit.points[0]), (r.even, orbit.points[1])] {
                    assert_eq!(p.i, rect.torus);
                    assert!(p.x >= rect.x_range.0 - 1e-12 && p.x <= rect.x_range.1 + 1e-12);
                }
            }
        }
    }
}
