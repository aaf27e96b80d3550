mod common;

use spacelike_drops::bounds::check_height_growth;
use spacelike_drops::pendent::{analyze_drop, default_scan_radius, max_drop_bounds};
use spacelike_drops::IvpConfig;

#[test]
fn reference_drop_oscillates_with_decaying_extrema() {
    let out = common::pendent_structure();
    assert!(out.pass, "{}", out.detail);
}

#[test]
fn structure_holds_across_gravity_and_apex() {
    let cfg = IvpConfig::default();
    for kappa in [-1.0, -2.0, -4.0] {
        for u0 in [-0.5, -1.0, -2.0] {
            let (prof, features) =
                analyze_drop(kappa, u0, default_scan_radius(kappa), &cfg).unwrap();
            let mut bad = common::pendent_structure_violations(&features);
            // The absolute first-zero and maximum-height thresholds belong to the reference drop only.
            bad.retain(|b| {
                b.contains("zeros") || b.contains("inflections") || b.contains("decreasing")
            });
            assert!(bad.is_empty(), "kappa={kappa} u0={u0}: {bad:?}");
            let rep = max_drop_bounds(&prof, &features).unwrap();
            assert!(rep.all_pass(), "{rep}");
        }
    }
}

#[test]
fn drop_height_grows_with_apex_depth() {
    for kappa in [-1.0, -2.0, -3.0, -4.0] {
        let rep =
            check_height_growth(kappa, &[-0.5, -1.0, -2.0, -4.0], &IvpConfig::default()).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }
}
