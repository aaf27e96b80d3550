mod common;

use proptest::prelude::*;
use spacelike_drops::bounds::*;
use spacelike_drops::pendent::default_scan_radius;
use spacelike_drops::quadrature::integral_identity_defect;
use spacelike_drops::shooting::{ContactData, Shooter};
use spacelike_drops::{integrate_ivp, CapillaryParams, IvpConfig};

fn gravity() -> impl Strategy<Value = f64> {
    prop_oneof![-4.0..-0.25f64, 0.25..4.0f64]
}

fn apex() -> impl Strategy<Value = f64> {
    prop_oneof![-5.0..-0.05f64, 0.05..5.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn profiles_are_spacelike(kappa in gravity(), u0 in apex()) {
        let params = CapillaryParams::with_kappa(kappa).unwrap();
        let prof = integrate_ivp(&params, u0, 40.0, &IvpConfig::default()).unwrap();
        for s in prof.samples() {
            prop_assert!(s.du.abs() < 1.0, "|u'| = {} at r = {}", s.du.abs(), s.r);
        }
    }

    #[test]
    fn odd_symmetry(kappa in gravity(), u0 in apex()) {
        let params = CapillaryParams::with_kappa(kappa).unwrap();
        let cfg = IvpConfig::default();
        let a = integrate_ivp(&params, u0, 10.0, &cfg).unwrap();
        let b = integrate_ivp(&params, -u0, 10.0, &cfg).unwrap();
        for s in a.samples() {
            prop_assert!((b.u_at(s.r).unwrap() + s.u).abs() <= 1e-12);
        }
    }

    #[test]
    fn integral_identity(kappa in gravity(), u0 in apex()) {
        let params = CapillaryParams::with_kappa(kappa).unwrap();
        let prof = integrate_ivp(&params, u0, 10.0, &IvpConfig::default()).unwrap();
        let defect = integral_identity_defect(&prof).unwrap();
        prop_assert!(defect < 1e-7, "defect {defect:e}");
    }

    #[test]
    fn lipschitz_in_apex(sign in prop_oneof![Just(-1.0), Just(1.0)], u0 in 0.5..2.0f64, u1 in 0.5..2.0f64) {
        prop_assume!((u0 - u1).abs() > 1e-6);
        let rep = check_lipschitz(sign, u0, u1, 2.0, &IvpConfig::default()).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
    }

    #[test]
    fn sessile_reports_pass(kappa in 0.5..4.0f64, u0 in 0.2..5.0f64, radius in 0.5..4.0f64) {
        let cfg = IvpConfig::default();
        let params = CapillaryParams::with_kappa(kappa).unwrap();
        let prof = integrate_ivp(&params, u0, radius, &cfg).unwrap();
        let contact = ContactData::at(&prof, radius).unwrap();
        let rep = verify_sessile(&prof, &contact, &cfg).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
    }

    #[test]
    fn pendent_reports_pass(kappa in -4.0..-0.5f64, u0 in -5.0..-0.2f64) {
        let params = CapillaryParams::with_kappa(kappa).unwrap();
        let prof = integrate_ivp(&params, u0, default_scan_radius(kappa), &IvpConfig::default()).unwrap();
        let rep = verify_pendent(&prof).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
    }

    #[test]
    fn foliation_separates(u0 in 0.2..3.0f64, delta in 0.05..1.0f64, sign in prop_oneof![Just(-1.0), Just(1.0)]) {
        let rep = check_foliation(sign, sign * u0, delta, 10.0, &IvpConfig::default()).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
    }

    #[test]
    fn weaker_gravity_gives_higher_drop(k1 in 0.5..2.0f64, gap in 0.1..2.0f64, beta in 0.2..2.0f64) {
        let rep = check_kappa_monotonicity(k1, k1 + gap, beta, 2.0, &Shooter::default()).unwrap();
        prop_assert!(rep.all_pass(), "{}", rep);
    }
}

#[test]
fn standard_grid_reports_pass() {
    for rep in common::standard_grid_reports().unwrap() {
        assert!(rep.all_pass(), "{rep}");
    }
    for rep in common::family_reports().unwrap() {
        assert!(rep.all_pass(), "{rep}");
    }
}

#[test]
fn raw_profile_invariants_on_standard_grid() {
    let bad = common::profile_invariants().unwrap();
    assert!(bad.is_empty(), "{bad:?}");
}

#[test]
fn documented_foliation_and_gravity_examples() {
    let cfg = IvpConfig::default();
    assert!(check_foliation(1.0, 1.0, 0.5, 10.0, &cfg)
        .unwrap()
        .all_pass());
    assert!(
        check_kappa_monotonicity(1.0, 2.0, 1.0, 2.0, &Shooter::default())
            .unwrap()
            .all_pass()
    );
}

#[test]
fn profile_depends_smoothly_on_apex() {
    // Differences shrink linearly: successive ratios approach the step ratio 10.
    let params = CapillaryParams::with_kappa(1.0).unwrap();
    let cfg = IvpConfig::default();
    let base = integrate_ivp(&params, 1.0, 5.0, &cfg).unwrap();
    for r in [1.0, 3.0, 5.0] {
        let d: Vec<f64> = [1e-2, 1e-3, 1e-4]
            .iter()
            .map(|h| {
                let p = integrate_ivp(&params, 1.0 + h, 5.0, &cfg).unwrap();
                (p.u_at(r).unwrap() - base.u_at(r).unwrap()) / h
            })
            .collect();
        let richardson = d[2] + (d[2] - d[1]) / 9.0;
        assert!((d[1] - d[2]).abs() < 0.02 * d[2].abs(), "r={r}: {d:?}");
        assert!(
            (richardson - d[2]).abs() < 1e-3 * d[2].abs(),
            "r={r}: {d:?}"
        );
    }
}

#[test]
fn profiles_extend_to_large_radius() {
    let cfg = IvpConfig::default();
    for kappa in [-4.0, -1.0, 1.0, 4.0] {
        let params = CapillaryParams::with_kappa(kappa).unwrap();
        for u0 in [-5.0, 0.5, 5.0] {
            let prof = integrate_ivp(&params, u0, 100.0, &cfg).unwrap();
            assert_eq!(prof.r_max(), 100.0);
            assert!(prof
                .samples()
                .iter()
                .all(|s| s.u.is_finite() && s.v.is_finite()));
        }
    }
}

#[test]
fn contact_radius_one_ulp_from_grid_point() {
    let cfg = IvpConfig::default();
    let params = CapillaryParams::with_kappa(0.5).unwrap();
    let radius = 3.261039821785848;
    let prof = integrate_ivp(&params, 0.2, radius, &cfg).unwrap();
    let rep = verify_sessile(&prof, &ContactData::at(&prof, radius).unwrap(), &cfg).unwrap();
    assert!(rep.all_pass(), "{rep}");
}
