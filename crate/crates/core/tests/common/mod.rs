//! Acceptance criteria shared by the acceptance target and the focused tests.
#![allow(dead_code, clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use spacelike_drops::bounds::{
    check_foliation, check_height_growth, check_kappa_monotonicity, check_lipschitz,
    check_pendent_ordering, verify_pendent, verify_sessile,
};
use spacelike_drops::geometry::{pendent_volume, volumes};
use spacelike_drops::pendent::{analyze_drop, default_scan_radius, PendentFeatures};
use spacelike_drops::quadrature::integral_identity_defect;
use spacelike_drops::report::BoundsReport;
use spacelike_drops::shooting::{ContactData, Shooter, ShootingResult};
use spacelike_drops::sweep::Execution;
use spacelike_drops::tables::{
    estimate_table, height_table, worst_relative_error, ESTIMATE_REFERENCE, HEIGHT_REFERENCE,
};
use spacelike_drops::{integrate_ivp, picard_oracle, CapillaryParams, IvpConfig};

pub const KAPPAS: [f64; 4] = [1.0, 2.0, 3.0, 4.0];
pub const APEXES: [f64; 4] = [0.5, 1.0, 2.0, 5.0];
/// Contact radius used for sessile profiles on the standard grid.
pub const GRID_RADIUS: f64 = 3.0;

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

pub fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, f64) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed().as_secs_f64())
}

fn failures(rep: &BoundsReport) -> Vec<String> {
    rep.failures()
        .map(|e| format!("{} {}", rep.meta.kappa, e))
        .collect()
}

pub fn table_heights() -> Outcome {
    match height_table(&IvpConfig::default(), Execution::default()) {
        Ok(rows) => {
            let values: Vec<_> = rows.iter().map(|r| r.values()).collect();
            let (err, row, col) = worst_relative_error(&values, &HEIGHT_REFERENCE);
            Outcome::new(
                err <= 1e-3,
                format!("worst relative error {err:.2e} at row {row} column {col}"),
            )
        }
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

pub fn table_estimates() -> Outcome {
    match estimate_table(&IvpConfig::default(), Execution::default()) {
        Ok(rows) => {
            let values: Vec<_> = rows.iter().map(|r| r.values()).collect();
            let (err, row, col) = worst_relative_error(&values, &ESTIMATE_REFERENCE);
            Outcome::new(
                err <= 1e-3,
                format!("worst relative error {err:.2e} at row {row} column {col}"),
            )
        }
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

/// Sup-norm gap between the adaptive integrator and the fixed-point oracle on
/// `[0, 4]`, measured at the oracle's grid points.
pub fn oracle_gap(kappa: f64, u0: f64) -> spacelike_drops::Result<f64> {
    let params = CapillaryParams::with_kappa(kappa)?;
    let fast = integrate_ivp(&params, u0, 4.0, &IvpConfig::default())?;
    let slow = picard_oracle(&params, u0, 4.0, 8000, 60)?;
    let mut worst: f64 = 0.0;
    for s in slow.samples() {
        worst = worst.max((fast.u_at(s.r)? - s.u).abs());
    }
    Ok(worst)
}

pub fn oracle_equivalence() -> Outcome {
    let mut worst = (0.0, 0.0, 0.0);
    for kappa in [1.0, -1.0, 2.0, -2.0] {
        for u0 in [0.5, 1.0, 5.0] {
            match oracle_gap(kappa, u0) {
                Ok(gap) if gap.is_finite() => {
                    if gap > worst.0 {
                        worst = (gap, kappa, u0);
                    }
                }
                Ok(gap) => return Outcome::new(false, format!("kappa={kappa} u0={u0}: gap {gap}")),
                Err(e) => return Outcome::new(false, format!("kappa={kappa} u0={u0}: {e}")),
            }
        }
    }
    Outcome::new(
        worst.0 <= 1e-8,
        format!(
            "12 profiles, worst gap {:.2e} at kappa={} u0={}",
            worst.0, worst.1, worst.2
        ),
    )
}

/// Reports over the standard grid: sessile profiles cut at [`GRID_RADIUS`]
/// and pendent profiles over the default scan window.
pub fn standard_grid_reports() -> spacelike_drops::Result<Vec<BoundsReport>> {
    let cfg = IvpConfig::default();
    let mut out = Vec::new();
    for kappa in KAPPAS {
        for u0 in APEXES {
            let params = CapillaryParams::with_kappa(kappa)?;
            let prof = integrate_ivp(&params, u0, GRID_RADIUS, &cfg)?;
            let contact = ContactData::at(&prof, GRID_RADIUS)?;
            out.push(verify_sessile(&prof, &contact, &cfg)?);

            let params = CapillaryParams::with_kappa(-kappa)?;
            let prof = integrate_ivp(&params, -u0, default_scan_radius(-kappa), &cfg)?;
            out.push(verify_pendent(&prof)?);
        }
        out.push(check_height_growth(
            -kappa,
            &[-0.5, -1.0, -2.0, -4.0],
            &cfg,
        )?);
    }
    Ok(out)
}

/// Pointwise invariants of raw profiles: spacelike, odd symmetry, integral
/// identity, global extension to `r = 100`.
pub fn profile_invariants() -> spacelike_drops::Result<Vec<String>> {
    let cfg = IvpConfig::default();
    let mut bad = Vec::new();
    for kappa in KAPPAS.iter().flat_map(|&k| [k, -k]) {
        let params = CapillaryParams::with_kappa(kappa)?;
        for u0 in APEXES.iter().flat_map(|&u| [u, -u]) {
            let prof = integrate_ivp(&params, u0, 100.0, &cfg)?;
            if let Some(s) = prof.samples().iter().find(|s| !(s.du.abs() < 1.0)) {
                bad.push(format!(
                    "kappa={kappa} u0={u0}: |u'| = {} at r = {}",
                    s.du.abs(),
                    s.r
                ));
            }
            let window = prof.truncated(10.0)?;
            let defect = integral_identity_defect(&window)?;
            if !(defect < 1e-7) {
                bad.push(format!(
                    "kappa={kappa} u0={u0}: integral identity defect {defect:.2e}"
                ));
            }
            let mirror = integrate_ivp(&params, -u0, 100.0, &cfg)?;
            let mut gap: f64 = 0.0;
            for s in prof.samples() {
                gap = gap.max((mirror.u_at(s.r)? + s.u).abs());
            }
            if !(gap <= 1e-12) {
                bad.push(format!("kappa={kappa} u0={u0}: odd symmetry gap {gap:.2e}"));
            }
        }
    }
    Ok(bad)
}

/// Comparison and stability statements across several profiles.
pub fn family_reports() -> spacelike_drops::Result<Vec<BoundsReport>> {
    let cfg = IvpConfig::default();
    let mut out = Vec::new();
    for kappa in [1.0, -1.0] {
        for (u0, u1) in [(0.5, 2.0), (1.0, 1.5), (1.9, 2.0)] {
            out.push(check_lipschitz(kappa, u0, u1, 2.0, &cfg)?);
        }
    }
    out.push(check_foliation(1.0, 1.0, 0.5, 10.0, &cfg)?);
    out.push(check_foliation(-1.0, -1.0, 0.5, 10.0, &cfg)?);
    out.push(check_kappa_monotonicity(
        1.0,
        2.0,
        1.0,
        2.0,
        &Shooter::default(),
    )?);
    out.push(check_pendent_ordering(-2.0, -2.0, -1.0, &cfg)?);
    Ok(out)
}

pub fn invariant_suite() -> Outcome {
    let mut bad = Vec::new();
    let mut checked = 0;
    let mut informational = 0;
    match profile_invariants() {
        Ok(b) => bad.extend(b),
        Err(e) => bad.push(e.to_string()),
    }
    for reports in [standard_grid_reports(), family_reports()] {
        match reports {
            Ok(reps) => {
                for rep in &reps {
                    checked += rep.entries.len();
                    informational += rep.entries.iter().filter(|e| !e.blocking).count();
                    bad.extend(failures(rep));
                }
            }
            Err(e) => bad.push(e.to_string()),
        }
    }
    if bad.is_empty() {
        Outcome::new(
            true,
            format!("{checked} report entries ({informational} informational) and 64 raw profiles"),
        )
    } else {
        Outcome::new(false, format!("{} failures; first: {}", bad.len(), bad[0]))
    }
}

/// Structural claims about the oscillating pendent profile.
pub fn pendent_structure_violations(features: &PendentFeatures) -> Vec<String> {
    let mut bad = Vec::new();
    if features.zeros.len() < 5 {
        bad.push(format!("only {} zeros", features.zeros.len()));
    }
    let ext = &features.extrema;
    for w in ext.windows(2) {
        let (a, b) = (w[0], w[1]);
        if !(b.u.abs() < a.u.abs()) {
            bad.push(format!(
                "|u| not decreasing between r = {} and r = {}",
                a.r, b.r
            ));
        }
        let zeros = features
            .zeros
            .iter()
            .filter(|&&z| a.r < z && z < b.r)
            .count();
        if zeros != 1 {
            bad.push(format!("{zeros} zeros in ({}, {})", a.r, b.r));
        }
        let infl = features
            .inflections
            .iter()
            .filter(|&&z| a.r < z && z < b.r)
            .count();
        if infl != 1 {
            bad.push(format!("{infl} inflections in ({}, {})", a.r, b.r));
        }
    }
    match features.first_zero {
        Some(r_o) if r_o > 3f64.sqrt() => {}
        other => bad.push(format!("first zero {other:?} not beyond sqrt(3)")),
    }
    match features.max_drop {
        Some(m) if m.u_m < 0.5f64.sqrt() => {}
        other => bad.push(format!("first maximum {other:?} not below 1/sqrt(2)")),
    }
    bad
}

pub fn pendent_structure() -> Outcome {
    let kappa = -2.0;
    let r_max = 25.0 / 2f64.sqrt();
    match analyze_drop(kappa, -1.0, r_max, &IvpConfig::default()) {
        Ok((_, features)) => {
            let bad = pendent_structure_violations(&features);
            let summary = format!(
                "{} zeros, {} extrema, r_o = {:.6}, u_M = {:.6}",
                features.zeros.len(),
                features.extrema.len(),
                features.first_zero.unwrap_or(f64::NAN),
                features.max_drop.map_or(f64::NAN, |m| m.u_m)
            );
            match bad.first() {
                None => Outcome::new(true, summary),
                Some(b) => Outcome::new(false, format!("{summary}; {b}")),
            }
        }
        Err(e) => Outcome::new(false, e.to_string()),
    }
}

/// Which boundary condition a solver enforces.
#[derive(Debug, Clone, Copy)]
pub enum Target {
    Radius,
    Plane(f64),
    Volume(f64),
}

pub struct SolverCase {
    pub name: &'static str,
    pub kappa: f64,
    pub beta: f64,
    pub target: Target,
}

pub fn solver_cases() -> Vec<SolverCase> {
    let mut cases = Vec::new();
    for kappa in [1.0, 2.0, 4.0] {
        for beta in [0.5, 1.5, 3.0] {
            cases.extend([
                SolverCase {
                    name: "sessile_by_radius",
                    kappa,
                    beta,
                    target: Target::Radius,
                },
                SolverCase {
                    name: "sessile_by_plane",
                    kappa,
                    beta,
                    target: Target::Plane(5.0),
                },
                SolverCase {
                    name: "sessile_by_volume",
                    kappa,
                    beta,
                    target: Target::Volume(10.0),
                },
                SolverCase {
                    name: "pendent_by_radius",
                    kappa: -kappa,
                    beta,
                    target: Target::Radius,
                },
                SolverCase {
                    name: "pendent_by_plane",
                    kappa: -kappa,
                    beta,
                    target: Target::Plane(0.0),
                },
                SolverCase {
                    name: "pendent_by_volume",
                    kappa: -kappa,
                    beta,
                    target: Target::Volume(2.0),
                },
            ]);
        }
    }
    cases
}

pub const SOLVER_RADIUS: f64 = 2.0;

pub fn run_case(shooter: &Shooter, case: &SolverCase) -> spacelike_drops::Result<ShootingResult> {
    let (k, b) = (case.kappa, case.beta);
    match (case.name, case.target) {
        ("sessile_by_radius", _) => shooter.sessile_by_radius(k, b, SOLVER_RADIUS),
        ("sessile_by_plane", Target::Plane(h)) => shooter.sessile_by_plane(k, b, h),
        ("sessile_by_volume", Target::Volume(v)) => shooter.sessile_by_volume(k, b, v),
        ("pendent_by_radius", _) => shooter.pendent_by_radius(k, b, SOLVER_RADIUS),
        ("pendent_by_plane", _) => shooter.pendent_by_plane(k, b),
        ("pendent_by_volume", Target::Volume(v)) => shooter.pendent_by_volume(k, b, v),
        _ => unreachable!("malformed case {}", case.name),
    }
}

/// Re-integrates from the returned apex and measures how far the boundary
/// data miss the request: `(angle miss, height or radius miss, volume relative miss)`.
pub fn consistency(
    case: &SolverCase,
    res: &ShootingResult,
) -> spacelike_drops::Result<(f64, f64, f64)> {
    let params = CapillaryParams::with_kappa(case.kappa)?;
    let r = res.contact.radius;
    let prof = integrate_ivp(&params, res.u0, r, &IvpConfig::default())?;
    let end = *prof.last();
    let angle = (end.v.asinh() - case.beta).abs();
    let (place, volume) = match case.target {
        Target::Radius => ((r - SOLVER_RADIUS).abs(), 0.0),
        Target::Plane(h) => ((end.u - h).abs(), 0.0),
        Target::Volume(v) => {
            let got = if case.kappa > 0.0 {
                // Cylinder up to the contact height minus the quadrature of u.
                let vols = volumes(&prof, &ContactData::at(&prof, r)?)?;
                PI * r * r * end.u - vols.under_profile_quadrature
            } else {
                pendent_volume(&prof, r)?
            };
            (0.0, (got / v - 1.0).abs())
        }
    };
    Ok((angle, place, volume))
}

pub fn six_solvers() -> Outcome {
    let shooter = Shooter::default();
    let mut bad = Vec::new();
    let mut worst = (0.0f64, 0.0f64, 0.0f64);
    let cases = solver_cases();
    for case in &cases {
        let label = format!("{} kappa={} beta={}", case.name, case.kappa, case.beta);
        match run_case(&shooter, case).and_then(|res| consistency(case, &res)) {
            Ok((a, p, v)) => {
                worst = (worst.0.max(a), worst.1.max(p), worst.2.max(v));
                if !(a <= 1e-9 && p <= 1e-9 && v <= 1e-6) {
                    bad.push(format!("{label}: misses {a:.2e} {p:.2e} {v:.2e}"));
                }
            }
            Err(e) => bad.push(format!("{label}: {e}")),
        }
    }
    let summary = format!(
        "{} solves, worst angle {:.1e}, position {:.1e}, volume {:.1e}",
        cases.len(),
        worst.0,
        worst.1,
        worst.2
    );
    match bad.first() {
        None => Outcome::new(true, summary),
        Some(b) => Outcome::new(
            false,
            format!("{summary}; {} failures, first: {b}", bad.len()),
        ),
    }
}

pub fn drops(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_drops"))
        .args(args)
        .output()
        .expect("run drops binary")
}

pub fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["table", "--which", "1"],
        &["table", "--which", "2", "--format", "csv"],
        &["table", "--which", "1", "--format", "json"],
        &[
            "foliate", "--kappa", "-2", "--u0-min", "-2", "--u0-max", "-0.5", "--count", "5",
            "--r-max", "6",
        ],
    ];
    for args in runs {
        let first = drops(args);
        if !first.status.success() {
            return Outcome::new(false, format!("{args:?} exited with {}", first.status));
        }
        for _ in 0..2 {
            if drops(args).stdout != first.stdout {
                return Outcome::new(false, format!("{args:?} output differs between runs"));
            }
        }
        let mut seq: Vec<&str> = args.to_vec();
        seq.push("--sequential");
        if drops(&seq).stdout != first.stdout {
            return Outcome::new(false, format!("{args:?} differs with --sequential"));
        }
    }
    Outcome::new(
        true,
        "table and foliate output byte-identical across runs and execution modes",
    )
}
