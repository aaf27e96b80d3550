//! Oscillation structure of pendent profiles (`kappa < 0`, `u0 < 0`):
//! zeros, extrema, inflections, the first maximum and the checks on them.

use std::f64::consts::{E, PI};

use serde::{Deserialize, Serialize};

use crate::error::{DropError, Result};
use crate::geometry::pendent_envelope_cap;
use crate::integrate::integrate_ivp;
use crate::params::{CapillaryParams, IvpConfig};
use crate::profile::{DropProfile, ProfilePoint};
use crate::report::{BoundsReport, ReportMeta};
use crate::roots::{brent, RootOptions};

/// Points per integrator step at which sign changes are looked for.
const SUBDIVISIONS: usize = 8;
/// Features of one kind closer than this cannot be told apart.
const MIN_SEPARATION: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtremumKind {
    Minimum,
    Maximum,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Extremum {
    pub r: f64,
    pub u: f64,
    pub kind: ExtremumKind,
}

/// The drop cut at its first maximum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxDrop {
    pub r_m: f64,
    pub u_m: f64,
    /// `pi r_M^2 u_M`.
    pub volume: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PendentFeatures {
    pub kappa: f64,
    pub u0: f64,
    /// Radius up to which the profile was scanned.
    pub scanned_to: f64,
    pub zeros: Vec<f64>,
    /// Extrema in order of radius; the apex `r = 0` is the first minimum.
    pub extrema: Vec<Extremum>,
    pub inflections: Vec<f64>,
    /// First zero `r_o` and the angle `psi(r_o)` there.
    pub first_zero: Option<f64>,
    pub first_zero_angle: Option<f64>,
    pub max_drop: Option<MaxDrop>,
}

impl PendentFeatures {
    pub fn maxima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema
            .iter()
            .filter(|e| e.kind == ExtremumKind::Maximum)
    }

    pub fn minima(&self) -> impl Iterator<Item = &Extremum> {
        self.extrema
            .iter()
            .filter(|e| e.kind == ExtremumKind::Minimum)
    }

    fn meta(&self) -> ReportMeta {
        ReportMeta {
            kappa: self.kappa,
            u0: self.u0,
            radius: self.first_zero,
            beta: self.first_zero_angle,
        }
    }
}

/// Default scan length `25 / sqrt(-kappa)`.
pub fn default_scan_radius(kappa: f64) -> f64 {
    25.0 / (-kappa).sqrt()
}

fn require_pendent(params: &CapillaryParams, u0: f64) -> Result<()> {
    if !(params.kappa < 0.0 && params.lambda == 0.0 && u0 <= 0.0) {
        return Err(DropError::NotPendent {
            kappa: params.kappa,
            u0,
        });
    }
    Ok(())
}

/// `u'' = 0` is equivalent to `v' = kappa u + lambda - v / r = 0`.
fn inflection_fn(params: &CapillaryParams, p: &ProfilePoint) -> f64 {
    if p.r == 0.0 {
        0.5 * (params.kappa * p.u + params.lambda)
    } else {
        params.kappa * p.u + params.lambda - p.v / p.r
    }
}

/// Integrates `u(r; u0)` to `r_max` and analyzes it.
pub fn analyze_drop(
    kappa: f64,
    u0: f64,
    r_max: f64,
    cfg: &IvpConfig,
) -> Result<(DropProfile, PendentFeatures)> {
    let params = CapillaryParams::with_kappa(kappa)?;
    require_pendent(&params, u0)?;
    let profile = integrate_ivp(&params, u0, r_max, cfg)?;
    let features = analyze(&profile)?;
    Ok((profile, features))
}

/// Locates zeros, extrema and inflection points over the whole profile.
pub fn analyze(profile: &DropProfile) -> Result<PendentFeatures> {
    let params = *profile.params();
    let u0 = profile.u0();
    require_pendent(&params, u0)?;
    let mut features = PendentFeatures {
        kappa: params.kappa,
        u0,
        scanned_to: profile.r_max(),
        zeros: Vec::new(),
        extrema: Vec::new(),
        inflections: Vec::new(),
        first_zero: None,
        first_zero_angle: None,
        max_drop: None,
    };
    if u0 == 0.0 {
        return Ok(features);
    }
    features.extrema.push(Extremum {
        r: 0.0,
        u: u0,
        kind: ExtremumKind::Minimum,
    });

    let mut grid = Vec::new();
    for pair in profile.samples().windows(2) {
        let (a, b) = (pair[0].r, pair[1].r);
        for k in 0..SUBDIVISIONS {
            grid.push(a + (b - a) * k as f64 / SUBDIVISIONS as f64);
        }
    }
    grid.push(profile.r_max());
    let points = grid
        .iter()
        .map(|&r| profile.eval(r))
        .collect::<Result<Vec<_>>>()?;

    for pair in points.windows(2) {
        let (p, q) = (&pair[0], &pair[1]);
        if let Some(r) = crossing(profile, p, q, |pt| pt.u, |pt| pt.du)? {
            features.zeros.push(r);
        }
        // Skip the axis, where v = 0 by construction.
        if p.r > 0.0 {
            if let Some(r) = crossing(profile, p, q, |pt| pt.v, |pt| pt.dv)? {
                let kind = if p.v > 0.0 {
                    ExtremumKind::Maximum
                } else {
                    ExtremumKind::Minimum
                };
                features.extrema.push(Extremum {
                    r,
                    u: profile.u_at(r)?,
                    kind,
                });
            }
        }
        let f = |pt: &ProfilePoint| inflection_fn(&params, pt);
        if let Some(r) = crossing(profile, p, q, f, |_| f64::NAN)? {
            features.inflections.push(r);
        }
    }

    check_separation("zero", &features.zeros)?;
    check_separation(
        "extremum",
        &features.extrema.iter().map(|e| e.r).collect::<Vec<_>>(),
    )?;
    check_separation("inflection", &features.inflections)?;

    if let Some(&r_o) = features.zeros.first() {
        features.first_zero = Some(r_o);
        features.first_zero_angle = Some(profile.v_at(r_o)?.asinh());
    }
    let first_max = features.maxima().next().copied();
    if let Some(m) = first_max {
        features.max_drop = Some(MaxDrop {
            r_m: m.r,
            u_m: m.u,
            volume: PI * m.r * m.r * m.u,
        });
    }
    Ok(features)
}

/// Root of `f` between two scan points with a sign change, refined by Brent
/// on the dense output and one guarded Newton step with derivative `df`.
fn crossing<F, D>(
    profile: &DropProfile,
    p: &ProfilePoint,
    q: &ProfilePoint,
    f: F,
    df: D,
) -> Result<Option<f64>>
where
    F: Fn(&ProfilePoint) -> f64,
    D: Fn(&ProfilePoint) -> f64,
{
    let (fp, fq) = (f(p), f(q));
    if fp == 0.0 || fq == 0.0 && p.r > 0.0 {
        // Exact hits are attributed to the interval they start.
        return Ok((fp == 0.0 && p.r > 0.0).then_some(p.r));
    }
    if fp.signum() == fq.signum() {
        return Ok(None);
    }
    let g = |r: f64| profile.eval(r).map(|pt| f(&pt));
    let opts = RootOptions {
        x_tol: 1e-15 * q.r.max(1.0),
        ..RootOptions::default()
    };
    let root = brent(g, p.r, q.r, fp, fq, opts)?;
    let pt = profile.eval(root.x)?;
    let slope = df(&pt);
    if slope.is_finite() && slope != 0.0 {
        let polished = root.x - f(&pt) / slope;
        if polished > p.r && polished < q.r {
            return Ok(Some(polished));
        }
    }
    Ok(Some(root.x))
}

fn check_separation(kind: &'static str, radii: &[f64]) -> Result<()> {
    for w in radii.windows(2) {
        if w[1] - w[0] < MIN_SEPARATION {
            return Err(DropError::FeatureTooClose {
                kind,
                a: w[0],
                b: w[1],
            });
        }
    }
    Ok(())
}

/// Consecutive extrema shrink in magnitude, with
/// `u_{k+1}^2 < (z^2 + r_k^2) / (2 z^2) u_k^2` for the zero `z` between them.
pub fn extrema_decay_check(features: &PendentFeatures) -> BoundsReport {
    let mut rep = BoundsReport::new(features.meta());
    let mut magnitude = Vec::new();
    let mut squared = Vec::new();
    for w in features.extrema.windows(2) {
        let (a, b) = (w[0], w[1]);
        magnitude.push((b.r, b.u.abs(), a.u.abs()));
        if let Some(&z) = features.zeros.iter().find(|&&z| z > a.r && z < b.r) {
            let factor = (z * z + a.r * a.r) / (2.0 * z * z);
            squared.push((b.r, b.u * b.u, factor * a.u * a.u));
        }
    }
    rep.less_on_grid(
        "extremum_magnitude_decreases",
        "|u| at each extremum is below |u| at the previous one",
        true,
        magnitude,
    );
    rep.less_on_grid(
        "extremum_square_ratio",
        "u_next^2 < (z^2 + r_prev^2) / (2 z^2) u_prev^2 across each zero z",
        true,
        squared,
    );
    rep
}

/// Two-sided bounds on `r sinh(psi) / |r^2 - r_e^2|` between every extremum
/// and the neighbouring zeros, at 20 interior points per interval.
pub fn ratio_bounds_check(
    profile: &DropProfile,
    features: &PendentFeatures,
) -> Result<BoundsReport> {
    let kappa = features.kappa;
    let mut rep = BoundsReport::new(features.meta());
    let mut after_min = (Vec::new(), Vec::new());
    let mut after_max = (Vec::new(), Vec::new());
    let mut before_min = (Vec::new(), Vec::new());
    let mut before_max = (Vec::new(), Vec::new());
    let interior = |a: f64, b: f64| (1..=20).map(move |j| a + (b - a) * j as f64 / 21.0);

    for e in &features.extrema {
        let half = 0.5 * kappa * e.u;
        if let Some(&z) = features.zeros.iter().find(|&&z| z > e.r) {
            for r in interior(e.r, z) {
                let p = profile.eval(r)?;
                let q = r * p.v / (r * r - e.r * e.r);
                let local = 0.5 * kappa * p.u;
                match e.kind {
                    ExtremumKind::Minimum => {
                        after_min.0.push((r, local, q));
                        after_min.1.push((r, q, half));
                    }
                    ExtremumKind::Maximum => {
                        after_max.0.push((r, half, q));
                        after_max.1.push((r, q, local));
                    }
                }
            }
        }
        if let Some(&z) = features.zeros.iter().rev().find(|&&z| z < e.r) {
            for r in interior(z, e.r) {
                let p = profile.eval(r)?;
                let q = r * p.v / (e.r * e.r - r * r);
                let local = -0.5 * kappa * p.u;
                match e.kind {
                    ExtremumKind::Minimum => {
                        before_min.0.push((r, -half, q));
                        before_min.1.push((r, q, local));
                    }
                    ExtremumKind::Maximum => {
                        before_max.0.push((r, local, q));
                        before_max.1.push((r, q, -half));
                    }
                }
            }
        }
    }
    let groups = [
        (
            "after_minimum",
            "from a minimum to the next zero",
            after_min,
        ),
        (
            "after_maximum",
            "from a maximum to the next zero",
            after_max,
        ),
        (
            "before_minimum",
            "from a zero to the next minimum",
            before_min,
        ),
        (
            "before_maximum",
            "from a zero to the next maximum",
            before_max,
        ),
    ];
    for (name, what, (lower, upper)) in groups {
        rep.less_on_grid(
            &format!("ratio_{name}_lower"),
            &format!("lower bound on r sinh(psi) / |r^2 - r_e^2| {what}"),
            true,
            lower,
        );
        rep.less_on_grid(
            &format!("ratio_{name}_upper"),
            &format!("upper bound on r sinh(psi) / |r^2 - r_e^2| {what}"),
            true,
            upper,
        );
    }
    Ok(rep)
}

/// Sup-norm distances `(d0, d1, d2)` on `[0, r_end]` between `u(r; u0)` and
/// its envelope cap, for the function and its first two derivatives.
pub fn asymptotic_cap_deviation(
    kappa: f64,
    u0: f64,
    r_end: f64,
    cfg: &IvpConfig,
) -> Result<(f64, f64, f64)> {
    let params = CapillaryParams::with_kappa(kappa)?;
    require_pendent(&params, u0)?;
    if u0 == 0.0 {
        return Ok((0.0, 0.0, 0.0));
    }
    let cap = pendent_envelope_cap(u0, kappa)?;
    let profile = integrate_ivp(&params, u0, r_end, cfg)?;
    let mut radii: Vec<f64> = profile.samples().iter().map(|s| s.r).collect();
    radii.extend(profile.uniform_radii(2000));
    let mut d = (0.0f64, 0.0f64, 0.0f64);
    for r in radii {
        let p = profile.eval(r)?;
        d.0 = d.0.max((p.u - cap.eval(r)).abs());
        d.1 = d.1.max((p.du - cap.derivative(r)).abs());
        d.2 = d.2.max((p.ddu - cap.second_derivative(r)).abs());
    }
    Ok(d)
}

/// Bounds on the drop up to its first zero and first maximum: heights,
/// radii and volumes, plus the envelope cap and first-zero estimates.
pub fn max_drop_bounds(profile: &DropProfile, features: &PendentFeatures) -> Result<BoundsReport> {
    let kappa = features.kappa;
    let u0 = features.u0;
    let mut rep = BoundsReport::new(features.meta());
    let (Some(r_o), Some(beta0)) = (features.first_zero, features.first_zero_angle) else {
        return Ok(rep);
    };
    let length = 1.0 / (-kappa).sqrt();
    let angle_energy = 2.0 / -kappa * (beta0.cosh() - 1.0);
    rep.less(
        "angle_energy_below_apex",
        "(2 / -kappa)(cosh psi(r_o) - 1) < u0^2 / 2",
        angle_energy,
        0.5 * u0 * u0,
    );
    let zero_floor = (u0 * u0 - 4.0 / kappa).sqrt();
    rep.less(
        "first_zero_above_envelope",
        "sqrt(u0^2 - 4 / kappa) < r_o",
        zero_floor,
        r_o,
    );
    rep.less(
        "envelope_zero_above_length",
        "2 / sqrt(-kappa) < sqrt(u0^2 - 4 / kappa)",
        2.0 * length,
        zero_floor,
    );
    let sb0 = beta0.sinh();
    let v_o = -2.0 * PI * r_o * sb0 / kappa;
    rep.less(
        "volume_to_first_zero_lower",
        "(pi u0 / (3 kappa))(6 - kappa u0^2) < volume up to r_o",
        PI * u0 / (3.0 * kappa) * (6.0 - kappa * u0 * u0),
        v_o,
    );
    rep.less(
        "first_zero_radius_lower",
        "-u0 (6 - kappa u0^2) / (6 sinh psi(r_o)) < r_o",
        -u0 * (6.0 - kappa * u0 * u0) / (6.0 * sb0),
        r_o,
    );
    for a in [0.5 * length, length] {
        if a < r_o {
            let psi_a = profile.v_at(a)?.asinh();
            let t = -2.0 / (kappa * a * a);
            let c = a * (psi_a.cosh() * t.sinh() + t.cosh());
            rep.less(
                &format!("first_zero_upper_at_{:.3}", a),
                "r_o < a (cosh psi(a) sinh(-2 / (kappa a^2)) + cosh(-2 / (kappa a^2)))",
                r_o,
                c,
            );
        }
    }
    rep.less(
        "first_zero_below_2_sqrt_e",
        "r_o < 2 sqrt(e) / sqrt(-kappa); does not hold in general, informational",
        r_o,
        2.0 * E.sqrt() * length,
    );
    rep.non_blocking();

    let cap = pendent_envelope_cap(u0, kappa)?;
    let r_stop = features.max_drop.map_or(features.scanned_to, |m| m.r_m);
    let mut below_cap = Vec::new();
    // Cap and profile agree to fourth order at the axis; stay on a grid.
    for k in 1..=100 {
        let r = r_stop * k as f64 / 100.0;
        below_cap.push((r, profile.u_at(r)?, cap.eval(r)));
    }
    rep.less_on_grid(
        "below_envelope_cap",
        "u(r) < envelope cap up to the first maximum",
        true,
        below_cap,
    );

    if let Some(m) = features.max_drop {
        rep.less(
            "max_height_squared",
            "u_M^2 < (2 / -kappa)(cosh psi(r_o) - 1)",
            m.u_m * m.u_m,
            angle_energy,
        );
        let q = m.u_m - u0;
        rep.less(
            "max_drop_volume_lower",
            "(pi / (3 kappa u0)) q^2 (6 + kappa u0 q) < pi r_M^2 u_M",
            PI / (3.0 * kappa * u0) * q * q * (6.0 + kappa * u0 * q),
            m.volume,
        );
        rep.less(
            "max_drop_radius_lower",
            "sqrt(q^2 (6 + kappa u0 q) / (3 kappa u0 u_M)) < r_M",
            (q * q * (6.0 + kappa * u0 * q) / (3.0 * kappa * u0 * m.u_m)).sqrt(),
            m.r_m,
        );
    }
    Ok(rep)
}
