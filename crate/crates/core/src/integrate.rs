//! Integration of the singular initial value problem
//!
//! ```text
//! (r v)' = r (kappa u + lambda),   u' = v / sqrt(1 + v^2),
//! u(0) = u0,  v(0) = 0,
//! ```
//!
//! in the regular variables `(u, v = sinh psi)`. The axis singularity is left
//! with one step of the Taylor series, after which an embedded
//! Dormand-Prince 5(4) pair with PI step control takes over.

use crate::error::{DropError, Result};
use crate::params::{CapillaryParams, IvpConfig};
use crate::profile::{interpolate, DropProfile, ProfileSample};
use crate::roots::{brent, RootOptions};

/// Truncated power series of the solution near the axis for `(r v)' = kappa r u`.
///
/// Returns `(u(r), v(r))` with `v` carried to `r^5` and `u` to `r^4`.
pub fn series_start(u0: f64, kappa: f64, r: f64) -> (f64, f64) {
    let a1 = 0.5 * kappa * u0;
    let b2 = 0.5 * a1;
    let a3 = 0.25 * kappa * b2;
    let b4 = 0.25 * (a3 - 0.5 * a1 * a1 * a1);
    let a5 = kappa * b4 / 6.0;
    let r2 = r * r;
    let u = u0 + r2 * (b2 + r2 * b4);
    let v = r * (a1 + r2 * (a3 + r2 * a5));
    (u, v)
}

// Dormand-Prince 5(4) tableau.
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// PI controller constants.
const SAFETY: f64 = 0.9;
const BETA: f64 = 0.04;
const EXPO1: f64 = 0.2 - BETA * 0.75;
const FAC_MIN: f64 = 0.2;
const FAC_MAX: f64 = 10.0;

type Vec2 = [f64; 2];

#[inline]
fn rhs(kappa: f64, r: f64, y: &Vec2) -> Vec2 {
    let (w, v) = (y[0], y[1]);
    [v / (1.0 + v * v).sqrt(), kappa * w - v / r]
}

#[inline]
fn axpy(y: &Vec2, h: f64, terms: &[(f64, &Vec2)]) -> Vec2 {
    let mut out = *y;
    for (c, k) in terms {
        out[0] += h * c * k[0];
        out[1] += h * c * k[1];
    }
    out
}

/// Marches from the axis to `r_end`, storing every accepted node.
///
/// `stop` is called on every new step `(prev, next)` and ends the march when
/// it returns true; the step that triggered it is kept.
fn march<S>(
    params: &CapillaryParams,
    u0: f64,
    r_end: f64,
    cfg: &IvpConfig,
    mut stop: S,
) -> Result<Vec<ProfileSample>>
where
    S: FnMut(&ProfileSample, &ProfileSample) -> bool,
{
    params.require_gravity()?;
    cfg.validate()?;
    if !(r_end > 0.0) || !r_end.is_finite() {
        return Err(DropError::InvalidArgument(format!(
            "integration horizon must be positive and finite, got {r_end}"
        )));
    }
    if !u0.is_finite() {
        return Err(DropError::InvalidArgument(format!(
            "u0 = {u0} is not finite"
        )));
    }

    let kappa = params.kappa;
    let shift = params.shift();
    let w0 = u0 + shift;
    let to_sample = |r: f64, y: &Vec2| ProfileSample::new(r, y[0] - shift, y[1]);

    let mut nodes = Vec::with_capacity(256);
    nodes.push(ProfileSample::new(0.0, u0, 0.0));

    let r_first = cfg.h_init.min(r_end);
    let (w1, v1) = series_start(w0, kappa, r_first);
    let mut r = r_first;
    let mut y = [w1, v1];
    nodes.push(to_sample(r, &y));
    if stop(&nodes[0], &nodes[1]) || r >= r_end {
        return Ok(nodes);
    }

    let mut h = cfg.h_init.min(r_end - r);
    let mut k1 = rhs(kappa, r, &y);
    let mut fac_old: f64 = 1e-4;
    let mut rejected_last = false;

    loop {
        let last_step = r + h >= r_end * (1.0 - 4.0 * f64::EPSILON);
        if last_step {
            h = r_end - r;
        }
        if !(h > r.abs() * 1e-14) {
            return Err(DropError::NonFiniteState { r });
        }

        let k2 = rhs(kappa, r + C2 * h, &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(kappa, r + C3 * h, &axpy(&y, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            kappa,
            r + C4 * h,
            &axpy(&y, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            kappa,
            r + C5 * h,
            &axpy(&y, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let r_new = if last_step { r_end } else { r + h };
        let k6 = rhs(
            kappa,
            r_new,
            &axpy(
                &y,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let y_new = axpy(
            &y,
            h,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs(kappa, r_new, &y_new);

        if !(y_new[0].is_finite() && y_new[1].is_finite() && k7[1].is_finite()) {
            return Err(DropError::NonFiniteState { r: r_new });
        }

        let mut err = 0.0;
        for i in 0..2 {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let scale = cfg.abs_tol + cfg.rel_tol * y[i].abs().max(y_new[i].abs());
            err += (e / scale) * (e / scale);
        }
        let err = (err / 2.0).sqrt();

        let fac11 = err.powf(EXPO1);
        if err <= 1.0 {
            let fac = (fac11 / fac_old.powf(BETA) / SAFETY).clamp(1.0 / FAC_MAX, 1.0 / FAC_MIN);
            let mut h_new = h / fac;
            if rejected_last {
                h_new = h_new.min(h);
            }
            fac_old = err.max(1e-4);
            rejected_last = false;

            r = r_new;
            y = y_new;
            k1 = k7;
            nodes.push(to_sample(r, &y));
            if nodes.len() > cfg.max_samples {
                return Err(DropError::SampleLimit {
                    max: cfg.max_samples,
                    r,
                });
            }
            let n = nodes.len();
            if stop(&nodes[n - 2], &nodes[n - 1]) || last_step {
                return Ok(nodes);
            }
            h = h_new;
        } else {
            let fac = (fac11 / SAFETY).min(1.0 / FAC_MIN);
            h /= fac;
            rejected_last = true;
        }
    }
}

/// Integrates `u(r; u0)` from the axis to `r_max`.
pub fn integrate_ivp(
    params: &CapillaryParams,
    u0: f64,
    r_max: f64,
    cfg: &IvpConfig,
) -> Result<DropProfile> {
    let nodes = march(params, u0, r_max, cfg, |_, _| false)?;
    Ok(DropProfile::from_trusted(*params, u0, nodes))
}

/// Result of an integration that may stop at the first sign change of an
/// event function.
#[derive(Debug, Clone)]
pub struct EventOutcome {
    /// Profile up to the event (last sample at the event radius), or up to
    /// the horizon when no event occurred.
    pub profile: DropProfile,
    pub event_r: Option<f64>,
}

/// Integrates until `g(sample)` first changes sign (or `r_limit`), locating
/// the crossing on the dense output.
pub fn integrate_until<G>(
    params: &CapillaryParams,
    u0: f64,
    r_limit: f64,
    cfg: &IvpConfig,
    g: G,
) -> Result<EventOutcome>
where
    G: Fn(&ProfileSample) -> f64,
{
    let nodes = march(params, u0, r_limit, cfg, |a, b| {
        let (ga, gb) = (g(a), g(b));
        ga != 0.0 && gb != 0.0 && ga.signum() != gb.signum() || ga != 0.0 && gb == 0.0
    })?;
    let n = nodes.len();
    let (a, b) = (nodes[n - 2], nodes[n - 1]);
    let (ga, gb) = (g(&a), g(&b));
    let crossed = ga != 0.0 && (gb == 0.0 || ga.signum() != gb.signum());
    if !crossed {
        return Ok(EventOutcome {
            profile: DropProfile::from_trusted(*params, u0, nodes),
            event_r: None,
        });
    }
    let r_event = if gb == 0.0 {
        b.r
    } else {
        let eval = |r: f64| {
            let p = interpolate(params, &a, &b, r);
            Ok(g(&ProfileSample::new(r, p.u, p.v)))
        };
        let opts = RootOptions {
            x_tol: 1e-15 * b.r.max(1.0),
            ..RootOptions::default()
        };
        brent(eval, a.r, b.r, ga, gb, opts)?.x
    };
    let profile = DropProfile::from_trusted(*params, u0, nodes).truncated(r_event)?;
    Ok(EventOutcome {
        profile,
        event_r: Some(r_event),
    })
}
