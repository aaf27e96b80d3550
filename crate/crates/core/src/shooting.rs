//! Boundary value problems solved by shooting on the apex height `u0`.
//!
//! Every solver returns the profile integrated exactly to the contact radius,
//! so `ContactData` is read off the last sample.

use std::cell::Cell;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{DropError, Result};
use crate::geometry::pendent_volume;
use crate::integrate::{integrate_ivp, integrate_until};
use crate::params::{CapillaryParams, IvpConfig};
use crate::profile::{DropProfile, ProfileSample};
use crate::roots::{brent, expand_until, RootOptions};

/// Radius, hyperbolic angle and height of the profile at the contact circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContactData {
    pub radius: f64,
    pub beta: f64,
    pub u_r: f64,
}

impl ContactData {
    pub fn at(profile: &DropProfile, r: f64) -> Result<Self> {
        let p = profile.eval(r)?;
        Ok(Self {
            radius: r,
            beta: p.v.asinh(),
            u_r: p.u,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShootingResult {
    pub profile: DropProfile,
    pub contact: ContactData,
    pub u0: f64,
    /// Profile integrations spent in the outer search.
    pub iterations: usize,
    /// Final bracket on the shooting parameter.
    pub bracket: (f64, f64),
    /// Non-fatal observations made during the search.
    #[serde(default)]
    pub notes: Vec<String>,
}

impl ShootingResult {
    fn negated(self) -> Self {
        Self {
            profile: self.profile.negated(),
            contact: ContactData {
                radius: self.contact.radius,
                beta: -self.contact.beta,
                u_r: -self.contact.u_r,
            },
            u0: -self.u0,
            iterations: self.iterations,
            bracket: (-self.bracket.1, -self.bracket.0),
            notes: self.notes,
        }
    }
}

/// Solver settings shared by all boundary value problems.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Shooter {
    pub ivp: IvpConfig,
    /// Target accuracy on the contact angle.
    pub angle_tol: f64,
    /// Relative accuracy on prescribed volumes.
    pub volume_tol: f64,
}

impl Default for Shooter {
    fn default() -> Self {
        Self {
            ivp: IvpConfig::default(),
            angle_tol: 1e-11,
            volume_tol: 1e-10,
        }
    }
}

fn require_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(DropError::InvalidArgument(format!(
            "{name} must be positive and finite, got {x}"
        )));
    }
    Ok(())
}

fn require_finite(name: &str, x: f64) -> Result<()> {
    if !x.is_finite() {
        return Err(DropError::InvalidArgument(format!(
            "{name} = {x} is not finite"
        )));
    }
    Ok(())
}

/// Constant solution `u = height` (with `lambda = -kappa height`), cut at `radius`.
fn flat(kappa: f64, height: f64, radius: f64) -> Result<ShootingResult> {
    let params = CapillaryParams::new(kappa, -kappa * height)?;
    let samples = vec![
        ProfileSample::new(0.0, height, 0.0),
        ProfileSample::new(radius, height, 0.0),
    ];
    Ok(ShootingResult {
        profile: DropProfile::from_samples(params, height, samples)?,
        contact: ContactData {
            radius,
            beta: 0.0,
            u_r: height,
        },
        u0: height,
        iterations: 0,
        bracket: (height, height),
        notes: Vec::new(),
    })
}

/// Bracket for an increasing `f` by geometric search from `start`.
fn bracket_increasing<F>(mut f: F, start: f64, max_steps: usize) -> Result<((f64, f64), (f64, f64))>
where
    F: FnMut(f64) -> Result<f64>,
{
    let f0 = f(start)?;
    if f0 == 0.0 {
        return Ok(((start, f0), (start, f0)));
    }
    let (factor, want_positive) = if f0 < 0.0 { (4.0, true) } else { (0.25, false) };
    let (hit, prev) = expand_until(&mut f, start * factor, factor, max_steps, want_positive)?;
    Ok((prev.unwrap_or((start, f0)), hit))
}

fn solve_bracketed<F>(
    mut f: F,
    a: (f64, f64),
    b: (f64, f64),
    f_tol: f64,
) -> Result<(f64, (f64, f64))>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a.0 == b.0 {
        return Ok((a.0, (a.0, a.0)));
    }
    let opts = RootOptions {
        x_tol: 0.0,
        f_tol,
        max_iter: 200,
    };
    let root = brent(&mut f, a.0, b.0, a.1, b.1, opts)?;
    Ok((root.x, root.bracket))
}

impl Shooter {
    fn finish(
        &self,
        params: &CapillaryParams,
        u0: f64,
        radius: f64,
        iterations: usize,
        bracket: (f64, f64),
    ) -> Result<ShootingResult> {
        let profile = integrate_ivp(params, u0, radius, &self.ivp)?;
        let contact = ContactData {
            radius,
            beta: profile.last().v.asinh(),
            u_r: profile.last().u,
        };
        Ok(ShootingResult {
            profile,
            contact,
            u0,
            iterations,
            bracket,
            notes: Vec::new(),
        })
    }

    /// Sessile drop (`kappa > 0`) with contact angle `beta` on the circle of
    /// radius `radius`.
    pub fn sessile_by_radius(&self, kappa: f64, beta: f64, radius: f64) -> Result<ShootingResult> {
        require_positive("kappa", kappa)?;
        require_positive("radius", radius)?;
        require_finite("beta", beta)?;
        if beta == 0.0 {
            return flat(kappa, 0.0, radius);
        }
        if beta < 0.0 {
            return Ok(self.sessile_by_radius(kappa, -beta, radius)?.negated());
        }
        let params = CapillaryParams::with_kappa(kappa)?;
        let count = Cell::new(0usize);
        let miss = |u0: f64| -> Result<f64> {
            count.set(count.get() + 1);
            let prof = integrate_ivp(&params, u0, radius, &self.ivp)?;
            Ok(prof.last().v.asinh() - beta)
        };
        let guess = 2.0 * beta.sinh() / (kappa * radius);
        let (a, b) = bracket_increasing(miss, guess, 40)?;
        let (u0, bracket) = solve_bracketed(miss, a, b, 0.1 * self.angle_tol)?;
        self.finish(&params, u0, radius, count.get(), bracket)
    }

    /// Sessile drop resting on the plane at height `plane > 0`, meeting it at
    /// angle `beta >= 0`; the contact radius is part of the solution.
    pub fn sessile_by_plane(&self, kappa: f64, beta: f64, plane: f64) -> Result<ShootingResult> {
        require_positive("kappa", kappa)?;
        require_finite("beta", beta)?;
        if beta < 0.0 {
            return Err(DropError::InvalidArgument(format!(
                "a sessile drop over a plane needs beta >= 0, got {beta}"
            )));
        }
        if beta == 0.0 {
            require_finite("plane", plane)?;
            return flat(kappa, plane, 1.0 / kappa.sqrt());
        }
        require_positive("plane", plane)?;
        let params = CapillaryParams::with_kappa(kappa)?;
        let r_limit = self.ivp.r_max.max(1.0) / kappa.sqrt().min(1.0) + 2.0 * plane;
        let count = Cell::new(0usize);
        let hit = |u0: f64| -> Result<(f64, f64)> {
            count.set(count.get() + 1);
            let out = integrate_until(&params, u0, r_limit, &self.ivp, |s| s.u - plane)?;
            let r = out.event_r.ok_or_else(|| {
                DropError::BracketFailure(format!(
                    "u({r_limit}; {u0:e}) never reaches the plane at {plane}"
                ))
            })?;
            Ok((r, out.profile.last().v.asinh()))
        };
        // Parametrize u0 = plane * t, t in (0, 1); the miss decreases in t.
        let miss = |t: f64| -> Result<f64> { Ok(hit(plane * t)?.1 - beta) };
        // Walk geometrically toward t = 1 (miss > 0) or t = 0 (miss < 0).
        let mid = miss(0.5)?;
        let toward = |k: i32| {
            let gap = 0.5 * 0.25f64.powi(k);
            if mid > 0.0 {
                1.0 - gap
            } else {
                gap
            }
        };
        let mut prev = (0.5, mid);
        let mut found = (mid == 0.0).then_some(prev);
        for k in 1..=40 {
            if found.is_some() {
                break;
            }
            let t = toward(k);
            let m = miss(t)?;
            if m == 0.0 || (m > 0.0) != (mid > 0.0) {
                found = Some((t, m));
            } else {
                prev = (t, m);
            }
        }
        let (a, b) = match found {
            Some(hit) => (prev, hit),
            None => {
                return Err(DropError::BracketFailure(format!(
                    "no apex height below the plane {plane} gives contact angle {beta}"
                )))
            }
        };
        let (t, bracket) = solve_bracketed(miss, a, b, 0.1 * self.angle_tol)?;
        let u0 = plane * t;
        let (radius, _) = hit(u0)?;
        let mut res = self.finish(
            &params,
            u0,
            radius,
            count.get(),
            (plane * bracket.0, plane * bracket.1),
        )?;
        res.contact.u_r = res.profile.last().u;
        Ok(res)
    }

    /// Pendent drop (`kappa < 0`) with contact angle `beta` on the circle of
    /// radius `radius`. Among the admissible apex heights, the one of least
    /// magnitude is returned.
    pub fn pendent_by_radius(&self, kappa: f64, beta: f64, radius: f64) -> Result<ShootingResult> {
        if !(kappa < 0.0 && kappa.is_finite()) {
            return Err(DropError::InvalidArgument(format!(
                "pendent drops need kappa < 0, got {kappa}"
            )));
        }
        require_positive("radius", radius)?;
        require_finite("beta", beta)?;
        if beta == 0.0 {
            return flat(kappa, 0.0, radius);
        }
        if beta < 0.0 {
            return Ok(self.pendent_by_radius(kappa, -beta, radius)?.negated());
        }
        let params = CapillaryParams::with_kappa(kappa)?;
        let count = Cell::new(0usize);
        // m = -u0 > 0.
        let miss = |m: f64| -> Result<f64> {
            count.set(count.get() + 1);
            let prof = integrate_ivp(&params, -m, radius, &self.ivp)?;
            Ok(prof.last().v.asinh() - beta)
        };
        let guess = 2.0 * beta.sinh() / (-kappa * radius);
        let start = 0.125 * guess;
        let f0 = miss(start)?;
        let (a, b) = if f0 >= 0.0 {
            let (hit, prev) = expand_until(miss, 0.5 * start, 0.5, 200, false)?;
            (hit, prev.unwrap_or((start, f0)))
        } else {
            let (hit, prev) = expand_until(miss, 2.0 * start, 2.0, 200, true)?;
            (prev.unwrap_or((start, f0)), hit)
        };
        let (m, bracket) = solve_bracketed(miss, a, b, 0.1 * self.angle_tol)?;
        self.finish(&params, -m, radius, count.get(), (-bracket.1, -bracket.0))
    }

    /// Pendent drop hanging from the plane `u = 0` and meeting it at angle
    /// `beta`; the contact circle is the first zero of the profile.
    pub fn pendent_by_plane(&self, kappa: f64, beta: f64) -> Result<ShootingResult> {
        if !(kappa < 0.0 && kappa.is_finite()) {
            return Err(DropError::InvalidArgument(format!(
                "pendent drops need kappa < 0, got {kappa}"
            )));
        }
        require_finite("beta", beta)?;
        if beta == 0.0 {
            return flat(kappa, 0.0, 2.0 / (-kappa).sqrt());
        }
        if beta < 0.0 {
            return Ok(self.pendent_by_plane(kappa, -beta)?.negated());
        }
        let params = CapillaryParams::with_kappa(kappa)?;
        let length = 1.0 / (-kappa).sqrt();
        let count = Cell::new(0usize);
        let hit = |m: f64| -> Result<(f64, f64)> {
            count.set(count.get() + 1);
            let r_limit = 10.0 * (m + 2.0 * length) + self.ivp.r_max * length;
            let out = integrate_until(&params, -m, r_limit, &self.ivp, |s| s.u)?;
            let r = out.event_r.ok_or_else(|| {
                DropError::BracketFailure(format!("u(r; {}) has no zero below r = {r_limit}", -m))
            })?;
            Ok((r, out.profile.last().v.asinh()))
        };
        let miss = |m: f64| -> Result<f64> { Ok(hit(m)?.1 - beta) };
        let (a, b) = bracket_increasing(miss, length, 60)?;
        let (m, bracket) = solve_bracketed(miss, a, b, 0.1 * self.angle_tol)?;
        let (radius, _) = hit(m)?;
        let mut res = self.finish(&params, -m, radius, count.get(), (-bracket.1, -bracket.0))?;
        res.contact.u_r = res.profile.last().u;
        Ok(res)
    }

    /// Sessile drop of prescribed volume `volume` (between the drop and its
    /// contact plane) with contact angle `beta > 0`.
    pub fn sessile_by_volume(&self, kappa: f64, beta: f64, volume: f64) -> Result<ShootingResult> {
        require_positive("kappa", kappa)?;
        require_positive("beta", beta)?;
        require_positive("volume", volume)?;
        let params = CapillaryParams::with_kappa(kappa)?;
        let sb = beta.sinh();
        let count = Cell::new(0usize);
        let evaluated = std::cell::RefCell::new(Vec::<(f64, f64)>::new());
        // Contact radius R(u0) where the angle reaches beta, and the volume.
        let shape = |u0: f64| -> Result<(f64, f64)> {
            count.set(count.get() + 1);
            let r_limit = 1.01 * 2.0 * sb / (kappa * u0) + 1e-9;
            let out = integrate_until(&params, u0, r_limit, &self.ivp, |s| s.v - sb)?;
            let r = out.event_r.ok_or_else(|| {
                DropError::BracketFailure(format!("angle {beta} not reached for u0 = {u0}"))
            })?;
            let u_r = out.profile.last().u;
            let vol = PI * r * r * u_r - 2.0 * PI * r * sb / kappa;
            evaluated.borrow_mut().push((u0, vol));
            Ok((r, vol))
        };
        // Volume decreases in u0; compare on a log scale.
        let miss = |u0: f64| -> Result<f64> {
            let (_, vol) = shape(u0)?;
            if !(vol > 0.0) {
                return Ok(f64::INFINITY);
            }
            Ok((volume / vol).ln())
        };
        let guess = 2.0 * sb / (kappa * (volume / PI).cbrt());
        let (a, b) = bracket_increasing(miss, guess, 60)?;
        let (u0, bracket) = solve_bracketed(miss, a, b, 0.1 * self.volume_tol)?;
        let (radius, _) = shape(u0)?;
        let mut res = self.finish(&params, u0, radius, count.get(), bracket)?;
        let mut seen = evaluated.into_inner();
        seen.sort_by(|x, y| x.0.total_cmp(&y.0));
        if seen.windows(2).any(|w| w[1].0 > w[0].0 && w[1].1 >= w[0].1) {
            res.notes
                .push("volume was not monotone in u0 over the sampled bracket".into());
        }
        Ok(res)
    }

    /// Pendent drop of prescribed volume `volume` with contact angle `beta > 0`,
    /// lying within its first maximum.
    pub fn pendent_by_volume(&self, kappa: f64, beta: f64, volume: f64) -> Result<ShootingResult> {
        if !(kappa < 0.0 && kappa.is_finite()) {
            return Err(DropError::InvalidArgument(format!(
                "pendent drops need kappa < 0, got {kappa}"
            )));
        }
        require_positive("beta", beta)?;
        require_positive("volume", volume)?;
        let sb = beta.sinh();
        // Below r_o the volume is the cone term alone, and r_o > 2 / sqrt(-kappa).
        let radius_for_cone = -kappa * volume / (2.0 * PI * sb);
        let threshold_radius = 2.0 / (-kappa).sqrt();
        if radius_for_cone <= threshold_radius {
            return self.pendent_by_radius(kappa, beta, radius_for_cone);
        }
        let count = Cell::new(0usize);
        let miss = |r: f64| -> Result<f64> {
            let res = self.pendent_by_radius(kappa, beta, r)?;
            count.set(count.get() + res.iterations);
            Ok(pendent_volume(&res.profile, r)? / volume - 1.0)
        };
        let lo = (threshold_radius, miss(threshold_radius)?);
        let hi = (radius_for_cone, miss(radius_for_cone)?);
        let (r, bracket) = solve_bracketed(miss, lo, hi, 0.1 * self.volume_tol)?;
        let mut res = self.pendent_by_radius(kappa, beta, r)?;
        res.iterations += count.get();
        res.notes.push(format!(
            "contact radius bracket [{}, {}]",
            bracket.0, bracket.1
        ));
        Ok(res)
    }
}

pub fn solve_sessile_by_radius(kappa: f64, beta: f64, radius: f64) -> Result<ShootingResult> {
    Shooter::default().sessile_by_radius(kappa, beta, radius)
}

pub fn solve_sessile_by_plane(kappa: f64, beta: f64, plane: f64) -> Result<ShootingResult> {
    Shooter::default().sessile_by_plane(kappa, beta, plane)
}

pub fn solve_pendent_by_radius(kappa: f64, beta: f64, radius: f64) -> Result<ShootingResult> {
    Shooter::default().pendent_by_radius(kappa, beta, radius)
}

pub fn solve_pendent_by_plane(kappa: f64, beta: f64) -> Result<ShootingResult> {
    Shooter::default().pendent_by_plane(kappa, beta)
}

pub fn solve_sessile_by_volume(kappa: f64, beta: f64, volume: f64) -> Result<ShootingResult> {
    Shooter::default().sessile_by_volume(kappa, beta, volume)
}

pub fn solve_pendent_by_volume(kappa: f64, beta: f64, volume: f64) -> Result<ShootingResult> {
    Shooter::default().pendent_by_volume(kappa, beta, volume)
}
