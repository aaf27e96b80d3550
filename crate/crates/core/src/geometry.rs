//! Comparison surfaces and volumes: hyperbolic caps, the zero-gravity
//! profile, principal curvatures and the volume identities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{DropError, Result};
use crate::profile::{DropProfile, ProfileSample};
use crate::quadrature;
use crate::shooting::ContactData;

/// Hyperbolic cap `y(r) = c + sigma sqrt(r^2 + mu^2)`, a spacelike surface of
/// constant mean curvature `1 / mu`. `sigma = +1` opens upward.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicCap {
    pub mu: f64,
    pub c: f64,
    pub orientation: f64,
}

impl HyperbolicCap {
    pub fn new(mu: f64, c: f64, orientation: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) || !c.is_finite() {
            return Err(DropError::InvalidArgument(format!(
                "cap needs finite mu > 0 and finite c (mu = {mu}, c = {c})"
            )));
        }
        if orientation != 1.0 && orientation != -1.0 {
            return Err(DropError::InvalidArgument(format!(
                "orientation must be +1 or -1, got {orientation}"
            )));
        }
        Ok(Self { mu, c, orientation })
    }

    /// Apex height `y(0) = c + sigma mu`.
    pub fn apex(&self) -> f64 {
        self.c + self.orientation * self.mu
    }

    /// `y(r)`, written as apex plus `r^2 / (sqrt(r^2 + mu^2) + mu)` to avoid
    /// cancellation for `r << mu`.
    pub fn eval(&self, r: f64) -> f64 {
        let rise = r * r / ((r * r + self.mu * self.mu).sqrt() + self.mu);
        self.apex() + self.orientation * rise
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.orientation * r / (r * r + self.mu * self.mu).sqrt()
    }

    pub fn second_derivative(&self, r: f64) -> f64 {
        let w = r * r + self.mu * self.mu;
        self.orientation * self.mu * self.mu / (w * w.sqrt())
    }

    pub fn mean_curvature(&self) -> f64 {
        1.0 / self.mu
    }

    /// Radius where the cap crosses height zero, if it does.
    pub fn zero_crossing(&self) -> Option<f64> {
        let apex = self.apex();
        if apex == 0.0 {
            return Some(0.0);
        }
        // Only the branch moving from the apex toward zero crosses it.
        if (apex < 0.0) != (self.orientation > 0.0) {
            return None;
        }
        let d = self.c * self.c - self.mu * self.mu;
        (d >= 0.0).then(|| d.sqrt())
    }
}

/// The `kappa = 0` profile: a hyperbolic cap through the contact circle of
/// radius `R` with angle `beta`, vertically offset so that `u(R) = c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoGravityProfile {
    pub beta: f64,
    pub radius: f64,
    pub c: f64,
}

impl NoGravityProfile {
    pub fn new(beta: f64, radius: f64, c: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) || !beta.is_finite() || !c.is_finite() {
            return Err(DropError::InvalidArgument(format!(
                "no-gravity profile needs finite beta, c and R > 0 (beta = {beta}, R = {radius}, c = {c})"
            )));
        }
        Ok(Self { beta, radius, c })
    }

    /// Underlying cap, or `None` for the flat case `beta = 0`.
    pub fn cap(&self) -> Option<HyperbolicCap> {
        if self.beta == 0.0 {
            return None;
        }
        let mu = self.radius / self.beta.sinh().abs();
        let orientation = self.beta.signum();
        let c = self.c - orientation * (self.radius * self.radius + mu * mu).sqrt();
        Some(HyperbolicCap { mu, c, orientation })
    }

    pub fn u(&self, r: f64) -> f64 {
        match self.cap() {
            Some(cap) => cap.eval(r),
            None => self.c,
        }
    }

    /// `v = sinh(psi)` is linear in `r` on a cap.
    pub fn v(&self, r: f64) -> f64 {
        r * self.beta.sinh() / self.radius
    }

    /// Apex height `u(0)`.
    pub fn u0(&self) -> f64 {
        self.u(0.0)
    }

    /// Samples at `n + 1` evenly spaced radii in `[0, R]`.
    pub fn samples(&self, n: usize) -> Vec<ProfileSample> {
        let n = n.max(1);
        (0..=n)
            .map(|k| {
                let r = self.radius * k as f64 / n as f64;
                if k == 0 {
                    ProfileSample::new(0.0, self.u0(), 0.0)
                } else {
                    ProfileSample::new(r, self.u(r), self.v(r))
                }
            })
            .collect()
    }
}

/// Meridian and latitude curvatures `k_m = (sinh psi)'` and `k_l = sinh(psi) / r`
/// with `k_m + k_l = kappa u + lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Curvatures {
    pub meridian: f64,
    pub latitude: f64,
}

pub fn curvatures(profile: &DropProfile, r: f64) -> Result<Curvatures> {
    let params = profile.params();
    let p = profile.eval(r)?;
    let total = params.kappa * p.u + params.lambda;
    if r == 0.0 {
        return Ok(Curvatures {
            meridian: 0.5 * total,
            latitude: 0.5 * total,
        });
    }
    let latitude = p.v / r;
    Ok(Curvatures {
        meridian: total - latitude,
        latitude,
    })
}

/// Caps through the apex that bound a sessile drop on `[0, R]`: the lower one
/// shares the apex curvature, the upper one the contact angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingCaps {
    pub lower: HyperbolicCap,
    pub upper: HyperbolicCap,
}

/// Builds the two bounding caps and checks `lower < u < upper` on `(0, R]`.
pub fn bounding_caps(profile: &DropProfile, contact: &ContactData) -> Result<BoundingCaps> {
    let params = profile.params();
    let u0 = profile.u0();
    if !(params.kappa > 0.0 && params.lambda == 0.0 && u0 > 0.0 && contact.beta > 0.0) {
        return Err(DropError::InvalidArgument(format!(
            "bounding caps need kappa > 0, lambda = 0, u0 > 0, beta > 0 \
             (kappa = {}, lambda = {}, u0 = {u0}, beta = {})",
            params.kappa, params.lambda, contact.beta
        )));
    }
    let mu1 = 2.0 / (params.kappa * u0);
    let mu2 = contact.radius / contact.beta.sinh();
    let caps = BoundingCaps {
        lower: HyperbolicCap::new(mu1, u0 - mu1, 1.0)?,
        upper: HyperbolicCap::new(mu2, u0 - mu2, 1.0)?,
    };
    let mut radii: Vec<f64> = profile
        .samples()
        .iter()
        .map(|s| s.r)
        .filter(|&r| r > 0.0 && r <= contact.radius)
        .collect();
    radii.extend((1..=64).map(|k| contact.radius * k as f64 / 64.0));
    for r in radii {
        let u = profile.u_at(r)?;
        let (lo, hi) = (caps.lower.eval(r), caps.upper.eval(r));
        let tol = 1e-10 * (1.0 + u.abs());
        if lo - u > tol {
            return Err(DropError::OrderingViolated {
                r,
                detail: format!("profile {u} below lower cap {lo}"),
            });
        }
        if u - hi > tol {
            return Err(DropError::OrderingViolated {
                r,
                detail: format!("profile {u} above upper cap {hi}"),
            });
        }
    }
    Ok(caps)
}

/// Asymptotic comparison cap of a pendent drop: apex `u0`, curvature
/// `kappa u0 / 2`.
pub fn pendent_envelope_cap(u0: f64, kappa: f64) -> Result<HyperbolicCap> {
    if !(kappa < 0.0 && u0 < 0.0) {
        return Err(DropError::NotPendent { kappa, u0 });
    }
    let mu = 2.0 / (kappa * u0);
    HyperbolicCap::new(mu, u0 - mu, 1.0)
}

/// `F(u0; s) = (R^2 / 2)(u0 - s) + ((s^2 + R^2)^{3/2} - s^3) / 3`, so that
/// `2 pi F` is the volume under the cap of apex `u0` and parameter `s`.
pub fn cap_volume_f(u0: f64, s: f64, radius: f64) -> f64 {
    let r2 = radius * radius;
    // (s^2 + R^2)^{3/2} - s^3 without cancellation for large s.
    let root = (s * s + r2).sqrt();
    let diff = if s > 0.0 {
        r2 * (root * root + root * s + s * s) / (root + s)
    } else {
        root * root * root - s * s * s
    };
    0.5 * r2 * (u0 - s) + diff / 3.0
}

/// Volumes over the disk of radius `R` for a drop with contact data `contact`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Volumes {
    /// `2 pi int_0^R r u dr` from the contact data (closed form).
    pub under_profile: f64,
    /// The same integral by quadrature.
    pub under_profile_quadrature: f64,
    /// Quadrature error estimate.
    pub quadrature_error: f64,
    /// Volume between the drop and its contact plane, `pi R^2 u(R) - under`.
    pub drop: f64,
}

/// Checks the closed form against quadrature (relative `1e-7` plus the
/// quadrature error estimate).
pub fn volumes(profile: &DropProfile, contact: &ContactData) -> Result<Volumes> {
    let params = profile.params();
    params.require_gravity()?;
    let r = contact.radius;
    let closed = 2.0 * PI * (r * contact.beta.sinh() - 0.5 * params.lambda * r * r) / params.kappa;
    let quad = quadrature::cone_moment(profile, r)?;
    let numeric = 2.0 * PI * quad.value;
    let error = 2.0 * PI * quad.error;
    if (closed - numeric).abs() > 1e-7 * closed.abs().max(numeric.abs()) + error + 1e-300 {
        return Err(DropError::VolumeMismatch {
            closed,
            quadrature: numeric,
        });
    }
    Ok(Volumes {
        under_profile: closed,
        under_profile_quadrature: numeric,
        quadrature_error: error,
        drop: PI * r * r * contact.u_r - closed,
    })
}

/// Volume of a pendent drop cut at radius `r`, valid up to the first
/// maximum `r_M`: the liquid below the plane `u = 0` while the profile is
/// negative, then the cylinder up to `u(r)` as well.
pub fn pendent_volume(profile: &DropProfile, r: f64) -> Result<f64> {
    let params = profile.params();
    if !(params.kappa < 0.0 && params.lambda == 0.0 && profile.u0() <= 0.0) {
        return Err(DropError::NotPendent {
            kappa: params.kappa,
            u0: profile.u0(),
        });
    }
    let p = profile.eval(r)?;
    if let Some(r_m) = first_descent(profile, r)? {
        return Err(DropError::BeyondMaxDrop { r, r_max_drop: r_m });
    }
    let cone = -2.0 * PI * r * p.v / params.kappa;
    Ok(PI * r * r * p.u.max(0.0) + cone)
}

/// First radius in `(0, r)` where `v` turns negative, i.e. the first maximum.
fn first_descent(profile: &DropProfile, r: f64) -> Result<Option<f64>> {
    let samples = profile.samples();
    for pair in samples.windows(2) {
        if pair[0].r >= r {
            break;
        }
        let end = pair[1].r.min(r);
        let v_end = if end == pair[1].r {
            pair[1].v
        } else {
            profile.v_at(end)?
        };
        if pair[0].r > 0.0 && pair[0].v > 0.0 && v_end < 0.0 {
            let g = |x: f64| profile.v_at(x);
            let root = crate::roots::brent(
                g,
                pair[0].r,
                end,
                pair[0].v,
                v_end,
                crate::roots::RootOptions::default(),
            )?;
            return Ok(Some(root.x));
        }
    }
    Ok(None)
}
