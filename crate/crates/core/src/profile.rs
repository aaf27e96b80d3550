//! Computed drop profiles and their dense-output evaluator.
//!
//! A profile stores the accepted integrator nodes `(r, u, v)` with
//! `v = sinh(psi) = u' / sqrt(1 - u'^2)`. Between nodes the state is
//! reconstructed by quintic Hermite interpolation; the first and second
//! derivatives at every node come from the ODE itself, so a profile can be
//! rebuilt exactly from its serialized samples.

use serde::{Deserialize, Serialize};

use crate::error::{DropError, Result};
use crate::params::CapillaryParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub r: f64,
    pub u: f64,
    /// `sinh(psi)`.
    pub v: f64,
    /// Slope `u' = v / sqrt(1 + v^2)`, always in `(-1, 1)`.
    pub du: f64,
}

impl ProfileSample {
    pub fn new(r: f64, u: f64, v: f64) -> Self {
        Self {
            r,
            u,
            v,
            du: slope_from_v(v),
        }
    }

    /// Hyperbolic angle `psi = asinh(v)`.
    pub fn psi(&self) -> f64 {
        self.v.asinh()
    }
}

pub fn slope_from_v(v: f64) -> f64 {
    v / (1.0 + v * v).sqrt()
}

/// Local state with derivatives, as returned by [`DropProfile::eval`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfilePoint {
    pub r: f64,
    pub u: f64,
    pub v: f64,
    pub du: f64,
    /// `u''`.
    pub ddu: f64,
    /// `v'` of the interpolant (the ODE value at nodes).
    pub dv: f64,
}

impl ProfilePoint {
    pub fn psi(&self) -> f64 {
        self.v.asinh()
    }
}

/// Right-hand side `v' = kappa u + lambda - v / r`, with the axis limit
/// `(kappa u0 + lambda) / 2` at `r = 0`.
pub(crate) fn dv_ode(params: &CapillaryParams, r: f64, u: f64, v: f64) -> f64 {
    let forcing = params.kappa * u + params.lambda;
    if r == 0.0 {
        0.5 * forcing
    } else {
        forcing - v / r
    }
}

/// `v'' = kappa u' - (v' - v / r) / r`, zero on the axis (v is odd in r).
fn ddv_ode(params: &CapillaryParams, r: f64, du: f64, v: f64, dv: f64) -> f64 {
    if r == 0.0 {
        0.0
    } else {
        params.kappa * du - (dv - v / r) / r
    }
}

/// Value, first and second derivative of one component at a node.
#[derive(Debug, Clone, Copy)]
struct Jet {
    y: f64,
    d1: f64,
    d2: f64,
}

fn node_jets(params: &CapillaryParams, s: &ProfileSample) -> (Jet, Jet) {
    let dv = dv_ode(params, s.r, s.u, s.v);
    let w = 1.0 + s.v * s.v;
    let ddu = dv / (w * w.sqrt());
    let ddv = ddv_ode(params, s.r, s.du, s.v, dv);
    (
        Jet {
            y: s.u,
            d1: s.du,
            d2: ddu,
        },
        Jet {
            y: s.v,
            d1: dv,
            d2: ddv,
        },
    )
}

/// Quintic Hermite value and derivative on `[0, h]` at fraction `t`.
fn hermite5(a: Jet, b: Jet, h: f64, t: f64) -> (f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t3 * t;
    let t5 = t4 * t;
    let h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
    let h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
    let h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
    let h3 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
    let h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
    let h5 = 0.5 * (t3 - 2.0 * t4 + t5);
    let value =
        a.y * h0 + h * a.d1 * h1 + h * h * a.d2 * h2 + b.y * h3 + h * b.d1 * h4 + h * h * b.d2 * h5;

    let g0 = -30.0 * t2 + 60.0 * t3 - 30.0 * t4;
    let g1 = 1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4;
    let g2 = 0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4);
    let g3 = -g0;
    let g4 = -12.0 * t2 + 28.0 * t3 - 15.0 * t4;
    let g5 = 0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4);
    let slope = (a.y * g0 + b.y * g3) / h + a.d1 * g1 + b.d1 * g4 + h * (a.d2 * g2 + b.d2 * g5);
    (value, slope)
}

/// Interpolated state between two consecutive samples.
pub(crate) fn interpolate(
    params: &CapillaryParams,
    a: &ProfileSample,
    b: &ProfileSample,
    r: f64,
) -> ProfilePoint {
    let h = b.r - a.r;
    let t = ((r - a.r) / h).clamp(0.0, 1.0);
    let (ua, va) = node_jets(params, a);
    let (ub, vb) = node_jets(params, b);
    let (u, _) = hermite5(ua, ub, h, t);
    let (v, dv) = hermite5(va, vb, h, t);
    let w = 1.0 + v * v;
    // Slope from v so that |u'| < 1 holds structurally.
    ProfilePoint {
        r,
        u,
        v,
        du: slope_from_v(v),
        ddu: dv / (w * w.sqrt()),
        dv,
    }
}

/// A solution `u(r; u0)` sampled on `[0, r_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProfile", into = "RawProfile")]
pub struct DropProfile {
    params: CapillaryParams,
    u0: f64,
    samples: Vec<ProfileSample>,
}

#[derive(Serialize, Deserialize)]
struct RawProfile {
    params: CapillaryParams,
    u0: f64,
    samples: Vec<ProfileSample>,
}

impl TryFrom<RawProfile> for DropProfile {
    type Error = DropError;

    fn try_from(raw: RawProfile) -> Result<Self> {
        DropProfile::from_samples(raw.params, raw.u0, raw.samples)
    }
}

impl From<DropProfile> for RawProfile {
    fn from(p: DropProfile) -> Self {
        RawProfile {
            params: p.params,
            u0: p.u0,
            samples: p.samples,
        }
    }
}

impl DropProfile {
    /// Builds a profile from samples, checking the axis condition and ordering.
    pub fn from_samples(
        params: CapillaryParams,
        u0: f64,
        samples: Vec<ProfileSample>,
    ) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| DropError::InvalidArgument("profile has no samples".into()))?;
        if first.r != 0.0 || first.u != u0 || first.v != 0.0 {
            return Err(DropError::InvalidArgument(format!(
                "first sample must be (0, u0 = {u0}, 0), got ({}, {}, {})",
                first.r, first.u, first.v
            )));
        }
        if samples.len() < 2 {
            return Err(DropError::InvalidArgument(
                "profile needs at least two samples".into(),
            ));
        }
        for pair in samples.windows(2) {
            if !(pair[1].r > pair[0].r) {
                return Err(DropError::InvalidArgument(format!(
                    "sample radii must increase strictly ({} then {})",
                    pair[0].r, pair[1].r
                )));
            }
        }
        if samples
            .iter()
            .any(|s| !(s.r.is_finite() && s.u.is_finite() && s.v.is_finite()))
        {
            return Err(DropError::InvalidArgument("non-finite sample".into()));
        }
        Ok(Self {
            params,
            u0,
            samples,
        })
    }

    pub(crate) fn from_trusted(
        params: CapillaryParams,
        u0: f64,
        samples: Vec<ProfileSample>,
    ) -> Self {
        debug_assert!(samples.len() >= 2 && samples[0].r == 0.0);
        Self {
            params,
            u0,
            samples,
        }
    }

    pub fn params(&self) -> &CapillaryParams {
        &self.params
    }

    pub fn u0(&self) -> f64 {
        self.u0
    }

    pub fn samples(&self) -> &[ProfileSample] {
        &self.samples
    }

    pub fn r_max(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.r)
    }

    pub fn last(&self) -> &ProfileSample {
        self.samples.last().expect("profile has samples")
    }

    fn check_range(&self, r: f64) -> Result<()> {
        let hi = self.r_max();
        // Allow a few ulps of slack at the right end.
        if !(r >= 0.0 && r <= hi * (1.0 + 4.0 * f64::EPSILON)) {
            return Err(DropError::OutOfDomain { r, lo: 0.0, hi });
        }
        Ok(())
    }

    /// Index `i` of the step `[samples[i], samples[i + 1]]` containing `r`.
    fn segment(&self, r: f64) -> usize {
        let idx = self.samples.partition_point(|s| s.r <= r);
        idx.saturating_sub(1).min(self.samples.len() - 2)
    }

    /// Dense-output state at `r`.
    pub fn eval(&self, r: f64) -> Result<ProfilePoint> {
        self.check_range(r)?;
        let r = r.min(self.r_max());
        let i = self.segment(r);
        let (a, b) = (&self.samples[i], &self.samples[i + 1]);
        if r == a.r {
            return Ok(self.node_point(a));
        }
        if r == b.r {
            return Ok(self.node_point(b));
        }
        Ok(interpolate(&self.params, a, b, r))
    }

    fn node_point(&self, s: &ProfileSample) -> ProfilePoint {
        let dv = dv_ode(&self.params, s.r, s.u, s.v);
        let w = 1.0 + s.v * s.v;
        ProfilePoint {
            r: s.r,
            u: s.u,
            v: s.v,
            du: s.du,
            ddu: dv / (w * w.sqrt()),
            dv,
        }
    }

    pub fn u_at(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.u)
    }

    pub fn v_at(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.v)
    }

    pub fn du_at(&self, r: f64) -> Result<f64> {
        Ok(self.eval(r)?.du)
    }

    /// `|(r v)' - r (kappa u + lambda)|` with `(r v)'` taken from the
    /// derivative of the dense output.
    pub fn residual(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < self.r_max()) {
            return Err(DropError::OutOfDomain {
                r,
                lo: 0.0,
                hi: self.r_max(),
            });
        }
        let i = self.segment(r);
        let p = interpolate(&self.params, &self.samples[i], &self.samples[i + 1], r);
        let lhs = p.v + r * p.dv;
        let rhs = r * (self.params.kappa * p.u + self.params.lambda);
        Ok((lhs - rhs).abs())
    }

    /// Profile truncated at `r_end` (must lie inside the range); the last
    /// sample is the interpolated state at `r_end`.
    pub fn truncated(&self, r_end: f64) -> Result<DropProfile> {
        self.check_range(r_end)?;
        if r_end <= 0.0 {
            return Err(DropError::OutOfDomain {
                r: r_end,
                lo: 0.0,
                hi: self.r_max(),
            });
        }
        let end = self.eval(r_end)?;
        let mut samples: Vec<ProfileSample> = self
            .samples
            .iter()
            .copied()
            .take_while(|s| s.r < r_end)
            .collect();
        samples.push(ProfileSample::new(r_end, end.u, end.v));
        Ok(Self::from_trusted(self.params, self.u0, samples))
    }

    /// Pointwise negation: the profile of `-u0`.
    pub fn negated(&self) -> DropProfile {
        let samples = self
            .samples
            .iter()
            .map(|s| ProfileSample {
                r: s.r,
                u: -s.u,
                v: -s.v,
                du: -s.du,
            })
            .collect();
        let params = CapillaryParams {
            kappa: self.params.kappa,
            lambda: -self.params.lambda,
        };
        Self::from_trusted(params, -self.u0, samples)
    }

    /// Evenly spaced radii `r_max * k / n`, `k = 0..=n`.
    pub fn uniform_radii(&self, n: usize) -> Vec<f64> {
        let hi = self.r_max();
        (0..=n).map(|k| hi * k as f64 / n as f64).collect()
    }
}

/// Maps a profile of `(r v)' = r (kappa u + lambda)` to the normalized
/// profile of `(s v)' = eps s w` via `w(s) = sqrt|kappa| (u(s / sqrt|kappa|) + lambda / kappa)`.
pub fn rescale(profile: &DropProfile) -> Result<DropProfile> {
    let params = profile.params;
    params.require_gravity()?;
    let scale = params.kappa.abs().sqrt();
    let shift = params.shift();
    let samples = profile
        .samples
        .iter()
        .map(|s| ProfileSample {
            r: s.r * scale,
            u: (s.u + shift) * scale,
            v: s.v,
            du: s.du,
        })
        .collect();
    Ok(DropProfile::from_trusted(
        CapillaryParams {
            kappa: params.eps(),
            lambda: 0.0,
        },
        (profile.u0 + shift) * scale,
        samples,
    ))
}

/// Inverse of [`rescale`] for the physical parameters `target`.
pub fn unrescale(target: &CapillaryParams, normalized: &DropProfile) -> Result<DropProfile> {
    target.require_gravity()?;
    if normalized.params.kappa != target.eps() || normalized.params.lambda != 0.0 {
        return Err(DropError::InvalidArgument(format!(
            "normalized profile has kappa = {}, lambda = {}; expected kappa = {}, lambda = 0",
            normalized.params.kappa,
            normalized.params.lambda,
            target.eps()
        )));
    }
    let scale = target.kappa.abs().sqrt();
    let shift = target.shift();
    let samples = normalized
        .samples
        .iter()
        .map(|s| ProfileSample {
            r: s.r / scale,
            u: s.u / scale - shift,
            v: s.v,
            du: s.du,
        })
        .collect();
    Ok(DropProfile::from_trusted(
        *target,
        normalized.u0 / scale - shift,
        samples,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jet_of(c: &[f64; 6], x: f64) -> Jet {
        let y = c.iter().rev().fold(0.0, |acc, &k| acc * x + k);
        let d1 = (1..6).rev().fold(0.0, |acc, i| acc * x + i as f64 * c[i]);
        let d2 = (2..6)
            .rev()
            .fold(0.0, |acc, i| acc * x + (i * (i - 1)) as f64 * c[i]);
        Jet { y, d1, d2 }
    }

    #[test]
    fn hermite5_reproduces_quintics() {
        let c = [0.3, -1.2, 0.7, 2.0, -0.4, 0.9];
        let (x0, x1) = (0.5, 1.25);
        let (a, b) = (jet_of(&c, x0), jet_of(&c, x1));
        for k in 0..=10 {
            let t = k as f64 / 10.0;
            let x = x0 + t * (x1 - x0);
            let exact = jet_of(&c, x);
            let (val, slope) = hermite5(a, b, x1 - x0, t);
            assert!((val - exact.y).abs() < 1e-13, "value at {x}");
            assert!((slope - exact.d1).abs() < 1e-12, "slope at {x}");
        }
    }

    #[test]
    fn from_samples_validates_axis_and_order() {
        let p = CapillaryParams::with_kappa(1.0).unwrap();
        let good = vec![
            ProfileSample::new(0.0, 1.0, 0.0),
            ProfileSample::new(0.1, 1.0025, 0.05),
        ];
        assert!(DropProfile::from_samples(p, 1.0, good.clone()).is_ok());
        let mut bad = good.clone();
        bad[1].r = 0.0;
        assert!(DropProfile::from_samples(p, 1.0, bad).is_err());
        assert!(DropProfile::from_samples(p, 2.0, good).is_err());
        assert!(DropProfile::from_samples(p, 1.0, vec![]).is_err());
    }

    #[test]
    fn eval_outside_range_is_out_of_domain() {
        let p = CapillaryParams::with_kappa(1.0).unwrap();
        let prof = DropProfile::from_samples(
            p,
            0.0,
            vec![
                ProfileSample::new(0.0, 0.0, 0.0),
                ProfileSample::new(1.0, 0.0, 0.0),
            ],
        )
        .unwrap();
        assert!(matches!(prof.eval(1.5), Err(DropError::OutOfDomain { .. })));
        assert!(matches!(
            prof.eval(-0.1),
            Err(DropError::OutOfDomain { .. })
        ));
        assert!(matches!(
            prof.residual(0.0),
            Err(DropError::OutOfDomain { .. })
        ));
        assert_eq!(prof.residual(0.5).unwrap(), 0.0);
    }

    #[test]
    fn slope_is_strictly_subluminal() {
        for v in [0.0, 1.0, -3.0, 1e4, -1e6] {
            assert!(slope_from_v(v).abs() < 1.0);
        }
    }
}
