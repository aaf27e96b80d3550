//! Integrals of profile quantities over `[a, b]`, by Simpson's rule on each
//! integrator step with interior points from the dense output.

use crate::error::{DropError, Result};
use crate::profile::{DropProfile, ProfilePoint};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: f64,
    /// Richardson estimate `|S(h/2) - S(h)| / 15` summed over steps.
    pub error: f64,
}

/// `int_a^b f(point(r)) dr` over the profile.
pub fn integrate<F>(profile: &DropProfile, a: f64, b: f64, f: F) -> Result<Quadrature>
where
    F: Fn(&ProfilePoint) -> f64,
{
    if !(a >= 0.0 && b <= profile.r_max() && a <= b) {
        return Err(DropError::OutOfDomain {
            r: if a < 0.0 { a } else { b },
            lo: 0.0,
            hi: profile.r_max(),
        });
    }
    if a == b {
        return Ok(Quadrature {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut knots = vec![a];
    knots.extend(
        profile
            .samples()
            .iter()
            .map(|s| s.r)
            .filter(|&r| r > a && r < b),
    );
    knots.push(b);

    let eval = |r: f64| -> Result<f64> { Ok(f(&profile.eval(r)?)) };
    let mut value = 0.0;
    let mut error = 0.0;
    let mut f_left = eval(a)?;
    for pair in knots.windows(2) {
        let (x0, x1) = (pair[0], pair[1]);
        let h = x1 - x0;
        let f_q1 = eval(x0 + 0.25 * h)?;
        let f_mid = eval(x0 + 0.5 * h)?;
        let f_q3 = eval(x0 + 0.75 * h)?;
        let f_right = eval(x1)?;
        let coarse = h / 6.0 * (f_left + 4.0 * f_mid + f_right);
        let fine = h / 12.0 * (f_left + 4.0 * f_q1 + 2.0 * f_mid + 4.0 * f_q3 + f_right);
        value += fine + (fine - coarse) / 15.0;
        error += (fine - coarse).abs() / 15.0;
        f_left = f_right;
    }
    Ok(Quadrature { value, error })
}

/// `int_0^r t u(t) dt`.
pub fn cone_moment(profile: &DropProfile, r: f64) -> Result<Quadrature> {
    integrate(profile, 0.0, r, |p| p.r * p.u)
}

/// Worst relative violation of `r v(r) = kappa int_0^r t u dt + lambda r^2 / 2`
/// over the samples, normalized by `1 + |r v|`.
pub fn integral_identity_defect(profile: &DropProfile) -> Result<f64> {
    let params = *profile.params();
    let samples = profile.samples();
    let mut moment = 0.0;
    let mut worst = 0.0f64;
    for pair in samples.windows(2) {
        moment += integrate(profile, pair[0].r, pair[1].r, |p| p.r * p.u)?.value;
        let s = pair[1];
        let lhs = s.r * s.v;
        let rhs = params.kappa * moment + 0.5 * params.lambda * s.r * s.r;
        worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs()));
    }
    Ok(worst)
}
