//! Reference solution by successive approximation of the integral equations
//!
//! ```text
//! u(r) = u0 + int_0^r v / sqrt(1 + v^2) dt
//! v(r) = (kappa / r) int_0^r t u dt
//! ```
//!
//! on a uniform grid. It shares nothing with the Runge-Kutta path beyond the
//! profile container, and is used to cross-check it.

use crate::error::{DropError, Result};
use crate::params::CapillaryParams;
use crate::profile::{DropProfile, ProfileSample};

/// Cumulative integral of uniformly sampled `f` with spacing `h`, using the
/// cubic through four neighbouring nodes on every interval (fourth order).
fn cumulative_integral(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    debug_assert!(n >= 4 && out.len() == n);
    out[0] = 0.0;
    let w = h / 24.0;
    for i in 0..n - 1 {
        let piece = if i == 0 {
            w * (9.0 * f[0] + 19.0 * f[1] - 5.0 * f[2] + f[3])
        } else if i == n - 2 {
            w * (f[n - 4] - 5.0 * f[n - 3] + 19.0 * f[n - 2] + 9.0 * f[n - 1])
        } else {
            w * (-f[i - 1] + 13.0 * f[i] + 13.0 * f[i + 1] - f[i + 2])
        };
        out[i + 1] = out[i] + piece;
    }
}

/// Fixed-point iteration of the integral equations on `n_grid` intervals.
///
/// Fails with [`DropError::NoConvergence`] when successive sweeps still differ
/// after `n_iter` iterations.
pub fn picard_oracle(
    params: &CapillaryParams,
    u0: f64,
    r_max: f64,
    n_grid: usize,
    n_iter: usize,
) -> Result<DropProfile> {
    params.require_gravity()?;
    if n_grid < 1000 || n_iter < 20 {
        return Err(DropError::InvalidArgument(format!(
            "oracle needs n_grid >= 1000 and n_iter >= 20 (got {n_grid}, {n_iter})"
        )));
    }
    if !(r_max > 0.0) {
        return Err(DropError::InvalidArgument(format!(
            "r_max = {r_max} must be positive"
        )));
    }

    let kappa = params.kappa;
    let shift = params.shift();
    let w0 = u0 + shift;
    let n = n_grid + 1;
    let h = r_max / n_grid as f64;
    let r: Vec<f64> = (0..n).map(|i| i as f64 * h).collect();

    let mut u = vec![w0; n];
    let mut v = vec![0.0; n];
    let mut integrand = vec![0.0; n];
    let mut acc = vec![0.0; n];

    let mut change = f64::INFINITY;
    let mut converged = false;
    for _ in 0..n_iter {
        for i in 0..n {
            integrand[i] = r[i] * u[i];
        }
        cumulative_integral(&integrand, h, &mut acc);
        let mut v_new = vec![0.0; n];
        for i in 1..n {
            v_new[i] = kappa * acc[i] / r[i];
        }

        for i in 0..n {
            integrand[i] = v_new[i] / (1.0 + v_new[i] * v_new[i]).sqrt();
        }
        cumulative_integral(&integrand, h, &mut acc);
        let u_new: Vec<f64> = acc.iter().map(|a| w0 + a).collect();

        let scale = 1.0
            + u_new.iter().fold(0.0f64, |m, x| m.max(x.abs()))
            + v_new.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        change = u
            .iter()
            .zip(&u_new)
            .chain(v.iter().zip(&v_new))
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
            / scale;
        u = u_new;
        v = v_new;
        if change <= 1e-14 {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(DropError::NoConvergence {
            iterations: n_iter,
            change,
        });
    }

    let samples = (0..n)
        .map(|i| {
            if i == 0 {
                ProfileSample::new(0.0, u0, 0.0)
            } else {
                ProfileSample::new(r[i], u[i] - shift, v[i])
            }
        })
        .collect();
    DropProfile::from_samples(*params, u0, samples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrature_is_exact_for_cubics() {
        let h = 0.1;
        let f: Vec<f64> = (0..12)
            .map(|i| {
                let x = i as f64 * h;
                1.0 - 2.0 * x + 0.5 * x * x * x
            })
            .collect();
        let mut out = vec![0.0; f.len()];
        cumulative_integral(&f, h, &mut out);
        for (i, val) in out.iter().enumerate() {
            let x = i as f64 * h;
            let exact = x - x * x + 0.125 * x.powi(4);
            assert!((val - exact).abs() < 1e-14, "i = {i}");
        }
    }

    #[test]
    fn zero_height_converges_immediately() {
        let p = CapillaryParams::with_kappa(1.0).unwrap();
        let prof = picard_oracle(&p, 0.0, 2.0, 1000, 20).unwrap();
        assert!(prof.samples().iter().all(|s| s.u == 0.0 && s.v == 0.0));
    }

    #[test]
    fn rejects_coarse_settings() {
        let p = CapillaryParams::with_kappa(1.0).unwrap();
        assert!(picard_oracle(&p, 1.0, 2.0, 100, 20).is_err());
        assert!(picard_oracle(&p, 1.0, 2.0, 1000, 5).is_err());
    }

    #[test]
    fn too_few_sweeps_report_no_convergence() {
        let p = CapillaryParams::with_kappa(-4.0).unwrap();
        let err = picard_oracle(&p, -1.0, 20.0, 1000, 20).unwrap_err();
        assert!(matches!(err, DropError::NoConvergence { .. }));
    }
}
