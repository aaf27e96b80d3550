//! Bracketed scalar root finding (Brent's method: bisection safeguarding
//! secant and inverse quadratic steps).

use crate::error::{DropError, Result};

#[derive(Debug, Clone, Copy)]
pub struct RootOptions {
    /// Absolute tolerance on the root location.
    pub x_tol: f64,
    /// Stop as soon as `|f| <= f_tol`.
    pub f_tol: f64,
    pub max_iter: usize,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self {
            x_tol: 1e-14,
            f_tol: 0.0,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Final bracket, ordered `(lo, hi)`.
    pub bracket: (f64, f64),
}

/// Finds a root of `f` in `[a, b]` given `f(a)` and `f(b)` of opposite sign.
pub fn brent<F>(mut f: F, a: f64, b: f64, fa: f64, fb: f64, opts: RootOptions) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            fx: fa,
            iterations: 0,
            bracket: (a.min(b), a.max(b)),
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            fx: fb,
            iterations: 0,
            bracket: (a.min(b), a.max(b)),
        });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(DropError::BracketFailure(format!(
            "f({a}) = {fa} and f({b}) = {fb} do not straddle zero"
        )));
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=opts.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * opts.x_tol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 || fb.abs() <= opts.f_tol {
            return Ok(Root {
                x: b,
                fx: fb,
                iterations: iter,
                bracket: (b.min(c), b.max(c)),
            });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
        if !fb.is_finite() {
            return Err(DropError::BracketFailure(format!("f({b}) is not finite")));
        }
    }
    Err(DropError::BracketFailure(format!(
        "no convergence after {} iterations (bracket [{}, {}])",
        opts.max_iter,
        b.min(c),
        b.max(c)
    )))
}

/// A probe `(x, f(x))`.
pub type Probe = (f64, f64);

/// Grows `x` geometrically by `factor` from `start` until `f(x)` has the sign
/// `want_positive`, returning `(x, f(x))` and the previous probe.
pub fn expand_until<F>(
    mut f: F,
    start: f64,
    factor: f64,
    max_steps: usize,
    want_positive: bool,
) -> Result<(Probe, Option<Probe>)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut x = start;
    let mut prev = None;
    for _ in 0..max_steps {
        let fx = f(x)?;
        if fx == 0.0 || (fx > 0.0) == want_positive {
            return Ok(((x, fx), prev));
        }
        prev = Some((x, fx));
        x *= factor;
    }
    Err(DropError::BracketFailure(format!(
        "no sign change after {max_steps} geometric steps from {start} (factor {factor})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root() {
        let f = |x: f64| Ok(x * x * x - 0.5);
        let root = brent(f, 0.0, 1.0, -0.5, 0.5, RootOptions::default()).unwrap();
        assert!((root.x - 0.5f64.cbrt()).abs() < 1e-14);
        assert!(root.bracket.0 <= root.x && root.x <= root.bracket.1);
    }

    #[test]
    fn rejects_non_straddling_bracket() {
        let f = |x: f64| Ok(x * x + 1.0);
        let err = brent(f, -1.0, 1.0, 2.0, 2.0, RootOptions::default()).unwrap_err();
        assert!(matches!(err, DropError::BracketFailure(_)));
    }

    #[test]
    fn endpoint_roots_return_immediately() {
        let root = brent(Ok, 0.0, 1.0, 0.0, 1.0, RootOptions::default()).unwrap();
        assert_eq!(root.x, 0.0);
        assert_eq!(root.iterations, 0);
    }

    #[test]
    fn steep_function_converges() {
        let f = |x: f64| Ok((50.0 * (x - 0.3)).tanh());
        let (fa, fb) = (f(0.0).unwrap(), f(1.0).unwrap());
        let root = brent(f, 0.0, 1.0, fa, fb, RootOptions::default()).unwrap();
        assert!((root.x - 0.3).abs() < 1e-13);
    }

    #[test]
    fn expansion_finds_sign_change() {
        let ((x, fx), prev) = expand_until(|x| Ok(x - 10.0), 1.0, 2.0, 20, true).unwrap();
        assert_eq!(x, 16.0);
        assert!(fx > 0.0);
        assert_eq!(prev, Some((8.0, -2.0)));
        assert!(expand_until(|_| Ok(-1.0), 1.0, 2.0, 5, true).is_err());
    }
}
