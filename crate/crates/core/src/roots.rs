//! Bracketed scalar root finding.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    /// Function value at `x`.
    pub fx: f64,
    pub iterations: usize,
}

/// Brent's method (bisection safeguarding secant and inverse quadratic
/// interpolation) on `[a, b]` with known end values `fa`, `fb`.
///
/// Stops once the bracket is narrower than `2 * xtol` (plus a few ulps) or an
/// exact zero is hit. Errors from `f` are returned unchanged.
pub fn brent<F>(
    mut f: F,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    if fa == 0.0 {
        return Ok(Root { x: a, fx: fa, iterations: 0 });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: fb, iterations: 0 });
    }
    if fa.signum() == fb.signum() || !fa.is_finite() || !fb.is_finite() {
        return Err(Error::BracketFailure { lo: a, hi: b, f_lo: fa, f_hi: fb });
    }

    let (mut a, mut b, mut fa, mut fb) = (a, b, fa, fb);
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=max_iter {
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
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(Root { x: b, fx: fb, iterations: iter });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                // secant
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                // inverse quadratic interpolation
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
    }
    Err(Error::NonConvergence { iterations: max_iter })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solve<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> Root {
        brent(|x| Ok(f(x)), a, b, f(a), f(b), 1e-14, 200).unwrap()
    }

    #[test]
    fn finds_simple_roots() {
        let r = solve(|x| x * x - 2.0, 0.0, 2.0);
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
        let r = solve(|x| x.cos() - x, 0.0, 1.0);
        assert!((r.x - 0.739_085_133_215_160_6).abs() < 1e-14);
    }

    #[test]
    fn handles_flat_and_steep_functions() {
        let r = solve(|x| (x - 1.0).powi(3), 0.0, 3.0);
        assert!((r.x - 1.0).abs() < 1e-4);
        let r = solve(|x| (20.0 * (x - 0.3)).tanh(), 0.0, 1.0);
        assert!((r.x - 0.3).abs() < 1e-13);
        assert!(r.iterations < 40);
    }

    #[test]
    fn rejects_unbracketed_interval() {
        let err = brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 2.0, 2.0, 1e-12, 50).unwrap_err();
        assert!(matches!(err, Error::BracketFailure { .. }));
    }

    #[test]
    fn endpoint_roots_return_immediately() {
        let r = brent(|_| unreachable!(), 0.0, 1.0, 0.0, 1.0, 1e-12, 10).unwrap();
        assert_eq!(r.x, 0.0);
    }
}
