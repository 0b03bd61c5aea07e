//! Bracketed root finding for monotone equations.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Stopping rules for [`brent`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Absolute tolerance on `|f(x)|`.
    pub f_tol: T,
    /// Relative tolerance on the bracket width.
    pub x_rel_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        Self {
            f_tol: T::lit(1e-12),
            x_rel_tol: T::epsilon() * T::lit(4.0),
            max_iter: 200,
        }
    }
}

/// Brent's method on a bracket `[a, b]` with a sign change.
pub fn brent<T, F>(mut f: F, a: T, b: T, opts: &RootOptions<T>) -> Result<T>
where
    T: Real,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::Numeric("objective is NaN at the bracket ends".into()));
    }
    if fa.abs() <= opts.f_tol {
        return Ok(a);
    }
    if fb.abs() <= opts.f_tol {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numeric(format!(
            "no sign change on bracket [{a}, {b}]: f(a)={fa}, f(b)={fb}"
        )));
    }
    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let half = T::lit(0.5);
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..opts.max_iter {
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
        let tol = two * opts.x_rel_tol * b.abs().max(T::min_positive_value().sqrt());
        let m = half * (c - b);
        if fb.abs() <= opts.f_tol || m.abs() <= tol {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = d;
            }
        } else {
            d = m;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol { b + d } else { b + tol * m.signum() };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Numeric(format!("objective is NaN at x={b}")));
        }
    }
    Err(Error::Numeric(format!(
        "root finder did not converge after {} iterations; last x={b}, f(x)={fb}",
        opts.max_iter
    )))
}
