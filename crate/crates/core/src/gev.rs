//! Generalized extreme value distributions and products of two of them.
//!
//! `G(x) = exp(-t(x))` with `t(x) = (1 + xi (x - mu) / sigma)^(-1/xi)` on the
//! support `1 + xi (x - mu) / sigma > 0`. For `|xi|` below [`GUMBEL_THRESHOLD`]
//! the Gumbel limit `t(x) = exp(-(x - mu) / sigma)` is used.

use crate::error::{Error, Result};
use crate::roots::{brent, RootOptions};
use crate::scalar::Real;

/// Below this `|xi|` the Gumbel formulas are used.
pub const GUMBEL_THRESHOLD: f64 = 1e-8;

/// Location, scale and shape of a GEV distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevParams<T> {
    mu: T,
    sigma: T,
    xi: T,
}

impl<T: Real> GevParams<T> {
    pub fn new(mu: T, sigma: T, xi: T) -> Result<Self> {
        if !(sigma > T::zero()) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!("GEV scale must be positive, got {sigma}")));
        }
        if !mu.is_finite() || !xi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "GEV location and shape must be finite, got mu={mu}, xi={xi}"
            )));
        }
        Ok(Self { mu, sigma, xi })
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn sigma(&self) -> T {
        self.sigma
    }

    pub fn xi(&self) -> T {
        self.xi
    }

    pub fn as_array(&self) -> [T; 3] {
        [self.mu, self.sigma, self.xi]
    }

    fn is_gumbel(&self) -> bool {
        self.xi.abs() < T::lit(GUMBEL_THRESHOLD)
    }

    /// Lower and upper endpoints of the support.
    pub fn support(&self) -> (T, T) {
        if self.is_gumbel() {
            (T::neg_infinity(), T::infinity())
        } else if self.xi > T::zero() {
            (self.mu - self.sigma / self.xi, T::infinity())
        } else {
            (T::neg_infinity(), self.mu - self.sigma / self.xi)
        }
    }

    /// `log t(x)`; `None` outside the support.
    fn log_t(&self, x: T) -> Option<T> {
        let z = (x - self.mu) / self.sigma;
        if self.is_gumbel() {
            return Some(-z);
        }
        if T::one() + self.xi * z <= T::zero() {
            return None;
        }
        Some(-(self.xi * z).ln_1p() / self.xi)
    }

    /// `t(x)`; `None` outside the support.
    fn t(&self, x: T) -> Option<T> {
        self.log_t(x).map(|l| l.exp())
    }

    pub fn cdf(&self, x: T) -> T {
        match self.t(x) {
            Some(t) => (-t).exp(),
            None if self.xi > T::zero() => T::zero(),
            None => T::one(),
        }
    }

    pub fn pdf(&self, x: T) -> T {
        let l = self.ln_pdf(x);
        if l.is_finite() {
            l.exp()
        } else {
            T::zero()
        }
    }

    /// Log-density; `-inf` outside the support.
    pub fn ln_pdf(&self, x: T) -> T {
        match self.log_t(x) {
            // t^(xi+1) e^-t / sigma on the log scale
            Some(l) if l.is_finite() => (self.xi + T::one()) * l - l.exp() - self.sigma.ln(),
            _ => T::neg_infinity(),
        }
    }

    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::Domain(format!("probability must lie in (0,1), got {p}")));
        }
        let log_y = (-p.ln()).ln();
        if self.is_gumbel() {
            return Ok(self.mu - self.sigma * log_y);
        }
        Ok(self.mu + self.sigma * (-self.xi * log_y).exp_m1() / self.xi)
    }

    /// Gradient of `G(x)` with respect to `(mu, sigma, xi)`.
    pub fn cdf_jacobian(&self, x: T) -> Result<[T; 3]> {
        let z = (x - self.mu) / self.sigma;
        let u = self.xi * z;
        if !self.is_gumbel() && T::one() + u <= T::zero() {
            return Err(Error::Domain(format!("x={x} outside the GEV support")));
        }
        let t = match self.t(x) {
            Some(t) => t,
            None => return Err(Error::Domain(format!("x={x} outside the GEV support"))),
        };
        let s = T::one() + u;
        // derivatives of log t
        let (d_mu, d_sigma, d_xi) = if self.is_gumbel() {
            (T::one() / self.sigma, z / self.sigma, z * z * T::lit(0.5))
        } else {
            let d_xi = if u.abs() < T::lit(1e-3) {
                // z^2 * sum_{m>=1} (-1)^(m+1) m/(m+1) u^(m-1)
                let mut acc = T::zero();
                let mut pow = T::one();
                for m in 1..=8 {
                    let mf = T::count(m);
                    let term = mf / (mf + T::one()) * pow;
                    acc = if m % 2 == 1 { acc + term } else { acc - term };
                    pow = pow * u;
                }
                z * z * acc
            } else {
                (u.ln_1p() / self.xi - z / s) / self.xi
            };
            (T::one() / (self.sigma * s), z / (self.sigma * s), d_xi)
        };
        let g = (-t).exp();
        let scale = -g * t;
        Ok([scale * d_mu, scale * d_sigma, scale * d_xi])
    }
}

/// Product `G_winter(x) * G_summer(x)`: the law of the maximum of two
/// independent GEV variables.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoComponentGev<T> {
    pub winter: GevParams<T>,
    pub summer: GevParams<T>,
}

impl<T: Real> TwoComponentGev<T> {
    pub fn new(winter: GevParams<T>, summer: GevParams<T>) -> Self {
        Self { winter, summer }
    }

    pub fn cdf(&self, x: T) -> T {
        self.winter.cdf(x) * self.summer.cdf(x)
    }

    pub fn pdf(&self, x: T) -> T {
        self.winter.pdf(x) * self.summer.cdf(x) + self.winter.cdf(x) * self.summer.pdf(x)
    }

    /// Lower and upper endpoints of the support of the product.
    pub fn support(&self) -> (T, T) {
        let (lw, uw) = self.winter.support();
        let (ls, us) = self.summer.support();
        (lw.max(ls), uw.max(us))
    }

    pub fn quantile(&self, p: T) -> Result<T> {
        self.quantile_with(p, &RootOptions { f_tol: T::lit(1e-10).max(T::epsilon()), ..RootOptions::default() })
    }

    /// Numerical inversion on the bracket
    /// `[max_i G_i^-1(p), max_i G_i^-1(sqrt p)]`, which always holds the root.
    pub fn quantile_with(&self, p: T, opts: &RootOptions<T>) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::Domain(format!("probability must lie in (0,1), got {p}")));
        }
        let lo = self.winter.quantile(p)?.max(self.summer.quantile(p)?);
        let sp = p.sqrt();
        let hi = self.winter.quantile(sp)?.max(self.summer.quantile(sp)?);
        if lo == hi {
            return Ok(lo);
        }
        brent(|x| self.cdf(x) - p, lo, hi, opts)
    }

    /// Extreme value index of the product, `max(xi_w, xi_s)`, for positive shapes.
    pub fn evi(&self) -> Result<T> {
        let (a, b) = (self.winter.xi, self.summer.xi);
        if a <= T::zero() || b <= T::zero() {
            return Err(Error::Unsupported(format!(
                "extreme value index of the product is only available for positive shapes, got ({a}, {b})"
            )));
        }
        Ok(a.max(b))
    }
}
