//! Regional two-component GEV quantile estimation with asymptotic
//! confidence intervals.

use nalgebra::{DMatrix, Matrix3, Vector3};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::gev::{GevParams, TwoComponentGev};
use crate::moments::Method;
use crate::regional::{regional_gev_with, ObservationScheme, RegionalGev, RegionalOptions};

/// Symmetric confidence interval around a point estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
}

impl std::fmt::Display for Interval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let prec = f.precision().unwrap_or(1);
        write!(f, "{:.*} [{:.*}, {:.*}]", prec, self.estimate, prec, self.lower, prec, self.upper)
    }
}

/// Two-sided standard normal critical value `z_{1 - alpha/2}`.
pub fn normal_critical(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let normal = Normal::standard();
    Ok(normal.inverse_cdf(1.0 - alpha / 2.0).max(0.0))
}

/// Winter and summer GEV fits with the limiting covariances of
/// `sqrt(n) (theta_hat - theta)`.
#[derive(Debug, Clone)]
pub struct SeasonalFit {
    pub theta_w: GevParams<f64>,
    pub theta_s: GevParams<f64>,
    pub sigma_w: Matrix3<f64>,
    pub sigma_s: Matrix3<f64>,
    /// Effective record length (years) used for the `sqrt(n)` scaling.
    pub n: usize,
}

impl SeasonalFit {
    pub fn model(&self) -> TwoComponentGev<f64> {
        TwoComponentGev::new(self.theta_w, self.theta_s)
    }
}

/// Seasonal regional fits and the diagnostics behind them.
#[derive(Debug, Clone)]
pub struct SeasonalRegionalFit {
    pub fit: SeasonalFit,
    pub winter: RegionalGev,
    pub summer: RegionalGev,
}

fn to_matrix3(m: &DMatrix<f64>) -> Matrix3<f64> {
    Matrix3::from_fn(|i, j| 0.5 * (m[(i, j)] + m[(j, i)]))
}

/// Regional (T)L-moment fits for both seasons at `target`.
///
/// The covariances are rescaled to the target's own record length, which is
/// the `n` of the returned fit.
pub fn fit_seasonal_regional(
    winter: &ObservationScheme,
    summer: &ObservationScheme,
    target: &str,
    method: Method,
) -> Result<SeasonalRegionalFit> {
    fit_seasonal_regional_with(winter, summer, target, method, &RegionalOptions::default())
}

pub fn fit_seasonal_regional_with(
    winter: &ObservationScheme,
    summer: &ObservationScheme,
    target: &str,
    method: Method,
    opts: &RegionalOptions,
) -> Result<SeasonalRegionalFit> {
    let (w, s) = rayon::join(
        || regional_gev_with(winter, target, method, opts),
        || regional_gev_with(summer, target, method, opts),
    );
    let (w, s) = (w?, s?);
    let n_w = winter.sites()[w.target].len();
    let n_s = summer.sites()[s.target].len();
    let n = n_w.min(n_s);
    let sigma_w = to_matrix3(&w.covariance) * (n as f64 / winter.n() as f64);
    let sigma_s = to_matrix3(&s.covariance) * (n as f64 / summer.n() as f64);
    let fit = SeasonalFit { theta_w: w.params, theta_s: s.params, sigma_w, sigma_s, n };
    Ok(SeasonalRegionalFit { fit, winter: w, summer: s })
}

/// Limiting variance of `sqrt(n) (q_hat_p - q_p)` for the two-component quantile.
pub fn twocomp_quantile_variance(fit: &SeasonalFit, p: f64) -> Result<f64> {
    let q = fit.model().quantile(p)?;
    twocomp_variance_at(fit, q)
}

fn twocomp_variance_at(fit: &SeasonalFit, q: f64) -> Result<f64> {
    let (gw, gs) = (fit.theta_w.cdf(q), fit.theta_s.cdf(q));
    let dens = gw * fit.theta_s.pdf(q) + gs * fit.theta_w.pdf(q);
    if !(dens * dens > 1e-300) {
        return Err(Error::Numeric(format!("density of the fitted model vanishes at the quantile {q}")));
    }
    let jw = Vector3::from(fit.theta_w.cdf_jacobian(q).unwrap_or([0.0; 3]));
    let js = Vector3::from(fit.theta_s.cdf_jacobian(q).unwrap_or([0.0; 3]));
    let num = gs * gs * (jw.transpose() * fit.sigma_w * jw)[(0, 0)]
        + gw * gw * (js.transpose() * fit.sigma_s * js)[(0, 0)];
    Ok((num / (dens * dens)).max(0.0))
}

/// `q_hat_p +/- z_{1-alpha/2} sigma_hat_p / sqrt(n)`.
pub fn twocomp_quantile_ci(fit: &SeasonalFit, p: f64, alpha: f64) -> Result<Interval> {
    let z = normal_critical(alpha)?;
    let q = fit.model().quantile(p)?;
    let half = z * (twocomp_variance_at(fit, q)? / fit.n as f64).sqrt();
    Ok(Interval { estimate: q, lower: q - half, upper: q + half })
}

/// Delta-method interval for a single GEV quantile, with `sigma` the
/// covariance of `sqrt(n) (theta_hat - theta)`.
pub fn gev_quantile_ci(params: &GevParams<f64>, sigma: &Matrix3<f64>, n: usize, p: f64, alpha: f64) -> Result<Interval> {
    let z = normal_critical(alpha)?;
    let q = params.quantile(p)?;
    let g = params.pdf(q);
    if !(g * g > 1e-300) {
        return Err(Error::Numeric(format!("GEV density vanishes at the quantile {q}")));
    }
    let j = Vector3::from(params.cdf_jacobian(q)?);
    let var = ((j.transpose() * sigma * j)[(0, 0)] / (g * g)).max(0.0);
    let half = z * (var / n as f64).sqrt();
    Ok(Interval { estimate: q, lower: q - half, upper: q + half })
}

/// Interval for the quantile of an annual regional fit; `scheme` is the
/// scheme the fit came from.
pub fn regional_gev_quantile_ci(fit: &RegionalGev, scheme: &ObservationScheme, p: f64, alpha: f64) -> Result<Interval> {
    gev_quantile_ci(&fit.params, &to_matrix3(&fit.covariance), scheme.n(), p, alpha)
}
