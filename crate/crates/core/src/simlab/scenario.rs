//! Monte Carlo scenarios comparing regional quantile estimators.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::Matrix3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::copula::khoudraji_sample;
use super::margins::{BlockMaxMargin, MarginSpec};
use crate::dependence::DependenceMethod;
use crate::error::{Error, Result};
use crate::gev::{GevParams, TwoComponentGev};
use crate::inference::{fit_seasonal_regional_with, gev_quantile_ci, twocomp_quantile_ci, Interval};
use crate::moments::Method;
use crate::regional::{regional_gev_with, CovarianceKind, RegionalOptions, ObservationScheme, SiteSeries};
use crate::tail::{fit_regional_tail, seasonal_weissman_from_fits};

/// Quantile estimators available in scenarios.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Estimator {
    L,
    TL,
    W,
    #[serde(rename = "sL")]
    SL,
    #[serde(rename = "sTL")]
    STL,
    #[serde(rename = "sW")]
    SW,
}

impl Estimator {
    pub const ALL: [Estimator; 6] = [Self::L, Self::TL, Self::W, Self::SL, Self::STL, Self::SW];

    pub fn is_seasonal(self) -> bool {
        matches!(self, Self::SL | Self::STL | Self::SW)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::L => "L",
            Self::TL => "TL",
            Self::W => "W",
            Self::SL => "sL",
            Self::STL => "sTL",
            Self::SW => "sW",
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l" => Ok(Self::L),
            "tl" => Ok(Self::TL),
            "w" => Ok(Self::W),
            "sl" => Ok(Self::SL),
            "stl" => Ok(Self::STL),
            "sw" => Ok(Self::SW),
            _ => Err(Error::InvalidParameter(format!("unknown estimator {s}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CopulaSpec {
    pub theta: [f64; 2],
    /// Khoudraji exponents; defaults to `(0, 1, ..., d-1) / d`.
    #[serde(default)]
    pub c: Option<Vec<f64>>,
}

impl Default for CopulaSpec {
    fn default() -> Self {
        Self { theta: [1.0, 1.0], c: None }
    }
}

/// Regional options used by simulations: parametric diagonal PWM blocks.
pub fn simulation_regional() -> RegionalOptions {
    RegionalOptions { covariance: CovarianceKind::Hybrid, ..RegionalOptions::default() }
}

fn default_estimators() -> Vec<Estimator> {
    vec![Estimator::L, Estimator::TL, Estimator::W]
}

fn default_replications() -> usize {
    500
}

/// One Monte Carlo experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub d: usize,
    pub n: usize,
    pub p: f64,
    /// One margin for every site, or one per site.
    pub margins: Vec<MarginSpec>,
    #[serde(default)]
    pub copula: CopulaSpec,
    #[serde(default = "default_estimators")]
    pub estimators: Vec<Estimator>,
    #[serde(default = "default_replications")]
    pub replications: usize,
    #[serde(default)]
    pub seed: u64,
    /// Site whose quantile is estimated.
    #[serde(default)]
    pub target: usize,
    /// Leading missing years per site; defaults to none.
    #[serde(default)]
    pub offsets: Option<Vec<usize>>,
    /// Record interval coverage at this level when set.
    #[serde(default)]
    pub alpha: Option<f64>,
    #[serde(default)]
    pub dependence: DependenceMethod,
    /// Regional moment-fit choices; simulations default to the hybrid covariance.
    #[serde(default = "simulation_regional")]
    pub regional: RegionalOptions,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.d == 0 || self.n < 3 {
            return bad(format!("need d >= 1 and n >= 3, got d={}, n={}", self.d, self.n));
        }
        if !(self.p > 0.0 && self.p < 1.0) {
            return bad(format!("p must lie in (0, 1), got {}", self.p));
        }
        if self.replications == 0 {
            return bad("replications must be at least 1".into());
        }
        if self.target >= self.d {
            return bad(format!("target {} out of range for d={}", self.target, self.d));
        }
        if self.margins.len() != 1 && self.margins.len() != self.d {
            return bad(format!("expected 1 or {} margins, got {}", self.d, self.margins.len()));
        }
        for m in &self.margins {
            m.validate()?;
        }
        let seasonal = self.margins[0].is_seasonal();
        if self.margins.iter().any(|m| m.is_seasonal() != seasonal) {
            return bad("margins must be all seasonal or all block-maximum".into());
        }
        if !seasonal && self.estimators.iter().any(|e| e.is_seasonal()) {
            return bad("seasonal estimators need seasonal margins".into());
        }
        if self.copula.theta.iter().any(|&t| !(t >= 1.0)) {
            return bad(format!("copula parameters must be >= 1, got {:?}", self.copula.theta));
        }
        let c = self.exponents();
        if c.len() != self.d || c.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return bad("copula exponents must be d values in [0, 1]".into());
        }
        if let Some(o) = &self.offsets {
            if o.len() != self.d || o.iter().any(|&a| a + 2 > self.n) || !o.contains(&0) {
                return bad("offsets must be d values leaving >= 2 years, with at least one 0".into());
            }
        }
        if let Some(a) = self.alpha {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("alpha must lie in (0, 1), got {a}"));
            }
        }
        Ok(())
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.copula
            .c
            .clone()
            .unwrap_or_else(|| (0..self.d).map(|j| j as f64 / self.d as f64).collect())
    }

    fn margin(&self, j: usize) -> &MarginSpec {
        if self.margins.len() == 1 {
            &self.margins[0]
        } else {
            &self.margins[j]
        }
    }

    /// True `p`-quantile of the target's annual maximum.
    pub fn true_quantile(&self) -> Result<f64> {
        match *self.margin(self.target) {
            MarginSpec::Blockmax { mu, sigma, xi, b } => BlockMaxMargin::new(mu, sigma, xi, b)?.quantile(self.p),
            MarginSpec::Seasonal { winter, summer } => {
                TwoComponentGev::new(gev(winter)?, gev(summer)?).quantile(self.p)
            }
        }
    }
}

fn gev(a: [f64; 3]) -> Result<GevParams<f64>> {
    GevParams::new(a[0], a[1], a[2])
}

/// Simulated annual and seasonal maxima, `values[site][year]`.
#[derive(Debug, Clone)]
pub struct SimulatedRegion {
    pub annual: Vec<Vec<f64>>,
    pub winter: Option<Vec<Vec<f64>>>,
    pub summer: Option<Vec<Vec<f64>>>,
}

enum SiteLaw {
    Block(BlockMaxMargin),
    Seasonal(GevParams<f64>, GevParams<f64>),
}

/// Draw one region of `n` years.
pub fn simulate_region(config: &ScenarioConfig, rng: &mut ChaCha8Rng) -> Result<SimulatedRegion> {
    let (d, n) = (config.d, config.n);
    let c = config.exponents();
    let [t1, t2] = config.copula.theta;
    let laws: Vec<SiteLaw> = (0..d)
        .map(|j| match *config.margin(j) {
            MarginSpec::Blockmax { mu, sigma, xi, b } => Ok(SiteLaw::Block(BlockMaxMargin::new(mu, sigma, xi, b)?)),
            MarginSpec::Seasonal { winter, summer } => Ok(SiteLaw::Seasonal(gev(winter)?, gev(summer)?)),
        })
        .collect::<Result<_>>()?;
    let seasonal = matches!(laws[0], SiteLaw::Seasonal(..));
    let mut annual = vec![Vec::with_capacity(n); d];
    let mut winter = vec![Vec::with_capacity(n); d];
    let mut summer = vec![Vec::with_capacity(n); d];
    for _ in 0..n {
        let u = khoudraji_sample(t1, t2, &c, rng)?;
        if seasonal {
            let v = khoudraji_sample(t1, t2, &c, rng)?;
            for j in 0..d {
                let SiteLaw::Seasonal(gw, gs) = &laws[j] else { unreachable!() };
                let w = gw.quantile(clamp_open(u[j]))?;
                let s = gs.quantile(clamp_open(v[j]))?;
                winter[j].push(w);
                summer[j].push(s);
                annual[j].push(w.max(s));
            }
        } else {
            for j in 0..d {
                let SiteLaw::Block(m) = &laws[j] else { unreachable!() };
                annual[j].push(m.quantile(clamp_open(u[j]))?);
            }
        }
    }
    Ok(SimulatedRegion {
        annual,
        winter: seasonal.then_some(winter),
        summer: seasonal.then_some(summer),
    })
}

fn clamp_open(u: f64) -> f64 {
    u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

fn scheme(values: &[Vec<f64>], offsets: &[usize]) -> Result<ObservationScheme> {
    ObservationScheme::new(
        values
            .iter()
            .zip(offsets)
            .enumerate()
            .map(|(j, (v, &a))| SiteSeries::new(format!("site{}", j + 1), a, v[a..].to_vec()))
            .collect(),
    )
}

/// Estimate of one estimator in one replication.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub interval: Option<Interval>,
}

/// Run every configured estimator on one simulated region.
pub fn estimate_region(config: &ScenarioConfig, region: &SimulatedRegion) -> Vec<Result<Estimate>> {
    let offsets = config.offsets.clone().unwrap_or_else(|| vec![0; config.d]);
    let target = format!("site{}", config.target + 1);
    let annual = scheme(&region.annual, &offsets);
    let seasonal = match (&region.winter, &region.summer) {
        (Some(w), Some(s)) => Some(scheme(w, &offsets).and_then(|w| Ok((w, scheme(s, &offsets)?)))),
        _ => None,
    };
    let p = config.p;
    let alpha = config.alpha;
    config
        .estimators
        .iter()
        .map(|&e| -> Result<Estimate> {
            match e {
                Estimator::L | Estimator::TL => {
                    let annual = annual.as_ref().map_err(Clone::clone)?;
                    let method = if e == Estimator::L { Method::L } else { Method::TL };
                    let fit = regional_gev_with(annual, &target, method, &config.regional)?;
                    let value = fit.params.quantile(p)?;
                    let interval = match alpha {
                        Some(a) => {
                            let n_t = annual.sites()[fit.target].len();
                            let cov = Matrix3::from_fn(|i, j| fit.covariance[(i, j)]) * (n_t as f64 / annual.n() as f64);
                            Some(gev_quantile_ci(&fit.params, &cov, n_t, p, a)?)
                        }
                        None => None,
                    };
                    Ok(Estimate { value, interval })
                }
                Estimator::W => {
                    let annual = annual.as_ref().map_err(Clone::clone)?;
                    let fit = fit_regional_tail(annual, &target, None, config.dependence)?;
                    let value = fit.quantile(p)?;
                    let interval = alpha.map(|a| fit.ci(p, a)).transpose()?;
                    Ok(Estimate { value, interval })
                }
                Estimator::SL | Estimator::STL => {
                    let (w, s) = seasonal_schemes(&seasonal)?;
                    let method = if e == Estimator::SL { Method::L } else { Method::TL };
                    let fit = fit_seasonal_regional_with(w, s, &target, method, &config.regional)?;
                    let value = fit.fit.model().quantile(p)?;
                    let interval = alpha.map(|a| twocomp_quantile_ci(&fit.fit, p, a)).transpose()?;
                    Ok(Estimate { value, interval })
                }
                Estimator::SW => {
                    let (w, s) = seasonal_schemes(&seasonal)?;
                    let fw = fit_regional_tail(w, &target, None, config.dependence)?;
                    let fs = fit_regional_tail(s, &target, None, config.dependence)?;
                    Ok(Estimate { value: seasonal_weissman_from_fits(&fw, &fs, p)?, interval: None })
                }
            }
        })
        .collect()
}

fn seasonal_schemes(
    s: &Option<Result<(ObservationScheme, ObservationScheme)>>,
) -> Result<(&ObservationScheme, &ObservationScheme)> {
    match s {
        Some(Ok((w, s))) => Ok((w, s)),
        Some(Err(e)) => Err(e.clone()),
        None => Err(Error::Unsupported("seasonal estimator without seasonal data".into())),
    }
}

/// Per-estimator summary over all replications.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    pub estimator: Estimator,
    pub successes: usize,
    pub failures: usize,
    pub mean: f64,
    pub bias: f64,
    pub variance: f64,
    pub mse: f64,
    /// MSE divided by the squared true quantile.
    pub scaled_mse: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    /// Estimates beyond 1.5 interquartile ranges from the quartiles.
    pub outliers: usize,
    /// Monte Carlo standard error of the bias.
    pub bias_se: f64,
    /// Monte Carlo standard error of the scaled MSE.
    pub scaled_mse_se: f64,
    pub coverage: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub true_quantile: f64,
    pub replications: usize,
    pub summaries: Vec<EstimatorSummary>,
}

impl ScenarioReport {
    pub fn summary(&self, e: Estimator) -> Option<&EstimatorSummary> {
        self.summaries.iter().find(|s| s.estimator == e)
    }

    /// Aligned plain-text table.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "true quantile: {:.4}   replications: {}", self.true_quantile, self.replications);
        let _ = writeln!(
            out,
            "{:<5} {:>6} {:>5} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>5} {:>8}",
            "est", "ok", "fail", "bias", "variance", "scaledMSE", "q1", "median", "q3", "mse_se", "out", "cover"
        );
        for s in &self.summaries {
            let cover = s.coverage.map_or("-".to_string(), |c| format!("{c:.3}"));
            let _ = writeln!(
                out,
                "{:<5} {:>6} {:>5} {:>10.4} {:>10.4} {:>10.5} {:>10.4} {:>10.4} {:>10.4} {:>10.5} {:>5} {:>8}",
                s.estimator.name(),
                s.successes,
                s.failures,
                s.bias,
                s.variance,
                s.scaled_mse,
                s.q1,
                s.median,
                s.q3,
                s.scaled_mse_se,
                s.outliers,
                cover
            );
        }
        out
    }
}

fn quantile_sorted(v: &[f64], p: f64) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let h = (v.len() - 1) as f64 * p;
    let i = h.floor() as usize;
    let j = (i + 1).min(v.len() - 1);
    v[i] + (h - i as f64) * (v[j] - v[i])
}

fn summarize(e: Estimator, results: &[Option<Estimate>], truth: f64) -> EstimatorSummary {
    let ok: Vec<&Estimate> = results.iter().flatten().filter(|r| r.value.is_finite()).collect();
    let failures = results.len() - ok.len();
    let m = ok.len() as f64;
    let vals: Vec<f64> = ok.iter().map(|r| r.value).collect();
    let mean = vals.iter().sum::<f64>() / m;
    let bias = mean - truth;
    let variance = if ok.len() > 1 { vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    let sq: Vec<f64> = vals.iter().map(|v| (v - truth).powi(2) / (truth * truth)).collect();
    let scaled_mse = sq.iter().sum::<f64>() / m;
    let scaled_mse_se = if ok.len() > 1 {
        (sq.iter().map(|s| (s - scaled_mse).powi(2)).sum::<f64>() / (m - 1.0) / m).sqrt()
    } else {
        f64::NAN
    };
    let mut sorted = vals.clone();
    sorted.sort_by(f64::total_cmp);
    let (q1, median, q3) = (quantile_sorted(&sorted, 0.25), quantile_sorted(&sorted, 0.5), quantile_sorted(&sorted, 0.75));
    let iqr = q3 - q1;
    let outliers = vals.iter().filter(|&&v| v < q1 - 1.5 * iqr || v > q3 + 1.5 * iqr).count();
    let with_ci: Vec<&Interval> = ok.iter().filter_map(|r| r.interval.as_ref()).collect();
    let coverage = (!with_ci.is_empty())
        .then(|| with_ci.iter().filter(|i| i.contains(truth)).count() as f64 / with_ci.len() as f64);
    EstimatorSummary {
        estimator: e,
        successes: ok.len(),
        failures,
        mean,
        bias,
        variance,
        mse: scaled_mse * truth * truth,
        scaled_mse,
        q1,
        median,
        q3,
        outliers,
        bias_se: (variance / m).sqrt(),
        scaled_mse_se,
        coverage,
    }
}

/// Generator of replication `r`: the seed picks the key, the replication the stream.
pub fn replication_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

/// Run all replications in parallel; the result depends only on the config.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioReport> {
    config.validate()?;
    let truth = config.true_quantile()?;
    if config.estimators.contains(&Estimator::SW) {
        log::warn!("seasonal Weissman estimator is not recommended");
    }
    let per_rep: Vec<Vec<Option<Estimate>>> = (0..config.replications)
        .into_par_iter()
        .map(|r| {
            let mut rng = replication_rng(config.seed, r);
            match simulate_region(config, &mut rng) {
                Ok(region) => estimate_region(config, &region)
                    .into_iter()
                    .map(|res| match res {
                        Ok(e) => Some(e),
                        Err(err) => {
                            log::debug!("replication {r}: {err}");
                            None
                        }
                    })
                    .collect(),
                Err(err) => {
                    log::debug!("replication {r}: {err}");
                    vec![None; config.estimators.len()]
                }
            }
        })
        .collect();
    let summaries = config
        .estimators
        .iter()
        .enumerate()
        .map(|(i, &e)| {
            let col: Vec<Option<Estimate>> = per_rep.iter().map(|row| row[i]).collect();
            summarize(e, &col, truth)
        })
        .collect();
    Ok(ScenarioReport { true_quantile: truth, replications: config.replications, summaries })
}
