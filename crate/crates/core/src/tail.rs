//! Semi-parametric tail estimation for Pareto-type distributions: Hill,
//! Weissman extrapolation, and the regional index-flood combination.

use log::warn;
use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::dependence::{DependenceMethod, EmpiricalTail, PairDependence, PickandsTable, TailDependence, PICKANDS_GRID};
use crate::error::{Error, Result};
use crate::inference::{normal_critical, Interval};
use crate::regional::{fallback_weights, optimal_weights, ObservationScheme, WeightBranch};
use crate::roots::{brent, RootOptions};
use crate::scalar::Real;

fn sorted<T: Real>(data: &[T]) -> Vec<T> {
    let mut v = data.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k < 2 || k >= n {
        return Err(Error::InvalidParameter(format!("k must satisfy 2 <= k < n = {n}, got {k}")));
    }
    Ok(())
}

/// The order statistic `X_(n-k)`, the threshold of the top `k` observations.
pub fn threshold<T: Real>(data: &[T], k: usize) -> Result<T> {
    check_k(data.len(), k)?;
    Ok(sorted(data)[data.len() - k - 1])
}

/// Hill's estimator from the top `k` order statistics.
pub fn hill<T: Real>(data: &[T], k: usize) -> Result<T> {
    let n = data.len();
    check_k(n, k)?;
    if data.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter("non-finite observation".into()));
    }
    let s = sorted(data);
    let u = s[n - k - 1];
    if !(u > T::zero()) {
        return Err(Error::Domain(format!("Hill threshold X_(n-k) = {u} must be positive")));
    }
    let lu = u.ln();
    let sum: T = s[n - k..].iter().map(|&x| x.ln() - lu).sum();
    Ok(sum / T::count(k))
}

/// `floor(2 n^(2/3) / d^(1/3))` clamped to `[2, n - 1]`.
pub fn default_k(n: usize, d: usize) -> usize {
    let raw = (2.0 * (n as f64).powf(2.0 / 3.0) / (d.max(1) as f64).cbrt()).floor() as usize;
    let hi = n.saturating_sub(1).max(2);
    let k = raw.clamp(2, hi);
    if k != raw {
        warn!("k-rule gave {raw} for n={n}, d={d}; clamped to {k}");
    }
    k
}

/// `X_(n-k) (k / (n (1 - p)))^gamma`.
pub fn weissman_quantile<T: Real>(data: &[T], k: usize, p: T, gamma: T) -> Result<T> {
    let u = threshold(data, k)?;
    weissman_from_threshold(u, k, data.len(), p, gamma)
}

fn weissman_from_threshold<T: Real>(u: T, k: usize, n: usize, p: T, gamma: T) -> Result<T> {
    if !(p < T::one()) {
        return Err(Error::Domain(format!("p = {p}: the quantile is infinite")));
    }
    if !(p > T::zero()) {
        return Err(Error::Domain(format!("p must lie in (0, 1), got {p}")));
    }
    if !(gamma >= T::zero()) {
        return Err(Error::Domain(format!("extreme value index must be non-negative, got {gamma}")));
    }
    if !(u > T::zero()) {
        return Err(Error::Domain(format!("threshold {u} must be positive")));
    }
    let (kf, nf) = (T::count(k), T::count(n));
    if p <= T::one() - kf / nf {
        warn!("p = {p} lies within the sample range (1 - k/n = {}); extrapolation not needed", T::one() - kf / nf);
    }
    Ok(u * (kf / (nf * (T::one() - p))).powf(gamma))
}

/// `1 - (k/n) (x / X_(n-k))^(-1/gamma)` for `x` at or above the threshold.
pub fn tail_prob<T: Real>(x: T, data: &[T], k: usize, gamma: T) -> Result<T> {
    let u = threshold(data, k)?;
    tail_prob_from_threshold(x, u, k, data.len(), gamma)
}

fn tail_prob_from_threshold<T: Real>(x: T, u: T, k: usize, n: usize, gamma: T) -> Result<T> {
    if !(gamma > T::zero()) {
        return Err(Error::Domain(format!("extreme value index must be positive, got {gamma}")));
    }
    if x < u {
        return Err(Error::ExtrapolationDirection(format!("x = {x} lies below the threshold {u}")));
    }
    Ok(T::one() - T::count(k) / T::count(n) * (x / u).powf(-T::one() / gamma))
}

/// Tail sample lengths, combination weights, and the dependence estimator.
#[derive(Debug, Clone, PartialEq)]
pub struct TailConfig {
    pub k: Vec<usize>,
    pub weights: Vec<f64>,
    pub dependence: DependenceMethod,
}

impl TailConfig {
    pub fn new(k: Vec<usize>, weights: Vec<f64>, dependence: DependenceMethod) -> Result<Self> {
        if k.len() != weights.len() {
            return Err(Error::InvalidParameter("k and weights differ in length".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!("weights sum to {total}, not 1")));
        }
        Ok(Self { k, weights, dependence })
    }

    /// Check the tail lengths against the scheme's record lengths.
    pub fn validate(&self, scheme: &ObservationScheme) -> Result<()> {
        if self.k.len() != scheme.d() {
            return Err(Error::InvalidParameter(format!(
                "config has {} sites, scheme has {}",
                self.k.len(),
                scheme.d()
            )));
        }
        for (s, &k) in scheme.sites().iter().zip(&self.k) {
            if k < 2 || k >= s.len() {
                return Err(Error::InvalidParameter(format!(
                    "site {}: k = {k} outside [2, {})",
                    s.id,
                    s.len()
                )));
            }
        }
        Ok(())
    }
}

/// Pairwise tail dependence over the overlap years of each site pair.
pub fn estimate_dependence(scheme: &ObservationScheme, method: DependenceMethod) -> Result<TailDependence> {
    let d = scheme.d();
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|l| (l + 1..d).map(move |m| (l, m))).collect();
    let tables: Vec<PairDependence> = pairs
        .par_iter()
        .map(|&(l, m)| {
            let (x, y) = scheme.overlap(l, m);
            let overlap_err = |required| Error::Overlap {
                first: scheme.sites()[l].id.clone(),
                second: scheme.sites()[m].id.clone(),
                required,
            };
            match method {
                DependenceMethod::Empirical => {
                    if x.len() < 3 {
                        return Err(overlap_err(3));
                    }
                    let k = default_k(x.len(), d);
                    Ok(PairDependence::Empirical(EmpiricalTail::new(&x, &y, k)?))
                }
                DependenceMethod::PickandsCfg => {
                    if x.len() < 10 {
                        return Err(overlap_err(10));
                    }
                    Ok(PairDependence::Pickands(PickandsTable::cfg(&x, &y, PICKANDS_GRID)?))
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut dep = TailDependence::new(d);
    for (&(l, m), t) in pairs.iter().zip(tables) {
        dep.set(l, m, t)?;
    }
    Ok(dep)
}

/// Asymptotic covariance of the local Hill estimators scaled by
/// `k_ref / gamma^2`: `Sigma_{l,m} = c_l c_m (r_l ^ r_m) Lambda_{l,m}(1/(r_l c_l), 1/(r_m c_m))`
/// with `c_l = k_ref / k_l`.
pub fn semi_sigma(k: &[usize], r: &[f64], reference: usize, dep: &TailDependence) -> Result<DMatrix<f64>> {
    let d = k.len();
    if r.len() != d || dep.d() != d || reference >= d {
        return Err(Error::InvalidParameter("inconsistent dimensions for the tail covariance".into()));
    }
    if r.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
        return Err(Error::InvalidParameter("length ratios must lie in (0, 1]".into()));
    }
    let c: Vec<f64> = k.iter().map(|&kl| k[reference] as f64 / kl as f64).collect();
    let mut s = DMatrix::zeros(d, d);
    for l in 0..d {
        s[(l, l)] = c[l];
        for m in l + 1..d {
            let v = c[l] * c[m] * r[l].min(r[m]) * dep.lambda(l, m, 1.0 / (r[l] * c[l]), 1.0 / (r[m] * c[m]));
            s[(l, m)] = v;
            s[(m, l)] = v;
        }
    }
    Ok(s)
}

/// Local Hill estimates with the configured tail lengths.
pub fn local_gammas(scheme: &ObservationScheme, k: &[usize]) -> Result<Vec<f64>> {
    scheme
        .sites()
        .par_iter()
        .zip(k)
        .map(|(s, &kj)| hill(&s.values, kj).map_err(|e| Error::SiteFit { site: s.id.clone(), reason: e.to_string() }))
        .collect()
}

/// `sum_j w_j gamma_hat_j`.
pub fn regional_gamma(scheme: &ObservationScheme, config: &TailConfig) -> Result<f64> {
    config.validate(scheme)?;
    Ok(local_gammas(scheme, &config.k)?.iter().zip(&config.weights).map(|(g, w)| g * w).sum())
}

/// Regional tail fit at a target site.
#[derive(Debug, Clone)]
pub struct RegionalTail {
    pub config: TailConfig,
    pub local_gamma: Vec<f64>,
    pub gamma: f64,
    /// Scaled Hill covariance with the target as reference site.
    pub sigma: DMatrix<f64>,
    pub branch: WeightBranch,
    pub target: usize,
    pub threshold: f64,
    pub n_target: usize,
}

impl RegionalTail {
    pub fn k_target(&self) -> usize {
        self.config.k[self.target]
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        weissman_from_threshold(self.threshold, self.k_target(), self.n_target, p, self.gamma)
    }

    pub fn tail_prob(&self, x: f64) -> Result<f64> {
        tail_prob_from_threshold(x, self.threshold, self.k_target(), self.n_target, self.gamma)
    }

    /// `q_hat [1 +/- z sqrt(gamma^2 / k_ref * w' Sigma w) log(k / (n (1 - p)))]`.
    pub fn ci(&self, p: f64, alpha: f64) -> Result<Interval> {
        let z = normal_critical(alpha)?;
        let q = self.quantile(p)?;
        let w = nalgebra::DVector::from_column_slice(&self.config.weights);
        let quad = w.dot(&(&self.sigma * &w)).max(0.0);
        let sd = (self.gamma * self.gamma / self.k_target() as f64 * quad).sqrt();
        let log_factor = (self.k_target() as f64 / (self.n_target as f64 * (1.0 - p))).ln();
        let half = z * sd * log_factor.abs();
        Ok(Interval { estimate: q, lower: q * (1.0 - half), upper: q * (1.0 + half) })
    }
}

/// Regional Hill/Weissman fit; `k` defaults to the `2 n^(2/3) / d^(1/3)` rule
/// and the weights minimize the asymptotic variance.
pub fn fit_regional_tail(
    scheme: &ObservationScheme,
    target: &str,
    k: Option<Vec<usize>>,
    dependence: DependenceMethod,
) -> Result<RegionalTail> {
    let t = scheme
        .site_index(target)
        .ok_or_else(|| Error::InvalidParameter(format!("target site {target} not in scheme")))?;
    let d = scheme.d();
    let k = k.unwrap_or_else(|| scheme.lengths().iter().map(|&n| default_k(n, d)).collect());
    let provisional = TailConfig { k: k.clone(), weights: vec![1.0 / d as f64; d], dependence };
    provisional.validate(scheme)?;
    let local_gamma = local_gammas(scheme, &k)?;
    let dep = if d > 1 { estimate_dependence(scheme, dependence)? } else { TailDependence::independent(1) };
    let sigma = semi_sigma(&k, &scheme.ratios(), t, &dep)?;
    let (weights, branch) = match optimal_weights(&sigma)? {
        Some(w) => (w, WeightBranch::Optimal),
        None => (fallback_weights(scheme), WeightBranch::Fallback),
    };
    let gamma = local_gamma.iter().zip(&weights).map(|(g, w)| g * w).sum();
    let target_site = &scheme.sites()[t];
    Ok(RegionalTail {
        config: TailConfig { k: k.clone(), weights, dependence },
        local_gamma,
        gamma,
        sigma,
        branch,
        target: t,
        threshold: threshold(&target_site.values, k[t])?,
        n_target: target_site.len(),
    })
}

/// Weissman interval at the target for a given configuration.
pub fn weissman_ci(
    scheme: &ObservationScheme,
    config: &TailConfig,
    target: &str,
    p: f64,
    alpha: f64,
) -> Result<Interval> {
    config.validate(scheme)?;
    let t = scheme
        .site_index(target)
        .ok_or_else(|| Error::InvalidParameter(format!("target site {target} not in scheme")))?;
    let local_gamma = local_gammas(scheme, &config.k)?;
    let dep = if scheme.d() > 1 {
        estimate_dependence(scheme, config.dependence)?
    } else {
        TailDependence::independent(1)
    };
    let sigma = semi_sigma(&config.k, &scheme.ratios(), t, &dep)?;
    let gamma = local_gamma.iter().zip(&config.weights).map(|(g, w)| g * w).sum();
    let site = &scheme.sites()[t];
    let fit = RegionalTail {
        config: config.clone(),
        local_gamma,
        gamma,
        sigma,
        branch: WeightBranch::Optimal,
        target: t,
        threshold: threshold(&site.values, config.k[t])?,
        n_target: site.len(),
    };
    fit.ci(p, alpha)
}

/// Quantile of the product of the two seasonal Weissman tail estimates.
///
/// No confidence interval is available for this estimator, and its bias can
/// be large; prefer seasonal moment methods or annual Weissman.
pub fn seasonal_weissman_quantile(
    winter: &ObservationScheme,
    summer: &ObservationScheme,
    target: &str,
    p: f64,
    dependence: DependenceMethod,
) -> Result<f64> {
    warn!("seasonal Weissman estimator is not recommended");
    let (w, s) = rayon::join(
        || fit_regional_tail(winter, target, None, dependence),
        || fit_regional_tail(summer, target, None, dependence),
    );
    seasonal_weissman_from_fits(&w?, &s?, p)
}

pub fn seasonal_weissman_from_fits(w: &RegionalTail, s: &RegionalTail, p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("p must lie in (0, 1), got {p}")));
    }
    let f = |x: f64| -> Result<f64> { Ok(w.tail_prob(x)? * s.tail_prob(x)?) };
    let lo = w.threshold.max(s.threshold);
    let f_lo = f(lo)?;
    if f_lo > p {
        return Err(Error::ExtrapolationDirection(format!(
            "p = {p} is below the product tail estimate {f_lo} at the larger threshold {lo}"
        )));
    }
    if f_lo == p {
        return Ok(lo);
    }
    let mut hi = lo * 2.0;
    let mut iter = 0;
    while f(hi)? < p {
        hi *= 2.0;
        iter += 1;
        if iter > 200 || !hi.is_finite() {
            return Err(Error::Numeric("could not bracket the seasonal Weissman quantile".into()));
        }
    }
    let opts = RootOptions { f_tol: 1e-13, ..RootOptions::default() };
    brent(|x| f(x).map(|v| v - p).unwrap_or(f64::NAN), lo, hi, &opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    const GEO: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

    #[test]
    fn hill_hand_cases() {
        let g = hill(&GEO, 2).unwrap();
        assert!((g - 1.5 * 2f64.ln()).abs() < 1e-15);
        // top k+1 in geometric progression u e^{c(k-i+1)}
        let (u, c, k) = (3.0, 0.7, 6);
        let mut data: Vec<f64> = (0..=k).map(|j| u * (c * j as f64).exp()).collect();
        data.extend([0.1, 0.5, 1.0]);
        let g = hill(&data, k).unwrap();
        assert!((g - c * (k as f64 + 1.0) / 2.0).abs() < 1e-13);
        let scaled: Vec<f64> = GEO.iter().map(|x| 7.5 * x).collect();
        assert!((hill(&scaled, 2).unwrap() - hill(&GEO, 2).unwrap()).abs() < 1e-15);
        assert!(hill(&GEO, 1).is_err() && hill(&GEO, 5).is_err());
        assert!(hill(&[-1.0, -2.0, -3.0, 4.0, 5.0], 2).is_err());
    }

    #[test]
    fn default_k_cases() {
        assert_eq!(default_k(100, 8), 21);
        assert_eq!(default_k(50, 10), 12);
        assert_eq!(default_k(4, 1000), 2);
    }

    #[test]
    fn weissman_hand_cases() {
        let g = 1.5 * 2f64.ln();
        let q = weissman_quantile(&GEO, 2, 0.99, g).unwrap();
        assert!((q - 4.0 * 40f64.powf(g)).abs() < 1e-10);
        assert!((q - 185.2).abs() < 0.5);
        assert_eq!(weissman_quantile(&GEO, 2, 0.99, 0.0).unwrap(), 4.0);
        assert!((weissman_quantile(&GEO, 2, 0.6, g).unwrap() - 4.0).abs() < 1e-12);
        assert!(weissman_quantile(&GEO, 2, 1.0, g).is_err());
        let pr = tail_prob(q, &GEO, 2, g).unwrap();
        assert!((pr - 0.99).abs() < 1e-12);
        assert!((tail_prob(4.0, &GEO, 2, g).unwrap() - 0.6).abs() < 1e-15);
        assert!(matches!(tail_prob(3.0, &GEO, 2, g), Err(Error::ExtrapolationDirection(_))));
    }

    #[test]
    fn semi_sigma_structure() {
        let k = [20, 10, 40];
        let r = [1.0, 0.5, 1.0];
        let ind = semi_sigma(&k, &r, 0, &TailDependence::independent(3)).unwrap();
        assert_eq!(ind, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 0.5])));

        let x: Vec<f64> = (0..50).map(|i| ((i * 37) % 50) as f64).collect();
        let mut dep = TailDependence::new(2);
        dep.set(0, 1, PairDependence::Pickands(PickandsTable::cfg(&x, &x, 101).unwrap())).unwrap();
        let s = semi_sigma(&[10, 10], &[1.0, 1.0], 0, &dep).unwrap();
        for v in s.iter() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn seasonal_weissman_identical_seasons() {
        let mut v: Vec<f64> = (1..=60).map(|i| i as f64 / 61.0).map(|u| (1.0 - u).powf(-0.4)).collect();
        v.reverse();
        let s = ObservationScheme::equal_length([("a", v.clone())]).unwrap();
        let fit = fit_regional_tail(&s, "a", None, DependenceMethod::Empirical).unwrap();
        let q = seasonal_weissman_from_fits(&fit, &fit, 0.99).unwrap();
        let single = fit.quantile(0.99f64.sqrt()).unwrap();
        assert!((q - single).abs() < 1e-8 * single);
        assert!(matches!(
            seasonal_weissman_from_fits(&fit, &fit, 0.2),
            Err(Error::ExtrapolationDirection(_))
        ));
    }

    #[test]
    fn weissman_ci_degenerates() {
        let v: Vec<f64> = (1..=60).map(|i| (1.0 - i as f64 / 61.0).powf(-0.4)).collect();
        let w: Vec<f64> = (1..=60).map(|i| (1.0 - ((i * 7) % 61) as f64 / 61.0).powf(-0.4)).collect();
        let s = ObservationScheme::equal_length([("a", v), ("b", w)]).unwrap();
        let fit = fit_regional_tail(&s, "a", None, DependenceMethod::Empirical).unwrap();
        let ci = fit.ci(0.99, 0.05).unwrap();
        assert!(ci.contains(ci.estimate));
        let pt = fit.ci(0.99, 1.0 - 1e-15).unwrap();
        assert!(pt.width() < 1e-9 * ci.width());
        let direct = weissman_ci(&s, &fit.config, "a", 0.99, 0.05).unwrap();
        assert!((direct.lower - ci.lower).abs() < 1e-12 && (direct.upper - ci.upper).abs() < 1e-12);
    }
}
