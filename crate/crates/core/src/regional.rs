//! Multi-site observation schemes, the nonparametric covariance of sample
//! PWMs, regional shape estimation with variance-minimizing weights, and a
//! Wald test of equal shapes.

use serde::{Deserialize, Serialize};
use nalgebra::{DMatrix, DVector};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use statrs::function::gamma::gamma_li;

use crate::error::{Error, Result};
use crate::gev::GevParams;
use crate::quad::{integrate, QuadOptions};
use crate::moments::{
    empirical_cdf, fit_gev, location_scale_given_shape, sample_pwm_with, shape_gradient, Method, PwmEstimator,
    PwmVector, XiSolver,
};

/// Eigenvalues at or above this count as non-negative.
pub const PSD_EIGEN_TOL: f64 = -1e-10;
/// Condition numbers above this are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

/// Record of one site: `values[i]` is the observation in row `offset + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiteSeries {
    pub id: String,
    pub offset: usize,
    pub values: Vec<f64>,
}

impl SiteSeries {
    pub fn new(id: impl Into<String>, offset: usize, values: Vec<f64>) -> Self {
        Self { id: id.into(), offset, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `d` site records sharing a common final row `n`; site `j` covers rows
/// `a_j + 1 ..= n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationScheme {
    n: usize,
    sites: Vec<SiteSeries>,
}

impl ObservationScheme {
    pub fn new(sites: Vec<SiteSeries>) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InsufficientData("observation scheme has no sites".into()));
        }
        let n = sites.iter().map(|s| s.offset + s.len()).max().unwrap_or(0);
        for s in &sites {
            if s.offset + s.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "site {} ends at row {} but the scheme ends at row {n}",
                    s.id,
                    s.offset + s.len()
                )));
            }
            if s.len() < 2 {
                return Err(Error::InsufficientData(format!("site {} has fewer than 2 observations", s.id)));
            }
            if s.values.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidParameter(format!("site {} has non-finite observations", s.id)));
            }
        }
        if sites.iter().all(|s| s.offset > 0) {
            return Err(Error::InvalidParameter("at least one site must cover the full record".into()));
        }
        for (i, s) in sites.iter().enumerate() {
            if sites[..i].iter().any(|t| t.id == s.id) {
                return Err(Error::InvalidParameter(format!("duplicate site id {}", s.id)));
            }
        }
        Ok(Self { n, sites })
    }

    /// All sites observed over the same `n` rows.
    pub fn equal_length<I, S>(columns: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        Self::new(columns.into_iter().map(|(id, v)| SiteSeries::new(id, 0, v)).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.sites.len()
    }

    pub fn sites(&self) -> &[SiteSeries] {
        &self.sites
    }

    pub fn site_index(&self, id: &str) -> Option<usize> {
        self.sites.iter().position(|s| s.id == id)
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.sites.iter().map(SiteSeries::len).collect()
    }

    /// `r_j = n_j / n`.
    pub fn ratios(&self) -> Vec<f64> {
        self.sites.iter().map(|s| s.len() as f64 / self.n as f64).collect()
    }

    /// Paired observations of sites `j` and `l` over their common rows.
    pub fn overlap(&self, j: usize, l: usize) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = (&self.sites[j], &self.sites[l]);
        let start = a.offset.max(b.offset);
        let xs = a.values[start - a.offset..].to_vec();
        let ys = b.values[start - b.offset..].to_vec();
        (xs, ys)
    }
}

/// `Ẑ_{i,k}` rows (`n_j × K`) of one site, the plug-in influence terms of
/// the sample PWMs `beta_0 .. beta_{K-1}`.
pub fn zhat_vectors(series: &[f64], k_count: usize) -> Result<DMatrix<f64>> {
    if series.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "need at least 2 observations, got {}",
            series.len()
        )));
    }
    if k_count == 0 {
        return Err(Error::InvalidParameter("K must be at least 1".into()));
    }
    let n = series.len();
    let nf = n as f64;
    let ecdf = empirical_cdf(series);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| series[a].total_cmp(&series[b]));
    let sorted: Vec<f64> = order.iter().map(|&i| series[i]).collect();

    // the integral term uses the jumps of F^k over values strictly above x_i,
    // so a shift of the data shifts every Z by exactly that constant
    let mut z = DMatrix::zeros(n, k_count);
    for k in 0..k_count {
        let kp = k as i32;
        // suffix[m] = Σ over distinct values v starting at sorted position >= m of v (F(v)^k - F(v-)^k)
        let mut suffix = vec![0.0; n + 1];
        if k > 0 {
            let mut end = n;
            for m in (0..n).rev() {
                let group_start = m == 0 || sorted[m - 1] < sorted[m];
                suffix[m] = suffix[m + 1];
                if group_start {
                    let jump = (end as f64 / nf).powi(kp) - (m as f64 / nf).powi(kp);
                    suffix[m] += sorted[m] * jump;
                    end = m;
                }
            }
        }
        for i in 0..n {
            let above = sorted.partition_point(|&v| v <= series[i]);
            z[(i, k)] = series[i] * ecdf[i].powi(kp) + suffix[above];
        }
    }
    Ok(z)
}

/// Estimated limiting covariance of `sqrt(n) (beta_hat - beta)`, stacked
/// site-major (`K` PWMs per site).
#[derive(Debug, Clone)]
pub struct CovarianceBlocks {
    pub matrix: DMatrix<f64>,
    pub k_count: usize,
    pub psd: bool,
}

impl CovarianceBlocks {
    pub fn block(&self, j: usize, l: usize) -> DMatrix<f64> {
        let k = self.k_count;
        self.matrix.view((j * k, l * k), (k, k)).into_owned()
    }
}

/// True iff the smallest eigenvalue of the symmetric matrix is at least [`PSD_EIGEN_TOL`].
pub fn is_psd(m: &DMatrix<f64>) -> bool {
    m.clone().symmetric_eigen().eigenvalues.iter().all(|&e| e >= PSD_EIGEN_TOL)
}

fn sample_cross_cov(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let m = a.nrows();
    let ma = a.row_mean();
    let mb = b.row_mean();
    let mut out = DMatrix::zeros(a.ncols(), b.ncols());
    for i in 0..m {
        let da = a.row(i) - &ma;
        let db = b.row(i) - &mb;
        out += da.transpose() * db;
    }
    out / (m as f64 - 1.0)
}

/// Nonparametric estimate of the PWM covariance for a staggered scheme.
pub fn sigma_r_hat(scheme: &ObservationScheme, k_count: usize) -> Result<CovarianceBlocks> {
    let d = scheme.d();
    let ratios = scheme.ratios();
    let z: Vec<DMatrix<f64>> = scheme
        .sites()
        .iter()
        .map(|s| zhat_vectors(&s.values, k_count))
        .collect::<Result<_>>()?;
    let mut matrix = DMatrix::zeros(d * k_count, d * k_count);
    for j in 0..d {
        for l in j..d {
            let (sj, sl) = (&scheme.sites()[j], &scheme.sites()[l]);
            let start = sj.offset.max(sl.offset);
            let m = scheme.n() - start;
            if m < 2 {
                return Err(Error::Overlap { first: sj.id.clone(), second: sl.id.clone(), required: 2 });
            }
            let zj = z[j].rows(start - sj.offset, m).into_owned();
            let zl = z[l].rows(start - sl.offset, m).into_owned();
            let factor = ratios[j].min(ratios[l]) / (ratios[j] * ratios[l]);
            let block = sample_cross_cov(&zj, &zl) * factor;
            matrix.view_mut((j * k_count, l * k_count), (k_count, k_count)).copy_from(&block);
            if j != l {
                matrix
                    .view_mut((l * k_count, j * k_count), (k_count, k_count))
                    .copy_from(&block.transpose());
            }
        }
    }
    let psd = is_psd(&matrix);
    Ok(CovarianceBlocks { matrix, k_count, psd })
}

/// Limiting covariance of the PWM influence vector `(Z_0, .., Z_{K-1})` of a
/// single site whose law is the given GEV; requires `xi < 1/2`.
pub fn gev_pwm_covariance(params: &GevParams<f64>, k_count: usize) -> Result<DMatrix<f64>> {
    let xi = params.xi();
    if !(xi < 0.5) {
        return Err(Error::Precondition(format!("PWM covariance needs shape < 1/2, got {xi}")));
    }
    if xi.abs() < 1e-4 {
        // the incomplete-gamma form cancels near zero; the covariance is smooth in xi
        let at = |x: f64| GevParams::new(params.mu(), params.sigma(), x).and_then(|g| gev_pwm_covariance(&g, k_count));
        let (lo, hi) = (at(-1e-4)?, at(1e-4)?);
        let w = (xi + 1e-4) / 2e-4;
        return Ok(lo * (1.0 - w) + hi * w);
    }
    let (mu, sigma) = (params.mu(), params.sigma());
    let g1 = 1.0 - xi;
    let gamma_g1 = crate::special::gamma(g1);
    // Z_k at u = exp(-s)
    let z = |s: f64, out: &mut [f64]| {
        let q = mu + sigma / xi * (s.powf(-xi) - 1.0);
        for (k, o) in out.iter_mut().enumerate() {
            let uk = (-(k as f64) * s).exp();
            let tail = if k == 0 {
                0.0
            } else {
                let kf = k as f64;
                let ks = kf * s;
                let li = if ks <= 0.0 {
                    0.0
                } else if ks.is_finite() {
                    gamma_li(g1, ks)
                } else {
                    gamma_g1
                };
                mu * -(-ks).exp_m1() + sigma / xi * (kf.powf(xi) * li + (-ks).exp_m1())
            };
            *o = q * uk + tail;
        }
    };
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-10, max_intervals: 4000 };
    // integrate over t with s = e^t, du = e^(-s) s dt
    let moment = |f: &dyn Fn(&[f64]) -> f64| -> Result<f64> {
        let g = |t: f64| {
            let s = t.exp();
            let w = (-s).exp() * s;
            if w == 0.0 || !w.is_finite() {
                return 0.0;
            }
            let mut buf = [0.0; 8];
            z(s, &mut buf[..k_count]);
            f(&buf[..k_count]) * w
        };
        Ok(integrate(g, f64::NEG_INFINITY, 0.0, &opts)? + integrate(g, 0.0, f64::INFINITY, &opts)?)
    };
    if k_count == 0 || k_count > 8 {
        return Err(Error::InvalidParameter(format!("K must lie in 1..=8, got {k_count}")));
    }
    let means: Vec<f64> = (0..k_count).map(|k| moment(&|z: &[f64]| z[k])).collect::<Result<_>>()?;
    let mut cov = DMatrix::zeros(k_count, k_count);
    for a in 0..k_count {
        for b in a..k_count {
            let v = moment(&|z: &[f64]| (z[a] - means[a]) * (z[b] - means[b]))?;
            cov[(a, b)] = v;
            cov[(b, a)] = v;
        }
    }
    Ok(cov)
}

/// Local shapes, their estimated covariance, and the inputs behind it.
#[derive(Debug, Clone)]
pub struct TailCovariance {
    pub xi: Vec<f64>,
    /// Estimate of `lim Var[sqrt(n) (xi_hat - xi)]`.
    pub sigma: DMatrix<f64>,
    pub pwms: Vec<PwmVector<f64>>,
    pub sigma_r: CovarianceBlocks,
    /// Row `j` holds the gradient of `xi_j` with respect to site `j`'s PWMs.
    pub gradients: Vec<Vec<f64>>,
}

/// How local shapes are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightRule {
    /// Variance-minimizing weights from the estimated shape covariance.
    #[default]
    Optimal,
    /// Weights proportional to record lengths.
    RecordLength,
}

/// Source of the target's location and scale in a regional fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LocationRule {
    /// Local moment estimates, paired with the regional shape.
    #[default]
    Local,
    /// Location and scale re-solved from the local moments at the regional shape.
    AtRegionalShape,
}

/// Estimator of the PWM covariance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CovarianceKind {
    /// Empirical covariance of the influence terms for every block.
    #[default]
    Nonparametric,
    /// Diagonal blocks from the fitted local GEV laws, off-diagonal blocks empirical.
    Hybrid,
}

/// Point-estimation choices for regional moment fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RegionalOptions {
    pub pwm: PwmEstimator,
    pub solver: XiSolver,
    pub weights: WeightRule,
    pub location: LocationRule,
    pub covariance: CovarianceKind,
}

pub fn sigma_tail_hat(scheme: &ObservationScheme, method: Method) -> Result<TailCovariance> {
    sigma_tail_hat_with(scheme, method, &RegionalOptions::default())
}

/// Local shapes use the configured PWM estimator and solver; the covariance
/// always comes from the plug-in influence terms and the polynomial gradient.
pub fn sigma_tail_hat_with(scheme: &ObservationScheme, method: Method, opts: &RegionalOptions) -> Result<TailCovariance> {
    let k = method.pwm_count();
    let mut xi = Vec::with_capacity(scheme.d());
    let mut pwms = Vec::with_capacity(scheme.d());
    let mut gradients = Vec::with_capacity(scheme.d());
    for s in scheme.sites() {
        let site_err = |e: Error| Error::SiteFit { site: s.id.clone(), reason: e.to_string() };
        let pwm = sample_pwm_with(&s.values, k - 1, opts.pwm).map_err(site_err)?;
        let fit = fit_gev(method, &pwm, opts.solver).map_err(site_err)?;
        gradients.push(shape_gradient(method, &pwm).map_err(site_err)?);
        xi.push(fit.xi());
        pwms.push(pwm);
    }
    let mut sigma_r = sigma_r_hat(scheme, k)?;
    let d = scheme.d();
    if opts.covariance == CovarianceKind::Hybrid {
        let ratios = scheme.ratios();
        for (j, s) in scheme.sites().iter().enumerate() {
            let local = fit_gev(method, &pwms[j], opts.solver)?;
            // sites whose fitted law lacks the needed moments keep the empirical block
            match gev_pwm_covariance(&local, k) {
                Ok(block) => sigma_r.matrix.view_mut((j * k, j * k), (k, k)).copy_from(&(block / ratios[j])),
                Err(e) => log::debug!("site {}: empirical PWM covariance kept ({e})", s.id),
            }
        }
        sigma_r.psd = is_psd(&sigma_r.matrix);
    }
    let mut jac = DMatrix::zeros(d, d * k);
    for (j, g) in gradients.iter().enumerate() {
        for (i, &v) in g.iter().enumerate() {
            jac[(j, j * k + i)] = v;
        }
    }
    let sigma = &jac * &sigma_r.matrix * jac.transpose();
    Ok(TailCovariance { xi, sigma, pwms, sigma_r, gradients })
}

fn check_symmetric(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(Error::InvalidParameter(format!("{}x{} matrix is not square", m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-10 * scale {
                return Err(Error::InvalidParameter("covariance matrix is not symmetric".into()));
            }
        }
    }
    Ok(())
}

/// `(1' Σ^-1 1)^-1 Σ^-1 1`, the sum-to-one weights minimizing `w' Σ w`.
///
/// Returns `Ok(None)` when `Σ` is not positive definite or its condition
/// number exceeds [`MAX_CONDITION`].
pub fn optimal_weights(sigma: &DMatrix<f64>) -> Result<Option<Vec<f64>>> {
    check_symmetric(sigma)?;
    let eig = sigma.clone().symmetric_eigen();
    let min = eig.eigenvalues.min();
    let max = eig.eigenvalues.max();
    if !(min > 0.0) || max / min > MAX_CONDITION {
        return Ok(None);
    }
    let Some(chol) = sigma.clone().cholesky() else {
        return Ok(None);
    };
    let x = chol.solve(&DVector::from_element(sigma.nrows(), 1.0));
    let total = x.sum();
    if !(total.abs() > 0.0) || !total.is_finite() {
        return Ok(None);
    }
    Ok(Some(x.iter().map(|v| v / total).collect()))
}

/// Weights proportional to record lengths; optimal under spatial independence.
pub fn fallback_weights(scheme: &ObservationScheme) -> Vec<f64> {
    let total: usize = scheme.lengths().iter().sum();
    scheme.lengths().iter().map(|&n| n as f64 / total as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightBranch {
    Optimal,
    /// `Σ_tail` was invalid; record-length weights were used.
    Fallback,
}

#[derive(Debug, Clone)]
pub struct RegionalShape {
    pub xi: f64,
    pub weights: Vec<f64>,
    pub branch: WeightBranch,
    pub tail: TailCovariance,
}

pub fn regional_shape(scheme: &ObservationScheme, method: Method) -> Result<RegionalShape> {
    regional_shape_with(scheme, method, &RegionalOptions::default())
}

pub fn regional_shape_with(scheme: &ObservationScheme, method: Method, opts: &RegionalOptions) -> Result<RegionalShape> {
    let tail = sigma_tail_hat_with(scheme, method, opts)?;
    let optimal = match opts.weights {
        // an indefinite hybrid PWM covariance is treated as invalid outright
        WeightRule::Optimal if opts.covariance == CovarianceKind::Hybrid && !tail.sigma_r.psd => None,
        WeightRule::Optimal => optimal_weights(&tail.sigma)?,
        WeightRule::RecordLength => None,
    };
    let (weights, branch) = match optimal {
        Some(w) => (w, WeightBranch::Optimal),
        None => (fallback_weights(scheme), WeightBranch::Fallback),
    };
    let xi = weights.iter().zip(&tail.xi).map(|(w, x)| w * x).sum();
    Ok(RegionalShape { xi, weights, branch, tail })
}

/// GEV at one site with the regional shape and its delta-method covariance.
#[derive(Debug, Clone)]
pub struct RegionalGev {
    pub params: GevParams<f64>,
    /// Estimate of `lim Var[sqrt(n) (theta_hat - theta)]` for `(mu, sigma, xi)`,
    /// normalized by the scheme length `n`.
    pub covariance: DMatrix<f64>,
    pub shape: RegionalShape,
    pub target: usize,
}

/// Regional (T)L-moment fit at `target`: `(mu_hat, sigma_hat, w' xi_hat)`.
pub fn regional_gev(scheme: &ObservationScheme, target: &str, method: Method) -> Result<RegionalGev> {
    regional_gev_with(scheme, target, method, &RegionalOptions::default())
}

pub fn regional_gev_with(
    scheme: &ObservationScheme,
    target: &str,
    method: Method,
    opts: &RegionalOptions,
) -> Result<RegionalGev> {
    let t = scheme
        .site_index(target)
        .ok_or_else(|| Error::InvalidParameter(format!("target site {target} not in scheme")))?;
    let shape = regional_shape_with(scheme, method, opts)?;
    let pwm = &shape.tail.pwms[t];
    let site_err = |e: Error| Error::SiteFit { site: target.to_string(), reason: e.to_string() };
    let k = method.pwm_count();
    let d = scheme.d();
    let base = pwm.values().to_vec();

    // (mu, sigma) is linear in the target's PWMs at fixed shape, so its
    // Jacobian splits into that linear part plus the shape sensitivity
    let xi_used = match opts.location {
        LocationRule::Local => shape.tail.xi[t],
        LocationRule::AtRegionalShape => shape.xi,
    };
    let ls = |b: &[f64], xi: f64| location_scale_given_shape(method, &PwmVector::new(b.to_vec()), xi);
    let (mu, sigma) = ls(&base, xi_used).map_err(site_err)?;
    let params = GevParams::new(mu, sigma, shape.xi)?;

    let mut dxi = DVector::zeros(d * k);
    for (j, g) in shape.tail.gradients.iter().enumerate() {
        for (i, &v) in g.iter().enumerate() {
            dxi[j * k + i] = shape.weights[j] * v;
        }
    }
    let mut jac = DMatrix::zeros(3, d * k);
    for c in 0..d * k {
        jac[(2, c)] = dxi[c];
    }
    let h_xi = 1e-3;
    let at = |s: f64| ls(&base, xi_used + s * h_xi).map_err(site_err);
    let (p2, p1, m1, m2) = (at(2.0)?, at(1.0)?, at(-1.0)?, at(-2.0)?);
    let stencil = |f: fn(&(f64, f64)) -> f64| (-f(&p2) + 8.0 * f(&p1) - 8.0 * f(&m1) + f(&m2)) / (12.0 * h_xi);
    let dls_dxi = [stencil(|v| v.0), stencil(|v| v.1)];
    let shape_sens: DVector<f64> = match opts.location {
        LocationRule::Local => {
            let mut g = DVector::zeros(d * k);
            for (i, &v) in shape.tail.gradients[t].iter().enumerate() {
                g[t * k + i] = v;
            }
            g
        }
        LocationRule::AtRegionalShape => dxi.clone(),
    };
    for c in 0..d * k {
        jac[(0, c)] = dls_dxi[0] * shape_sens[c];
        jac[(1, c)] = dls_dxi[1] * shape_sens[c];
    }
    let scale = base.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    for i in 0..k {
        let h = 1e-3 * scale;
        let mut up = base.clone();
        let mut dn = base.clone();
        up[i] += h;
        dn[i] -= h;
        let (mu_u, s_u) = ls(&up, xi_used).map_err(site_err)?;
        let (mu_d, s_d) = ls(&dn, xi_used).map_err(site_err)?;
        jac[(0, t * k + i)] += (mu_u - mu_d) / (2.0 * h);
        jac[(1, t * k + i)] += (s_u - s_d) / (2.0 * h);
    }
    let covariance = &jac * &shape.tail.sigma_r.matrix * jac.transpose();
    Ok(RegionalGev { params, covariance, shape, target: t })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogeneityTest {
    pub statistic: f64,
    pub p_value: f64,
    pub df: usize,
}

/// Wald test of equal shapes using successive differences `xi_{j+1} - xi_j`.
pub fn homogeneity_test(scheme: &ObservationScheme, method: Method) -> Result<HomogeneityTest> {
    let d = scheme.d();
    if d < 2 {
        return Err(Error::InsufficientData("homogeneity test needs at least 2 sites".into()));
    }
    let tail = sigma_tail_hat(scheme, method)?;
    wald_equal_shapes(&tail.xi, &tail.sigma, scheme.n())
}

/// `n (C xi)' (C Σ C')^-1 (C xi)` against `chi^2_{d-1}`.
pub fn wald_equal_shapes(xi: &[f64], sigma: &DMatrix<f64>, n: usize) -> Result<HomogeneityTest> {
    let d = xi.len();
    if d < 2 {
        return Err(Error::InsufficientData("homogeneity test needs at least 2 sites".into()));
    }
    let mut c = DMatrix::zeros(d - 1, d);
    for i in 0..d - 1 {
        c[(i, i)] = -1.0;
        c[(i, i + 1)] = 1.0;
    }
    let y = &c * DVector::from_column_slice(xi);
    let v = &c * sigma * c.transpose();
    let singular = || Error::Singular {
        reason: "contrast covariance of the shape estimates is not positive definite".into(),
        hint: "drop duplicated or perfectly dependent sites".into(),
    };
    let eig = v.clone().symmetric_eigen();
    if !(eig.eigenvalues.min() > 0.0) || eig.eigenvalues.max() / eig.eigenvalues.min() > MAX_CONDITION {
        return Err(singular());
    }
    let chol = v.cholesky().ok_or_else(singular)?;
    let statistic = n as f64 * y.dot(&chol.solve(&y));
    let df = d - 1;
    let chi = ChiSquared::new(df as f64).map_err(|e| Error::Numeric(e.to_string()))?;
    let p_value = if statistic <= 0.0 { 1.0 } else { chi.sf(statistic) };
    Ok(HomogeneityTest { statistic, p_value, df })
}
