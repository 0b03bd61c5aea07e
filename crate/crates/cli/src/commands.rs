use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use floodfreq::simlab::{run_scenario, Estimator, ScenarioConfig, ScenarioReport};
use floodfreq::tail::seasonal_weissman_from_fits;
use floodfreq::{
    fit_regional_tail, fit_seasonal_regional_with, homogeneity_test, regional_gev_quantile_ci, regional_gev_with,
    twocomp_quantile_ci, DependenceMethod, HomogeneityTest, Interval, Method, ObservationScheme, RegionalGev,
    RegionalOptions, RegionalTail, SeasonalRegionalFit, WeightBranch,
};
use log::warn;
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::ingest::ingest_monthly;
use crate::returns::{return_level_curve, ReturnLevelCurve, DEFAULT_PERIODS};
use crate::seasons::{seasonal_maxima, select_sites, AlignRule, SeasonDef, SeasonalSchemes};

/// Shape-homogeneity p-values below this fail `--enforce-homogeneity`.
pub const HOMOGENEITY_LEVEL: f64 = 0.05;

/// Options read from a `--config` TOML file; command-line flags win.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    pub season: Option<SeasonDef>,
    pub method: Option<String>,
    pub k: Option<Vec<usize>>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    pub target_site: Option<String>,
    pub sites: Option<Vec<String>>,
    pub align: Option<AlignRule>,
    pub dependence: Option<DependenceMethod>,
}

impl Settings {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }
}

/// Fully resolved inputs of an estimation command.
#[derive(Debug, Clone)]
pub struct EstimateRequest {
    pub data: PathBuf,
    pub sites: Vec<String>,
    pub target: Option<String>,
    pub method: Estimator,
    pub p: f64,
    pub alpha: f64,
    pub season: SeasonDef,
    pub align: AlignRule,
    pub k: Option<Vec<usize>>,
    pub dependence: DependenceMethod,
    pub enforce_homogeneity: bool,
}

pub fn parse_method(s: &str) -> CliResult<Estimator> {
    s.parse::<Estimator>().map_err(|_| CliError::Input(format!("unknown method {s:?}; use L, TL, W, sL, sTL or sW")))
}

/// Seasonal and annual schemes restricted to the requested sites.
pub fn load_schemes(req: &EstimateRequest) -> CliResult<SeasonalSchemes> {
    let records = ingest_monthly(&req.data)?;
    if records.is_empty() {
        return Err(CliError::Input(format!("{}: no records", req.data.display())));
    }
    let mut s = seasonal_maxima(&records, req.season, req.align)?;
    if !req.sites.is_empty() {
        s.winter = select_sites(&s.winter, &req.sites)?;
        s.summer = select_sites(&s.summer, &req.sites)?;
        s.annual = select_sites(&s.annual, &req.sites)?;
    }
    Ok(s)
}

fn target_id(req: &EstimateRequest, scheme: &ObservationScheme) -> String {
    req.target.clone().unwrap_or_else(|| scheme.sites()[0].id.clone())
}

/// A fitted estimator that can be evaluated at any probability.
pub enum Fitted {
    Annual { fit: RegionalGev, scheme: ObservationScheme },
    Seasonal(SeasonalRegionalFit),
    Tail(RegionalTail),
    SeasonalTail { winter: RegionalTail, summer: RegionalTail },
}

impl Fitted {
    /// Point estimate and, where asymptotic theory provides one, an interval.
    pub fn quantile(&self, p: f64, alpha: f64) -> CliResult<(f64, Option<Interval>)> {
        Ok(match self {
            Fitted::Annual { fit, scheme } => {
                let ci = regional_gev_quantile_ci(fit, scheme, p, alpha)?;
                (ci.estimate, Some(ci))
            }
            Fitted::Seasonal(f) => {
                let ci = twocomp_quantile_ci(&f.fit, p, alpha)?;
                (ci.estimate, Some(ci))
            }
            Fitted::Tail(t) => {
                let ci = t.ci(p, alpha)?;
                (ci.estimate, Some(ci))
            }
            Fitted::SeasonalTail { winter, summer } => (seasonal_weissman_from_fits(winter, summer, p)?, None),
        })
    }
}

/// Summary of one fitted component (annual, winter or summer).
#[derive(Debug, Clone)]
pub struct Component {
    pub label: &'static str,
    /// Regional GEV shape or regional extreme value index.
    pub shape: f64,
    pub weights: Vec<(String, f64)>,
    pub k: Option<Vec<usize>>,
    pub fallback: bool,
    pub homogeneity: Option<HomogeneityTest>,
}

/// Output of an estimation command.
#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub method: Estimator,
    pub target: String,
    pub p: f64,
    pub alpha: f64,
    pub estimate: f64,
    pub interval: Option<Interval>,
    pub components: Vec<Component>,
}

fn moment_method(e: Estimator) -> Method {
    match e {
        Estimator::L | Estimator::SL => Method::L,
        _ => Method::TL,
    }
}

fn homogeneity(scheme: &ObservationScheme, method: Method) -> Option<HomogeneityTest> {
    if scheme.d() < 2 {
        return None;
    }
    match homogeneity_test(scheme, method) {
        Ok(h) => Some(h),
        Err(e) => {
            warn!("homogeneity test unavailable: {e}");
            None
        }
    }
}

fn ids(scheme: &ObservationScheme, w: &[f64]) -> Vec<(String, f64)> {
    scheme.sites().iter().zip(w).map(|(s, &w)| (s.id.clone(), w)).collect()
}

fn gev_component(label: &'static str, fit: &RegionalGev, scheme: &ObservationScheme, method: Method) -> Component {
    Component {
        label,
        shape: fit.params.xi(),
        weights: ids(scheme, &fit.shape.weights),
        k: None,
        fallback: fit.shape.branch == WeightBranch::Fallback,
        homogeneity: homogeneity(scheme, method),
    }
}

fn tail_component(label: &'static str, fit: &RegionalTail, scheme: &ObservationScheme) -> Component {
    Component {
        label,
        shape: fit.gamma,
        weights: ids(scheme, &fit.config.weights),
        k: Some(fit.config.k.clone()),
        fallback: fit.branch == WeightBranch::Fallback,
        // the moment-based test screens the common-shape assumption for tail methods too
        homogeneity: homogeneity(scheme, Method::TL),
    }
}

/// Fits the requested estimator at the target site.
pub fn fit(req: &EstimateRequest, s: &SeasonalSchemes) -> CliResult<(Fitted, Vec<Component>, String)> {
    let target = target_id(req, &s.annual);
    let opts = RegionalOptions::default();
    let method = moment_method(req.method);
    Ok(match req.method {
        Estimator::L | Estimator::TL => {
            let fit = regional_gev_with(&s.annual, &target, method, &opts)?;
            let comp = gev_component("annual", &fit, &s.annual, method);
            (Fitted::Annual { fit, scheme: s.annual.clone() }, vec![comp], target)
        }
        Estimator::SL | Estimator::STL => {
            let fit = fit_seasonal_regional_with(&s.winter, &s.summer, &target, method, &opts)?;
            let comps = vec![
                gev_component("winter", &fit.winter, &s.winter, method),
                gev_component("summer", &fit.summer, &s.summer, method),
            ];
            (Fitted::Seasonal(fit), comps, target)
        }
        Estimator::W => {
            let fit = fit_regional_tail(&s.annual, &target, req.k.clone(), req.dependence)?;
            let comp = tail_component("annual", &fit, &s.annual);
            (Fitted::Tail(fit), vec![comp], target)
        }
        Estimator::SW => {
            warn!("seasonal Weissman estimator is not recommended; no interval is available");
            let winter = fit_regional_tail(&s.winter, &target, req.k.clone(), req.dependence)?;
            let summer = fit_regional_tail(&s.summer, &target, req.k.clone(), req.dependence)?;
            let comps = vec![tail_component("winter", &winter, &s.winter), tail_component("summer", &summer, &s.summer)];
            (Fitted::SeasonalTail { winter, summer }, comps, target)
        }
    })
}

fn check_homogeneity(req: &EstimateRequest, comps: &[Component]) -> CliResult<()> {
    for c in comps {
        if let Some(h) = &c.homogeneity {
            if h.p_value < HOMOGENEITY_LEVEL {
                let msg = format!("{} shapes differ across sites (Wald p-value {:.4})", c.label, h.p_value);
                if req.enforce_homogeneity {
                    return Err(CliError::Heterogeneous(msg));
                }
                warn!("{msg}; continuing with the regional estimate");
            }
        }
    }
    Ok(())
}

pub fn estimate(req: &EstimateRequest) -> CliResult<EstimateReport> {
    let s = load_schemes(req)?;
    estimate_from(req, &s)
}

pub fn estimate_from(req: &EstimateRequest, s: &SeasonalSchemes) -> CliResult<EstimateReport> {
    let (fitted, components, target) = fit(req, s)?;
    check_homogeneity(req, &components)?;
    let (estimate, interval) = fitted.quantile(req.p, req.alpha)?;
    Ok(EstimateReport { method: req.method, target, p: req.p, alpha: req.alpha, estimate, interval, components })
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

impl EstimateReport {
    /// Headline `q_p (method) at site = estimate [lower, upper]`.
    pub fn headline(&self) -> String {
        let value = match &self.interval {
            Some(ci) => ci.to_string(),
            None => format!("{:.1}", self.estimate),
        };
        format!("q_{} ({}) at {} = {}", self.p, self.method, self.target, value)
    }

    pub fn to_table(&self) -> String {
        let mut out = self.headline();
        out.push('\n');
        if self.interval.is_some() {
            let _ = writeln!(out, "interval level: {:.0}%", 100.0 * (1.0 - self.alpha));
        }
        for c in &self.components {
            let _ = writeln!(out, "\n[{}] regional shape {:.4}{}", c.label, c.shape, if c.fallback { " (record-length weights)" } else { "" });
            if let Some(h) = &c.homogeneity {
                let _ = writeln!(out, "  homogeneity: Wald {:.3} on {} df, p-value {:.4}", h.statistic, h.df, h.p_value);
            }
            let _ = writeln!(out, "  {:<16} {:>10}{}", "site", "weight", if c.k.is_some() { "          k" } else { "" });
            for (j, (id, w)) in c.weights.iter().enumerate() {
                let k = c.k.as_ref().map(|k| format!(" {:>10}", k[j])).unwrap_or_default();
                let _ = writeln!(out, "  {id:<16} {w:>10.4}{k}");
            }
        }
        out
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> CliResult<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record([
            "method", "target", "p", "estimate", "lower", "upper", "component", "shape", "sites", "weights", "k",
            "fallback", "homogeneity_p",
        ])?;
        let (lo, hi) = self.interval.map(|c| (c.lower.to_string(), c.upper.to_string())).unwrap_or_default();
        for c in &self.components {
            wtr.write_record([
                self.method.name().to_string(),
                self.target.clone(),
                self.p.to_string(),
                self.estimate.to_string(),
                lo.clone(),
                hi.clone(),
                c.label.to_string(),
                c.shape.to_string(),
                join(c.weights.iter().map(|w| w.0.clone())),
                join(c.weights.iter().map(|w| w.1)),
                c.k.as_ref().map(|k| join(k.iter())).unwrap_or_default(),
                c.fallback.to_string(),
                c.homogeneity.map(|h| h.p_value.to_string()).unwrap_or_default(),
            ])?;
        }
        wtr.flush()?;
        Ok(())
    }
}

pub fn return_levels(req: &EstimateRequest, periods: &[f64]) -> CliResult<ReturnLevelCurve> {
    let s = load_schemes(req)?;
    let (fitted, comps, target) = fit(req, &s)?;
    check_homogeneity(req, &comps)?;
    let t = s.annual.site_index(&target).unwrap_or(0);
    let periods = if periods.is_empty() { &DEFAULT_PERIODS[..] } else { periods };
    return_level_curve(
        req.method.name(),
        |p| {
            let (q, ci) = fitted.quantile(p, req.alpha)?;
            Ok((q, ci.map(|c| (c.lower, c.upper))))
        },
        periods,
        &s.annual.sites()[t].values,
    )
}

/// Per-site Hill indices and the combined regional index.
pub fn regional_tail_table(req: &EstimateRequest, x: Option<f64>) -> CliResult<String> {
    let s = load_schemes(req)?;
    let target = target_id(req, &s.annual);
    let fit = fit_regional_tail(&s.annual, &target, req.k.clone(), req.dependence)?;
    let comp = tail_component("annual", &fit, &s.annual);
    check_homogeneity(req, std::slice::from_ref(&comp))?;
    let mut out = format!("regional extreme value index {:.4} (target {target}, threshold {:.1})\n", fit.gamma, fit.threshold);
    if comp.fallback {
        out.push_str("dependence-based weights invalid; record-length weights used\n");
    }
    let _ = writeln!(out, "  {:<16} {:>10} {:>10} {:>6}", "site", "hill", "weight", "k");
    for (j, site) in s.annual.sites().iter().enumerate() {
        let _ = writeln!(
            out,
            "  {:<16} {:>10.4} {:>10.4} {:>6}",
            site.id, fit.local_gamma[j], fit.config.weights[j], fit.config.k[j]
        );
    }
    if let Some(h) = comp.homogeneity {
        let _ = writeln!(out, "homogeneity: Wald {:.3} on {} df, p-value {:.4}", h.statistic, h.df, h.p_value);
    }
    if let Some(x) = x {
        let f = fit.tail_prob(x)?;
        let _ = writeln!(out, "F({x}) at {target} = {f:.6}; exceedance {:.3e}; return period {:.1} years", 1.0 - f, 1.0 / (1.0 - f));
    }
    Ok(out)
}

/// Runs a Monte Carlo scenario from a TOML description.
pub fn simulate(config: &Path, seed: Option<u64>, replications: Option<usize>) -> CliResult<ScenarioReport> {
    let text = std::fs::read_to_string(config).map_err(|e| CliError::Input(format!("{}: {e}", config.display())))?;
    let mut cfg: ScenarioConfig =
        toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", config.display())))?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(r) = replications {
        cfg.replications = r;
    }
    cfg.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(run_scenario(&cfg)?)
}

pub fn write_scenario_csv<W: std::io::Write>(report: &ScenarioReport, w: W) -> CliResult<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for s in &report.summaries {
        wtr.serialize(s)?;
    }
    wtr.flush()?;
    Ok(())
}
