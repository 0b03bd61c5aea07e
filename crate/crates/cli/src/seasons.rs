use std::collections::BTreeMap;
use std::str::FromStr;

use floodfreq::{ObservationScheme, SiteSeries};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::ingest::MonthlyRecord;

const MONTHS: [&str; 12] = ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov", "dec"];

/// Winter season as an inclusive, possibly wrapping month range; summer is
/// the complement. The hydrological year begins with the first winter month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SeasonDef {
    pub winter_start: u32,
    pub winter_end: u32,
}

impl Default for SeasonDef {
    fn default() -> Self {
        Self { winter_start: 11, winter_end: 4 }
    }
}

impl SeasonDef {
    pub fn new(winter_start: u32, winter_end: u32) -> CliResult<Self> {
        let ok = |m: u32| (1..=12).contains(&m);
        if !ok(winter_start) || !ok(winter_end) {
            return Err(CliError::Input(format!("season months must lie in 1-12, got {winter_start}-{winter_end}")));
        }
        let def = Self { winter_start, winter_end };
        if def.winter_len() == 12 {
            return Err(CliError::Input("winter covers all twelve months; summer would be empty".into()));
        }
        Ok(def)
    }

    fn winter_len(&self) -> u32 {
        (self.winter_end + 12 - self.winter_start) % 12 + 1
    }

    pub fn is_winter(&self, month: u32) -> bool {
        (month + 12 - self.winter_start) % 12 < self.winter_len()
    }

    /// Hydrological year containing calendar `(year, month)`; it is labelled
    /// by the calendar year in which it ends.
    pub fn hydro_year(&self, year: i32, month: u32) -> i32 {
        if self.winter_start > 1 && month >= self.winter_start {
            year + 1
        } else {
            year
        }
    }
}

fn parse_month(s: &str) -> Option<u32> {
    let t = s.trim().to_ascii_lowercase();
    t.parse::<u32>()
        .ok()
        .or_else(|| MONTHS.iter().position(|m| t.starts_with(m)).map(|i| i as u32 + 1))
}

impl FromStr for SeasonDef {
    type Err = CliError;

    /// `"11-4"` or `"nov-apr"`: first and last winter month.
    fn from_str(s: &str) -> CliResult<Self> {
        let (a, b) = s
            .split_once('-')
            .ok_or_else(|| CliError::Input(format!("season definition {s:?} must look like 11-4 or nov-apr")))?;
        match (parse_month(a), parse_month(b)) {
            (Some(a), Some(b)) => SeasonDef::new(a, b),
            _ => Err(CliError::Input(format!("unknown month in season definition {s:?}"))),
        }
    }
}

impl TryFrom<String> for SeasonDef {
    type Error = CliError;
    fn try_from(s: String) -> CliResult<Self> {
        s.parse()
    }
}

impl From<SeasonDef> for String {
    fn from(d: SeasonDef) -> String {
        format!("{}-{}", d.winter_start, d.winter_end)
    }
}

/// How sites whose records end at different years are aligned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum AlignRule {
    /// End every record at the latest year complete at all sites.
    #[default]
    Truncate,
    /// End at the latest complete year anywhere; sites lacking it are dropped.
    Reject,
}

/// Winter, summer and annual maxima on a common layout.
#[derive(Debug, Clone)]
pub struct SeasonalSchemes {
    pub winter: ObservationScheme,
    pub summer: ObservationScheme,
    pub annual: ObservationScheme,
    /// Hydrological year of the final row.
    pub end_year: i32,
    /// Human-readable notes on dropped years and sites.
    pub dropped: Vec<String>,
}

impl SeasonalSchemes {
    /// Calendar label of each site's first retained hydrological year.
    pub fn first_year(&self, site: usize) -> i32 {
        let s = &self.annual.sites()[site];
        self.end_year - s.len() as i32 + 1
    }
}

pub fn seasonal_maxima(records: &[MonthlyRecord], def: SeasonDef, align: AlignRule) -> CliResult<SeasonalSchemes> {
    // site -> hydro year -> monthly flows
    let mut table: BTreeMap<&str, BTreeMap<i32, [Option<f64>; 12]>> = BTreeMap::new();
    for r in records {
        let slot = table.entry(r.site_id.as_str()).or_default().entry(def.hydro_year(r.year, r.month)).or_default();
        slot[(r.month - 1) as usize] = Some(r.flow);
    }
    let mut dropped = Vec::new();
    let mut complete: BTreeMap<&str, BTreeMap<i32, (f64, f64)>> = BTreeMap::new();
    for (site, years) in &table {
        let mut ok = BTreeMap::new();
        for (&y, months) in years {
            let missing = months.iter().filter(|m| m.is_none()).count();
            if missing > 0 {
                dropped.push(format!("site {site}, hydrological year {y}: {missing} month(s) missing"));
                continue;
            }
            let (mut w, mut s) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
            for (i, v) in months.iter().enumerate() {
                let v = v.unwrap_or(f64::NAN);
                if def.is_winter(i as u32 + 1) {
                    w = w.max(v);
                } else {
                    s = s.max(v);
                }
            }
            ok.insert(y, (w, s));
        }
        if ok.is_empty() {
            dropped.push(format!("site {site}: no complete hydrological year"));
        } else {
            complete.insert(site, ok);
        }
    }
    if complete.is_empty() {
        return Err(CliError::Input("no complete site-year in the input".into()));
    }

    let end_year = match align {
        AlignRule::Truncate => {
            let mut common: Option<Vec<i32>> = None;
            for years in complete.values() {
                let ys: Vec<i32> = years.keys().copied().collect();
                common = Some(match common {
                    None => ys,
                    Some(c) => c.into_iter().filter(|y| years.contains_key(y)).collect(),
                });
            }
            common
                .and_then(|c| c.last().copied())
                .ok_or_else(|| CliError::Input("sites share no complete hydrological year".into()))?
        }
        AlignRule::Reject => complete.values().filter_map(|y| y.keys().last().copied()).max().unwrap_or(0),
    };

    let mut runs = Vec::new();
    for (site, years) in &complete {
        let mut vals = Vec::new();
        let mut y = end_year;
        while let Some(&v) = years.get(&y) {
            vals.push(v);
            y -= 1;
        }
        vals.reverse();
        let later = years.range(end_year + 1..).count();
        if later > 0 {
            dropped.push(format!("site {site}: {later} year(s) after {end_year} truncated"));
        }
        let earlier = years.range(..=y).count();
        if earlier > 0 {
            dropped.push(format!("site {site}: {earlier} year(s) before the gap at {y} dropped"));
        }
        if vals.len() < 2 {
            dropped.push(format!("site {site}: fewer than 2 consecutive complete years ending {end_year}; site dropped"));
            continue;
        }
        runs.push((site.to_string(), vals));
    }
    if !dropped.is_empty() {
        warn!("{} aggregation note(s); rerun with RUST_LOG=info to list them", dropped.len());
        for note in &dropped {
            info!("{note}");
        }
    }
    if runs.is_empty() {
        return Err(CliError::Input(format!("no site has at least 2 complete years ending {end_year}")));
    }
    let n = runs.iter().map(|(_, v)| v.len()).max().unwrap_or(0);
    let build = |f: &dyn Fn(&(f64, f64)) -> f64| -> CliResult<ObservationScheme> {
        let sites = runs
            .iter()
            .map(|(id, v)| SiteSeries::new(id.clone(), n - v.len(), v.iter().map(f).collect()))
            .collect();
        Ok(ObservationScheme::new(sites)?)
    };
    Ok(SeasonalSchemes {
        winter: build(&|p| p.0)?,
        summer: build(&|p| p.1)?,
        annual: build(&|p| p.0.max(p.1))?,
        end_year,
        dropped,
    })
}

/// Keeps only the listed sites, in the given order.
pub fn select_sites(scheme: &ObservationScheme, ids: &[String]) -> CliResult<ObservationScheme> {
    if ids.is_empty() {
        return Ok(scheme.clone());
    }
    let mut sites = Vec::with_capacity(ids.len());
    for id in ids {
        let j = scheme
            .site_index(id)
            .ok_or_else(|| CliError::Input(format!("site {id} not found in the data")))?;
        sites.push(scheme.sites()[j].clone());
    }
    // re-base so that the longest selected record starts at row 1
    let n = sites.iter().map(|s| s.len()).max().unwrap_or(0);
    for s in &mut sites {
        s.offset = n - s.len();
    }
    Ok(ObservationScheme::new(sites)?)
}
