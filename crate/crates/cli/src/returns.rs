use serde::Serialize;

use crate::error::{CliError, CliResult};

/// One evaluated return level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReturnLevel {
    pub period: f64,
    pub level: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// Return levels on a grid of periods plus the empirical plotting points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReturnLevelCurve {
    pub method: String,
    pub points: Vec<ReturnLevel>,
    /// `(T_i, X_(i))` with `T_i = 1 / (1 - i / (n + 1))`.
    pub empirical_points: Vec<(f64, f64)>,
}

pub const DEFAULT_PERIODS: [f64; 9] = [2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0, 500.0, 1000.0];

/// Weibull plotting positions of a sample as return periods.
pub fn empirical_points(sample: &[f64]) -> Vec<(f64, f64)> {
    let mut x = sample.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    x.into_iter()
        .enumerate()
        .map(|(i, v)| (1.0 / (1.0 - (i as f64 + 1.0) / (n + 1.0)), v))
        .collect()
}

/// Evaluates `level(p)` at `p = 1 - 1/T` for each period.
///
/// `level` returns the point estimate and, when available, an interval.
pub fn return_level_curve<F>(method: &str, level: F, periods: &[f64], sample: &[f64]) -> CliResult<ReturnLevelCurve>
where
    F: Fn(f64) -> CliResult<(f64, Option<(f64, f64)>)>,
{
    let mut periods = periods.to_vec();
    if let Some(t) = periods.iter().find(|t| !(**t > 1.0 && t.is_finite())) {
        return Err(CliError::Input(format!("return periods must exceed 1 year, got {t}")));
    }
    periods.sort_by(f64::total_cmp);
    periods.dedup();
    let mut points = Vec::with_capacity(periods.len());
    for t in periods {
        let (level, ci) = level(1.0 - 1.0 / t)?;
        points.push(ReturnLevel { period: t, level, lower: ci.map(|c| c.0), upper: ci.map(|c| c.1) });
    }
    if points.windows(2).any(|w| w[1].level < w[0].level) {
        return Err(CliError::Numeric(format!("return levels of {method} are not monotone in the period")));
    }
    Ok(ReturnLevelCurve { method: method.to_string(), points, empirical_points: empirical_points(sample) })
}

impl ReturnLevelCurve {
    pub fn to_table(&self) -> String {
        use std::fmt::Write;
        let mut out = format!("return levels ({})\n{:>10} {:>12} {:>12} {:>12}\n", self.method, "T", "level", "lower", "upper");
        let opt = |v: Option<f64>| v.map(|x| format!("{x:.1}")).unwrap_or_else(|| "-".into());
        for p in &self.points {
            let _ = writeln!(out, "{:>10} {:>12.1} {:>12} {:>12}", p.period, p.level, opt(p.lower), opt(p.upper));
        }
        out
    }

    /// CSV with a `kind` column separating fitted and empirical rows.
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> CliResult<()> {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["kind", "method", "period", "level", "lower", "upper"])?;
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        for p in &self.points {
            wtr.write_record(["fitted", &self.method, &p.period.to_string(), &p.level.to_string(), &opt(p.lower), &opt(p.upper)])?;
        }
        for (t, x) in &self.empirical_points {
            wtr.write_record(["empirical", "", &t.to_string(), &x.to_string(), "", ""])?;
        }
        wtr.flush()?;
        Ok(())
    }
}
