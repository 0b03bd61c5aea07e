use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use log::warn;
use serde::Deserialize;

use crate::error::{CliError, CliResult};

/// One monthly maximum flow.
#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct MonthlyRecord {
    pub site_id: String,
    pub year: i32,
    pub month: u32,
    pub flow: f64,
}

pub fn ingest_monthly(path: &Path) -> CliResult<Vec<MonthlyRecord>> {
    let file = std::fs::File::open(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    read_monthly(file)
}

/// Parses `site_id,year,month,flow` CSV. Every offending line is reported.
pub fn read_monthly<R: Read>(reader: R) -> CliResult<Vec<MonthlyRecord>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = match rdr.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(CliError::Input(format!("unreadable header: {e}"))),
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        warn!("input file is empty");
        return Ok(Vec::new());
    }
    let expected = ["site_id", "year", "month", "flow"];
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(CliError::Input(format!(
            "line 1: expected header site_id,year,month,flow, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut records = Vec::new();
    let mut problems = Vec::new();
    let mut seen = HashSet::new();
    for row in rdr.records() {
        let raw = match row {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map(|p| p.line()).unwrap_or(0);
                problems.push(format!("line {line}: {}", e.kind_message()));
                continue;
            }
        };
        let line = raw.position().map(|p| p.line()).unwrap_or(0);
        let rec: MonthlyRecord = match raw.deserialize(Some(&headers)) {
            Ok(r) => r,
            Err(e) => {
                problems.push(format!("line {line}: {}", e.kind_message()));
                continue;
            }
        };
        if !(1..=12).contains(&rec.month) {
            problems.push(format!("line {line}: month {} outside 1-12", rec.month));
        } else if !(rec.flow > 0.0 && rec.flow.is_finite()) {
            problems.push(format!("line {line}: flow must be positive, got {}", rec.flow));
        } else if !seen.insert((rec.site_id.clone(), rec.year, rec.month)) {
            problems.push(format!("line {line}: duplicate record for site {} {}-{:02}", rec.site_id, rec.year, rec.month));
        } else {
            records.push(rec);
        }
    }
    if !problems.is_empty() {
        return Err(CliError::Input(format!("malformed input:\n  {}", problems.join("\n  "))));
    }
    if records.is_empty() {
        warn!("input file has a header but no records");
    }
    Ok(records)
}

trait KindMessage {
    fn kind_message(&self) -> String;
}

impl KindMessage for csv::Error {
    fn kind_message(&self) -> String {
        match self.kind() {
            csv::ErrorKind::Deserialize { err, .. } => err.to_string(),
            csv::ErrorKind::UnequalLengths { len, expected_len, .. } => {
                format!("expected {expected_len} fields, found {len}")
            }
            _ => self.to_string(),
        }
    }
}
