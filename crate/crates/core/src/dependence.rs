//! Nonparametric estimators of the stable tail dependence between sites:
//! the empirical tail copula and the rank-based CFG Pickands estimator.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::EULER_GAMMA;

/// Number of points in a tabulated Pickands function.
pub const PICKANDS_GRID: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DependenceMethod {
    #[default]
    Empirical,
    PickandsCfg,
}

impl FromStr for DependenceMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "empirical" => Ok(Self::Empirical),
            "pickands" | "pickands_cfg" | "cfg" => Ok(Self::PickandsCfg),
            other => Err(Error::InvalidParameter(format!("unknown dependence method {other}"))),
        }
    }
}

/// Ranks `1..=n` (ties broken by position).
pub fn ranks(x: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0; x.len()];
    for (pos, &i) in order.iter().enumerate() {
        r[i] = pos + 1;
    }
    r
}

/// Pseudo-observations `rank / (n + 1)`.
pub fn pseudo_observations(x: &[f64]) -> Vec<f64> {
    let n1 = x.len() as f64 + 1.0;
    ranks(x).into_iter().map(|r| r as f64 / n1).collect()
}

/// Empirical tail copula of one pair of series.
#[derive(Debug, Clone)]
pub struct EmpiricalTail {
    r: Vec<usize>,
    s: Vec<usize>,
    k: usize,
}

impl EmpiricalTail {
    pub fn new(x: &[f64], y: &[f64], k: usize) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidParameter("paired series differ in length".into()));
        }
        if x.len() < 2 {
            return Err(Error::InsufficientData(format!("need at least 2 paired observations, got {}", x.len())));
        }
        if k == 0 || k > x.len() {
            return Err(Error::InvalidParameter(format!("k must lie in 1..={}, got {k}", x.len())));
        }
        Ok(Self { r: ranks(x), s: ranks(y), k })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `(1/k) #{i : R_i > n - k x, S_i > n - k y}`.
    pub fn lambda(&self, x: f64, y: f64) -> f64 {
        if !(x > 0.0 && y > 0.0) {
            return 0.0;
        }
        let n = self.r.len() as f64;
        let k = self.k as f64;
        let (tx, ty) = (n - k * x, n - k * y);
        let count = self.r.iter().zip(&self.s).filter(|(&r, &s)| r as f64 > tx && s as f64 > ty).count();
        count as f64 / k
    }
}

/// Endpoint-corrected CFG estimate of a Pickands function on a uniform grid.
#[derive(Debug, Clone)]
pub struct PickandsTable {
    values: Vec<f64>,
}

impl PickandsTable {
    /// Estimate from paired observations over `grid` equally spaced points of `[0, 1]`.
    pub fn cfg(x: &[f64], y: &[f64], grid: usize) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidParameter("paired series differ in length".into()));
        }
        if x.len() < 10 {
            return Err(Error::InsufficientData(format!(
                "CFG estimator needs at least 10 paired observations, got {}",
                x.len()
            )));
        }
        if grid < 2 {
            return Err(Error::InvalidParameter("Pickands grid needs at least 2 points".into()));
        }
        let xi: Vec<f64> = pseudo_observations(x).iter().map(|u| -u.ln()).collect();
        let eta: Vec<f64> = pseudo_observations(y).iter().map(|v| -v.ln()).collect();
        let n = xi.len() as f64;
        let log_a = |t: f64| -> f64 {
            let s: f64 = xi
                .iter()
                .zip(&eta)
                .map(|(&a, &b)| {
                    let m = if t <= 0.0 {
                        a
                    } else if t >= 1.0 {
                        b
                    } else {
                        (a / (1.0 - t)).min(b / t)
                    };
                    m.ln()
                })
                .sum();
            -EULER_GAMMA - s / n
        };
        let (a0, a1) = (log_a(0.0), log_a(1.0));
        let values = (0..grid)
            .map(|i| {
                let t = i as f64 / (grid - 1) as f64;
                let corrected = (log_a(t) - (1.0 - t) * a0 - t * a1).exp();
                corrected.clamp(t.max(1.0 - t), 1.0)
            })
            .collect();
        Ok(Self { values })
    }

    /// Table of an exactly known Pickands function.
    pub fn from_fn(f: impl Fn(f64) -> f64, grid: usize) -> Self {
        let values = (0..grid.max(2))
            .map(|i| {
                let t = i as f64 / (grid.max(2) - 1) as f64;
                f(t).clamp(t.max(1.0 - t), 1.0)
            })
            .collect();
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Linear interpolation on the grid.
    pub fn eval(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let m = self.values.len() - 1;
        let pos = t * m as f64;
        let i = (pos.floor() as usize).min(m - 1);
        let frac = pos - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// `Lambda(x, y) = (x + y) (1 - A(y / (x + y)))`.
    pub fn lambda(&self, x: f64, y: f64) -> f64 {
        if !(x > 0.0 && y > 0.0) {
            return 0.0;
        }
        let s = x + y;
        (s * (1.0 - self.eval(y / s))).clamp(0.0, x.min(y))
    }
}

#[derive(Debug, Clone)]
pub enum PairDependence {
    Empirical(EmpiricalTail),
    Pickands(PickandsTable),
}

impl PairDependence {
    pub fn lambda(&self, x: f64, y: f64) -> f64 {
        match self {
            Self::Empirical(e) => e.lambda(x, y),
            Self::Pickands(p) => p.lambda(x, y),
        }
    }
}

/// Pairwise tail dependence of `d` sites; the diagonal is comonotone.
#[derive(Debug, Clone)]
pub struct TailDependence {
    d: usize,
    pairs: Vec<Option<PairDependence>>,
}

impl TailDependence {
    /// No dependence between distinct sites.
    pub fn independent(d: usize) -> Self {
        Self { d, pairs: vec![None; d * d] }
    }

    pub fn new(d: usize) -> Self {
        Self::independent(d)
    }

    /// Store the dependence of sites `l < m`, estimated with site `l`'s
    /// series as the first coordinate.
    pub fn set(&mut self, l: usize, m: usize, dep: PairDependence) -> Result<()> {
        if l >= m || m >= self.d {
            return Err(Error::InvalidParameter(format!("pair ({l}, {m}) must satisfy l < m < {}", self.d)));
        }
        self.pairs[l * self.d + m] = Some(dep);
        Ok(())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `Lambda_{l,m}(x, y)`; `(m, l)` evaluates `(y, x)` on the stored pair.
    pub fn lambda(&self, l: usize, m: usize, x: f64, y: f64) -> f64 {
        if l == m {
            return x.max(0.0).min(y.max(0.0));
        }
        let (a, b, x, y) = if l < m { (l, m, x, y) } else { (m, l, y, x) };
        match &self.pairs[a * self.d + b] {
            Some(dep) => dep.lambda(x, y),
            None => 0.0,
        }
    }
}
