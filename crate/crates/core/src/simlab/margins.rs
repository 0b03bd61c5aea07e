//! Marginal laws used in simulation: monthly-block maxima of scaled `|t|`
//! variables, whose GEV limit has shape `xi`.

use serde::{Deserialize, Serialize};
use statrs::distribution::{Continuous, ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::gev::GevParams;

/// `F(x) = [2 T_nu(a_b (1 + xi (x - mu) / sigma)) - 1]^b` with `nu = 1/xi`
/// and `a_b = T_nu^-1(1 - 1/(2b))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockMaxMargin {
    pub mu: f64,
    pub sigma: f64,
    pub xi: f64,
    pub b: u32,
}

fn student(nu: f64) -> Result<StudentsT> {
    StudentsT::new(0.0, 1.0, nu).map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// `t` with `P(T > t) = eps`, polished by Newton steps on the survival function.
fn upper_quantile(dist: &StudentsT, eps: f64) -> f64 {
    let mut t = -dist.inverse_cdf(eps);
    for _ in 0..8 {
        let g = dist.sf(t) - eps;
        let dens = dist.pdf(t);
        if !(dens > 0.0) {
            break;
        }
        let step = g / dens;
        t += step;
        if step.abs() <= 1e-15 * t.abs().max(1.0) {
            break;
        }
    }
    t
}

impl BlockMaxMargin {
    pub fn new(mu: f64, sigma: f64, xi: f64, b: u32) -> Result<Self> {
        let m = Self { mu, sigma, xi, b };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b < 2 {
            // a_1 = T^-1(1/2) = 0 leaves the standardization undefined
            return Err(Error::InvalidParameter(format!("block size must be at least 2, got {}", self.b)));
        }
        if !(self.xi > 0.0) || !self.xi.is_finite() {
            return Err(Error::InvalidParameter(format!("block-maximum shape must be positive, got {}", self.xi)));
        }
        GevParams::new(self.mu, self.sigma, self.xi)?;
        Ok(())
    }

    fn dist(&self) -> Result<StudentsT> {
        student(1.0 / self.xi)
    }

    fn a_b(&self, dist: &StudentsT) -> f64 {
        upper_quantile(dist, 0.5 / self.b as f64)
    }

    /// The GEV limit of the block-maximum law as `b` grows.
    pub fn limit(&self) -> GevParams<f64> {
        GevParams::new(self.mu, self.sigma, self.xi).expect("validated margin")
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        let dist = self.dist()?;
        let s = 1.0 + self.xi * (x - self.mu) / self.sigma;
        if s <= 0.0 {
            return Ok(0.0);
        }
        let tail = dist.sf(s * self.a_b(&dist));
        Ok((self.b as f64 * (-2.0 * tail).ln_1p()).exp())
    }

    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::Domain(format!("probability must lie in (0, 1), got {p}")));
        }
        let dist = self.dist()?;
        let eps = -(p.ln() / self.b as f64).exp_m1() / 2.0;
        let t = upper_quantile(&dist, eps);
        Ok(self.mu + self.sigma / self.xi * (t / self.a_b(&dist) - 1.0))
    }
}

/// Marginal law of one site.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MarginSpec {
    /// Annual maxima from a block-maximum law.
    Blockmax { mu: f64, sigma: f64, xi: f64, b: u32 },
    /// Independent winter and summer GEV maxima; the annual maximum is their max.
    Seasonal { winter: [f64; 3], summer: [f64; 3] },
}

impl MarginSpec {
    pub fn is_seasonal(&self) -> bool {
        matches!(self, Self::Seasonal { .. })
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::Blockmax { mu, sigma, xi, b } => BlockMaxMargin::new(mu, sigma, xi, b).map(|_| ()),
            Self::Seasonal { winter, summer } => {
                GevParams::new(winter[0], winter[1], winter[2])?;
                GevParams::new(summer[0], summer[1], summer[2])?;
                Ok(())
            }
        }
    }
}
