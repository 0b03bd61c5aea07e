//! Gumbel–Hougaard copulas and Khoudraji's asymmetrization.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};

fn check_theta(theta: f64) -> Result<()> {
    if !(theta >= 1.0) || !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("Gumbel copula parameter must be >= 1, got {theta}")));
    }
    Ok(())
}

/// Positive stable variate with Laplace transform `exp(-s^alpha)`, `0 < alpha <= 1`.
fn positive_stable<R: Rng + ?Sized>(alpha: f64, rng: &mut R) -> f64 {
    if alpha >= 1.0 {
        return 1.0;
    }
    let u = std::f64::consts::PI * rng.random::<f64>();
    let w: f64 = Exp1.sample(rng);
    let a = (alpha * u).sin() / u.sin().powf(1.0 / alpha);
    let b = (((1.0 - alpha) * u).sin() / w).powf((1.0 - alpha) / alpha);
    a * b
}

/// One draw from the `d`-dimensional Gumbel–Hougaard copula.
pub fn gumbel_copula_sample<R: Rng + ?Sized>(theta: f64, d: usize, rng: &mut R) -> Result<Vec<f64>> {
    check_theta(theta)?;
    let alpha = 1.0 / theta;
    let s = positive_stable(alpha, rng);
    Ok((0..d)
        .map(|_| {
            let e: f64 = Exp1.sample(rng);
            (-(e / s).powf(alpha)).exp()
        })
        .collect())
}

/// `exp(-(sum (-ln u_j)^theta)^(1/theta))`.
pub fn gumbel_copula_cdf(u: &[f64], theta: f64) -> Result<f64> {
    check_theta(theta)?;
    if u.iter().any(|&v| v <= 0.0) {
        return Ok(0.0);
    }
    let s: f64 = u.iter().map(|&v| (-v.min(1.0).ln()).powf(theta)).sum();
    Ok((-s.powf(1.0 / theta)).exp())
}

fn check_c(c: &[f64]) -> Result<()> {
    if c.iter().any(|&v| !(0.0..=1.0).contains(&v)) {
        return Err(Error::InvalidParameter("Khoudraji exponents must lie in [0, 1]".into()));
    }
    Ok(())
}

/// `U_j = max(V_j^(1/c_j), W_j^(1/(1-c_j)))` with independent `V ~ C_theta1`, `W ~ C_theta2`.
pub fn khoudraji_sample<R: Rng + ?Sized>(theta1: f64, theta2: f64, c: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    check_c(c)?;
    let v = gumbel_copula_sample(theta1, c.len(), rng)?;
    let w = gumbel_copula_sample(theta2, c.len(), rng)?;
    Ok(c
        .iter()
        .zip(v.iter().zip(&w))
        .map(|(&cj, (&vj, &wj))| {
            if cj >= 1.0 {
                vj
            } else if cj <= 0.0 {
                wj
            } else {
                vj.powf(1.0 / cj).max(wj.powf(1.0 / (1.0 - cj)))
            }
        })
        .collect())
}

/// `C_theta1(u^c) C_theta2(u^(1-c))`.
pub fn khoudraji_cdf(u: &[f64], theta1: f64, theta2: f64, c: &[f64]) -> Result<f64> {
    check_c(c)?;
    if u.len() != c.len() {
        return Err(Error::InvalidParameter("u and c differ in length".into()));
    }
    let a: Vec<f64> = u.iter().zip(c).map(|(&v, &cj)| v.powf(cj)).collect();
    let b: Vec<f64> = u.iter().zip(c).map(|(&v, &cj)| v.powf(1.0 - cj)).collect();
    Ok(gumbel_copula_cdf(&a, theta1)? * gumbel_copula_cdf(&b, theta2)?)
}

/// Sample Kendall's tau (O(n^2)).
pub fn kendall_tau(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let p = (x[i] - x[j]) * (y[i] - y[j]);
            s += if p > 0.0 {
                1
            } else if p < 0.0 {
                -1
            } else {
                0
            };
        }
    }
    2.0 * s as f64 / (n as f64 * (n as f64 - 1.0))
}
