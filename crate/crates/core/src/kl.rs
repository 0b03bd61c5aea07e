//! Kullback–Leibler projection of a density onto the GEV family.

use crate::error::{Error, Result};
use crate::gev::GevParams;
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::quad::{integrate, QuadOptions};
use crate::special::EULER_GAMMA;

/// Density values below this are treated as zero.
const DENSITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct KlProjection {
    pub params: GevParams<f64>,
    /// `KL(target || G_params)` at the optimum.
    pub divergence: f64,
    /// Euclidean norm of the finite-difference gradient in `(mu, sigma, xi)`.
    pub gradient_norm: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct KlOptions {
    pub quad: QuadOptions,
    pub optimizer: NelderMeadOptions,
    pub gradient_tol: f64,
}

impl Default for KlOptions {
    fn default() -> Self {
        Self {
            quad: QuadOptions { abs_tol: 1e-11, rel_tol: 1e-11, max_intervals: 4000 },
            optimizer: NelderMeadOptions { initial_step: 0.05, f_tol: 1e-14, x_tol: 1e-8, max_iter: 20_000 },
            gradient_tol: 1e-5,
        }
    }
}

/// `-∫ f log g_theta`, infinite when the GEV support misses part of the target's.
fn cross_entropy<F: Fn(f64) -> f64>(density: &F, support: (f64, f64), g: &GevParams<f64>, quad: &QuadOptions) -> f64 {
    let integrand = |x: f64| {
        let fx = density(x);
        if !(fx >= DENSITY_FLOOR) {
            return 0.0;
        }
        let lg = g.ln_pdf(x);
        if lg == f64::NEG_INFINITY {
            return f64::INFINITY;
        }
        -fx * lg
    };
    integrate(integrand, support.0, support.1, quad).unwrap_or(f64::INFINITY)
}

/// A Gumbel distribution with the target's mean and variance, used as a
/// starting point; its support is the whole real line.
pub fn moment_matched_start<F: Fn(f64) -> f64>(density: F, support: (f64, f64)) -> Result<GevParams<f64>> {
    let quad = QuadOptions { abs_tol: 1e-10, rel_tol: 1e-10, max_intervals: 4000 };
    let mean = integrate(|x| x * density(x), support.0, support.1, &quad)?;
    let var = integrate(|x| (x - mean).powi(2) * density(x), support.0, support.1, &quad)?;
    if !(var > 0.0) || !var.is_finite() {
        return Err(Error::Precondition("target density has no finite positive variance".into()));
    }
    let sigma = var.sqrt() * 6f64.sqrt() / std::f64::consts::PI;
    GevParams::new(mean - EULER_GAMMA * sigma, sigma, 0.0)
}

/// Finds the GEV closest to `density` in Kullback–Leibler divergence.
pub fn kl_project_gev<F>(density: F, support: (f64, f64), init: GevParams<f64>) -> Result<KlProjection>
where
    F: Fn(f64) -> f64,
{
    kl_project_gev_with(density, support, init, &KlOptions::default())
}

pub fn kl_project_gev_with<F>(density: F, support: (f64, f64), init: GevParams<f64>, opts: &KlOptions) -> Result<KlProjection>
where
    F: Fn(f64) -> f64,
{
    let mass = integrate(&density, support.0, support.1, &opts.quad)?;
    if (mass - 1.0).abs() > 1e-6 {
        return Err(Error::Precondition(format!("target density integrates to {mass}, not 1")));
    }
    let entropy_term = integrate(
        |x| {
            let fx = density(x);
            if fx >= DENSITY_FLOOR { fx * fx.ln() } else { 0.0 }
        },
        support.0,
        support.1,
        &opts.quad,
    )?;

    let objective = |v: &[f64]| -> f64 {
        match GevParams::new(v[0], v[1].exp(), v[2]) {
            Ok(g) => cross_entropy(&density, support, &g, &opts.quad),
            Err(_) => f64::INFINITY,
        }
    };
    let start = [init.mu(), init.sigma().ln(), init.xi()];
    let min = nelder_mead(objective, &start, &opts.optimizer)?;
    let params = GevParams::new(min.x[0], min.x[1].exp(), min.x[2])?;

    let h = 1e-4;
    let at = |th: [f64; 3]| match GevParams::new(th[0], th[1], th[2]) {
        Ok(g) => cross_entropy(&density, support, &g, &opts.quad),
        Err(_) => f64::INFINITY,
    };
    let theta = params.as_array();
    let mut grad_sq = 0.0;
    for i in 0..3 {
        let mut up = theta;
        let mut dn = theta;
        up[i] += h;
        dn[i] -= h;
        let d = (at(up) - at(dn)) / (2.0 * h);
        grad_sq += d * d;
    }
    let gradient_norm = grad_sq.sqrt();
    if !(gradient_norm <= opts.gradient_tol) {
        return Err(Error::Numeric(format!(
            "KL projection stopped at {theta:?} with gradient norm {gradient_norm:e}"
        )));
    }
    Ok(KlProjection { params, divergence: entropy_term + min.value, gradient_norm, iterations: min.iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unnormalized_density() {
        let g = GevParams::new(0.0, 1.0, 0.1).unwrap();
        let r = kl_project_gev(|x| 2.0 * g.pdf(x), (-10.0, f64::INFINITY), g);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }

    #[test]
    fn family_member_projects_to_itself() {
        let g = GevParams::new(1.0, 2.0, 0.2).unwrap();
        let support = g.support();
        let start = moment_matched_start(|x| g.pdf(x), support).unwrap();
        let r = kl_project_gev(|x| g.pdf(x), support, start).unwrap();
        for (a, b) in r.params.as_array().iter().zip(g.as_array()) {
            assert!((a - b).abs() < 1e-3, "{:?}", r.params);
        }
        assert!(r.divergence.abs() < 1e-8);
    }
}
