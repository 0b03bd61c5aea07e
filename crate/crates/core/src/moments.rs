//! Probability weighted moments (PWMs), L- and TL-moments, and GEV
//! parameters recovered from them.
//!
//! With `beta_k = ∫ Q(u) u^k du`, a GEV law has
//! `beta_k = (mu - sigma/xi)/(k+1) + sigma Γ(1-xi) (k+1)^(xi-1) / xi`.
//! The shape is recovered either from a polynomial approximation in a PWM
//! ratio (default) or by solving the exact ratio equation.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gev::GevParams;
use crate::quad::{integrate, QuadOptions};
use crate::roots::{brent, RootOptions};
use crate::scalar::{expm1_ratio, Real};
use crate::special::{gamma, EULER_GAMMA};

/// Moment system used to fit a GEV.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// L-moments (no trimming), needs `beta_0..beta_2`.
    L,
    /// TL-moments with trimming (0,1), needs `beta_0..beta_3`.
    TL,
}

impl Method {
    /// Number of PWMs (`beta_0 .. beta_{K-1}`) the method consumes.
    pub fn pwm_count(self) -> usize {
        match self {
            Method::L => 3,
            Method::TL => 4,
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "L" => Ok(Method::L),
            "TL" => Ok(Method::TL),
            other => Err(Error::InvalidParameter(format!("unknown moment method {other:?}"))),
        }
    }
}

/// How the shape equation is solved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum XiSolver {
    #[default]
    Approximation,
    /// Root-finding on the exact ratio equation; meant for validation.
    Exact,
}

/// Sample PWM estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PwmEstimator {
    /// `(1/n) Σ x_i F_n(x_i)^k` with `F_n(x) = #{x_j <= x} / n`.
    PlugIn,
    /// `(1/n) Σ x_(i) C(i-1, k) / C(n-1, k)`; exactly affine equivariant.
    #[default]
    Unbiased,
}

/// `beta_0 .. beta_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct PwmVector<T> {
    values: Vec<T>,
}

impl<T: Real> PwmVector<T> {
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn beta(&self, k: usize) -> T {
        self.values[k]
    }

    fn require(&self, n: usize, what: &str) -> Result<()> {
        if self.values.len() < n {
            return Err(Error::Precondition(format!(
                "{what} need {n} PWMs, got {}",
                self.values.len()
            )));
        }
        Ok(())
    }
}

/// Sample PWMs `(1/n) Σ x_i F_n(x_i)^k`, `k = 0..=k_max`, with the plug-in
/// empirical CDF `F_n(x) = #{x_j <= x} / n`.
pub fn sample_pwm<T: Real>(data: &[T], k_max: usize) -> Result<PwmVector<T>> {
    if data.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "sample PWMs need at least 2 observations, got {}",
            data.len()
        )));
    }
    let ecdf = empirical_cdf(data);
    let n = T::count(data.len());
    let values = (0..=k_max)
        .map(|k| {
            data.iter()
                .zip(&ecdf)
                .map(|(&x, &f)| x * f.powi(k as i32))
                .sum::<T>()
                / n
        })
        .collect();
    Ok(PwmVector { values })
}

/// Unbiased sample PWMs `b_k = (1/n) Σ x_(i) Π_{m=1..k} (i-m)/(n-m)`.
pub fn sample_pwm_unbiased<T: Real>(data: &[T], k_max: usize) -> Result<PwmVector<T>> {
    let n = data.len();
    if n < 2 || n <= k_max {
        return Err(Error::InsufficientData(format!(
            "unbiased PWMs up to order {k_max} need more than {} observations, got {n}",
            k_max.max(1)
        )));
    }
    let mut sorted = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
    let mut weights = vec![T::one(); n];
    let mut values = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        if k > 0 {
            let den = T::count(n - k);
            for (i, w) in weights.iter_mut().enumerate() {
                // i is zero-based, so the rank is i + 1
                *w = if i + 1 > k { *w * T::count(i + 1 - k) / den } else { T::zero() };
            }
        }
        let s: T = sorted.iter().zip(&weights).map(|(&x, &w)| x * w).sum();
        values.push(s / T::count(n));
    }
    Ok(PwmVector { values })
}

pub fn sample_pwm_with<T: Real>(data: &[T], k_max: usize, estimator: PwmEstimator) -> Result<PwmVector<T>> {
    match estimator {
        PwmEstimator::PlugIn => sample_pwm(data, k_max),
        PwmEstimator::Unbiased => sample_pwm_unbiased(data, k_max),
    }
}

/// `F_n(x_i)` for every observation, ties sharing `#{<= x}/n`.
pub(crate) fn empirical_cdf<T: Real>(data: &[T]) -> Vec<T> {
    let mut sorted: Vec<T> = data.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite data"));
    let n = T::count(data.len());
    data.iter()
        .map(|x| {
            let count = sorted.partition_point(|v| v <= x);
            T::count(count) / n
        })
        .collect()
}

/// `(lambda_1, lambda_2, lambda_3)`.
pub fn lmoments<T: Real>(pwm: &PwmVector<T>) -> Result<[T; 3]> {
    pwm.require(3, "L-moments")?;
    let b = &pwm.values;
    let two = T::lit(2.0);
    let six = T::lit(6.0);
    Ok([b[0], two * b[1] - b[0], six * b[2] - six * b[1] + b[0]])
}

/// TL-moments with trimming (0,1).
pub fn tlmoments<T: Real>(pwm: &PwmVector<T>) -> Result<[T; 3]> {
    pwm.require(4, "TL-moments")?;
    let b = &pwm.values;
    let l1 = T::lit(2.0) * (b[0] - b[1]);
    let l2 = T::lit(1.5) * (T::lit(4.0) * b[1] - b[0] - T::lit(3.0) * b[2]);
    let l3 = T::lit(2.0 / 3.0)
        * (T::lit(36.0) * b[2] - T::lit(18.0) * b[1] + T::lit(2.0) * b[0] - T::lit(20.0) * b[3]);
    Ok([l1, l2, l3])
}

// Ratio h(beta) = N/D - c with N, D linear in beta.
struct ShapeRatio {
    num: &'static [f64],
    den: &'static [f64],
    offset: f64,
    poly: (f64, f64),
}

const L_RATIO: ShapeRatio = ShapeRatio {
    num: &[-1.0, 2.0, 0.0],
    den: &[-1.0, 0.0, 3.0],
    offset: std::f64::consts::LN_2 / 1.098_612_288_668_109_8,
    poly: (-7.859, -2.9554),
};

// Denominator scaled so that N/D equals (3^ξ-2^(ξ+1)+1)/(2·4^ξ-3·3^ξ+1) for a GEV.
const TL_RATIO: ShapeRatio = ShapeRatio {
    num: &[-1.5, 6.0, -4.5, 0.0],
    den: &[-1.5, 0.0, 13.5, -12.0],
    offset: (2.0 * std::f64::consts::LN_2 - 1.098_612_288_668_109_8)
        / (3.0 * 1.098_612_288_668_109_8 - 4.0 * std::f64::consts::LN_2),
    poly: (-8.567_394, 0.675_969),
};

impl Method {
    fn ratio(self) -> &'static ShapeRatio {
        match self {
            Method::L => &L_RATIO,
            Method::TL => &TL_RATIO,
        }
    }
}

fn dot<T: Real>(coef: &[f64], b: &[T]) -> T {
    coef.iter().zip(b).map(|(&c, &x)| T::lit(c) * x).sum()
}

/// Shape estimate from the method's ratio polynomial.
fn shape_approx<T: Real>(method: Method, b: &[T]) -> Result<T> {
    let r = method.ratio();
    let den = dot(r.den, b);
    if den == T::zero() || !den.is_finite() {
        return Err(Error::DegenerateSample("shape ratio has a zero denominator".into()));
    }
    let h = dot(r.num, b) / den - T::lit(r.offset);
    Ok(T::lit(r.poly.0) * h + T::lit(r.poly.1) * h * h)
}

/// Gradient of the polynomial shape map with respect to `beta_0..beta_{K-1}`.
pub fn shape_gradient<T: Real>(method: Method, pwm: &PwmVector<T>) -> Result<Vec<T>> {
    pwm.require(method.pwm_count(), "shape gradient")?;
    let r = method.ratio();
    let b = &pwm.values[..method.pwm_count()];
    let num = dot(r.num, b);
    let den = dot(r.den, b);
    if den == T::zero() {
        return Err(Error::DegenerateSample("shape ratio has a zero denominator".into()));
    }
    let h = num / den - T::lit(r.offset);
    let dxi_dh = T::lit(r.poly.0) + T::lit(2.0 * r.poly.1) * h;
    Ok(r.num
        .iter()
        .zip(r.den)
        .map(|(&dn, &dd)| dxi_dh * (T::lit(dn) * den - num * T::lit(dd)) / (den * den))
        .collect())
}

/// Exact shape: root of the method's ratio equation.
fn shape_exact<T: Real>(method: Method, b: &[T]) -> Result<T> {
    let e = |a: f64, x: T| expm1_ratio(T::lit(a).ln(), x);
    let (target, lhs): (T, Box<dyn Fn(T) -> T>) = match method {
        Method::L => {
            let d = T::lit(2.0) * b[1] - b[0];
            (
                (T::lit(3.0) * b[2] - b[0]) / d,
                Box::new(move |x: T| e(3.0, x) / e(2.0, x)),
            )
        }
        Method::TL => {
            let d = T::lit(4.0) * b[1] - b[0] - T::lit(3.0) * b[2];
            let n = T::lit(2.0)
                * (T::lit(18.0) * b[2] - T::lit(9.0) * b[1] + b[0] - T::lit(10.0) * b[3]);
            (
                n / d,
                Box::new(move |x: T| {
                    (T::lit(5.0) * e(4.0, x) - T::lit(12.0) * e(3.0, x) + T::lit(9.0) * e(2.0, x))
                        / (e(3.0, x) - T::lit(2.0) * e(2.0, x))
                }),
            )
        }
    };
    if !target.is_finite() {
        return Err(Error::DegenerateSample("shape ratio is not finite".into()));
    }
    let opts = RootOptions { f_tol: T::epsilon() * T::lit(16.0), ..RootOptions::default() };
    brent(|x| lhs(x) - target, T::lit(-20.0), T::lit(0.999_999), &opts)
}

/// `(1 - Γ(1-ξ)) / ξ` with its series near zero.
fn gamma_defect<T: Real>(xi: T) -> T {
    if xi.abs() < T::lit(1e-6) {
        let a = EULER_GAMMA * EULER_GAMMA / 2.0 + std::f64::consts::PI.powi(2) / 12.0;
        -T::lit(EULER_GAMMA) - T::lit(a) * xi
    } else {
        (T::one() - gamma(T::one() - xi)) / xi
    }
}

/// Location and scale implied by the method's second and third equations
/// at a given shape.
pub fn location_scale_given_shape<T: Real>(method: Method, pwm: &PwmVector<T>, xi: T) -> Result<(T, T)> {
    pwm.require(method.pwm_count(), "GEV fit")?;
    if !(xi < T::one()) {
        return Err(Error::DegenerateSample(format!(
            "shape {xi} is at or beyond the Γ(1-ξ) pole"
        )));
    }
    let g1 = gamma(T::one() - xi);
    let ln = |a: f64| T::lit(a).ln();
    let (mu, sigma) = match method {
        Method::L => {
            let [l1, l2, _] = lmoments(pwm)?;
            let sigma = l2 / (g1 * expm1_ratio(ln(2.0), xi));
            (l1 + sigma * gamma_defect(xi), sigma)
        }
        Method::TL => {
            let [l1, _, _] = tlmoments(pwm)?;
            let b = &pwm.values;
            let d = T::lit(4.0) * b[1] - b[0] - T::lit(3.0) * b[2];
            let sigma = d / (g1 * (T::lit(2.0) * expm1_ratio(ln(2.0), xi) - expm1_ratio(ln(3.0), xi)));
            (l1 + sigma * (gamma_defect(xi) + g1 * expm1_ratio(ln(2.0), xi)), sigma)
        }
    };
    if !(sigma > T::zero()) || !sigma.is_finite() || !mu.is_finite() {
        return Err(Error::DegenerateSample(format!(
            "moment equations give scale {sigma}, location {mu}"
        )));
    }
    Ok((mu, sigma))
}

/// Shape estimate only.
pub fn shape_from_pwm<T: Real>(method: Method, pwm: &PwmVector<T>, solver: XiSolver) -> Result<T> {
    pwm.require(method.pwm_count(), "GEV fit")?;
    let second = match method {
        Method::L => lmoments(pwm)?[1],
        Method::TL => tlmoments(pwm)?[1],
    };
    if !(second > T::zero()) {
        return Err(Error::DegenerateSample(format!("second moment {second} is not positive")));
    }
    let b = &pwm.values[..method.pwm_count()];
    match solver {
        XiSolver::Approximation => shape_approx(method, b),
        XiSolver::Exact => shape_exact(method, b),
    }
}

pub fn fit_gev<T: Real>(method: Method, pwm: &PwmVector<T>, solver: XiSolver) -> Result<GevParams<T>> {
    let xi = shape_from_pwm(method, pwm, solver)?;
    let (mu, sigma) = location_scale_given_shape(method, pwm, xi)?;
    GevParams::new(mu, sigma, xi)
}

pub fn gev_from_lmoments<T: Real>(pwm: &PwmVector<T>) -> Result<GevParams<T>> {
    fit_gev(Method::L, pwm, XiSolver::Approximation)
}

pub fn gev_from_tlmoments<T: Real>(pwm: &PwmVector<T>) -> Result<GevParams<T>> {
    fit_gev(Method::TL, pwm, XiSolver::Approximation)
}

/// `beta_k = ∫ Q(u) u^k du` of a GEV by quadrature, with `u = exp(-e^s)`.
pub fn pwm_of_gev(params: &GevParams<f64>, k: usize) -> Result<f64> {
    let xi = params.xi();
    if !(xi < 1.0) {
        return Err(Error::Precondition(format!("PWMs diverge for shape {xi} >= 1")));
    }
    let gev = *params;
    let kp1 = (k + 1) as f64;
    let integrand = move |s: f64| {
        let es = s.exp();
        let w = (s - kp1 * es).exp();
        if w == 0.0 {
            return 0.0;
        }
        // Q(exp(-e^s)) written in terms of s
        let q = if xi.abs() < crate::gev::GUMBEL_THRESHOLD {
            gev.mu() - gev.sigma() * s
        } else {
            gev.mu() + gev.sigma() * (-xi * s).exp_m1() / xi
        };
        q * w
    };
    let upper = (800.0 / kp1).ln();
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_intervals: 4000 };
    integrate(integrand, f64::NEG_INFINITY, upper, &opts)
}

/// `beta_0..beta_{count-1}` of a GEV by quadrature.
pub fn pwm_vector_of_gev(params: &GevParams<f64>, count: usize) -> Result<PwmVector<f64>> {
    let values = (0..count).map(|k| pwm_of_gev(params, k)).collect::<Result<Vec<_>>>()?;
    Ok(PwmVector::new(values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed_form(mu: f64, sigma: f64, xi: f64, k: usize) -> f64 {
        let kp1 = (k + 1) as f64;
        (mu - sigma / xi) / kp1 + sigma * statrs::function::gamma::gamma(1.0 - xi) * kp1.powf(xi - 1.0) / xi
    }

    #[test]
    fn gumbel_mean_is_euler_gamma() {
        let g = GevParams::new(0.0, 1.0, 0.0).unwrap();
        assert!((pwm_of_gev(&g, 0).unwrap() - EULER_GAMMA).abs() < 1e-10);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        for &xi in &[-0.4, -0.1, 0.2, 0.45, 0.8] {
            let g = GevParams::new(1.5, 2.0, xi).unwrap();
            for k in 0..4 {
                let q = pwm_of_gev(&g, k).unwrap();
                let c = closed_form(1.5, 2.0, xi, k);
                assert!((q - c).abs() < 1e-9, "xi={xi} k={k}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn pwm_diverges_for_large_shape() {
        let g = GevParams::new(0.0, 1.0, 1.2).unwrap();
        assert!(matches!(pwm_of_gev(&g, 0), Err(Error::Precondition(_))));
    }

    #[test]
    fn sample_pwm_hand_value() {
        let p = sample_pwm(&[1.0f64, 2.0, 3.0], 1).unwrap();
        assert!((p.beta(0) - 2.0).abs() < 1e-15);
        assert!((p.beta(1) - 14.0 / 9.0).abs() < 1e-15);
        assert!(sample_pwm(&[1.0f64], 2).is_err());
        assert!(sample_pwm::<f64>(&[], 2).is_err());
    }

    #[test]
    fn unbiased_pwm_hand_values() {
        // {1,2,3}: b1 = (0 + 2 * 1/2 + 3 * 1) / 3, b2 = 3 * 1 / 3
        let p = sample_pwm_unbiased(&[3.0f64, 1.0, 2.0], 2).unwrap();
        assert!((p.beta(0) - 2.0).abs() < 1e-15);
        assert!((p.beta(1) - 4.0 / 3.0).abs() < 1e-15);
        assert!((p.beta(2) - 1.0).abs() < 1e-15);
        assert!(sample_pwm_unbiased(&[1.0f64, 2.0, 3.0], 3).is_err());
    }

    #[test]
    fn unbiased_pwm_shift_equivariant() {
        let x = [0.3f64, 2.5, 1.1, 7.9, 4.4, 3.3];
        let y: Vec<f64> = x.iter().map(|v| v + 10.0).collect();
        let (px, py) = (sample_pwm_unbiased(&x, 3).unwrap(), sample_pwm_unbiased(&y, 3).unwrap());
        for k in 0..4 {
            assert!((py.beta(k) - px.beta(k) - 10.0 / (k as f64 + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn sample_pwm_ties_share_cdf() {
        let p = sample_pwm(&[1.0f64, 1.0, 2.0], 1).unwrap();
        // F(1) = 2/3 for both ties
        assert!((p.beta(1) - (2.0 * 2.0 / 3.0 + 2.0) / 3.0).abs() < 1e-15);
    }

    #[test]
    fn uniform_and_point_mass_moments() {
        // uniform(0,1): beta_k = 1/(k+2)
        let u = PwmVector::<f64>::new(vec![0.5, 1.0 / 3.0, 0.25, 0.2]);
        let l = lmoments(&u).unwrap();
        assert!((l[0] - 0.5).abs() < 1e-15 && (l[1] - 1.0 / 6.0).abs() < 1e-15 && l[2].abs() < 1e-15);
        // point mass at c: beta_k = c/(k+1)
        let c = 3.0f64;
        let pm = PwmVector::new((0..4).map(|k| c / (k + 1) as f64).collect());
        assert!(lmoments(&pm).unwrap()[1].abs() < 1e-15);
        assert!(tlmoments(&pm).unwrap()[1].abs() < 1e-14);
        assert!(matches!(gev_from_lmoments(&pm), Err(Error::DegenerateSample(_))));
        assert!(matches!(gev_from_tlmoments(&pm), Err(Error::DegenerateSample(_))));
    }

    #[test]
    fn order_requirements() {
        let short = PwmVector::<f64>::new(vec![1.0, 0.6]);
        assert!(lmoments(&short).is_err());
        let three = PwmVector::<f64>::new(vec![1.0, 0.6, 0.4]);
        assert!(tlmoments(&three).is_err());
    }

    #[test]
    fn tl_moments_match_trimmed_integrals() {
        // trimmed L-moments from their order-statistic definition
        let g = GevParams::new(2.0, 1.0, 0.2).unwrap();
        let pwm = pwm_vector_of_gev(&g, 4).unwrap();
        let tl = tlmoments(&pwm).unwrap();
        // E[X_{i:m}] = m!/((i-1)!(m-i)!) ∫ Q(u) u^(i-1) (1-u)^(m-i) du
        let order_stat = |i: i32, m: i32| -> f64 {
            let coef = (1..=m).product::<i32>() as f64
                / ((1..i).product::<i32>() as f64 * (1..=(m - i)).product::<i32>() as f64);
            coef * integrate(
                |u| g.quantile(u).unwrap() * u.powi(i - 1) * (1.0 - u).powi(m - i),
                0.0,
                1.0,
                &QuadOptions { abs_tol: 1e-11, rel_tol: 1e-11, max_intervals: 4000 },
            )
            .unwrap()
        };
        let l1 = order_stat(1, 2);
        let l2 = 0.5 * (order_stat(2, 3) - order_stat(1, 3));
        let l3 = (order_stat(3, 4) - 2.0 * order_stat(2, 4) + order_stat(1, 4)) / 3.0;
        assert!((tl[0] - l1).abs() < 1e-8, "{} vs {l1}", tl[0]);
        assert!((tl[1] - l2).abs() < 1e-8, "{} vs {l2}", tl[1]);
        assert!((tl[2] - l3).abs() < 1e-8, "{} vs {l3}", tl[2]);
    }

    #[test]
    fn gumbel_pwms_give_zero_shape() {
        let g = GevParams::new(0.0, 1.0, 1e-12).unwrap();
        let pwm = pwm_vector_of_gev(&g, 3).unwrap();
        let r = &L_RATIO;
        let h = dot(r.num, pwm.values()) / dot(r.den, pwm.values()) - r.offset;
        assert!(h.abs() < 1e-10);
        let fit = gev_from_lmoments(&pwm).unwrap();
        assert!(fit.xi().abs() < 1e-9);
        assert!(fit.mu().abs() < 1e-8 && (fit.sigma() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn l_moment_shape_within_approximation_error() {
        let g = GevParams::new(0.0, 1.0, 0.3).unwrap();
        let fit = gev_from_lmoments(&pwm_vector_of_gev(&g, 3).unwrap()).unwrap();
        assert!((fit.xi() - 0.3).abs() <= 0.0009);
    }

    #[test]
    fn tl_round_trip() {
        let g = GevParams::new(2.0, 1.0, 0.2).unwrap();
        let pwm = pwm_vector_of_gev(&g, 4).unwrap();
        let fit = gev_from_tlmoments(&pwm).unwrap();
        assert!((fit.xi() - 0.2).abs() <= 0.005, "{fit:?}");
        let exact = fit_gev(Method::TL, &pwm, XiSolver::Exact).unwrap();
        assert!((exact.xi() - 0.2).abs() < 1e-9);
        assert!((exact.mu() - 2.0).abs() < 1e-8 && (exact.sigma() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn exact_l_inversion_recovers_parameters() {
        for &xi in &[-0.4, -0.1, 1e-7, 0.25, 0.6] {
            let g = GevParams::new(-1.0, 0.5, xi).unwrap();
            let fit = fit_gev(Method::L, &pwm_vector_of_gev(&g, 3).unwrap(), XiSolver::Exact).unwrap();
            assert!((fit.xi() - xi).abs() < 1e-8, "xi={xi}: {fit:?}");
            assert!((fit.mu() + 1.0).abs() < 1e-8 && (fit.sigma() - 0.5).abs() < 1e-8);
        }
    }

    #[test]
    fn tl_limit_branch_is_continuous() {
        let g = GevParams::new(1.0, 2.0, 0.1).unwrap();
        let pwm = pwm_vector_of_gev(&g, 4).unwrap();
        let at = |xi: f64| location_scale_given_shape(Method::TL, &pwm, xi).unwrap();
        let (m0, s0) = at(0.0);
        // both sides of the 1e-6 switchover stay within O(|xi|) of the limit
        for &d in &[1e-4f64, -1e-4, 2e-6, -2e-6, 5e-7, -5e-7] {
            let (m, s) = at(d);
            assert!((m - m0).abs() < 10.0 * d.abs(), "mu jump at {d}: {m} vs {m0}");
            assert!((s - s0).abs() < 10.0 * d.abs(), "sigma jump at {d}: {s} vs {s0}");
        }
        let (ml, sl) = location_scale_given_shape(Method::L, &pwm, 0.0).unwrap();
        let (mr, sr) = location_scale_given_shape(Method::L, &pwm, 1e-4).unwrap();
        assert!((ml - mr).abs() < 1e-3 && (sl - sr).abs() < 1e-3);
    }

    #[test]
    fn shape_gradient_matches_finite_differences() {
        for method in [Method::L, Method::TL] {
            let g = GevParams::new(2.0, 1.0, 0.25).unwrap();
            let pwm = pwm_vector_of_gev(&g, method.pwm_count()).unwrap();
            let grad = shape_gradient(method, &pwm).unwrap();
            for i in 0..method.pwm_count() {
                let h = 1e-6;
                let mut up = pwm.values().to_vec();
                let mut dn = pwm.values().to_vec();
                up[i] += h;
                dn[i] -= h;
                let fd = (shape_approx(method, &up).unwrap() - shape_approx(method, &dn).unwrap()) / (2.0 * h);
                assert!((fd - grad[i]).abs() < 1e-6 * (1.0 + fd.abs()), "{method:?} {i}: {fd} vs {}", grad[i]);
            }
        }
    }

    #[test]
    fn method_parsing() {
        assert_eq!("tl".parse::<Method>().unwrap(), Method::TL);
        assert_eq!("L".parse::<Method>().unwrap(), Method::L);
        assert!("x".parse::<Method>().is_err());
    }
}
