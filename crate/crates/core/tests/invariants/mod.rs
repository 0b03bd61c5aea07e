//! Invariant checks shared by the property suite and the acceptance run.
//! Each check drives its own proptest runner with `CASES` random cases.
#![allow(dead_code)]

use floodfreq::inference::twocomp_quantile_variance;
use floodfreq::moments::{fit_gev, pwm_vector_of_gev, sample_pwm, sample_pwm_with, shape_from_pwm, PwmEstimator};
use floodfreq::regional::{optimal_weights, regional_shape, sigma_r_hat};
use floodfreq::simlab::BlockMaxMargin;
use floodfreq::tail::{estimate_dependence, hill, semi_sigma, tail_prob, weissman_quantile};
use floodfreq::{
    fit_regional_tail, fit_seasonal_regional, twocomp_quantile_ci, DependenceMethod, Gev, Method, ObservationScheme,
    SeasonalFit, SiteSeries, TwoComponent, XiSolver,
};
use nalgebra::{DMatrix, Matrix3};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CASES: u32 = 1000;

pub type Check = fn() -> Result<(), String>;

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    let mut runner = TestRunner::new(Config { cases: CASES, failure_persistence: None, ..Config::default() });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn gev_params() -> impl Strategy<Value = Gev> {
    (-10.0f64..10.0, 0.1f64..10.0, -0.45f64..0.6).prop_map(|(m, s, x)| Gev::new(m, s, x).unwrap())
}

fn sample(g: &Gev, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| g.quantile(rng.random_range(1e-12..1.0)).unwrap()).collect()
}

/// `d` sites of GEV data with a shared shape and common-shock dependence.
fn region(d: usize, n: usize, xi: f64, seed: u64) -> ObservationScheme {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sites = (0..d)
        .map(|j| {
            let g = Gev::new(j as f64, 1.0 + 0.3 * j as f64, xi).unwrap();
            SiteSeries::new(format!("s{j}"), 0, sample(&g, n, &mut rng))
        })
        .collect();
    ObservationScheme::new(sites).unwrap()
}

fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + abs
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(TestCaseError::fail(format!($($fmt)+)));
        }
    };
}

pub fn gev_cdf_monotone_in_unit_interval() -> Result<(), String> {
    run((gev_params(), 0.0f64..1.0, 0.0f64..1.0), |(g, a, b)| {
        let (lo, hi) = (a.min(b), a.max(b));
        let (x1, x2) = (g.quantile(lo.max(1e-12)).unwrap(), g.quantile(hi.max(1e-12)).unwrap() + 1e-9);
        let (f1, f2) = (g.cdf(x1), g.cdf(x2));
        ensure!((0.0..=1.0).contains(&f1) && (0.0..=1.0).contains(&f2), "cdf outside [0,1]");
        ensure!(f1 <= f2, "cdf decreased: {f1} > {f2}");
        let tc = TwoComponent::new(g, Gev::new(g.mu() + 1.0, g.sigma(), 0.2).unwrap());
        ensure!(tc.cdf(x1) <= tc.cdf(x2), "two-component cdf decreased");
        Ok(())
    })
}

pub fn gev_quantile_cdf_round_trip() -> Result<(), String> {
    run((gev_params(), 1e-6f64..(1.0 - 1e-6)), |(g, p)| {
        let x = g.quantile(p).unwrap();
        ensure!((g.cdf(x) - p).abs() <= 1e-10, "cdf(q({p})) = {}", g.cdf(x));
        if (1e-3..=0.999).contains(&p) {
            let x2 = g.quantile(g.cdf(x)).unwrap();
            ensure!(close(x2, x, 1e-10, 1e-10), "q(cdf({x})) = {x2}");
        }
        Ok(())
    })
}

pub fn gev_pdf_is_cdf_derivative() -> Result<(), String> {
    run((gev_params(), 0.01f64..0.99), |(g, p)| {
        let x = g.quantile(p).unwrap();
        let h = 1e-5 * g.sigma();
        let fd = (g.cdf(x + h) - g.cdf(x - h)) / (2.0 * h);
        ensure!(close(fd, g.pdf(x), 1e-6, 0.0), "pdf {} vs derivative {fd}", g.pdf(x));
        Ok(())
    })
}

pub fn gev_jacobian_matches_differences() -> Result<(), String> {
    run((gev_params(), 0.01f64..0.99), |(g, p)| {
        let x = g.quantile(p).unwrap();
        let j = g.cdf_jacobian(x).unwrap();
        let h = 1e-5;
        let at = |i: usize, s: f64| {
            let mut t = g.as_array();
            t[i] += s;
            Gev::new(t[0], t[1], t[2]).unwrap().cdf(x)
        };
        let fd: Vec<f64> = (0..3).map(|i| (at(i, h) - at(i, -h)) / (2.0 * h)).collect();
        let scale = j.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for i in 0..3 {
            ensure!((fd[i] - j[i]).abs() <= 1e-6 * scale + 1e-12, "d/dtheta_{i}: {} vs {}", j[i], fd[i]);
        }
        Ok(())
    })
}

pub fn gev_gumbel_continuity() -> Result<(), String> {
    run((-5.0f64..5.0, 0.2f64..5.0, 1e-4f64..(1.0 - 1e-4), prop::bool::ANY), |(mu, sigma, p, neg)| {
        let xi = if neg { -1e-9 } else { 1e-9 };
        let g = Gev::new(mu, sigma, xi).unwrap();
        let q_gumbel = mu - sigma * (-p.ln()).ln();
        let z: f64 = (q_gumbel - mu) / sigma;
        let cdf = (-(-z).exp()).exp();
        let pdf = (-z - (-z).exp()).exp() / sigma;
        ensure!(close(g.quantile(p).unwrap(), q_gumbel, 1e-6, 1e-6), "quantile");
        ensure!((g.cdf(q_gumbel) - cdf).abs() <= 1e-6, "cdf");
        ensure!(close(g.pdf(q_gumbel), pdf, 1e-6, 1e-9), "pdf");
        Ok(())
    })
}

pub fn twocomp_equal_components_collapse() -> Result<(), String> {
    run((gev_params(), 0.01f64..0.999), |(g, p)| {
        let q = TwoComponent::new(g, g).quantile(p).unwrap();
        let expect = g.quantile(p.sqrt()).unwrap();
        ensure!(close(q, expect, 1e-9, 1e-9), "{q} vs {expect}");
        Ok(())
    })
}

pub fn moment_fits_are_affine_equivariant() -> Result<(), String> {
    run((gev_params(), 20usize..120, 0.1f64..10.0, -50.0f64..50.0, any::<u64>()), |(g, n, a, b, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&g, n, &mut rng);
        let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        for method in [Method::L, Method::TL] {
            let k = method.pwm_count() - 1;
            let fx = sample_pwm_with(&x, k, PwmEstimator::Unbiased).and_then(|p| fit_gev(method, &p, XiSolver::Approximation));
            let fy = sample_pwm_with(&y, k, PwmEstimator::Unbiased).and_then(|p| fit_gev(method, &p, XiSolver::Approximation));
            match (fx, fy) {
                (Ok(fx), Ok(fy)) => {
                    ensure!(close(fy.xi(), fx.xi(), 1e-8, 1e-10), "{method:?} shape {} vs {}", fy.xi(), fx.xi());
                    ensure!(close(fy.sigma(), a * fx.sigma(), 1e-8, 1e-10), "{method:?} scale");
                    ensure!(close(fy.mu(), a * fx.mu() + b, 1e-8, 1e-8 * (1.0 + b.abs())), "{method:?} location");
                }
                (Err(_), Err(_)) => {}
                (a, b) => ensure!(false, "fit succeeded on one side only: {a:?} / {b:?}"),
            }
        }
        Ok(())
    })
}

pub fn sample_pwm_permutation_invariant() -> Result<(), String> {
    run((gev_params(), 5usize..60, any::<u64>()), |(g, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample(&g, n, &mut rng);
        let mut y = x.clone();
        for i in (1..y.len()).rev() {
            y.swap(i, rng.random_range(0..=i));
        }
        for est in [PwmEstimator::PlugIn, PwmEstimator::Unbiased] {
            let (a, b) = (sample_pwm_with(&x, 3, est).unwrap(), sample_pwm_with(&y, 3, est).unwrap());
            for k in 0..4 {
                ensure!(close(a.beta(k), b.beta(k), 1e-12, 1e-12), "{est:?} beta_{k}");
            }
        }
        ensure!(sample_pwm(&x, 2).is_ok(), "plug-in PWM failed");
        Ok(())
    })
}

pub fn shape_round_trip_from_exact_pwms() -> Result<(), String> {
    run((-0.4f64..0.4, -5.0f64..5.0, 0.2f64..5.0), |(xi, mu, sigma)| {
        let g = Gev::new(mu, sigma, xi).unwrap();
        let pwm = pwm_vector_of_gev(&g, 4).unwrap();
        let l = shape_from_pwm(Method::L, &pwm, XiSolver::Approximation).unwrap();
        ensure!((l - xi).abs() <= 0.0009, "L approximation {l} for {xi}");
        let tl = shape_from_pwm(Method::TL, &pwm, XiSolver::Approximation).unwrap();
        ensure!((tl - xi).abs() <= 0.005, "TL approximation {tl} for {xi}");
        for m in [Method::L, Method::TL] {
            let e = shape_from_pwm(m, &pwm, XiSolver::Exact).unwrap();
            ensure!((e - xi).abs() <= 1e-7, "{m:?} exact {e} for {xi}");
        }
        Ok(())
    })
}

fn staggered(d: usize, n: usize, seed: u64) -> ObservationScheme {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Gev::new(0.0, 1.0, 0.1).unwrap();
    let sites = (0..d)
        .map(|j| {
            let offset = if j == 0 { 0 } else { rng.random_range(0..n - 5) };
            let common: Vec<f64> = sample(&g, n, &mut rng);
            let v = common[offset..].iter().map(|x| x + 0.3 * rng.random::<f64>()).collect();
            SiteSeries::new(format!("s{j}"), offset, v)
        })
        .collect();
    ObservationScheme::new(sites).unwrap()
}

pub fn sigma_r_symmetric_and_psd() -> Result<(), String> {
    run((2usize..5, 12usize..40, 1usize..5, any::<u64>(), prop::bool::ANY), |(d, n, k, seed, equal)| {
        let scheme = if equal { region(d, n, 0.1, seed) } else { staggered(d, n, seed) };
        let s = sigma_r_hat(&scheme, k).unwrap();
        let m = &s.matrix;
        ensure!((m - m.transpose()).amax() <= 1e-12 * m.amax().max(1.0), "not symmetric");
        for j in 0..d {
            for l in 0..d {
                ensure!((s.block(j, l) - s.block(l, j).transpose()).amax() <= 1e-12 * m.amax().max(1.0), "block ({j},{l})");
            }
        }
        if equal {
            let min = m.clone().symmetric_eigen().eigenvalues.min();
            ensure!(min >= -1e-9 * m.amax().max(1.0), "equal-length covariance not PSD: {min}");
            ensure!(s.psd, "psd flag false for an equal-length scheme");
        }
        Ok(())
    })
}

pub fn sigma_r_k1_is_plain_covariance() -> Result<(), String> {
    run((2usize..6, 5usize..40, any::<u64>()), |(d, n, seed)| {
        let scheme = region(d, n, 0.2, seed);
        let s = sigma_r_hat(&scheme, 1).unwrap().matrix;
        let cols: Vec<&Vec<f64>> = scheme.sites().iter().map(|s| &s.values).collect();
        let mean: Vec<f64> = cols.iter().map(|c| c.iter().sum::<f64>() / n as f64).collect();
        for a in 0..d {
            for b in 0..d {
                let c: f64 = (0..n).map(|i| (cols[a][i] - mean[a]) * (cols[b][i] - mean[b])).sum::<f64>() / (n - 1) as f64;
                ensure!(close(s[(a, b)], c, 1e-10, 1e-12), "({a},{b}) {} vs {c}", s[(a, b)]);
            }
        }
        Ok(())
    })
}

fn random_pd(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let a = DMatrix::from_fn(d, d, |_, _| rng.random_range(-1.0..1.0));
    &a * a.transpose() + DMatrix::identity(d, d) * 0.1
}

pub fn optimal_weights_minimize_on_affine_simplex() -> Result<(), String> {
    run((2usize..6, any::<u64>()), |(d, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let sigma = random_pd(d, &mut rng);
        let w = optimal_weights(&sigma).unwrap().expect("positive definite input");
        ensure!((w.iter().sum::<f64>() - 1.0).abs() <= 1e-12, "weights sum to {}", w.iter().sum::<f64>());
        let wv = nalgebra::DVector::from_vec(w);
        let base = wv.dot(&(&sigma * &wv));
        for _ in 0..20 {
            let mut delta = nalgebra::DVector::from_fn(d, |_, _| rng.random_range(-0.5..0.5));
            let mean = delta.mean();
            delta.add_scalar_mut(-mean);
            let v = &wv + delta;
            ensure!(v.dot(&(&sigma * &v)) >= base - 1e-12 * base.abs(), "perturbation lowered the variance");
        }
        Ok(())
    })
}

pub fn regional_weights_sum_to_one() -> Result<(), String> {
    run((2usize..5, 20usize..50, any::<u64>()), |(d, n, seed)| {
        let scheme = region(d, n, 0.15, seed);
        if let Ok(r) = regional_shape(&scheme, Method::TL) {
            ensure!((r.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-10, "moment weights");
        }
        let positive = region(d, n, 0.3, seed);
        let shifted: Vec<SiteSeries> =
            positive.sites().iter().map(|s| SiteSeries::new(s.id.clone(), s.offset, s.values.iter().map(|v| v + 10.0).collect())).collect();
        let scheme = ObservationScheme::new(shifted).unwrap();
        if let Ok(t) = fit_regional_tail(&scheme, "s0", None, DependenceMethod::Empirical) {
            ensure!((t.config.weights.iter().sum::<f64>() - 1.0).abs() <= 1e-10, "tail weights");
        }
        Ok(())
    })
}

pub fn regional_shape_invariant_under_reordering() -> Result<(), String> {
    run((2usize..5, 20usize..50, any::<u64>(), any::<u64>()), |(d, n, seed, perm_seed)| {
        let scheme = region(d, n, 0.15, seed);
        let mut sites = scheme.sites().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
        for i in (1..sites.len()).rev() {
            sites.swap(i, rng.random_range(0..=i));
        }
        let permuted = ObservationScheme::new(sites).unwrap();
        for m in [Method::L, Method::TL] {
            match (regional_shape(&scheme, m), regional_shape(&permuted, m)) {
                (Ok(a), Ok(b)) => ensure!(close(a.xi, b.xi, 1e-9, 1e-12), "{m:?}: {} vs {}", a.xi, b.xi),
                (Err(_), Err(_)) => {}
                _ => ensure!(false, "{m:?}: fit succeeded for one ordering only"),
            }
        }
        Ok(())
    })
}

fn seasonal_fit_strategy() -> impl Strategy<Value = SeasonalFit> {
    (gev_params(), gev_params(), any::<u64>(), 10usize..500).prop_map(|(w, s, seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pd = || {
            let a = Matrix3::from_fn(|_, _| rng.random_range(-1.0..1.0));
            a * a.transpose()
        };
        SeasonalFit { theta_w: w, theta_s: s, sigma_w: pd(), sigma_s: pd(), n }
    })
}

pub fn twocomp_variance_nonnegative_and_monotone() -> Result<(), String> {
    run((seasonal_fit_strategy(), 0.5f64..0.999, 1.0f64..10.0), |(fit, p, c)| {
        let Ok(v) = twocomp_quantile_variance(&fit, p) else { return Ok(()) };
        ensure!(v >= 0.0, "negative variance {v}");
        let mut scaled = fit.clone();
        scaled.sigma_w *= c;
        let v2 = twocomp_quantile_variance(&scaled, p).unwrap();
        ensure!(v2 >= v * (1.0 - 1e-12), "winter scaling lowered the variance");
        let mut scaled_s = fit.clone();
        scaled_s.sigma_s *= c;
        ensure!(twocomp_quantile_variance(&scaled_s, p).unwrap() >= v * (1.0 - 1e-12), "summer scaling lowered the variance");
        Ok(())
    })
}

pub fn ci_width_scales_inverse_sqrt_n() -> Result<(), String> {
    run((seasonal_fit_strategy(), 0.5f64..0.999, 2usize..50), |(fit, p, m)| {
        let Ok(a) = twocomp_quantile_ci(&fit, p, 0.05) else { return Ok(()) };
        let mut big = fit.clone();
        big.n = fit.n * m * m;
        let b = twocomp_quantile_ci(&big, p, 0.05).unwrap();
        ensure!(close(a.width(), b.width() * m as f64, 1e-9, 1e-12), "widths {} and {}", a.width(), b.width());
        ensure!(a.contains(a.estimate), "interval excludes its estimate");
        Ok(())
    })
}

pub fn twocomp_affine_equivariance() -> Result<(), String> {
    run((2usize..4, 25usize..50, 0.2f64..5.0, -20.0f64..20.0, any::<u64>()), |(d, n, a, b, seed)| {
        let w = region(d, n, 0.1, seed);
        let s = region(d, n, 0.3, seed.wrapping_add(1));
        let map = |sch: &ObservationScheme| {
            let sites = sch.sites().iter().map(|x| SiteSeries::new(x.id.clone(), x.offset, x.values.iter().map(|v| a * v + b).collect())).collect();
            ObservationScheme::new(sites).unwrap()
        };
        let (Ok(f), Ok(g)) = (
            fit_seasonal_regional(&w, &s, "s0", Method::TL),
            fit_seasonal_regional(&map(&w), &map(&s), "s0", Method::TL),
        ) else {
            return Ok(());
        };
        let (Ok(c1), Ok(c2)) = (twocomp_quantile_ci(&f.fit, 0.99, 0.05), twocomp_quantile_ci(&g.fit, 0.99, 0.05)) else {
            return Ok(());
        };
        ensure!(close(c2.estimate, a * c1.estimate + b, 1e-7, 1e-7), "quantile {} vs {}", c2.estimate, a * c1.estimate + b);
        ensure!(close(c2.width(), a * c1.width(), 1e-6, 1e-9), "width {} vs {}", c2.width(), a * c1.width());
        Ok(())
    })
}

fn pareto(n: usize, gamma: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(1e-12f64..1.0).powf(-gamma)).collect()
}

pub fn hill_scale_invariant_and_weissman_inverse() -> Result<(), String> {
    run((50usize..300, 0.1f64..0.8, 0.01f64..100.0, any::<u64>(), 0.0f64..1.0), |(n, gamma, c, seed, t)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = pareto(n, gamma, &mut rng);
        let k = (n / 5).max(2);
        let h = hill(&x, k).unwrap();
        let y: Vec<f64> = x.iter().map(|v| v * c).collect();
        ensure!(close(hill(&y, k).unwrap(), h, 1e-10, 1e-12), "Hill changed under scaling");
        let p = 1.0 - (k as f64 / n as f64) * (1.0 - t * 0.999);
        let q = weissman_quantile(&x, k, p, h).unwrap();
        ensure!(close(tail_prob(q, &x, k, h).unwrap(), p, 1e-12, 1e-12), "tail_prob(q(p)) != p");
        Ok(())
    })
}

pub fn semi_sigma_symmetric_psd_with_unit_ratio_diagonal() -> Result<(), String> {
    run((2usize..5, 60usize..150, any::<u64>(), prop::bool::ANY), |(d, n, seed, pickands)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // shared Frechet shock plus site noise gives tail dependence
        let shock = pareto(n, 0.5, &mut rng);
        let sites = (0..d)
            .map(|j| {
                let v = shock.iter().map(|s| s.max(rng.random_range(1e-9f64..1.0).powf(-0.5))).collect();
                SiteSeries::new(format!("s{j}"), 0, v)
            })
            .collect();
        let scheme = ObservationScheme::new(sites).unwrap();
        let k: Vec<usize> = (0..d).map(|j| 8 + 3 * j).collect();
        let method = if pickands { DependenceMethod::PickandsCfg } else { DependenceMethod::Empirical };
        let dep = estimate_dependence(&scheme, method).unwrap();
        let reference = seed as usize % d;
        let s = semi_sigma(&k, &scheme.ratios(), reference, &dep).unwrap();
        ensure!((&s - s.transpose()).amax() <= 1e-12, "not symmetric");
        for l in 0..d {
            let c = k[reference] as f64 / k[l] as f64;
            ensure!(close(s[(l, l)], c, 1e-12, 0.0), "diagonal {l}: {} vs {c}", s[(l, l)]);
        }
        let min = s.clone().symmetric_eigen().eigenvalues.min();
        ensure!(min >= -1e-8, "min eigenvalue {min}");
        Ok(())
    })
}

pub fn blockmax_cdf_valid_and_round_trip() -> Result<(), String> {
    run((-3.0f64..3.0, 0.2f64..3.0, 0.05f64..0.7, 2u32..400, 1e-6f64..(1.0 - 1e-6), 1e-6f64..(1.0 - 1e-6)), |(mu, sigma, xi, b, p1, p2)| {
        let m = BlockMaxMargin::new(mu, sigma, xi, b).unwrap();
        let (x1, x2) = (m.quantile(p1.min(p2)).unwrap(), m.quantile(p1.max(p2)).unwrap());
        ensure!(m.cdf(x1).unwrap() <= m.cdf(x2).unwrap(), "cdf decreased");
        ensure!((m.cdf(x1).unwrap() - p1.min(p2)).abs() <= 1e-10, "round trip at {}", p1.min(p2));
        ensure!(m.cdf(-1e300).unwrap_or(0.0) <= 1e-12 && (1.0 - m.cdf(1e300).unwrap()).abs() <= 1e-12, "limits");
        Ok(())
    })
}

/// Every check, labelled.
pub fn all() -> Vec<(&'static str, Check)> {
    vec![
        ("gev cdf monotone in [0,1]", gev_cdf_monotone_in_unit_interval),
        ("gev quantile/cdf round trip", gev_quantile_cdf_round_trip),
        ("gev pdf = d cdf", gev_pdf_is_cdf_derivative),
        ("gev jacobian = finite differences", gev_jacobian_matches_differences),
        ("gev Gumbel continuity", gev_gumbel_continuity),
        ("two-component equal components", twocomp_equal_components_collapse),
        ("moment fits affine-equivariant", moment_fits_are_affine_equivariant),
        ("sample PWM permutation-invariant", sample_pwm_permutation_invariant),
        ("shape round trip from exact PWMs", shape_round_trip_from_exact_pwms),
        ("Sigma_r symmetric and PSD", sigma_r_symmetric_and_psd),
        ("Sigma_r with K=1 is plain covariance", sigma_r_k1_is_plain_covariance),
        ("optimal weights minimize on sum-one set", optimal_weights_minimize_on_affine_simplex),
        ("regional weights sum to one", regional_weights_sum_to_one),
        ("regional shape invariant under reordering", regional_shape_invariant_under_reordering),
        ("two-component variance >= 0, monotone", twocomp_variance_nonnegative_and_monotone),
        ("CI width ~ 1/sqrt(n)", ci_width_scales_inverse_sqrt_n),
        ("two-component affine equivariance", twocomp_affine_equivariance),
        ("Hill scale invariance, Weissman inverse", hill_scale_invariant_and_weissman_inverse),
        ("semi-parametric Sigma symmetric PSD", semi_sigma_symmetric_psd_with_unit_ratio_diagonal),
        ("block-max cdf valid, round trip", blockmax_cdf_valid_and_round_trip),
    ]
}
