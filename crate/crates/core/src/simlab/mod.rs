//! Simulation laboratory: dependent multi-site samples and estimator comparison.

pub mod copula;
pub mod margins;
pub mod scenario;

pub use copula::{gumbel_copula_cdf, gumbel_copula_sample, kendall_tau, khoudraji_cdf, khoudraji_sample};
pub use margins::{BlockMaxMargin, MarginSpec};
pub use scenario::{
    run_scenario, simulation_regional, CopulaSpec, Estimate, Estimator, EstimatorSummary, ScenarioConfig, ScenarioReport,
};
