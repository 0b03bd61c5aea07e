//! Regional estimation of high quantiles of annual-maximum river flows.
//!
//! The distribution core ([`gev`], [`moments`], the Hill/Weissman functions
//! in [`tail`]) is generic over the floating-point type; the regional and
//! simulation layers work in `f64`.

pub mod dependence;
pub mod error;
pub mod gev;
pub mod inference;
pub mod kl;
pub mod moments;
pub mod optim;
pub mod quad;
pub mod regional;
pub mod roots;
pub mod scalar;
pub mod simlab;
pub mod special;
pub mod tail;

pub use dependence::{DependenceMethod, TailDependence};
pub use error::{Error, Result};
pub use gev::GevParams as GenericGev;
pub use inference::{
    fit_seasonal_regional, fit_seasonal_regional_with, regional_gev_quantile_ci, twocomp_quantile_ci, twocomp_quantile_variance,
    Interval, SeasonalFit, SeasonalRegionalFit,
};
pub use moments::{Method, PwmVector, XiSolver};
pub use regional::{
    homogeneity_test, regional_gev, regional_gev_with, regional_shape, HomogeneityTest, ObservationScheme, RegionalGev,
    RegionalOptions, SiteSeries, WeightBranch,
};
pub use scalar::Real;
pub use tail::{fit_regional_tail, RegionalTail, TailConfig};

/// Double-precision GEV parameters.
pub type Gev = gev::GevParams<f64>;
/// Single-precision GEV parameters.
pub type Gev32 = gev::GevParams<f32>;
/// Double-precision two-component (winter/summer) GEV product.
pub type TwoComponent = gev::TwoComponentGev<f64>;
