//! Dilation bootstrap confidence regions for partially identified models.
//!
//! The pipeline is: draw bootstrap replicates of a sample, match each
//! replicate to the sample with an exact bottleneck (minimax) assignment,
//! take the `[B·alpha]`-th largest matching cost as a ball radius, widen the
//! model correspondence by that radius, and keep every parameter value whose
//! widened model still dominates the empirical distribution.
//!
//! Modules:
//! - [`matching`]: point clouds, distances, bottleneck matching.
//! - [`bootstrap`]: resampling and dilation radius selection.
//! - [`quantile`]: empirical quantiles, Kolmogorov critical values, oracle bands.
//! - [`model`] and [`region`]: interval correspondences and membership scans.
//! - [`applications`]: the portfolio and voting closed forms.
//! - [`subsampling`]: the criterion-function subsampling comparator.
//! - [`experiments`]: Monte Carlo drivers shared by the CLI and the tests.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod applications;
pub mod bootstrap;
mod error;
pub mod experiments;
pub mod matching;
pub mod model;
pub mod normal;
pub mod quantile;
pub mod region;
pub mod seed;
pub mod subsampling;

pub use bootstrap::{
    dilation_radius_bootstrap, resample, select_radius, BootstrapConfig, BootstrapSummary, DilationSpec,
};
pub use error::{Error, Result};
pub use experiments::{Design, ExperimentConfig, GridSpec, Table};
pub use matching::{
    bottleneck_match, brute_force_bottleneck, distance, sorted_match_1d, BottleneckMatch, Norm, PointCloud,
};
pub use model::{compose_dilation, Dilated, IntervalCorrespondence, Monotonicity, PortfolioModel, ShiftModel};
pub use quantile::{
    bootstrap_quantile_sup, empirical_quantile, kolmogorov_cdf, kolmogorov_quantile, oracle_dilation_interval,
    DensityHandle, QuantileFunction,
};
pub use region::{confidence_region_bisect, confidence_region_scan, membership_test, BoundaryConvention, RegionResult};
pub use subsampling::{cht_criterion, cht_region, SubsampleConfig};

/// A closed interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}
