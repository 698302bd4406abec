//! Bootstrap dilation radius.
//!
//! For each replicate `b` a sample of size `n` is drawn with replacement from
//! the data, and `eta_b` is the bottleneck matching cost between the
//! replicate and the data. The dilation radius is the `floor(B * alpha)`-th
//! largest of the `eta_b`, so that a fraction `1 - alpha` of the replicates
//! fit inside balls of that radius around the data points.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::matching::{bottleneck_match, sorted_deviation_presorted, Norm, PointCloud};
use crate::seed::task_rng;
use crate::Interval;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl BootstrapConfig {
    pub fn new(replicates: usize, alpha: f64, seed: u64) -> Result<Self> {
        let config = BootstrapConfig { replicates, alpha, seed };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates == 0 {
            return Err(invalid("bootstrap replicate count must be positive"));
        }
        check_alpha(self.alpha)?;
        selection_rank(self.replicates, self.alpha).map(|_| ())
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")))
    }
}

/// `floor(count * alpha)`, tolerating representation error such as
/// `0.07 * 100 = 7.000000000000001` in either direction.
pub fn selection_rank(count: usize, alpha: f64) -> Result<usize> {
    let k = (count as f64 * alpha + 1e-9).floor() as usize;
    if k == 0 {
        Err(Error::AlphaTooSmall { alpha, count })
    } else {
        Ok(k)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapSummary {
    /// One matching cost per replicate, in replicate order.
    pub etas: Vec<f64>,
    pub radius: f64,
}

impl BootstrapSummary {
    pub fn dilation(&self, norm: Norm) -> DilationSpec {
        DilationSpec { radius: self.radius, norm }
    }
}

/// Ball dilation `y -> B(y, radius)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationSpec {
    pub radius: f64,
    pub norm: Norm,
}

impl DilationSpec {
    pub fn new(radius: f64, norm: Norm) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(invalid(format!("dilation radius must be finite and >= 0, got {radius}")));
        }
        Ok(DilationSpec { radius, norm })
    }

    /// Whether `point` lies in the closed ball around `center`.
    pub fn covers(&self, center: &[f64], point: &[f64]) -> Result<bool> {
        Ok(crate::matching::distance(center, point, self.norm)? <= self.radius)
    }

    /// The dilated set of a scalar.
    pub fn interval(&self, y: f64) -> Interval {
        Interval::new(y - self.radius, y + self.radius)
    }
}

/// Draws `n` points uniformly with replacement from `sample`.
pub fn resample<R: Rng + ?Sized>(sample: &PointCloud, rng: &mut R) -> PointCloud {
    let n = sample.len();
    let dim = sample.dim();
    let mut coords = Vec::with_capacity(n * dim);
    for _ in 0..n {
        coords.extend_from_slice(sample.point(rng.random_range(0..n)));
    }
    PointCloud::from_flat(coords, dim, sample.norm()).expect("resampled points come from a valid cloud")
}

/// The `floor(B * alpha)`-th largest element of `etas`, duplicates counted
/// with multiplicity.
pub fn select_radius(etas: &[f64], alpha: f64) -> Result<f64> {
    if etas.is_empty() {
        return Err(invalid("no bootstrap costs to select from"));
    }
    check_alpha(alpha)?;
    let k = selection_rank(etas.len(), alpha)?;
    let mut sorted = etas.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    Ok(sorted[k - 1])
}

/// How each replicate's cost is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MatchStrategy {
    /// Order statistics in one dimension, bottleneck matching otherwise.
    #[default]
    Auto,
    /// Always run the general bottleneck solver.
    Bottleneck,
}

/// Bottleneck costs of `replicates` bootstrap samples. Replicate `b` uses the
/// generator [`task_rng`]`(seed, b)`, so the output does not depend on thread
/// scheduling.
pub fn bootstrap_etas(sample: &PointCloud, replicates: usize, seed: u64, strategy: MatchStrategy) -> Result<Vec<f64>> {
    if sample.dim() == 1 && strategy == MatchStrategy::Auto {
        let values = sample.coords();
        let mut sorted = values.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let sorted = &sorted;
        return Ok((0..replicates as u64)
            .into_par_iter()
            .map(|b| {
                // same draws as `resample`
                let mut rng = task_rng(seed, b);
                let n = values.len();
                let mut rep: Vec<f64> = (0..n).map(|_| values[rng.random_range(0..n)]).collect();
                rep.sort_unstable_by(f64::total_cmp);
                sorted_deviation_presorted(sorted, &rep)
            })
            .collect());
    }
    (0..replicates as u64)
        .into_par_iter()
        .map(|b| {
            let mut rng = task_rng(seed, b);
            let rep = resample(sample, &mut rng);
            bottleneck_match(&rep, sample).map(|m| m.cost)
        })
        .collect()
}

/// Bootstrap dilation radius at level `alpha`.
pub fn dilation_radius_bootstrap(sample: &PointCloud, config: &BootstrapConfig) -> Result<BootstrapSummary> {
    dilation_radius_bootstrap_with(sample, config, MatchStrategy::Auto)
}

pub fn dilation_radius_bootstrap_with(
    sample: &PointCloud,
    config: &BootstrapConfig,
    strategy: MatchStrategy,
) -> Result<BootstrapSummary> {
    config.validate()?;
    let etas = bootstrap_etas(sample, config.replicates, config.seed, strategy)?;
    let radius = select_radius(&etas, config.alpha)?;
    Ok(BootstrapSummary { etas, radius })
}
