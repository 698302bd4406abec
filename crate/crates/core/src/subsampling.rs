//! Criterion-function subsampling for set coverage, the comparison
//! procedure for the dilation bootstrap.
//!
//! The criterion at `θ` is
//!
//! ```text
//! sqrt(n) * max(0, max_j [F_n(Y_j) - ν(l <= Y_j)], max_j [ν(r < Y_j) - F_n(Y_j-)])
//! ```
//!
//! which for the shift design reads `F_n(Y_j) - F_U(Y_j + 1)` and
//! `F_U(Y_j - 1) - F_n(Y_j-)`. The identified set is taken as known, so the
//! critical value is the `1 - alpha` quantile of the supremum over that set of
//! the same criterion computed on subsamples drawn without replacement and
//! scaled by `sqrt(b)`.

use rand::seq::index;
use rayon::prelude::*;

use crate::bootstrap::check_alpha;
use crate::error::{invalid, Error, Result};
use crate::model::{IntervalCorrespondence, ShiftModel};
use crate::region::{EmpiricalSteps, RegionResult};
use crate::seed::task_rng;
use crate::Interval;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubsampleConfig {
    pub subsample_size: usize,
    pub num_subsamples: usize,
    pub alpha: f64,
    pub seed: u64,
    pub known_identified_set: Interval,
}

impl SubsampleConfig {
    /// Checks everything except `b < n`, which needs the sample.
    pub fn validate(&self) -> Result<()> {
        if self.subsample_size == 0 || self.num_subsamples == 0 {
            return Err(invalid("subsample size and count must be positive"));
        }
        check_alpha(self.alpha)?;
        let set = self.known_identified_set;
        if !(set.lo <= set.hi) {
            return Err(invalid(format!("identified set [{}, {}] is empty", set.lo, set.hi)));
        }
        Ok(())
    }

    fn validate_for(&self, n: usize) -> Result<()> {
        self.validate()?;
        if self.subsample_size >= n {
            return Err(invalid(format!(
                "subsample size {} must be smaller than the sample size {n}",
                self.subsample_size
            )));
        }
        Ok(())
    }
}

/// Unscaled upper and lower family terms at `theta`.
fn criterion_parts<C: IntervalCorrespondence>(steps: &EmpiricalSteps, theta: f64, corr: &C) -> (f64, f64) {
    let mut up = f64::NEG_INFINITY;
    let mut lo = f64::NEG_INFINITY;
    for ((&y, &below), &at_most) in steps.values.iter().zip(&steps.below).zip(&steps.at_most) {
        up = up.max(at_most - corr.prob_lower_at_most(y, theta));
        lo = lo.max(corr.prob_upper_below(y, theta) - below);
    }
    (up, lo)
}

/// Criterion for the unit-width shift design `[U - 1, U + 1]`, `U ~ N(θ, 1)`.
pub fn cht_criterion(theta: f64, sample: &[f64]) -> Result<f64> {
    cht_criterion_for(theta, sample, &ShiftModel::default())
}

pub fn cht_criterion_for<C: IntervalCorrespondence>(theta: f64, sample: &[f64], corr: &C) -> Result<f64> {
    let steps = EmpiricalSteps::new(sample)?;
    let (up, lo) = criterion_parts(&steps, theta, corr);
    Ok((sample.len() as f64).sqrt() * up.max(lo).max(0.0))
}

/// Half-line probabilities at every sorted sample point for the θ values
/// that can attain the supremum over the known set.
struct SupTable {
    sorted: Vec<f64>,
    /// `ν(l <= Y_(i); θ)`, one row per candidate θ for the upper family
    upper: Vec<Vec<f64>>,
    /// `ν(r < Y_(i); θ)`, one row per candidate θ for the lower family
    lower: Vec<Vec<f64>>,
}

impl SupTable {
    fn new<C: IntervalCorrespondence>(sample: &[f64], set_grid: &[f64], corr: &C) -> Self {
        let mut sorted = sample.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        // With probabilities nonincreasing in θ the upper term peaks at the
        // largest θ and the lower term at the smallest.
        let (up_thetas, lo_thetas) = if corr.decreasing_in_theta() {
            (&set_grid[set_grid.len() - 1..], &set_grid[..1])
        } else {
            (set_grid, set_grid)
        };
        let upper =
            up_thetas.iter().map(|&t| sorted.iter().map(|&y| corr.prob_lower_at_most(y, t)).collect()).collect();
        let lower = lo_thetas.iter().map(|&t| sorted.iter().map(|&y| corr.prob_upper_below(y, t)).collect()).collect();
        SupTable { sorted, upper, lower }
    }

    /// `sqrt(b) * sup_θ criterion` on the subsample given by ascending ranks.
    fn sup(&self, ranks: &[usize]) -> f64 {
        let b = ranks.len() as f64;
        let mut up = vec![f64::NEG_INFINITY; self.upper.len()];
        let mut lo = vec![f64::NEG_INFINITY; self.lower.len()];
        let mut j = 0;
        while j < ranks.len() {
            let first = ranks[j];
            let mut k = j + 1;
            while k < ranks.len() && self.sorted[ranks[k]] == self.sorted[first] {
                k += 1;
            }
            let below = j as f64 / b;
            let at_most = k as f64 / b;
            for (acc, row) in up.iter_mut().zip(&self.upper) {
                *acc = acc.max(at_most - row[first]);
            }
            for (acc, row) in lo.iter_mut().zip(&self.lower) {
                *acc = acc.max(row[first] - below);
            }
            j = k;
        }
        let worst = up.into_iter().chain(lo).fold(0.0, f64::max);
        b.sqrt() * worst
    }
}

fn known_set_grid(theta_grid: &[f64], set: Interval) -> Result<Vec<f64>> {
    let tol = 1e-9 * (1.0 + set.lo.abs().max(set.hi.abs()));
    let inside: Vec<f64> = theta_grid.iter().copied().filter(|&t| t >= set.lo - tol && t <= set.hi + tol).collect();
    if inside.is_empty() {
        return Err(invalid("no grid point falls inside the known identified set"));
    }
    Ok(inside)
}

fn check_sorted_grid(theta_grid: &[f64]) -> Result<()> {
    if theta_grid.is_empty() {
        return Err(invalid("theta grid is empty"));
    }
    if theta_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(invalid("theta grid must be sorted ascending"));
    }
    Ok(())
}

/// Subsample suprema of the `sqrt(b)`-scaled criterion over the grid points
/// of the known identified set, in subsample order.
pub fn cht_subsample_sups<C: IntervalCorrespondence>(
    sample: &[f64],
    config: &SubsampleConfig,
    theta_grid: &[f64],
    corr: &C,
) -> Result<Vec<f64>> {
    let n = sample.len();
    if n == 0 {
        return Err(Error::EmptyCloud);
    }
    if let Some(i) = sample.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    config.validate_for(n)?;
    check_sorted_grid(theta_grid)?;
    let set_grid = known_set_grid(theta_grid, config.known_identified_set)?;
    let table = SupTable::new(sample, &set_grid, corr);
    // rank of each original observation in the sorted sample
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sample[a].total_cmp(&sample[b]));
    let mut rank = vec![0; n];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let b = config.subsample_size;
    Ok((0..config.num_subsamples)
        .into_par_iter()
        .map_init(
            || (vec![false; n], Vec::with_capacity(b)),
            |(chosen, ranks), s| {
                let mut rng = task_rng(config.seed, s as u64);
                for i in index::sample(&mut rng, n, b) {
                    chosen[rank[i]] = true;
                }
                ranks.clear();
                for (r, flag) in chosen.iter_mut().enumerate() {
                    if *flag {
                        ranks.push(r);
                        *flag = false;
                    }
                }
                table.sup(ranks)
            },
        )
        .collect())
}

/// `1 - alpha` empirical quantile: the smallest order statistic whose
/// empirical frequency reaches `1 - alpha`.
pub fn cht_critical_value(sups: &[f64], alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if sups.is_empty() {
        return Err(invalid("no subsample statistics"));
    }
    let mut sorted = sups.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let m = sorted.len();
    let needed = ((1.0 - alpha) * m as f64 - 1e-9).ceil().max(1.0) as usize;
    Ok(sorted[needed.min(m) - 1])
}

/// Region for the shift design; see [`cht_region_for`].
pub fn cht_region(sample: &[f64], config: &SubsampleConfig, theta_grid: &[f64]) -> Result<RegionResult> {
    cht_region_for(sample, config, theta_grid, &ShiftModel::default())
}

/// `{θ : criterion(θ) <= ĉ}` on the grid, with `ĉ` from the subsample
/// distribution. The critical value is stored in `radius`.
pub fn cht_region_for<C: IntervalCorrespondence>(
    sample: &[f64],
    config: &SubsampleConfig,
    theta_grid: &[f64],
    corr: &C,
) -> Result<RegionResult> {
    let sups = cht_subsample_sups(sample, config, theta_grid, corr)?;
    let critical = cht_critical_value(&sups, config.alpha)?;
    cht_region_at(sample, critical, theta_grid, corr, config.alpha)
}

/// Region for a given critical value.
pub fn cht_region_at<C: IntervalCorrespondence>(
    sample: &[f64],
    critical: f64,
    theta_grid: &[f64],
    corr: &C,
    alpha: f64,
) -> Result<RegionResult> {
    check_sorted_grid(theta_grid)?;
    if !(critical >= 0.0) {
        return Err(invalid(format!("critical value must be >= 0, got {critical}")));
    }
    let steps = EmpiricalSteps::new(sample)?;
    let root_n = (sample.len() as f64).sqrt();
    let member = if corr.decreasing_in_theta() {
        // upper term nondecreasing and lower term nonincreasing in θ
        let upper_end = theta_grid.partition_point(|&t| root_n * criterion_parts(&steps, t, corr).0 <= critical);
        let lower_start = theta_grid.partition_point(|&t| root_n * criterion_parts(&steps, t, corr).1 > critical);
        (0..theta_grid.len()).map(|i| i >= lower_start && i < upper_end).collect()
    } else {
        theta_grid
            .iter()
            .map(|&t| {
                let (up, lo) = criterion_parts(&steps, t, corr);
                root_n * up.max(lo).max(0.0) <= critical
            })
            .collect()
    };
    Ok(RegionResult { theta_grid: theta_grid.to_vec(), member, radius: critical, alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal;
    use crate::region::theta_grid;

    fn config(b: usize, alpha: f64) -> SubsampleConfig {
        SubsampleConfig {
            subsample_size: b,
            num_subsamples: 200,
            alpha,
            seed: 11,
            known_identified_set: Interval::new(-1.0, 1.0),
        }
    }

    fn normal_sample(n: usize, seed: u64) -> Vec<f64> {
        use rand_distr::{Distribution, StandardNormal};
        let mut rng = task_rng(seed, 0);
        (0..n).map(|_| StandardNormal.sample(&mut rng)).collect()
    }

    #[test]
    fn single_point_far_from_model() {
        // upper term 1 - Φ(0 + 1 - 3)
        let c = cht_criterion(3.0, &[0.0]).unwrap();
        assert!((c - 0.9772498680518208).abs() < 1e-12, "{c}");
        // lower term Φ(0 - 1 + 3) - 0
        let c = cht_criterion(-3.0, &[0.0]).unwrap();
        assert!((c - normal::cdf(2.0)).abs() < 1e-12);
    }

    #[test]
    fn criterion_matches_explicit_formula() {
        let y = [-0.7, 0.1, 0.4, 1.3];
        let theta = 0.25;
        let n = y.len() as f64;
        let mut up: f64 = 0.0;
        let mut lo: f64 = 0.0;
        for (j, &v) in y.iter().enumerate() {
            up = up.max((j + 1) as f64 / n - normal::cdf(v + 1.0 - theta));
            lo = lo.max(normal::cdf(v - 1.0 - theta) - j as f64 / n);
        }
        let expected = n.sqrt() * up.max(lo);
        assert!((cht_criterion(theta, &y).unwrap() - expected).abs() < 1e-14);
    }

    #[test]
    fn criterion_small_inside_identified_set() {
        let y = normal_sample(2000, 3);
        let c = cht_criterion(0.0, &y).unwrap();
        assert!((0.0..0.5).contains(&c), "{c}");
        assert!(cht_criterion(2.5, &y).unwrap() > 10.0);
    }

    #[test]
    fn subsample_size_must_be_below_n() {
        let y = normal_sample(20, 1);
        let grid = theta_grid(-3.0, 3.0, 0.01).unwrap();
        assert!(cht_region(&y, &config(20, 0.05), &grid).is_err());
        assert!(cht_region(&y, &config(25, 0.05), &grid).is_err());
        assert!(cht_region(&y, &config(0, 0.05), &grid).is_err());
        let mut bad = config(10, 0.05);
        bad.known_identified_set = Interval::new(1.0, -1.0);
        assert!(cht_region(&y, &bad, &grid).is_err());
    }

    #[test]
    fn subsamples_do_not_repeat_indices() {
        let mut rng = task_rng(5, 9);
        for _ in 0..200 {
            let mut idx: Vec<usize> = index::sample(&mut rng, 50, 45).into_vec();
            idx.sort_unstable();
            idx.dedup();
            assert_eq!(idx.len(), 45);
        }
    }

    #[test]
    fn fast_sup_matches_direct_scan() {
        let y = normal_sample(40, 8);
        let grid = theta_grid(-3.0, 3.0, 0.05).unwrap();
        let cfg = config(30, 0.05);
        let sups = cht_subsample_sups(&y, &cfg, &grid, &ShiftModel::default()).unwrap();
        let set_grid = known_set_grid(&grid, cfg.known_identified_set).unwrap();
        for (s, &fast) in sups.iter().enumerate().take(20) {
            let mut rng = task_rng(cfg.seed, s as u64);
            let sub: Vec<f64> = index::sample(&mut rng, 40, 30).into_iter().map(|i| y[i]).collect();
            let direct = set_grid.iter().map(|&t| cht_criterion(t, &sub).unwrap()).fold(0.0, f64::max);
            assert!((fast - direct).abs() < 1e-12, "{fast} vs {direct}");
        }
    }

    #[test]
    fn region_grows_with_critical_value() {
        let y = normal_sample(60, 4);
        let grid = theta_grid(-3.0, 3.0, 0.01).unwrap();
        let g = ShiftModel::default();
        let mut prev: Option<RegionResult> = None;
        for c in [0.0, 0.3, 0.6, 1.0, 2.0, 5.0] {
            let r = cht_region_at(&y, c, &grid, &g, 0.05).unwrap();
            assert!(r.is_contiguous());
            if let Some(p) = prev {
                assert!(p.member.iter().zip(&r.member).all(|(a, b)| !a || *b));
            }
            prev = Some(r);
        }
    }

    #[test]
    fn bisected_region_matches_full_scan() {
        struct Opaque(ShiftModel);
        impl IntervalCorrespondence for Opaque {
            fn lower(&self, u: f64, t: f64) -> f64 {
                self.0.lower(u, t)
            }
            fn upper(&self, u: f64, t: f64) -> f64 {
                self.0.upper(u, t)
            }
            fn latent_cdf(&self, u: f64, t: f64) -> f64 {
                self.0.latent_cdf(u, t)
            }
            fn monotonicity(&self) -> crate::model::Monotonicity {
                self.0.monotonicity()
            }
            fn prob_lower_at_most(&self, y: f64, t: f64) -> f64 {
                self.0.prob_lower_at_most(y, t)
            }
            fn prob_upper_below(&self, y: f64, t: f64) -> f64 {
                self.0.prob_upper_below(y, t)
            }
        }
        let grid = theta_grid(-3.0, 3.0, 0.01).unwrap();
        for seed in 0..10 {
            let y = normal_sample(80, seed);
            for c in [0.2, 0.7, 1.5] {
                let fast = cht_region_at(&y, c, &grid, &ShiftModel::default(), 0.05).unwrap();
                let slow = cht_region_at(&y, c, &grid, &Opaque(ShiftModel::default()), 0.05).unwrap();
                assert_eq!(fast, slow);
            }
            let cfg = config(60, 0.1);
            let a = cht_subsample_sups(&y, &cfg, &grid, &ShiftModel::default()).unwrap();
            let b = cht_subsample_sups(&y, &cfg, &grid, &Opaque(ShiftModel::default())).unwrap();
            for (x, z) in a.iter().zip(&b) {
                assert!((x - z).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn region_is_deterministic_and_contiguous() {
        let y = normal_sample(100, 6);
        let grid = theta_grid(-3.0, 3.0, 0.01).unwrap();
        let a = cht_region(&y, &config(92, 0.05), &grid).unwrap();
        let b = cht_region(&y, &config(92, 0.05), &grid).unwrap();
        assert_eq!(a, b);
        assert!(a.is_contiguous());
        assert!(!a.is_empty());
        // a larger alpha gives a smaller critical value
        let loose = cht_region(&y, &config(92, 0.5), &grid).unwrap();
        assert!(loose.radius <= a.radius);
    }

    #[test]
    fn critical_value_order_statistic() {
        let sups: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(cht_critical_value(&sups, 0.05).unwrap(), 95.0);
        assert_eq!(cht_critical_value(&sups, 0.10).unwrap(), 90.0);
        assert_eq!(cht_critical_value(&[3.0], 0.5).unwrap(), 3.0);
        assert!(cht_critical_value(&sups, 1.0).is_err());
    }
}
