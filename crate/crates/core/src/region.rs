//! Membership tests and confidence-region scans for monotone interval models.
//!
//! A parameter `θ` belongs to the region when the dilated model can
//! reproduce the empirical distribution: every half-line event carries at
//! least as much model probability as empirical probability. For monotone
//! interval correspondences the half-lines `(-inf, y]` and `[y, inf)` at the
//! sample points form a core determining class, so the check is `O(n)` per
//! `θ`:
//!
//! - upper family: `P_n(Y <= y) <= ν(l(U; θ) - η <= y)`
//! - lower family: `ν(r(U; θ) + η < y) <= P_n(Y < y)` (or `P_n(Y <= y)`)

use crate::bootstrap::check_alpha;
use crate::error::{invalid, Error, Result};
use crate::model::{compose_dilation, IntervalCorrespondence};
use crate::Interval;

/// How empirical mass at each sample point enters the half-line inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryConvention {
    /// Both families compare against the right-continuous empirical CDF
    /// `F_n(y)` at the sample points, and the upper family skips the sample
    /// maximum where `F_n = 1`. This is the operational test: with a latent
    /// law of unbounded support the exact half-line test below can never
    /// hold at the extreme order statistics.
    #[default]
    PlugIn,
    /// The literal half-line inequalities: `P_n(Y <= y)` for the upper
    /// family and the left limit `P_n(Y < y)` for the lower family, at every
    /// sample point.
    HalfLine,
}

/// Distinct sorted sample values with `P_n(Y < y)` and `P_n(Y <= y)`.
#[derive(Debug, Clone)]
pub(crate) struct EmpiricalSteps {
    pub(crate) values: Vec<f64>,
    pub(crate) below: Vec<f64>,
    pub(crate) at_most: Vec<f64>,
}

impl EmpiricalSteps {
    pub(crate) fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(i) = sample.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut steps = EmpiricalSteps { values: Vec::new(), below: Vec::new(), at_most: Vec::new() };
        let mut j = 0;
        while j < sorted.len() {
            let v = sorted[j];
            let mut k = j;
            while k < sorted.len() && sorted[k] == v {
                k += 1;
            }
            steps.values.push(v);
            steps.below.push(j as f64 / n);
            steps.at_most.push(k as f64 / n);
            j = k;
        }
        Ok(steps)
    }

    fn admits<C: IntervalCorrespondence>(&self, theta: f64, corr: &C, convention: BoundaryConvention) -> bool {
        self.admits_upper(theta, corr, convention) && self.admits_lower(theta, corr, convention)
    }

    /// `P_n(Y <= y) <= ν(l(U; θ) <= y)` at the sample points.
    fn admits_upper<C: IntervalCorrespondence>(&self, theta: f64, corr: &C, convention: BoundaryConvention) -> bool {
        let checked = match convention {
            BoundaryConvention::PlugIn => self.values.len() - 1,
            BoundaryConvention::HalfLine => self.values.len(),
        };
        self.values[..checked].iter().zip(&self.at_most).all(|(&y, &mass)| mass <= corr.prob_lower_at_most(y, theta))
    }

    /// `ν(r(U; θ) < y) <= P_n(Y < y)` (half-line) or `<= P_n(Y <= y)` (plug-in).
    fn admits_lower<C: IntervalCorrespondence>(&self, theta: f64, corr: &C, convention: BoundaryConvention) -> bool {
        let masses = match convention {
            BoundaryConvention::PlugIn => &self.at_most,
            BoundaryConvention::HalfLine => &self.below,
        };
        self.values.iter().zip(masses).all(|(&y, &mass)| corr.prob_upper_below(y, theta) <= mass)
    }
}

fn check_monotone<C: IntervalCorrespondence>(corr: &C) -> Result<()> {
    if corr.monotonicity().is_monotone() {
        Ok(())
    } else {
        Err(Error::NonMonotone)
    }
}

/// Whether `theta` is compatible with `sample` under `corr` dilated by `eta`,
/// using [`BoundaryConvention::PlugIn`].
pub fn membership_test<C: IntervalCorrespondence>(theta: f64, sample: &[f64], corr: &C, eta: f64) -> Result<bool> {
    membership_test_with(theta, sample, corr, eta, BoundaryConvention::default())
}

pub fn membership_test_with<C: IntervalCorrespondence>(
    theta: f64,
    sample: &[f64],
    corr: &C,
    eta: f64,
    convention: BoundaryConvention,
) -> Result<bool> {
    check_monotone(corr)?;
    let dilated = compose_dilation(corr, eta)?;
    Ok(EmpiricalSteps::new(sample)?.admits(theta, &dilated, convention))
}

/// Membership flags over a θ grid for one dilation radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionResult {
    pub theta_grid: Vec<f64>,
    pub member: Vec<bool>,
    pub radius: f64,
    pub alpha: f64,
}

impl RegionResult {
    pub fn members(&self) -> impl Iterator<Item = f64> + '_ {
        self.theta_grid.iter().zip(&self.member).filter(|(_, &m)| m).map(|(&t, _)| t)
    }

    pub fn is_empty(&self) -> bool {
        !self.member.iter().any(|&m| m)
    }

    /// Smallest and largest member, if any.
    pub fn bounds(&self) -> Option<Interval> {
        let mut it = self.members();
        let first = it.next()?;
        let last = it.last().unwrap_or(first);
        Some(Interval::new(first, last))
    }

    /// True flags form one run on the grid (vacuously true when empty).
    pub fn is_contiguous(&self) -> bool {
        let runs = self.member.iter().zip(self.member.iter().skip(1)).filter(|(a, b)| !**a && **b).count()
            + usize::from(self.member.first() == Some(&true));
        runs <= 1
    }

    /// Whether every grid point inside `set` is a member.
    pub fn covers(&self, set: Interval) -> bool {
        let tol = 1e-9 * (1.0 + set.lo.abs().max(set.hi.abs()));
        self.theta_grid
            .iter()
            .zip(&self.member)
            .filter(|(&t, _)| t >= set.lo - tol && t <= set.hi + tol)
            .all(|(_, &m)| m)
    }
}

/// `lo, lo + step, ...` up to `hi` (inclusive, within rounding).
pub fn theta_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !lo.is_finite() || !hi.is_finite() || hi < lo {
        return Err(invalid(format!("invalid grid {lo}:{hi}:{step}")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| lo + i as f64 * step).collect())
}

fn check_grid(theta_grid: &[f64]) -> Result<()> {
    if theta_grid.is_empty() {
        return Err(invalid("theta grid is empty"));
    }
    if theta_grid.windows(2).any(|w| !(w[0] <= w[1])) {
        return Err(invalid("theta grid must be sorted ascending"));
    }
    Ok(())
}

/// Runs [`membership_test`] at every grid point with `eta = radius`.
pub fn confidence_region_scan<C: IntervalCorrespondence>(
    sample: &[f64],
    radius: f64,
    theta_grid: &[f64],
    corr: &C,
    alpha: f64,
) -> Result<RegionResult> {
    confidence_region_scan_with(sample, radius, theta_grid, corr, alpha, BoundaryConvention::default())
}

pub fn confidence_region_scan_with<C: IntervalCorrespondence>(
    sample: &[f64],
    radius: f64,
    theta_grid: &[f64],
    corr: &C,
    alpha: f64,
    convention: BoundaryConvention,
) -> Result<RegionResult> {
    check_alpha(alpha)?;
    check_grid(theta_grid)?;
    check_monotone(corr)?;
    let steps = EmpiricalSteps::new(sample)?;
    let dilated = compose_dilation(corr, radius)?;
    let member = theta_grid.iter().map(|&t| steps.admits(t, &dilated, convention)).collect();
    Ok(RegionResult { theta_grid: theta_grid.to_vec(), member, radius, alpha })
}

/// Same result as [`confidence_region_scan`], found with two binary searches
/// over the grid when the model's half-line probabilities are monotone in
/// `θ` ([`IntervalCorrespondence::decreasing_in_theta`]); otherwise a full
/// scan.
pub fn confidence_region_bisect<C: IntervalCorrespondence>(
    sample: &[f64],
    radius: f64,
    theta_grid: &[f64],
    corr: &C,
    alpha: f64,
) -> Result<RegionResult> {
    if !corr.decreasing_in_theta() {
        return confidence_region_scan(sample, radius, theta_grid, corr, alpha);
    }
    check_alpha(alpha)?;
    check_grid(theta_grid)?;
    check_monotone(corr)?;
    let steps = EmpiricalSteps::new(sample)?;
    let dilated = compose_dilation(corr, radius)?;
    let convention = BoundaryConvention::default();
    let upper_end = theta_grid.partition_point(|&t| steps.admits_upper(t, &dilated, convention));
    let lower_start = theta_grid.partition_point(|&t| !steps.admits_lower(t, &dilated, convention));
    let member = (0..theta_grid.len()).map(|i| i >= lower_start && i < upper_end).collect();
    Ok(RegionResult { theta_grid: theta_grid.to_vec(), member, radius, alpha })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Monotonicity, ShiftModel};
    use crate::normal;

    struct Wiggly;

    impl IntervalCorrespondence for Wiggly {
        fn lower(&self, u: f64, _: f64) -> f64 {
            u.sin() - 1.0
        }
        fn upper(&self, u: f64, _: f64) -> f64 {
            u.sin() + 1.0
        }
        fn latent_cdf(&self, u: f64, t: f64) -> f64 {
            normal::cdf(u - t)
        }
        fn monotonicity(&self) -> Monotonicity {
            Monotonicity::Unknown
        }
        fn prob_lower_at_most(&self, _: f64, _: f64) -> f64 {
            unreachable!()
        }
        fn prob_upper_below(&self, _: f64, _: f64) -> f64 {
            unreachable!()
        }
    }

    #[test]
    fn wide_dilation_admits_theta_zero() {
        let g = ShiftModel::default();
        let sample = [-1.2, -0.3, 0.1, 0.4, 2.2];
        assert!(membership_test(0.0, &sample, &g, 10.0).unwrap());
        assert!(membership_test(0.0, &sample, &g, 0.5).unwrap());
    }

    #[test]
    fn far_theta_is_rejected() {
        let g = ShiftModel::default();
        let sample: Vec<f64> = (1..=100).map(|i| normal::quantile(i as f64 / 101.0)).collect();
        assert!(!membership_test(10.0, &sample, &g, 0.0).unwrap());
        assert!(!membership_test(-10.0, &sample, &g, 0.0).unwrap());
    }

    #[test]
    fn two_point_example_under_both_conventions() {
        let g = ShiftModel::default();
        let s = [-0.5, 0.5];
        // plug-in: 1/2 <= Φ(0.5), Φ(-1.5) <= 1/2, Φ(-0.5) <= 1
        assert!(membership_test(0.0, &s, &g, 0.0).unwrap());
        // literal half-lines need Φ(-1.5 - η) <= 0 at the minimum
        for eta in [0.0, 0.2, 5.0] {
            assert!(!membership_test_with(0.0, &s, &g, eta, BoundaryConvention::HalfLine).unwrap());
        }
    }

    #[test]
    fn half_line_fails_with_unbounded_latent() {
        // the sample sits deep inside the dilated model, yet the literal
        // test fails through the normal tails
        let g = ShiftModel::default();
        let s = [0.0];
        let p_low = normal::cdf(0.0 - 1.0 - 3.0);
        assert!(p_low > 0.0);
        assert!(!membership_test_with(0.0, &s, &g, 3.0, BoundaryConvention::HalfLine).unwrap());
    }

    #[test]
    fn ties_use_full_step() {
        // Three copies of 0: F_n(0) = 1, P_n(Y < 0) = 0.
        let g = ShiftModel::default();
        let steps = EmpiricalSteps::new(&[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(steps.values, vec![0.0]);
        assert_eq!(steps.below, vec![0.0]);
        assert_eq!(steps.at_most, vec![1.0]);
        assert!(membership_test(0.0, &[0.0, 0.0, 0.0], &g, 0.0).unwrap());
    }

    #[test]
    fn non_monotone_is_rejected() {
        assert_eq!(membership_test(0.0, &[0.0], &Wiggly, 0.1), Err(Error::NonMonotone));
        assert_eq!(confidence_region_scan(&[0.0], 0.1, &[0.0], &Wiggly, 0.05).unwrap_err(), Error::NonMonotone);
    }

    #[test]
    fn scan_validates_inputs() {
        let g = ShiftModel::default();
        assert!(confidence_region_scan(&[0.0], 0.1, &[], &g, 0.05).is_err());
        assert!(confidence_region_scan(&[0.0], 0.1, &[1.0, 0.0], &g, 0.05).is_err());
        assert!(confidence_region_scan(&[], 0.1, &[0.0], &g, 0.05).is_err());
        assert!(confidence_region_scan(&[0.0], 0.1, &[0.0], &g, 1.5).is_err());
    }

    #[test]
    fn huge_radius_admits_everything() {
        let g = ShiftModel::default();
        let grid = theta_grid(-3.0, 3.0, 0.5).unwrap();
        let r = confidence_region_scan(&[-0.7, 0.2, 1.1], 50.0, &grid, &g, 0.05).unwrap();
        assert!(r.member.iter().all(|&m| m));
        assert!(r.covers(Interval::new(-1.0, 1.0)));
        assert_eq!(r.bounds(), Some(Interval::new(-3.0, 3.0)));
    }

    #[test]
    fn misspecified_model_gives_empty_region() {
        // Data spread far wider than the model can produce with eta = 0.
        let g = ShiftModel::new(0.01, 0.01, 0.01).unwrap();
        let sample: Vec<f64> = (0..50).map(|i| (i as f64 - 25.0) * 0.4).collect();
        let grid = theta_grid(-3.0, 3.0, 0.01).unwrap();
        let r = confidence_region_scan(&sample, 0.0, &grid, &g, 0.05).unwrap();
        assert!(r.is_empty());
        assert_eq!(r.bounds(), None);
        assert!(r.is_contiguous());
    }

    #[test]
    fn theta_grid_hits_endpoints() {
        let g = theta_grid(-3.0, 3.0, 0.01).unwrap();
        assert_eq!(g.len(), 601);
        assert!((g[200] + 1.0).abs() < 1e-12);
        assert!((g[400] - 1.0).abs() < 1e-12);
        assert!((g[600] - 3.0).abs() < 1e-12);
        assert!(theta_grid(0.0, 1.0, 0.0).is_err());
        assert!(theta_grid(1.0, 0.0, 0.1).is_err());
    }

    #[test]
    fn contiguity() {
        let mk = |m: Vec<bool>| RegionResult {
            theta_grid: (0..m.len()).map(|i| i as f64).collect(),
            member: m,
            radius: 0.0,
            alpha: 0.05,
        };
        assert!(mk(vec![false, true, true, false]).is_contiguous());
        assert!(mk(vec![true, true, false]).is_contiguous());
        assert!(!mk(vec![true, false, true]).is_contiguous());
        assert!(!mk(vec![false, true, false, true]).is_contiguous());
    }
}
