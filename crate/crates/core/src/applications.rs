//! Closed-form dilations and identified sets for the portfolio-choice and
//! voting examples.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::bootstrap::check_alpha;
use crate::error::{invalid, Result};
use crate::matching::Norm;
use crate::normal;
use crate::seed::task_rng;
use crate::Interval;

/// Identified set `[1/λ_hi, 1/λ_lo]` of the exponential risk-aversion rate
/// in the portfolio model. It does not depend on the measurement-error
/// radius `eta`, which drops out as `u -> 0`.
pub fn cara_identified_set(lambda_lo: f64, lambda_hi: f64, eta: f64) -> Result<Interval> {
    check_lambdas(lambda_lo, lambda_hi)?;
    if !(eta >= 0.0) {
        return Err(invalid(format!("eta must be >= 0, got {eta}")));
    }
    Ok(Interval::new(1.0 / lambda_hi, 1.0 / lambda_lo))
}

fn check_lambdas(lambda_lo: f64, lambda_hi: f64) -> Result<()> {
    if lambda_lo > 0.0 && lambda_lo <= lambda_hi && lambda_hi.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("need 0 < lambda_lo <= lambda_hi, got ({lambda_lo}, {lambda_hi})")))
    }
}

/// Grid points `θ` satisfying `(λ_hi + η u)^-1 <= θ <= (λ_lo - η u)^-1` for
/// every `u` in `u_grid`, reported as the smallest and largest survivor.
/// When `λ_lo - η u <= 0` the upper constraint is vacuous.
pub fn cara_constraint_scan(
    lambda_lo: f64,
    lambda_hi: f64,
    eta: f64,
    theta_grid: &[f64],
    u_grid: &[f64],
) -> Result<Option<Interval>> {
    check_lambdas(lambda_lo, lambda_hi)?;
    if u_grid.iter().any(|&u| !(u > 0.0)) {
        return Err(invalid("risk aversion grid must be positive"));
    }
    let mut lower = f64::NEG_INFINITY;
    let mut upper = f64::INFINITY;
    for &u in u_grid {
        lower = lower.max(1.0 / (lambda_hi + eta * u));
        let denom = lambda_lo - eta * u;
        if denom > 0.0 {
            upper = upper.min(1.0 / denom);
        }
    }
    let mut survivors = theta_grid.iter().copied().filter(|&t| t >= lower && t <= upper);
    Ok(survivors.next().map(|first| {
        let last = survivors.next_back().unwrap_or(first);
        Interval::new(first, last)
    }))
}

/// Geometric grid of `count` risk-aversion values from `lo` to `hi`.
pub fn geometric_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    (0..count).map(|i| lo * ratio.powi(i as i32)).collect()
}

/// Two-party dilation radius `z_{1-α/2} sqrt(p (1 - p) / n)`.
pub fn voting_radius_two_party(p: f64, voters: u64, alpha: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(invalid(format!("vote share must lie in (0, 1), got {p}")));
    }
    if voters == 0 {
        return Err(invalid("district must have voters"));
    }
    check_alpha(alpha)?;
    Ok(normal::quantile(1.0 - alpha / 2.0) * (p * (1.0 - p) / voters as f64).sqrt())
}

const DRAWS_PER_TASK: usize = 4096;

/// Monte Carlo radius `η` with `P(‖Z‖ <= η) >= 1 - α` for
/// `Z ~ N(0, V / n)`, `V = diag(p) - p pᵀ`.
///
/// `Z` is drawn as `A W / sqrt(n)` with `W` standard normal and
/// `A = diag(sqrt p) - p sqrt(p)ᵀ`, which satisfies `A Aᵀ = V` when the
/// shares sum to one.
pub fn voting_radius_multiparty(
    p: &[f64],
    voters: u64,
    alpha: f64,
    mc_draws: usize,
    seed: u64,
    norm: Norm,
) -> Result<f64> {
    if p.len() < 2 {
        return Err(invalid("need at least two parties"));
    }
    if p.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(invalid("every vote share must lie in (0, 1)"));
    }
    let total: f64 = p.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(invalid(format!("vote shares must sum to 1, got {total}")));
    }
    if voters == 0 || mc_draws == 0 {
        return Err(invalid("voters and mc_draws must be positive"));
    }
    check_alpha(alpha)?;

    let k = p.len();
    let sqrt_p: Vec<f64> = p.iter().map(|x| x.sqrt()).collect();
    let scale = 1.0 / (voters as f64).sqrt();
    let tasks = mc_draws.div_ceil(DRAWS_PER_TASK);
    let mut norms: Vec<f64> = (0..tasks)
        .into_par_iter()
        .flat_map_iter(|task| {
            let mut rng = task_rng(seed, task as u64);
            let count = DRAWS_PER_TASK.min(mc_draws - task * DRAWS_PER_TASK);
            let mut w = vec![0.0; k];
            let sqrt_p = &sqrt_p;
            (0..count)
                .map(|_| {
                    for wi in w.iter_mut() {
                        *wi = StandardNormal.sample(&mut rng);
                    }
                    let proj: f64 = sqrt_p.iter().zip(&w).map(|(s, x)| s * x).sum();
                    let z = (0..k).map(|i| scale * (sqrt_p[i] * w[i] - p[i] * proj));
                    match norm {
                        Norm::Sup => z.fold(0.0, |m, v| f64::max(m, v.abs())),
                        Norm::Euclidean => z.map(|v| v * v).sum::<f64>().sqrt(),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect();
    norms.sort_unstable_by(f64::total_cmp);
    // smallest order statistic whose empirical frequency reaches 1 - alpha
    let needed = (((1.0 - alpha) * mc_draws as f64) - 1e-9).ceil().max(1.0) as usize;
    Ok(norms[needed.min(mc_draws) - 1])
}
