//! Empirical quantile functions, the quantile process, and Kolmogorov
//! (Brownian bridge sup-norm) critical values.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::bootstrap::check_alpha;
use crate::error::{invalid, Error, Result};
use crate::matching::sorted_deviation;
use crate::Interval;

const SERIES_TERM_CUTOFF: f64 = 1e-12;
const ROOT_TOLERANCE: f64 = 1e-8;

/// Step quantile function of a sample: `Q_n(t) = Y_(j)` for `j - 1 < n t <= j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFunction {
    sorted: Vec<f64>,
}

impl QuantileFunction {
    pub fn new(sample: &[f64]) -> Result<Self> {
        if sample.is_empty() {
            return Err(Error::EmptyCloud);
        }
        if let Some(i) = sample.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        let mut sorted = sample.to_vec();
        sorted.sort_unstable_by(f64::total_cmp);
        Ok(QuantileFunction { sorted })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    /// Order statistics, ascending.
    pub fn order_statistics(&self) -> &[f64] {
        &self.sorted
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(invalid(format!("quantile level must lie in (0, 1], got {t}")));
        }
        let n = self.sorted.len();
        // smallest j with n t <= j; n * (j/n) may land an ulp above j
        let nt = n as f64 * t;
        let nearest = nt.round();
        let j = if (nt - nearest).abs() <= 4.0 * f64::EPSILON * nt { nearest } else { nt.ceil() };
        let j = j.clamp(1.0, n as f64) as usize;
        Ok(self.sorted[j - 1])
    }
}

pub fn empirical_quantile(q: &QuantileFunction, t: f64) -> Result<f64> {
    q.value(t)
}

/// `P(sup_t |B(t)| <= x)` for a Brownian bridge `B`.
///
/// Uses `1 - 2 Σ (-1)^(k+1) exp(-2 k² x²)` for `x >= 1` and the Jacobi theta
/// form `sqrt(2π)/x Σ exp(-(2k-1)² π² / (8 x²))` below, where the alternating
/// series converges slowly.
pub fn kolmogorov_cdf(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < 1.0 {
        let a = PI * PI / (8.0 * x * x);
        let mut sum = 0.0;
        let mut k = 1.0f64;
        loop {
            let term = (-(2.0 * k - 1.0).powi(2) * a).exp();
            sum += term;
            if term < SERIES_TERM_CUTOFF {
                break;
            }
            k += 1.0;
        }
        return ((2.0 * PI).sqrt() / x * sum).min(1.0);
    }
    let mut sum = 0.0;
    let mut k = 1.0f64;
    loop {
        let term = (-2.0 * k * k * x * x).exp();
        sum += if k as u64 % 2 == 1 { term } else { -term };
        if term < SERIES_TERM_CUTOFF {
            break;
        }
        k += 1.0;
    }
    (1.0 - 2.0 * sum).clamp(0.0, 1.0)
}

/// `c(alpha)` with `P(sup_t |B(t)| <= c) = 1 - alpha`, by bisection.
pub fn kolmogorov_quantile(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let target = 1.0 - alpha;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while kolmogorov_cdf(hi) < target {
        hi *= 2.0;
    }
    while hi - lo > ROOT_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if kolmogorov_cdf(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// A density `f` that is positive on its support `(a, b)`. Positivity is the
/// caller's claim; it is checked only at the points where `f` is evaluated.
#[derive(Clone)]
pub struct DensityHandle {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    support: (f64, f64),
}

impl DensityHandle {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static, support: (f64, f64)) -> Self {
        DensityHandle { f: Arc::new(f), support }
    }

    pub fn standard_normal() -> Self {
        Self::new(crate::normal::pdf, (f64::NEG_INFINITY, f64::INFINITY))
    }

    pub fn support(&self) -> (f64, f64) {
        self.support
    }

    /// `f(y)`, zero outside the open support.
    pub fn eval(&self, y: f64) -> f64 {
        if y > self.support.0 && y < self.support.1 {
            (self.f)(y)
        } else {
            0.0
        }
    }
}

impl fmt::Debug for DensityHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityHandle").field("support", &self.support).finish_non_exhaustive()
    }
}

/// The infeasible oracle dilation `[y - c(α)/(√n f(y)), y + c(α)/(√n f(y))]`.
pub fn oracle_dilation_interval(y: f64, n: usize, alpha: f64, f: &DensityHandle) -> Result<Interval> {
    if n == 0 {
        return Err(invalid("sample size must be positive"));
    }
    let density = f.eval(y);
    if !(density > 0.0) {
        return Err(Error::NonPositiveDensity(y));
    }
    let half = kolmogorov_quantile(alpha)? / ((n as f64).sqrt() * density);
    Ok(Interval::new(y - half, y + half))
}

/// `sup_t |Q_n^b(t) - Q_n(t)| = max_j |replicate_(j) - sample_(j)|`, without
/// the `√n` factor of the bootstrap quantile process.
pub fn bootstrap_quantile_sup(sample: &[f64], replicate: &[f64]) -> Result<f64> {
    if sample.len() != replicate.len() {
        return Err(Error::SizeMismatch(sample.len(), replicate.len()));
    }
    if sample.is_empty() {
        return Err(Error::EmptyCloud);
    }
    Ok(sorted_deviation(sample, replicate))
}

/// `√n sup_t f(Q(t)) |Q_n(t) - Q(t)|`, the weighted quantile process whose
/// limit is the sup of a Brownian bridge.
///
/// On each step `((j-1)/n, j/n]` the sup is approximated by evaluating both
/// step edges and `points_per_step` interior levels.
pub fn weighted_quantile_process_sup(
    q: &QuantileFunction,
    true_quantile: impl Fn(f64) -> f64,
    f: &DensityHandle,
    points_per_step: usize,
) -> f64 {
    let n = q.len();
    let nf = n as f64;
    let mut sup = 0.0f64;
    let mut visit = |t: f64, y: f64| {
        if t <= 0.0 || t >= 1.0 {
            return;
        }
        let x = true_quantile(t);
        let v = f.eval(x) * (y - x).abs();
        if v.is_finite() {
            sup = sup.max(v);
        }
    };
    for (j, &y) in q.order_statistics().iter().enumerate() {
        let (a, b) = (j as f64 / nf, (j + 1) as f64 / nf);
        visit(a, y);
        visit(b, y);
        for m in 0..points_per_step {
            visit(a + (b - a) * (m as f64 + 0.5) / points_per_step as f64, y);
        }
    }
    nf.sqrt() * sup
}
