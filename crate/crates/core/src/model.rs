//! Parametric interval correspondences `u -> [l(u; θ), r(u; θ)]` with a
//! latent variable `U ~ ν(· ; θ)`, and their composition with ball dilations.

use crate::error::{invalid, Result};
use crate::normal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    /// `l` and `r` nondecreasing in `u`.
    Nondecreasing,
    /// `l` and `r` nonincreasing in `u`.
    Nonincreasing,
    /// No monotonicity claim; half-line tests are not valid.
    Unknown,
}

impl Monotonicity {
    pub fn is_monotone(self) -> bool {
        self != Monotonicity::Unknown
    }
}

/// A model `Y ∈ [l(U; θ), r(U; θ)]`.
///
/// Implementors supply the two half-line probabilities used by the
/// membership test in closed form; for monotone endpoints these are values of
/// the latent CDF at inverted endpoints.
pub trait IntervalCorrespondence: Send + Sync {
    fn lower(&self, u: f64, theta: f64) -> f64;
    fn upper(&self, u: f64, theta: f64) -> f64;
    /// `F_U(u; θ)`
    fn latent_cdf(&self, u: f64, theta: f64) -> f64;
    fn monotonicity(&self) -> Monotonicity;
    /// `ν({u : l(u; θ) <= y})`, the probability that the interval reaches
    /// down to `y`.
    fn prob_lower_at_most(&self, y: f64, theta: f64) -> f64;
    /// `ν({u : r(u; θ) < y})`, the probability that the interval lies
    /// strictly below `y`.
    fn prob_upper_below(&self, y: f64, theta: f64) -> f64;
    /// Whether both half-line probabilities are nonincreasing in `θ` for
    /// every `y`. Then the upper family can only start failing, and the
    /// lower family only stop failing, as `θ` grows, and the region is an
    /// interval.
    fn decreasing_in_theta(&self) -> bool {
        false
    }
}

impl<C: IntervalCorrespondence + ?Sized> IntervalCorrespondence for &C {
    fn lower(&self, u: f64, theta: f64) -> f64 {
        (**self).lower(u, theta)
    }
    fn upper(&self, u: f64, theta: f64) -> f64 {
        (**self).upper(u, theta)
    }
    fn latent_cdf(&self, u: f64, theta: f64) -> f64 {
        (**self).latent_cdf(u, theta)
    }
    fn monotonicity(&self) -> Monotonicity {
        (**self).monotonicity()
    }
    fn prob_lower_at_most(&self, y: f64, theta: f64) -> f64 {
        (**self).prob_lower_at_most(y, theta)
    }
    fn prob_upper_below(&self, y: f64, theta: f64) -> f64 {
        (**self).prob_upper_below(y, theta)
    }
    fn decreasing_in_theta(&self) -> bool {
        (**self).decreasing_in_theta()
    }
}

/// `G(u) = [u - below, u + above]` with `U ~ N(θ, scale²)`.
///
/// The default is the unit-width design `[u - 1, u + 1]`, `U ~ N(θ, 1)`,
/// whose identified set under `Y ~ N(0, 1)` is `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftModel {
    pub below: f64,
    pub above: f64,
    pub scale: f64,
}

impl Default for ShiftModel {
    fn default() -> Self {
        ShiftModel { below: 1.0, above: 1.0, scale: 1.0 }
    }
}

impl ShiftModel {
    pub fn new(below: f64, above: f64, scale: f64) -> Result<Self> {
        if !(below + above >= 0.0) {
            return Err(invalid("interval must be nonempty: below + above >= 0"));
        }
        if !(scale > 0.0) {
            return Err(invalid("latent scale must be positive"));
        }
        Ok(ShiftModel { below, above, scale })
    }
}

impl IntervalCorrespondence for ShiftModel {
    fn lower(&self, u: f64, _theta: f64) -> f64 {
        u - self.below
    }
    fn upper(&self, u: f64, _theta: f64) -> f64 {
        u + self.above
    }
    fn latent_cdf(&self, u: f64, theta: f64) -> f64 {
        normal::cdf((u - theta) / self.scale)
    }
    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::Nondecreasing
    }
    fn prob_lower_at_most(&self, y: f64, theta: f64) -> f64 {
        self.latent_cdf(y + self.below, theta)
    }
    fn prob_upper_below(&self, y: f64, theta: f64) -> f64 {
        self.latent_cdf(y - self.above, theta)
    }
    fn decreasing_in_theta(&self) -> bool {
        true
    }
}

/// Portfolio share model `G(u) = [λ_lo / u, λ_hi / u]` for risk aversion
/// `u > 0`, with `U ~ Exponential(rate θ)`, `θ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PortfolioModel {
    pub lambda_lo: f64,
    pub lambda_hi: f64,
}

impl PortfolioModel {
    pub fn new(lambda_lo: f64, lambda_hi: f64) -> Result<Self> {
        if !(lambda_lo > 0.0 && lambda_lo <= lambda_hi) {
            return Err(invalid(format!("need 0 < lambda_lo <= lambda_hi, got ({lambda_lo}, {lambda_hi})")));
        }
        Ok(PortfolioModel { lambda_lo, lambda_hi })
    }

    /// `ν(λ / U <= y)` for `y > 0` is `P(U >= λ / y) = exp(-θ λ / y)`.
    fn tail(lambda: f64, y: f64, theta: f64) -> f64 {
        if y <= 0.0 {
            0.0
        } else {
            (-theta * lambda / y).exp()
        }
    }
}

impl IntervalCorrespondence for PortfolioModel {
    fn lower(&self, u: f64, _theta: f64) -> f64 {
        self.lambda_lo / u
    }
    fn upper(&self, u: f64, _theta: f64) -> f64 {
        self.lambda_hi / u
    }
    fn latent_cdf(&self, u: f64, theta: f64) -> f64 {
        if u <= 0.0 {
            0.0
        } else {
            1.0 - (-theta * u).exp()
        }
    }
    fn monotonicity(&self) -> Monotonicity {
        Monotonicity::Nonincreasing
    }
    fn prob_lower_at_most(&self, y: f64, theta: f64) -> f64 {
        Self::tail(self.lambda_lo, y, theta)
    }
    fn prob_upper_below(&self, y: f64, theta: f64) -> f64 {
        // continuous latent: P(λ/U < y) = P(λ/U <= y)
        Self::tail(self.lambda_hi, y, theta)
    }
    fn decreasing_in_theta(&self) -> bool {
        true
    }
}

/// `u -> [l(u; θ) - eta, r(u; θ) + eta]`, the composition of a
/// correspondence with the ball dilation of radius `eta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dilated<C> {
    inner: C,
    eta: f64,
}

impl<C> Dilated<C> {
    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn inner(&self) -> &C {
        &self.inner
    }

    /// Dilating again by `extra` adds the radii.
    pub fn compose(self, extra: f64) -> Result<Self> {
        check_radius(extra)?;
        Ok(Dilated { inner: self.inner, eta: self.eta + extra })
    }
}

fn check_radius(eta: f64) -> Result<()> {
    if eta >= 0.0 && eta.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("dilation radius must be finite and >= 0, got {eta}")))
    }
}

pub fn compose_dilation<C: IntervalCorrespondence>(corr: C, eta: f64) -> Result<Dilated<C>> {
    check_radius(eta)?;
    Ok(Dilated { inner: corr, eta })
}

impl<C: IntervalCorrespondence> IntervalCorrespondence for Dilated<C> {
    fn lower(&self, u: f64, theta: f64) -> f64 {
        self.inner.lower(u, theta) - self.eta
    }
    fn upper(&self, u: f64, theta: f64) -> f64 {
        self.inner.upper(u, theta) + self.eta
    }
    fn latent_cdf(&self, u: f64, theta: f64) -> f64 {
        self.inner.latent_cdf(u, theta)
    }
    fn monotonicity(&self) -> Monotonicity {
        self.inner.monotonicity()
    }
    fn prob_lower_at_most(&self, y: f64, theta: f64) -> f64 {
        self.inner.prob_lower_at_most(y + self.eta, theta)
    }
    fn prob_upper_below(&self, y: f64, theta: f64) -> f64 {
        self.inner.prob_upper_below(y - self.eta, theta)
    }
    fn decreasing_in_theta(&self) -> bool {
        self.inner.decreasing_in_theta()
    }
}
