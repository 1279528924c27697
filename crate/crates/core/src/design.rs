//! Retrospective design analysis at unit effect size.
//!
//! Measurement units are scaled so that the true effect is `θ = 1`; a design
//! is then fully described by the two-sided level `alpha` and the standard
//! error `tau` of the estimate, or equivalently by `alpha` and the power.

use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::distributions::{
    phi, phi_inv, phi_inv_upper, phi_upper, t_cdf, t_quantile, t_sf, trunc_norm_mean, Interval,
};
use crate::error::{check_positive, check_probability};
use crate::roots;
use crate::{Error, Result};

/// Bracket for the standard-error search.
pub const TAU_BRACKET: (f64, f64) = (1e-9, 1e6);

/// A two-sided test design: level `alpha` and power at unit effect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignPoint {
    alpha: f64,
    power: f64,
}

impl DesignPoint {
    pub fn new(alpha: f64, power: f64) -> Result<Self> {
        check_probability("alpha", alpha)?;
        check_probability("power", power)?;
        if power <= alpha {
            return Err(Error::domain(format!(
                "power must exceed alpha (power = {power}, alpha = {alpha})"
            )));
        }
        Ok(Self { alpha, power })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn power(&self) -> f64 {
        self.power
    }
}

/// Quantities derived from a design at unit effect.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignAnalysis {
    pub alpha: f64,
    /// Power achieved at `tau`.
    pub power: f64,
    /// Standard error of the estimate.
    pub tau: f64,
    /// Rejection threshold for `|θ̂|`.
    pub crit_z: f64,
    /// Probability that a rejection has the wrong sign.
    pub type_s: f64,
    /// Smallest `|θ̂/θ|` that can be significant; equals `crit_z` at `θ = 1`.
    pub min_ratio: f64,
    /// `E[|θ̂/θ| | rejection]`.
    pub exaggeration: f64,
    /// `E[θ̂ | θ̂ >= crit_z]`
    pub pos_mean: f64,
    /// `E[θ̂ | θ̂ <= -crit_z]`
    pub neg_mean: f64,
}

/// Result of [`retrodesign_mc`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McResult {
    pub power: f64,
    pub type_s: f64,
    /// Mean of `|estimate| / effect` over significant draws.
    pub exaggeration: f64,
    /// Monte Carlo standard error of `exaggeration`.
    pub exaggeration_se: f64,
    pub n_significant: usize,
    pub n_sims: usize,
    pub seed: u64,
}

fn check_tau(tau: f64) -> Result<()> {
    check_positive("tau", tau)
}

/// Two-sided critical value `Φ⁻¹(1 − alpha/2)`.
fn two_sided_z(alpha: f64) -> f64 {
    phi_inv_upper(0.5 * alpha)
}

/// Power of the two-sided level-`alpha` z-test when `θ̂ ~ N(1, tau²)`:
/// `Φ(−z + 1/τ) + Φ(−z − 1/τ)`. `tau = +inf` gives `alpha`.
pub fn power_two_sided(tau: f64, alpha: f64) -> Result<f64> {
    check_tau(tau)?;
    check_probability("alpha", alpha)?;
    let z = two_sided_z(alpha);
    let shift = 1.0 / tau;
    Ok(phi_upper(z - shift) + phi(-z - shift))
}

/// Finds the standard error at which the design reaches its stated power.
pub fn solve_tau(d: &DesignPoint) -> Result<f64> {
    let (lo, hi) = TAU_BRACKET;
    let z = two_sided_z(d.alpha);
    let target = d.power;
    // power is strictly decreasing in tau; search on log(tau)
    let f = |u: f64| {
        let shift = (-u).exp();
        phi_upper(z - shift) + phi(-z - shift) - target
    };
    let u = roots::brent(f, lo.ln(), hi.ln(), 1e-13, roots::MAX_ITER)?;
    let tau = u.exp();
    let residual = (power_two_sided(tau, d.alpha)? - target).abs();
    if residual > 1e-10 {
        return Err(Error::numeric(format!(
            "tau search converged to {tau} with power residual {residual:e}"
        )));
    }
    Ok(tau)
}

/// Conditional probability that a rejection has the wrong sign.
pub fn type_s(tau: f64, alpha: f64) -> Result<f64> {
    let power = power_two_sided(tau, alpha)?;
    let z = two_sided_z(alpha);
    Ok(phi(-z - 1.0 / tau) / power)
}

/// Full analysis of a design: solves for `tau`, then computes the
/// truncated means on either side of the rejection region.
pub fn exaggeration_analytic(d: &DesignPoint) -> Result<DesignAnalysis> {
    let tau = solve_tau(d)?;
    analysis_at_tau(tau, d.alpha)
}

/// [`exaggeration_analytic`] for a known standard error.
pub fn analysis_at_tau(tau: f64, alpha: f64) -> Result<DesignAnalysis> {
    check_tau(tau)?;
    if tau.is_infinite() {
        return Err(Error::domain("tau must be finite"));
    }
    let power = power_two_sided(tau, alpha)?;
    let crit_z = two_sided_z(alpha) * tau;
    let pos_mean = trunc_norm_mean(1.0, tau, &Interval::above(crit_z)?)?;
    let neg_mean = trunc_norm_mean(1.0, tau, &Interval::below(-crit_z)?)?;
    let type_s = phi((-crit_z - 1.0) / tau) / power;
    let exaggeration = pos_mean * (1.0 - type_s) + neg_mean.abs() * type_s;
    Ok(DesignAnalysis {
        alpha,
        power,
        tau,
        crit_z,
        type_s,
        min_ratio: crit_z,
        exaggeration,
        pos_mean,
        neg_mean,
    })
}

/// Power and type S probability of a `t(df)`-based test of an estimate with
/// standard error `se` when the true effect is `effect`.
pub fn retrodesign_tails(effect: f64, se: f64, alpha: f64, df: f64) -> Result<(f64, f64)> {
    check_positive("effect", effect)?;
    check_positive("se", se)?;
    check_probability("alpha", alpha)?;
    if effect.is_infinite() || se.is_infinite() {
        return Err(Error::domain("effect and se must be finite"));
    }
    let z = t_quantile(1.0 - 0.5 * alpha, df)?;
    let ratio = effect / se;
    let p_hi = t_sf(z - ratio, df)?;
    let p_lo = t_cdf(-z - ratio, df)?;
    let power = p_hi + p_lo;
    Ok((power, p_lo / power))
}

/// Retrospective design calculation with a Monte Carlo exaggeration estimate.
///
/// Power and type S come from the exact `t(df)` tails. Exaggeration averages
/// `|estimate| / effect` over significant draws of `effect + se * T`, where
/// `T` is generated by inverse-CDF transform of a ChaCha8 stream seeded with
/// `seed`. A draw is significant when `|estimate| >= se * t_{1-alpha/2}`.
pub fn retrodesign_mc(
    effect: f64,
    se: f64,
    alpha: f64,
    df: f64,
    n_sims: usize,
    seed: u64,
) -> Result<McResult> {
    if n_sims == 0 {
        return Err(Error::domain("n_sims must be at least 1"));
    }
    let (power, type_s) = retrodesign_tails(effect, se, alpha, df)?;
    let z = t_quantile(1.0 - 0.5 * alpha, df)?;
    let threshold = se * z;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n_significant = 0usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_sims {
        let u: f64 = rng.sample(Open01);
        let t = if df.is_infinite() {
            phi_inv(u)
        } else {
            t_quantile(u, df)?
        };
        let estimate = effect + se * t;
        if estimate.abs() >= threshold {
            let r = estimate.abs() / effect;
            n_significant += 1;
            sum += r;
            sum_sq += r * r;
        }
    }
    if n_significant == 0 {
        return Err(Error::Undersampled { n_sims });
    }
    let k = n_significant as f64;
    let exaggeration = sum / k;
    let exaggeration_se = if n_significant > 1 {
        let var = ((sum_sq - k * exaggeration * exaggeration) / (k - 1.0)).max(0.0);
        (var / k).sqrt()
    } else {
        f64::INFINITY
    };
    Ok(McResult {
        power,
        type_s,
        exaggeration,
        exaggeration_se,
        n_significant,
        n_sims,
        seed,
    })
}

/// Probability that a one-tailed level-`alpha` test aimed the wrong way
/// (rejecting for small `θ̂/τ`) rejects when the true effect is `+1`:
/// `Φ(Φ⁻¹(alpha) − 1/τ)`.
pub fn one_tailed_wrong_sign(alpha: f64, tau: f64) -> Result<f64> {
    check_probability("alpha", alpha)?;
    check_tau(tau)?;
    Ok(phi(phi_inv(alpha) - 1.0 / tau))
}
