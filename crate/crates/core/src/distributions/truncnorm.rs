//! Means of truncated normal distributions.

use crate::error::{check_finite, check_positive};
use crate::{Error, Result};

use super::normal;

/// Default number of midpoints for [`quadrature_trunc_norm_mean`].
pub const DEFAULT_QUADRATURE_POINTS: usize = 100_000;

/// An open interval on the extended real line. Either end may be infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() {
            return Err(Error::domain("interval bounds must not be NaN"));
        }
        if !(lower < upper) {
            return Err(Error::domain(format!(
                "interval lower bound must be below upper bound, got ({lower}, {upper})"
            )));
        }
        Ok(Self { lower, upper })
    }

    /// `(-inf, +inf)`
    pub fn whole() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
        }
    }

    /// `(lower, +inf)`
    pub fn above(lower: f64) -> Result<Self> {
        Self::new(lower, f64::INFINITY)
    }

    /// `(-inf, upper)`
    pub fn below(upper: f64) -> Result<Self> {
        Self::new(f64::NEG_INFINITY, upper)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }
}

/// Standardized bounds and the probability mass between them.
struct Standardized {
    a: f64,
    b: f64,
    mass: f64,
}

fn standardize(mu: f64, sigma: f64, iv: &Interval) -> Result<Standardized> {
    check_finite("mu", mu)?;
    check_positive("sigma", sigma)?;
    check_finite("sigma", sigma)?;
    let a = (iv.lower - mu) / sigma;
    let b = (iv.upper - mu) / sigma;
    // difference the tail closest to the interval so deep tails keep precision
    let mass = if a > 0.0 {
        normal::sf(a) - normal::sf(b)
    } else if b < 0.0 {
        normal::cdf(b) - normal::cdf(a)
    } else {
        1.0 - normal::cdf(a) - normal::sf(b)
    };
    if !(mass > 0.0) {
        return Err(Error::UnusableTruncation(format!(
            "N({mu}, {sigma}^2) has no numerically representable mass on ({}, {})",
            iv.lower, iv.upper
        )));
    }
    Ok(Standardized { a, b, mass })
}

/// Mean of `N(mu, sigma²)` conditioned on the interval, in closed form:
/// `mu + sigma (φ(a) − φ(b)) / (Φ(b) − Φ(a))` with standardized bounds `a`, `b`.
pub fn trunc_norm_mean(mu: f64, sigma: f64, iv: &Interval) -> Result<f64> {
    let s = standardize(mu, sigma, iv)?;
    let mean = mu + sigma * (normal::pdf(s.a) - normal::pdf(s.b)) / s.mass;
    // rounding can push the result onto a bound for very narrow intervals
    Ok(mean.clamp(iv.lower, iv.upper))
}

/// Midpoint-rule estimate of the same mean: `n` equally spaced probability
/// levels are mapped through the truncated quantile function and averaged.
pub fn quadrature_trunc_norm_mean(mu: f64, sigma: f64, iv: &Interval, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("number of quadrature points must be at least 1"));
    }
    let s = standardize(mu, sigma, iv)?;
    let inv_n = 1.0 / n as f64;

    let mut sum = 0.0;
    if s.a > 0.0 {
        // upper-tail interval: interpolate in survival space
        let qa = normal::sf(s.a);
        for i in 0..n {
            let u = (i as f64 + 0.5) * inv_n;
            sum += normal::upper_quantile(qa - s.mass * u);
        }
    } else {
        let pa = normal::cdf(s.a);
        for i in 0..n {
            let u = (i as f64 + 0.5) * inv_n;
            sum += normal::quantile(pa + s.mass * u);
        }
    }
    let z = sum * inv_n;
    if !z.is_finite() {
        return Err(Error::UnusableTruncation(format!(
            "quadrature left the representable range on ({}, {})",
            iv.lower, iv.upper
        )));
    }
    Ok(mu + sigma * z)
}
