//! Standard normal distribution.
//!
//! The CDF is built on `erfc`, so both tails keep full relative accuracy.
//! The quantile is Wichura's AS241 rational approximation followed by one
//! Newton step against the CDF.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::check_probability;
use crate::{Error, Result};

/// 1 / sqrt(2 pi)
pub(crate) const FRAC_1_SQRT_2PI: f64 = 0.398_942_280_401_432_677_939_946_059_934_381_868;

#[inline]
pub(crate) fn pdf(x: f64) -> f64 {
    FRAC_1_SQRT_2PI * (-0.5 * x * x).exp()
}

/// Lower tail `P(Z <= x)`.
#[inline]
pub(crate) fn cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail `P(Z > x)`.
#[inline]
pub(crate) fn sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Inverse of [`cdf`] for `p` in `(0, 1)`; returns `-inf`/`+inf` at 0 and 1.
pub(crate) fn quantile(p: f64) -> f64 {
    if p <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if p >= 1.0 {
        return f64::INFINITY;
    }
    let x = as241(p);
    if !x.is_finite() {
        return x;
    }
    let d = pdf(x);
    if d == 0.0 {
        return x;
    }
    if p < 0.5 {
        x - (cdf(x) - p) / d
    } else {
        // 1 - p is exact here
        x + (sf(x) - (1.0 - p)) / d
    }
}

/// `x` with `P(Z > x) = q`, accurate for tiny `q`.
#[inline]
pub(crate) fn upper_quantile(q: f64) -> f64 {
    -quantile(q)
}

#[allow(clippy::excessive_precision)]
fn as241(p: f64) -> f64 {
    const SPLIT1: f64 = 0.425;
    const SPLIT2: f64 = 5.0;
    const CONST1: f64 = 0.180625;
    const CONST2: f64 = 1.6;

    const A: [f64; 8] = [
        3.3871328727963666080e0,
        1.3314166789178437745e+2,
        1.9715909503065514427e+3,
        1.3731693765509461125e+4,
        4.5921953931549871457e+4,
        6.7265770927008700853e+4,
        3.3430575583588128105e+4,
        2.5090809287301226727e+3,
    ];
    const B: [f64; 8] = [
        1.0,
        4.2313330701600911252e+1,
        6.8718700749205790830e+2,
        5.3941960214247511077e+3,
        2.1213794301586595867e+4,
        3.9307895800092710610e+4,
        2.8729085735721942674e+4,
        5.2264952788528545610e+3,
    ];
    const C: [f64; 8] = [
        1.42343711074968357734e0,
        4.63033784615654529590e0,
        5.76949722146069140550e0,
        3.64784832476320460504e0,
        1.27045825245236838258e0,
        2.41780725177450611770e-1,
        2.27238449892691845833e-2,
        7.74545014278341407640e-4,
    ];
    const D: [f64; 8] = [
        1.0,
        2.05319162663775882187e0,
        1.67638483018380384940e0,
        6.89767334985100004550e-1,
        1.48103976427480074590e-1,
        1.51986665636164571966e-2,
        5.47593808499534494600e-4,
        1.05075007164441684324e-9,
    ];
    const E: [f64; 8] = [
        6.65790464350110377720e0,
        5.46378491116411436990e0,
        1.78482653991729133580e0,
        2.96560571828504891230e-1,
        2.65321895265761230930e-2,
        1.24266094738807843860e-3,
        2.71155556874348757815e-5,
        2.01033439929228813265e-7,
    ];
    const F: [f64; 8] = [
        1.0,
        5.99832206555887937690e-1,
        1.36929880922735805310e-1,
        1.48753612908506148525e-2,
        7.86869131145613259100e-4,
        1.84631831751005468180e-5,
        1.42151175831644588870e-7,
        2.04426310338993978564e-15,
    ];

    let q = p - 0.5;
    if q.abs() <= SPLIT1 {
        let r = CONST1 - q * q;
        return q * horner(&A, r) / horner(&B, r);
    }
    let tail = if q < 0.0 { p } else { 1.0 - p };
    let r = (-tail.ln()).sqrt();
    let x = if r <= SPLIT2 {
        let r = r - CONST2;
        horner(&C, r) / horner(&D, r)
    } else {
        let r = r - SPLIT2;
        horner(&E, r) / horner(&F, r)
    };
    if q < 0.0 {
        -x
    } else {
        x
    }
}

#[inline]
fn horner(coef: &[f64], x: f64) -> f64 {
    coef.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Standard normal CDF `Φ(x)`. Infinite arguments are allowed.
pub fn norm_cdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("norm_cdf argument is NaN"));
    }
    Ok(cdf(x))
}

/// Standard normal upper tail `1 - Φ(x)`, computed without cancellation.
pub fn norm_sf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("norm_sf argument is NaN"));
    }
    Ok(sf(x))
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("norm_pdf argument is NaN"));
    }
    Ok(pdf(x))
}

/// Standard normal quantile `Φ⁻¹(p)` for `p` in `(0, 1)`.
pub fn norm_quantile(p: f64) -> Result<f64> {
    check_probability("p", p)?;
    Ok(quantile(p))
}
