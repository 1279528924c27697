//! Central chi-square quantiles and the one-degree-of-freedom noncentral CDF.

use crate::error::{check_positive, check_probability};
use crate::roots;
use crate::{Error, Result};

use super::normal;
use super::special::gamma_reg;

/// Central chi-square CDF.
pub fn chisq_cdf(x: f64, df: f64) -> Result<f64> {
    check_positive("df", df)?;
    if !df.is_finite() {
        return Err(Error::domain("df must be finite"));
    }
    if x.is_nan() {
        return Err(Error::domain("chisq_cdf argument is NaN"));
    }
    Ok(gamma_reg(0.5 * df, 0.5 * x.max(0.0))?.0)
}

/// Central chi-square quantile.
///
/// `df = 1` uses `Φ⁻¹((1 + p)/2)²` and `df = 2` the exponential closed form;
/// other degrees of freedom invert the regularized incomplete gamma function.
pub fn chisq_quantile(p: f64, df: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_positive("df", df)?;
    if !df.is_finite() {
        return Err(Error::domain("df must be finite"));
    }
    if df == 1.0 {
        let z = normal::quantile(0.5 * (1.0 + p));
        return Ok(z * z);
    }
    if df == 2.0 {
        return Ok(-2.0 * (-p).ln_1p());
    }
    chisq_quantile_by_inversion(p, df)
}

pub(crate) fn chisq_quantile_by_inversion(p: f64, df: f64) -> Result<f64> {
    let a = 0.5 * df;
    let cdf = |x: f64| gamma_reg(a, 0.5 * x).map(|(lo, _)| lo).unwrap_or(f64::NAN);
    // bracket on a log scale: small-df quantiles can be many decades below 1
    let mut hi = df.max(1.0) * 2.0;
    let mut lo = hi;
    let mut expansions = 0;
    while cdf(hi) < p {
        hi *= 2.0;
        expansions += 1;
        if expansions > 1100 || !hi.is_finite() {
            return Err(bracket_failure(p, df));
        }
    }
    while cdf(lo) > p {
        lo *= 0.5;
        expansions += 1;
        if expansions > 2200 || lo == 0.0 {
            return Err(bracket_failure(p, df));
        }
    }
    if lo == hi {
        lo *= 0.5;
    }
    let u = roots::brent(|u| cdf(u.exp()) - p, lo.ln(), hi.ln(), 1e-15, roots::MAX_ITER)?;
    Ok(u.exp())
}

fn bracket_failure(p: f64, df: f64) -> Error {
    Error::numeric(format!(
        "could not bracket chi-square quantile (p={p}, df={df})"
    ))
}

fn check_nc_args(x: f64, ncp: f64) -> Result<()> {
    if !(x >= 0.0) {
        return Err(Error::domain(format!("x must be nonnegative, got {x}")));
    }
    if !(ncp >= 0.0) || ncp.is_infinite() {
        return Err(Error::domain(format!(
            "noncentrality must be finite and nonnegative, got {ncp}"
        )));
    }
    Ok(())
}

/// CDF of the noncentral chi-square with one degree of freedom.
///
/// With `Z ~ N(sqrt(ncp), 1)`, `P(Z² <= x) = Φ(√x − √ncp) − Φ(−√x − √ncp)`.
pub fn nc_chisq_cdf_1df(x: f64, ncp: f64) -> Result<f64> {
    check_nc_args(x, ncp)?;
    let r = x.sqrt();
    let m = ncp.sqrt();
    Ok(normal::cdf(r - m) - normal::cdf(-r - m))
}

/// Upper tail of [`nc_chisq_cdf_1df`], summed from the two normal tails.
pub fn nc_chisq_sf_1df(x: f64, ncp: f64) -> Result<f64> {
    check_nc_args(x, ncp)?;
    let r = x.sqrt();
    let m = ncp.sqrt();
    Ok(normal::sf(r - m) + normal::cdf(-r - m))
}
