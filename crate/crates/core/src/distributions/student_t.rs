//! Student t distribution via the regularized incomplete beta function.
//!
//! `df = +inf` dispatches to the standard normal.

use crate::error::check_probability;
use crate::roots;
use crate::{Error, Result};

use super::normal;
use super::special::beta_reg;

fn check_df(df: f64) -> Result<()> {
    if df > 0.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "degrees of freedom must be positive, got {df}"
        )))
    }
}

/// Two-sided tail `P(|T| >= |x|)` for finite `df`, no domain checks.
fn two_sided_finite(x: f64, df: f64) -> Result<f64> {
    if x.is_infinite() {
        return Ok(0.0);
    }
    let x2 = x * x;
    let w = df / (df + x2);
    let wc = x2 / (df + x2);
    Ok(beta_reg(0.5 * df, 0.5, w, wc)?.0)
}

/// Lower tail `P(T <= x)`.
pub fn t_cdf(x: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if x.is_nan() {
        return Err(Error::domain("t_cdf argument is NaN"));
    }
    if df.is_infinite() {
        return Ok(normal::cdf(x));
    }
    if x == 0.0 {
        return Ok(0.5);
    }
    let tail = 0.5 * two_sided_finite(x, df)?;
    Ok(if x < 0.0 { tail } else { 1.0 - tail })
}

/// Upper tail `P(T > x)`, computed without cancellation.
pub fn t_sf(x: f64, df: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::domain("t_sf argument is NaN"));
    }
    t_cdf(-x, df)
}

/// Two-sided p-value `P(|T| >= |x|)`.
pub fn t_two_sided_p(x: f64, df: f64) -> Result<f64> {
    check_df(df)?;
    if x.is_nan() {
        return Err(Error::domain("t_two_sided_p argument is NaN"));
    }
    if df.is_infinite() {
        return Ok(libm::erfc(x.abs() * std::f64::consts::FRAC_1_SQRT_2));
    }
    two_sided_finite(x, df)
}

/// Quantile `x` with `P(T <= x) = p`.
pub fn t_quantile(p: f64, df: f64) -> Result<f64> {
    check_probability("p", p)?;
    check_df(df)?;
    if df.is_infinite() {
        return Ok(normal::quantile(p));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    // work in the lower tail, where p is represented exactly
    let (q, sign) = if p < 0.5 { (p, 1.0) } else { (1.0 - p, -1.0) };
    let x = lower_tail_quantile(q, df)?;
    Ok(sign * x)
}

/// Negative `x` with `P(T <= x) = q` for `q < 1/2`.
fn lower_tail_quantile(q: f64, df: f64) -> Result<f64> {
    if df == 1.0 {
        return Ok((std::f64::consts::PI * (q - 0.5)).tan());
    }
    if df == 2.0 {
        return Ok((2.0 * q - 1.0) / (2.0 * q * (1.0 - q)).sqrt());
    }

    // The t quantile is at least as far out as the normal one.
    let hi = normal::quantile(q).min(-f64::MIN_POSITIVE);
    let mut lo = 2.0 * hi - 1.0;
    let tail = |x: f64| 0.5 * two_sided_finite(x, df).unwrap_or(f64::NAN);
    let mut expansions = 0;
    while tail(lo) > q {
        lo *= 2.0;
        expansions += 1;
        if expansions > 1100 || !lo.is_finite() {
            return Err(Error::numeric(format!(
                "could not bracket t quantile (q={q}, df={df})"
            )));
        }
    }
    let xtol = 1e-15 * hi.abs().max(1e-300);
    roots::brent(|x| tail(x) - q, lo, hi, xtol, roots::MAX_ITER)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_closed_form() {
        // arctan(1)/pi + 1/2
        assert!((t_cdf(1.0, 1.0).unwrap() - 0.75).abs() < 1e-15);
        assert!((t_cdf(-1.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        assert!((t_quantile(0.75, 1.0).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn df_two_closed_form() {
        // F(x) = 1/2 + x / (2 sqrt(2 + x^2))
        for &x in &[-3.0f64, -0.4, 0.7, 5.0] {
            let want = 0.5 + x / (2.0 * (2.0 + x * x).sqrt());
            assert!((t_cdf(x, 2.0).unwrap() - want).abs() < 1e-15, "x={x}");
        }
    }

    #[test]
    fn center_is_half() {
        for &df in &[0.5, 1.0, 3.0, 30.0, f64::INFINITY] {
            assert_eq!(t_cdf(0.0, df).unwrap(), 0.5);
        }
    }

    #[test]
    fn infinite_df_is_normal() {
        assert_eq!(
            t_quantile(0.975, f64::INFINITY).unwrap(),
            super::super::norm_quantile(0.975).unwrap()
        );
        assert_eq!(t_cdf(1.3, f64::INFINITY).unwrap(), normal::cdf(1.3));
    }

    #[test]
    fn large_df_approaches_normal() {
        let t = t_quantile(0.975, 1e6).unwrap();
        assert!((t - 1.959_963_984_540_054).abs() < 1e-5);
    }

    #[test]
    fn known_quantile() {
        // qt(0.975, 10) = 2.2281388519862747 (50-digit reference)
        assert!((t_quantile(0.975, 10.0).unwrap() - 2.228_138_851_986_275).abs() < 1e-12);
    }

    #[test]
    fn two_sided_p_matches_tails() {
        for &df in &[1.0, 4.0, 17.5, f64::INFINITY] {
            for &x in &[0.3, 1.9, 4.2, -2.5] {
                let p = t_two_sided_p(x, df).unwrap();
                let want = 2.0 * t_sf(f64::abs(x), df).unwrap();
                assert!((p - want).abs() < 1e-15, "df={df} x={x}");
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(t_cdf(0.0, 0.0).is_err());
        assert!(t_cdf(0.0, -1.0).is_err());
        assert!(t_cdf(0.0, f64::NAN).is_err());
        assert!(t_cdf(f64::NAN, 3.0).is_err());
        assert!(t_quantile(0.5, 0.0).is_err());
        assert!(t_quantile(1.0, 3.0).is_err());
    }
}
