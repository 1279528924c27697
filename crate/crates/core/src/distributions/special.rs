//! Regularized incomplete beta and gamma functions.

use crate::{Error, Result};

const MAX_ITER: usize = 20_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

fn ln_beta(a: f64, b: f64) -> f64 {
    libm::lgamma(a) + libm::lgamma(b) - libm::lgamma(a + b)
}

/// Regularized incomplete beta `I_x(a, b)` and its complement `1 - I_x(a, b)`.
///
/// The caller passes both `x` and `y = 1 - x` so that whichever is small can
/// be supplied without rounding. The continued fraction is evaluated on the
/// side where it converges quickly and the other value is taken as the
/// complement.
pub(crate) fn beta_reg(a: f64, b: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    debug_assert!(a > 0.0 && b > 0.0);
    if x <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if y <= 0.0 {
        return Ok((1.0, 0.0));
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        let lower = beta_cf_scaled(a, b, x, y)?;
        Ok((lower, 1.0 - lower))
    } else {
        let upper = beta_cf_scaled(b, a, y, x)?;
        Ok((1.0 - upper, upper))
    }
}

/// `x^a y^b / (a B(a,b))` times the continued fraction, via modified Lentz.
fn beta_cf_scaled(a: f64, b: f64, x: f64, y: f64) -> Result<f64> {
    let ln_front = a * x.ln() + b * y.ln() - ln_beta(a, b);
    let front = ln_front.exp() / a;
    if front == 0.0 {
        return Ok(0.0);
    }

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        let num = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + num * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + num / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        let num = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + num * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + num / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            return Ok(front * h);
        }
    }
    Err(Error::numeric(format!(
        "incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )))
}

/// Regularized lower incomplete gamma `P(a, x)` and its complement `Q(a, x)`.
pub(crate) fn gamma_reg(a: f64, x: f64) -> Result<(f64, f64)> {
    debug_assert!(a > 0.0);
    if x <= 0.0 {
        return Ok((0.0, 1.0));
    }
    if x.is_infinite() {
        return Ok((1.0, 0.0));
    }
    let ln_front = a * x.ln() - x - libm::lgamma(a);
    if x < a + 1.0 {
        // series
        let mut ap = a;
        let mut term = 1.0 / a;
        let mut sum = term;
        for _ in 0..MAX_ITER {
            ap += 1.0;
            term *= x / ap;
            sum += term;
            if term.abs() < sum.abs() * EPS {
                let p = sum * ln_front.exp();
                return Ok((p, 1.0 - p));
            }
        }
        Err(Error::numeric(format!(
            "incomplete gamma series did not converge (a={a}, x={x})"
        )))
    } else {
        // continued fraction for Q, modified Lentz
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / TINY;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..=MAX_ITER {
            let i = i as f64;
            let an = -i * (i - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < TINY {
                d = TINY;
            }
            c = b + an / c;
            if c.abs() < TINY {
                c = TINY;
            }
            d = 1.0 / d;
            let del = d * c;
            h *= del;
            if (del - 1.0).abs() < EPS {
                let q = ln_front.exp() * h;
                return Ok((1.0 - q, q));
            }
        }
        Err(Error::numeric(format!(
            "incomplete gamma continued fraction did not converge (a={a}, x={x})"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn beta_uniform_and_closed_forms() {
        // I_x(1,1) = x
        let (lo, hi) = beta_reg(1.0, 1.0, 0.3, 0.7).unwrap();
        assert!((lo - 0.3).abs() < 1e-15);
        assert!((hi - 0.7).abs() < 1e-15);
        // I_x(a,1) = x^a
        let (lo, _) = beta_reg(2.5, 1.0, 0.6, 0.4).unwrap();
        assert!((lo - 0.6f64.powf(2.5)).abs() < 1e-14);
        // I_x(1,b) = 1 - (1-x)^b
        let (_, hi) = beta_reg(1.0, 3.0, 0.2, 0.8).unwrap();
        assert!((hi - 0.8f64.powi(3)).abs() < 1e-15);
    }

    #[test]
    fn beta_symmetry() {
        let (lo, _) = beta_reg(0.5, 0.5, 0.5, 0.5).unwrap();
        assert!((lo - 0.5).abs() < 1e-14);
    }

    #[test]
    fn gamma_exponential() {
        // P(1, x) = 1 - exp(-x)
        for &x in &[0.01, 0.5, 1.0, 2.0, 10.0, 50.0] {
            let (p, q) = gamma_reg(1.0, x).unwrap();
            assert!((q - (-x).exp()).abs() < 1e-15 * (1.0f64).max(q), "x={x}");
            assert!((p + q - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_half_is_erf() {
        // P(1/2, x) = erf(sqrt(x))
        for &x in &[0.1, 1.0, 3.0, 8.0] {
            let (p, _) = gamma_reg(0.5, x).unwrap();
            assert!((p - libm::erf(f64::sqrt(x))).abs() < 1e-14, "x={x}");
        }
    }
}
