//! Two-level sign-confidence rule.
//!
//! The null `θ = 0` is tested at a pre-specified level `alpha1`. When it is
//! rejected, the sign of the estimate is additionally declared to be the
//! sign of `θ` only if the null is also rejected at
//! `alpha2 = 2 * alpha1 * alpha_s`. Among rejections at `alpha1`, the
//! probability of declaring the wrong sign is then at most `alpha_s`.

use std::fmt;

use crate::distributions::{phi, phi_inv_upper, t_two_sided_p};
use crate::error::check_probability;
use crate::{Error, Result};

/// Levels governing the two-level decision rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignPolicy {
    alpha1: f64,
    alpha_s: f64,
    alpha2: f64,
}

impl SignPolicy {
    /// Builds the policy from the primary level and the conditional
    /// sign-error budget.
    pub fn new(alpha1: f64, alpha_s: f64) -> Result<Self> {
        check_probability("alpha1", alpha1)?;
        if !(alpha_s > 0.0 && alpha_s <= 0.5) {
            return Err(Error::domain(format!(
                "alpha_s must lie in (0, 1/2], got {alpha_s}"
            )));
        }
        Ok(Self {
            alpha1,
            alpha_s,
            alpha2: 2.0 * alpha1 * alpha_s,
        })
    }

    /// Builds the policy from both significance levels; `alpha_s` is derived
    /// as `alpha2 / (2 * alpha1)`.
    pub fn from_levels(alpha1: f64, alpha2: f64) -> Result<Self> {
        check_probability("alpha1", alpha1)?;
        if !(alpha2 > 0.0 && alpha2 <= alpha1) {
            return Err(Error::domain(format!(
                "alpha2 must lie in (0, alpha1], got {alpha2}"
            )));
        }
        Ok(Self {
            alpha1,
            alpha_s: 0.5 * alpha2 / alpha1,
            alpha2,
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha_s(&self) -> f64 {
        self.alpha_s
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }
}

/// Shorthand for [`SignPolicy::new`].
pub fn make_policy(alpha1: f64, alpha_s: f64) -> Result<SignPolicy> {
    SignPolicy::new(alpha1, alpha_s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Positive => 1.0,
            Sign::Negative => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Decision {
    NotSignificant,
    SignificantNoSign,
    SignificantWithSign(Sign),
}

impl Decision {
    /// Label used in CSV output.
    pub fn label(self) -> &'static str {
        match self {
            Decision::NotSignificant => "not_significant",
            Decision::SignificantNoSign => "significant_no_sign",
            Decision::SignificantWithSign(Sign::Positive) => "significant_pos",
            Decision::SignificantWithSign(Sign::Negative) => "significant_neg",
        }
    }

    /// 0, 1 or 2 in order of strength.
    pub fn strength(self) -> u8 {
        match self {
            Decision::NotSignificant => 0,
            Decision::SignificantNoSign => 1,
            Decision::SignificantWithSign(_) => 2,
        }
    }

    pub fn is_rejection(self) -> bool {
        self != Decision::NotSignificant
    }

    pub fn declared_sign(self) -> Option<Sign> {
        match self {
            Decision::SignificantWithSign(s) => Some(s),
            _ => None,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignTestReport {
    /// Standardized statistic `estimate / se`.
    pub z: f64,
    /// Two-sided p-value of `z`.
    pub p1: f64,
    pub decision: Decision,
    /// `p1 / (2 alpha1)`, the smallest `alpha_s` that would declare the
    /// sign. Present only when the null is rejected at `alpha1`.
    pub p_sign: Option<f64>,
}

/// Applies the policy to one estimate.
///
/// `df = +inf` uses the normal reference distribution. Rejection regions are
/// closed: a p-value equal to a level counts as a rejection.
pub fn decide(estimate: f64, se: f64, df: f64, policy: &SignPolicy) -> Result<SignTestReport> {
    if !estimate.is_finite() {
        return Err(Error::domain(format!("estimate must be finite, got {estimate}")));
    }
    if !(se > 0.0) || se.is_infinite() {
        return Err(Error::domain(format!(
            "se must be positive and finite, got {se}"
        )));
    }
    let z = estimate / se;
    let p1 = t_two_sided_p(z, df)?;

    let decision = if p1 > policy.alpha1 {
        Decision::NotSignificant
    } else if p1 <= policy.alpha2 {
        let sign = if estimate > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        Decision::SignificantWithSign(sign)
    } else {
        Decision::SignificantNoSign
    };
    let p_sign = decision
        .is_rejection()
        .then(|| p1 / (2.0 * policy.alpha1));

    Ok(SignTestReport {
        z,
        p1,
        decision,
        p_sign,
    })
}

/// Which form of the conditional sign-error bound to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundKind {
    /// `(1/2) alpha2 / alpha1`, which equals `alpha_s`.
    #[default]
    Refined,
    /// `alpha2 / alpha1`, dropping the factor of one half.
    Crude,
}

/// Worst-case probability of a sign error given rejection at `alpha1`.
pub fn sign_error_bound(policy: &SignPolicy, kind: BoundKind) -> f64 {
    match kind {
        BoundKind::Refined => policy.alpha_s,
        BoundKind::Crude => policy.alpha2 / policy.alpha1,
    }
}

/// Probability of declaring a sign when the true effect is `d` standard
/// errors from zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignPower {
    /// Rejection at `alpha2` in either direction.
    pub total: f64,
    /// Rejection at `alpha2` with the correct sign.
    pub correct_sign: f64,
}

pub fn sign_declaration_power(effect_over_tau: f64, policy: &SignPolicy) -> Result<SignPower> {
    if !(effect_over_tau >= 0.0) {
        return Err(Error::domain(format!(
            "effect_over_tau must be nonnegative, got {effect_over_tau}"
        )));
    }
    let z2 = phi_inv_upper(0.5 * policy.alpha2);
    let d = effect_over_tau;
    let correct_sign = phi(-z2 + d);
    Ok(SignPower {
        total: correct_sign + phi(-z2 - d),
        correct_sign,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::phi_inv;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn policy_algebra() {
        assert_eq!(make_policy(0.01, 0.01).unwrap().alpha2(), 2e-4);
        assert_eq!(make_policy(0.05, 0.001).unwrap().alpha2(), 1e-4);
        let p = make_policy(0.05, 0.5).unwrap();
        assert_eq!(p.alpha2(), 0.05);
        assert_eq!(sign_error_bound(&p, BoundKind::Refined), 0.5);
    }

    #[test]
    fn policy_errors() {
        assert!(make_policy(0.05, 0.6).is_err());
        assert!(make_policy(0.05, 0.0).is_err());
        assert!(make_policy(1.0, 0.1).is_err());
        assert!(make_policy(0.05, f64::NAN).is_err());
        assert!(SignPolicy::from_levels(0.05, 0.06).is_err());
    }

    #[test]
    fn bound_from_levels() {
        let alpha2 = 2.0 * phi(-3.92);
        let p = SignPolicy::from_levels(0.05, alpha2).unwrap();
        assert!((sign_error_bound(&p, BoundKind::Crude) - 0.0018).abs() < 1e-4);
        assert!((sign_error_bound(&p, BoundKind::Refined) - 0.0009).abs() < 1e-4);
    }

    #[test]
    fn decide_examples() {
        let p = make_policy(0.05, 0.001).unwrap();
        let r = decide(-1.0, 1.0, INF, &p).unwrap();
        assert_eq!(r.decision, Decision::NotSignificant);
        assert_eq!(r.p_sign, None);

        let r = decide(2.5, 1.0, INF, &p).unwrap();
        assert_eq!(r.decision, Decision::SignificantNoSign);
        assert!((r.p_sign.unwrap() - r.p1 / 0.1).abs() < 1e-18);
        // threshold at alpha2 = 1e-4
        assert!((phi_inv_upper(5e-5) - 3.8906).abs() < 1e-4);

        let r = decide(4.2, 1.0, INF, &p).unwrap();
        assert_eq!(r.decision, Decision::SignificantWithSign(Sign::Positive));
        assert!(r.p1 < 1e-4);
        assert_eq!(r.p_sign, Some(r.p1 / 0.1));

        let r = decide(-4.2, 1.0, INF, &p).unwrap();
        assert_eq!(r.decision, Decision::SignificantWithSign(Sign::Negative));
    }

    #[test]
    fn zero_estimate_is_not_significant() {
        let p = make_policy(0.5, 0.5).unwrap();
        let r = decide(0.0, 1.0, 3.0, &p).unwrap();
        assert_eq!(r.p1, 1.0);
        assert_eq!(r.decision, Decision::NotSignificant);
    }

    #[test]
    fn boundary_counts_as_rejection() {
        let p = make_policy(0.05, 0.5).unwrap();
        let z = phi_inv(0.975);
        let r = decide(z, 1.0, INF, &p).unwrap();
        // p1 lands on alpha1 to within rounding; closed regions reject
        if r.p1 <= 0.05 {
            assert!(r.decision.is_rejection());
        }
        let r = decide(z * 1.000_001, 1.0, INF, &p).unwrap();
        assert_eq!(r.decision, Decision::SignificantWithSign(Sign::Positive));
    }

    #[test]
    fn decide_errors() {
        let p = make_policy(0.05, 0.1).unwrap();
        assert!(decide(1.0, 0.0, INF, &p).is_err());
        assert!(decide(1.0, -1.0, INF, &p).is_err());
        assert!(decide(f64::NAN, 1.0, INF, &p).is_err());
        assert!(decide(1.0, 1.0, 0.0, &p).is_err());
    }

    #[test]
    fn t_reference_is_more_conservative() {
        let p = make_policy(0.05, 0.1).unwrap();
        let normal = decide(2.2, 1.0, INF, &p).unwrap();
        let t = decide(2.2, 1.0, 5.0, &p).unwrap();
        assert!(t.p1 > normal.p1);
        assert_eq!(t.decision, Decision::NotSignificant);
    }

    #[test]
    fn sign_power_examples() {
        let p = make_policy(0.05, 0.001).unwrap();
        let at0 = sign_declaration_power(0.0, &p).unwrap();
        assert!((at0.total - 1e-4).abs() < 1e-15);
        let at5 = sign_declaration_power(5.0, &p).unwrap();
        assert!((at5.total - 0.87).abs() < 0.01);
        assert!(at5.total - at5.correct_sign <= phi(-phi_inv_upper(5e-5)));
        assert!(sign_declaration_power(-1.0, &p).is_err());
    }

    #[test]
    fn labels() {
        assert_eq!(Decision::NotSignificant.to_string(), "not_significant");
        assert_eq!(
            Decision::SignificantWithSign(Sign::Negative).label(),
            "significant_neg"
        );
    }
}
