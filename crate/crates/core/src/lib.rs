//! Retrospective design analysis and sign-error control for hypothesis tests.
//!
//! Given a two-sided test's level and its power at a unit effect, the
//! [`design`] module recovers the implied standard error, the probability that
//! a rejection carries the wrong sign (type S), and the expected exaggeration
//! of the effect magnitude among rejections (type M). The [`signpolicy`]
//! module implements a two-level rule that rejects the null at `alpha1` and
//! declares the sign of the effect only when the null is also rejected at
//! `alpha2 = 2 * alpha1 * alpha_s`, which bounds the conditional sign-error
//! probability by `alpha_s`.
#![allow(clippy::neg_cmp_op_on_partial_ord)] // negated comparisons reject NaN

pub mod cli;
pub mod curves;
pub mod design;
pub mod distributions;
mod error;
pub mod roots;
pub mod screen;
pub mod signpolicy;

pub use error::{Error, Result};
