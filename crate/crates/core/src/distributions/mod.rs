//! Distribution functions used throughout the crate.
//!
//! All public functions validate their arguments and return
//! [`Error::Domain`](crate::Error::Domain) for NaN or out-of-range inputs.

mod chisq;
mod normal;
mod special;
mod student_t;
mod truncnorm;

pub use chisq::{chisq_cdf, chisq_quantile, nc_chisq_cdf_1df, nc_chisq_sf_1df};
pub use normal::{norm_cdf, norm_pdf, norm_quantile, norm_sf};
pub use student_t::{t_cdf, t_quantile, t_sf, t_two_sided_p};
pub use truncnorm::{
    quadrature_trunc_norm_mean, trunc_norm_mean, Interval, DEFAULT_QUADRATURE_POINTS,
};

pub(crate) use normal::{cdf as phi, pdf as phi_density, quantile as phi_inv, sf as phi_upper};
pub(crate) use normal::upper_quantile as phi_inv_upper;
