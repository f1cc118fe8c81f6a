//! Gaussian, Laplace and truncated-Gaussian machinery shared by every interval.

mod normal;
mod rng;
mod root;
mod truncated;

pub use normal::{
    log_normal_cdf, log_normal_sf, mills_ratio, normal_cdf, normal_pdf, normal_quantile,
    normal_sf, normal_upper_quantile, MIN_QUANTILE_PROB,
};
pub use rng::{sample_exponential, sample_laplace, sample_normal, RngStream};
pub use root::{solve_mean, BRACKET_CAP_SDS, CDF_TOLERANCE, MAX_BISECTIONS};
pub use truncated::{trunc_cdf, RealInterval, TruncatedGaussian};
