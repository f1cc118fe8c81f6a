//! Inversion of the truncated-Gaussian CDF in its mean parameter.

use super::truncated::{RealInterval, TruncatedGaussian};
use crate::error::{domain, Error, Result};

/// Bracket expansion stops once the half-width exceeds this many sd.
pub const BRACKET_CAP_SDS: f64 = 1e8;
pub const MAX_BISECTIONS: usize = 200;
/// Absolute tolerance on the CDF value at the returned mean.
pub const CDF_TOLERANCE: f64 = 1e-9;
const SUPPORT_SLACK: f64 = 1e-12;

/// Finds the mean `m` with `trunc_cdf((m, sd, support), x) = target`.
///
/// At fixed `x` the CDF is continuous and strictly decreasing in the mean, so
/// the root is unique. The bracket grows by doubling from `x +/- sd`, then
/// bisection runs until the CDF is within [`CDF_TOLERANCE`] (tightened while
/// the bracket still has room to shrink).
pub fn solve_mean(x: f64, sd: f64, support: RealInterval, target: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return domain(format!("target probability must lie in (0, 1), got {target}"));
    }
    if !(sd > 0.0) || !sd.is_finite() || !x.is_finite() {
        return domain(format!("invalid x = {x} or sd = {sd}"));
    }
    let slack = SUPPORT_SLACK * x.abs().max(1.0);
    if x < support.lo - slack || x > support.hi + slack {
        return domain(format!(
            "x = {x} lies outside the support [{}, {}]",
            support.lo, support.hi
        ));
    }
    let x = support.clamp(x);
    let excess = |m: f64| -> Result<f64> {
        Ok(TruncatedGaussian::new(m, sd, support)?.cdf(x) - target)
    };
    let limit = BRACKET_CAP_SDS * sd;
    let not_bracketed = || Error::RootNotBracketed { x, target, limit };

    // CDF too small means the mean is too large, and vice versa.
    let mut step = sd;
    let mut lo = x - step;
    let mut f_lo = excess(lo)?;
    while f_lo < 0.0 {
        step *= 2.0;
        if step > limit {
            return Err(not_bracketed());
        }
        lo = x - step;
        f_lo = excess(lo)?;
    }
    let mut step = sd;
    let mut hi = x + step;
    let mut f_hi = excess(hi)?;
    while f_hi > 0.0 {
        step *= 2.0;
        if step > limit {
            return Err(not_bracketed());
        }
        hi = x + step;
        f_hi = excess(hi)?;
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }

    let mut best = if f_lo.abs() < f_hi.abs() { (lo, f_lo) } else { (hi, f_hi) };
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = excess(mid)?;
        if f_mid.abs() < best.1.abs() {
            best = (mid, f_mid);
        }
        if f_mid == 0.0 || best.1.abs() <= 1e-3 * CDF_TOLERANCE {
            break;
        }
        if f_mid > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if best.1.abs() > CDF_TOLERANCE {
        return Err(not_bracketed());
    }
    Ok(best.0)
}
