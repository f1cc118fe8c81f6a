//! Inference on the mean of the largest of `n` Gaussian observations.
//!
//! Three intervals share (or mirror) a randomized argmax:
//!
//! * infer-and-widen around `Y_i` with the stability-adjusted level,
//! * Laplace data fission: given `Y + zeta` and `sign(zeta)`, each `Y_i` is a
//!   Gaussian with mean shifted by `sign(zeta_i) sigma^2 / c`, truncated to the
//!   half-line on the observed side of `Y_i + zeta_i`,
//! * Gaussian thinning, centered at the unbiased `(Y - zeta/c)_i`.

use crate::error::{domain, Result};
use crate::interval::{check_alpha, Interval, Method};
use crate::iw::{check_tuning_inputs, IwOutcome, LevelAdjustment};
use crate::selection::{select_gaussian, SelectionOutcome, SignDatum};
use crate::stats::{normal_upper_quantile, solve_mean, RealInterval, RngStream};

/// Optimal `(eta, nu)` for the Laplace argmax over `n` observations.
///
/// Feasible set: `nu` in `(0, alpha)`, `eta c >= 2 z_{1 - alpha (alpha - nu) / (2n)}`;
/// adjusted level `alpha (1 - alpha + nu) e^{-eta}`.
pub fn iw_tuning_v1(alpha: f64, n: usize, c: f64) -> Result<IwOutcome> {
    check_tuning_inputs(alpha, n, c)?;
    let n = n as f64;
    let adj = LevelAdjustment {
        nu_max: alpha,
        base_and_tail: Box::new(move |nu| {
            (
                alpha.ln() + (1.0 - alpha + nu).ln(),
                alpha * (alpha - nu) / (2.0 * n),
            )
        }),
        c,
    };
    Ok(adj.optimize())
}

fn selected_index(y: &[f64], out: &SelectionOutcome) -> Result<usize> {
    let i = *out
        .selected
        .first()
        .ok_or_else(|| crate::Error::Domain("empty selection record".into()))?;
    if i >= y.len() {
        return domain(format!("selected index {i} out of range for n = {}", y.len()));
    }
    Ok(i)
}

/// Infer-and-widen interval `Y_i +/- sigma z_{1 - level/2}`; infinite when
/// the tuner reports [`IwOutcome::InfiniteWidth`].
pub fn iw_interval_v1(
    y: &[f64],
    out: &SelectionOutcome,
    alpha: f64,
    c: f64,
    sigma: f64,
) -> Result<Interval> {
    let tuning = iw_tuning_v1(alpha, y.len(), c)?;
    iw_interval_from(y[selected_index(y, out)?], &tuning, alpha, sigma)
}

pub(crate) fn iw_interval_from(
    mid: f64,
    tuning: &IwOutcome,
    alpha: f64,
    sigma: f64,
) -> Result<Interval> {
    match tuning {
        IwOutcome::Tuned(t) => Interval::symmetric(
            mid,
            sigma * t.critical_value()?,
            1.0 - alpha,
            Method::InferAndWiden,
        ),
        IwOutcome::InfiniteWidth { .. } => Interval::infinite(mid, 1.0 - alpha, Method::InferAndWiden),
    }
}

pub fn classical_interval_v1(
    y: &[f64],
    out: &SelectionOutcome,
    alpha: f64,
    sigma: f64,
) -> Result<Interval> {
    Interval::classical(y[selected_index(y, out)?], sigma, alpha)
}

/// Data-fission interval `[a_i, b_i]` for the selected mean.
pub fn fission_interval_v1(
    y: &[f64],
    out: &SelectionOutcome,
    alpha: f64,
    c: f64,
    sigma: f64,
) -> Result<Interval> {
    check_alpha(alpha)?;
    let i = selected_index(y, out)?;
    let delta = match &out.delta {
        SignDatum::PerCoordinate(d) if d.len() == y.len() => d[i],
        _ => return domain("fission needs per-coordinate noise signs"),
    };
    if out.zeta.len() != y.len() {
        return domain("noise record does not match Y");
    }
    let cut = y[i] + out.zeta[i];
    let support = if delta > 0.0 {
        RealInterval::at_most(cut)
    } else {
        RealInterval::at_least(cut)
    };
    let shift = delta * sigma * sigma / c;
    let lower = solve_mean(y[i], sigma, support, 1.0 - alpha / 2.0)? - shift;
    let upper = solve_mean(y[i], sigma, support, alpha / 2.0)? - shift;
    Interval::new(lower, upper, 1.0 - alpha, Method::Fission)
}

/// `(Y - zeta/c)_i +/- sigma sqrt(1 + 1/c^2) z_{1-alpha/2}` for a Gaussian-rule
/// selection `out`.
pub fn gauss_thin_interval_for(
    y: &[f64],
    out: &SelectionOutcome,
    c: f64,
    sigma: f64,
    alpha: f64,
) -> Result<Interval> {
    check_alpha(alpha)?;
    let i = selected_index(y, out)?;
    if out.zeta.len() != y.len() {
        return domain("noise record does not match Y");
    }
    let mid = y[i] - out.zeta[i] / c;
    let half = sigma * (1.0 + 1.0 / (c * c)).sqrt() * normal_upper_quantile(alpha / 2.0)?;
    Interval::symmetric(mid, half, 1.0 - alpha, Method::GaussThin)
}

/// Draws the Gaussian-rule selection `argmax(Y + c zeta)` and returns it with
/// its thinning interval.
pub fn gauss_thin_interval_v1(
    y: &[f64],
    c: f64,
    sigma: f64,
    alpha: f64,
    stream: &mut RngStream,
) -> Result<(SelectionOutcome, Interval)> {
    let out = select_gaussian(y, c, sigma, stream)?;
    let iv = gauss_thin_interval_for(y, &out, c, sigma, alpha)?;
    Ok((out, iv))
}

/// Lower bound on the bias of `Y_{sel}` under the Gaussian rule with equal
/// means: `(sigma/2) (sqrt(1 + c^2) - c) sqrt(ln n)`.
pub fn bias_lower_bound(n: usize, c: f64, sigma: f64) -> f64 {
    debug_assert!(n >= 1 && c >= 0.0);
    // sqrt(1 + c^2) - c, without cancellation for large c
    let gap = 1.0 / ((1.0 + c * c).sqrt() + c);
    0.5 * sigma * gap * (n.max(1) as f64).ln().sqrt()
}
