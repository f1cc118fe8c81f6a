//! Inference on the maximal contrast `X_j'mu`, `j = argmax |X_j'Y + zeta_j|`.
//!
//! Given the selected index, the noise and the sign `delta` of the winning
//! noisy contrast, the selection event is the polyhedron
//! `delta A X'Y <= -delta A zeta`. Conditioning additionally on the residual
//! `W = (I - X_j X_j')Y` reduces it to an interval `[v_min, v_max]` for the
//! statistic `X_j'Y`, whose conditional law is a truncated Gaussian.

use nalgebra::{DMatrix, DVector};

use crate::error::{domain, Error, Result};
use crate::interval::{check_alpha, Interval, Method};
use crate::iw::{check_tuning_inputs, IwOutcome, LevelAdjustment};
use crate::selection::{check_unit_columns, contrasts, SelectionOutcome, SignDatum};
use crate::stats::{solve_mean, RealInterval};
use crate::winners_curse::iw_interval_from;

/// Rows whose coefficient on the statistic is below this are non-binding.
pub const DENOMINATOR_TOL: f64 = 1e-12;
const CONSISTENCY_TOL: f64 = 1e-8;

/// Optimal `(eta, nu)` for the Laplace max-|contrast| rule over `p` columns.
///
/// Feasible set: `nu` in `(0, 1)`, `c >= 2 z_{1 - alpha nu / (2p)} / eta`;
/// adjusted level `alpha (1 - nu) e^{-eta}`.
pub fn iw_tuning_v2(alpha: f64, p: usize, c: f64) -> Result<IwOutcome> {
    check_tuning_inputs(alpha, p, c)?;
    let p = p as f64;
    let adj = LevelAdjustment {
        nu_max: 1.0,
        base_and_tail: Box::new(move |nu| (alpha.ln() + (-nu).ln_1p(), alpha * nu / (2.0 * p))),
        c,
    };
    Ok(adj.optimize())
}

fn statistic(y: &[f64], x: &DMatrix<f64>, j: usize) -> f64 {
    x.column(j).iter().zip(y).map(|(a, b)| a * b).sum()
}

fn selected_column(x: &DMatrix<f64>, y: &[f64], out: &SelectionOutcome) -> Result<usize> {
    if x.nrows() != y.len() {
        return domain(format!("X has {} rows but Y has length {}", x.nrows(), y.len()));
    }
    let j = *out
        .selected
        .first()
        .ok_or_else(|| Error::Domain("empty selection record".into()))?;
    if j >= x.ncols() {
        return domain(format!("selected column {j} out of range for p = {}", x.ncols()));
    }
    Ok(j)
}

pub fn iw_interval_v2(
    y: &[f64],
    x: &DMatrix<f64>,
    out: &SelectionOutcome,
    alpha: f64,
    c: f64,
    sigma: f64,
) -> Result<Interval> {
    let j = selected_column(x, y, out)?;
    let tuning = iw_tuning_v2(alpha, x.ncols(), c)?;
    iw_interval_from(statistic(y, x, j), &tuning, alpha, sigma)
}

pub fn classical_interval_v2(
    y: &[f64],
    x: &DMatrix<f64>,
    out: &SelectionOutcome,
    alpha: f64,
    sigma: f64,
) -> Result<Interval> {
    let j = selected_column(x, y, out)?;
    Interval::classical(statistic(y, x, j), sigma, alpha)
}

/// The `(2p - 1) x p` sign-pattern matrix for selected column `j` (0-based).
///
/// Row 0 is `-e_j`; then `e_k - e_j` for `k < j` and for `k > j`; then
/// `-e_k - e_j` for `k < j` and for `k > j`. With `z = X'Y` and `delta` the sign
/// of the winning noisy contrast, `j` is selected iff `delta A z <= -delta A zeta`.
pub fn build_a(p: usize, j: usize) -> Result<DMatrix<f64>> {
    if j >= p {
        return domain(format!("selected index {j} out of range for p = {p}"));
    }
    let others: Vec<usize> = (0..p).filter(|&k| k != j).collect();
    let mut a = DMatrix::zeros(2 * p - 1, p);
    a[(0, j)] = -1.0;
    for (r, &k) in others.iter().enumerate() {
        a[(1 + r, k)] = 1.0;
        a[(1 + r, j)] = -1.0;
        a[(p + r, k)] = -1.0;
        a[(p + r, j)] = -1.0;
    }
    Ok(a)
}

/// Whether `delta A z <= -delta A zeta` holds row by row.
pub fn satisfies_event(a: &DMatrix<f64>, delta: f64, z: &[f64], zeta: &[f64]) -> bool {
    let lhs = a * DVector::from_column_slice(z);
    let rhs = a * DVector::from_column_slice(zeta);
    lhs.iter().zip(rhs.iter()).all(|(l, r)| delta * l <= -delta * r)
}

/// The conditioning record of the polyhedral interval.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralEvent {
    pub a: DMatrix<f64>,
    pub delta: f64,
    pub zeta: Vec<f64>,
    /// Residual `(I - X_j X_j') Y`.
    pub w: Vec<f64>,
    pub j_star: usize,
}

impl PolyhedralEvent {
    pub fn new(y: &[f64], x: &DMatrix<f64>, out: &SelectionOutcome) -> Result<Self> {
        let j = selected_column(x, y, out)?;
        let delta = match out.delta {
            SignDatum::Scalar(d) if d == 1.0 || d == -1.0 => d,
            _ => return domain("maximal-contrast event needs a scalar sign"),
        };
        if out.zeta.len() != x.ncols() {
            return domain("noise record must have one entry per column");
        }
        let stat = statistic(y, x, j);
        let w = y
            .iter()
            .zip(x.column(j).iter())
            .map(|(yi, xi)| yi - xi * stat)
            .collect();
        Ok(Self {
            a: build_a(x.ncols(), j)?,
            delta,
            zeta: out.zeta.clone(),
            w,
            j_star: j,
        })
    }
}

/// Range of `X_j'Y` consistent with the event given `W` and `zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationLimits {
    pub v_min: f64,
    pub v_max: f64,
}

impl TruncationLimits {
    pub fn as_interval(&self) -> RealInterval {
        RealInterval {
            lo: self.v_min,
            hi: self.v_max,
        }
    }
}

/// Computes `v_r = -(A zeta + A X'W)_r / (A X'X_j)_r` and takes the max over
/// rows with `delta (A X'X_j)_r < 0` as the lower limit and the min over rows
/// with `delta (A X'X_j)_r > 0` as the upper limit. Rows with a vanishing
/// coefficient do not constrain the statistic.
pub fn truncation_limits(ev: &PolyhedralEvent, x: &DMatrix<f64>) -> Result<TruncationLimits> {
    if ev.w.len() != x.nrows() || ev.a.ncols() != x.ncols() {
        return domain("event dimensions do not match X");
    }
    let xtw = DVector::from_vec(contrasts(x, &ev.w));
    let xtxj = x.tr_mul(&x.column(ev.j_star));
    let direction = &ev.a * xtxj;
    let offset = &ev.a * (DVector::from_column_slice(&ev.zeta) + xtw);

    let mut v_min = f64::NEG_INFINITY;
    let mut v_max = f64::INFINITY;
    for (d, o) in direction.iter().zip(offset.iter()) {
        if d.abs() < DENOMINATOR_TOL {
            continue;
        }
        let v = -o / d;
        if ev.delta * d < 0.0 {
            v_min = v_min.max(v);
        } else {
            v_max = v_max.min(v);
        }
    }
    if v_min > v_max + CONSISTENCY_TOL {
        return Err(Error::InconsistentEvent { v_min, v_max });
    }
    Ok(TruncationLimits {
        v_min: v_min.min(v_max),
        v_max,
    })
}

/// The polyhedral pieces behind [`rcsi_interval_v2`].
#[derive(Debug, Clone)]
pub struct RcsiDetails {
    pub event: PolyhedralEvent,
    pub limits: TruncationLimits,
    pub statistic: f64,
    pub interval: Interval,
}

pub fn rcsi_details(
    y: &[f64],
    x: &DMatrix<f64>,
    out: &SelectionOutcome,
    alpha: f64,
    sigma: f64,
) -> Result<RcsiDetails> {
    check_alpha(alpha)?;
    check_unit_columns(x)?;
    let event = PolyhedralEvent::new(y, x, out)?;
    let limits = truncation_limits(&event, x)?;
    let stat = statistic(y, x, event.j_star);
    let support = limits.as_interval();
    let lower = solve_mean(stat, sigma, support, 1.0 - alpha / 2.0)?;
    let upper = solve_mean(stat, sigma, support, alpha / 2.0)?;
    let interval = Interval::new(lower, upper, 1.0 - alpha, Method::Rcsi)?;
    Ok(RcsiDetails {
        event,
        limits,
        statistic: stat,
        interval,
    })
}

/// Randomized conditional selective interval `[a, b]` for `X_j'mu`.
pub fn rcsi_interval_v2(
    y: &[f64],
    x: &DMatrix<f64>,
    out: &SelectionOutcome,
    alpha: f64,
    sigma: f64,
) -> Result<Interval> {
    rcsi_details(y, x, out, alpha, sigma).map(|d| d.interval)
}
