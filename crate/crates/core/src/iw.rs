//! Stability-based level adjustment for infer-and-widen intervals.
//!
//! Both vignettes adjust the level to `base(nu) * exp(-eta)` under a
//! constraint `eta >= 2 z_{1-q(nu)} / c`. The half-width grows with `eta`, so
//! the constraint binds and the search is one-dimensional in `nu`.

use crate::error::{domain, Result};
use crate::interval::check_alpha;
use crate::stats::normal_upper_quantile;

/// Adjusted levels at or below this make `1 - level/2` round to exactly 1 in
/// double precision, so the critical value `z_{1-level/2}` computed the
/// conventional way is infinite.
pub const IW_LEVEL_FLOOR: f64 = f64::EPSILON / 2.0;

pub const NU_GRID_POINTS: usize = 512;
pub const NU_TOLERANCE: f64 = 1e-10;

/// Tuning parameters `(eta, nu)` and the resulting adjusted level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IwTuning {
    pub eta: f64,
    pub nu: f64,
    pub adjusted_level: f64,
}

impl IwTuning {
    /// The widened critical value `z_{1 - adjusted_level / 2}`.
    pub fn critical_value(&self) -> Result<f64> {
        normal_upper_quantile(self.adjusted_level / 2.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IwOutcome {
    Tuned(IwTuning),
    /// The best attainable level is below [`IW_LEVEL_FLOOR`]; `ln_level` is
    /// its natural log (possibly `-inf`).
    InfiniteWidth { eta: f64, nu: f64, ln_level: f64 },
}

impl IwOutcome {
    pub fn tuning(&self) -> Option<&IwTuning> {
        match self {
            IwOutcome::Tuned(t) => Some(t),
            IwOutcome::InfiniteWidth { .. } => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, IwOutcome::InfiniteWidth { .. })
    }
}

/// Shape of one vignette's adjustment.
pub(crate) struct LevelAdjustment {
    /// Upper end of the open range of `nu`.
    pub nu_max: f64,
    /// `nu -> (ln of the multiplier in front of exp(-eta), tail prob q(nu))`.
    pub base_and_tail: Box<dyn Fn(f64) -> (f64, f64)>,
    pub c: f64,
}

impl LevelAdjustment {
    fn eta(&self, nu: f64) -> f64 {
        let (_, q) = (self.base_and_tail)(nu);
        match normal_upper_quantile(q) {
            Ok(z) => 2.0 * z / self.c,
            Err(_) => f64::INFINITY,
        }
    }

    fn ln_level(&self, nu: f64) -> f64 {
        let (ln_base, _) = (self.base_and_tail)(nu);
        ln_base - self.eta(nu)
    }

    /// Grid search over `nu` followed by golden-section refinement.
    pub fn optimize(&self) -> IwOutcome {
        let h = self.nu_max / (NU_GRID_POINTS + 1) as f64;
        let grid: Vec<f64> = (1..=NU_GRID_POINTS).map(|k| h * k as f64).collect();
        let values: Vec<f64> = grid.iter().map(|&nu| self.ln_level(nu)).collect();
        let mut k = 0;
        for i in 1..grid.len() {
            if values[i] > values[k] {
                k = i;
            }
        }
        let (mut nu, mut best) = (grid[k], values[k]);
        if best.is_finite() {
            let lo = if k == 0 { 0.0 } else { grid[k - 1] };
            let hi = if k + 1 == grid.len() { self.nu_max } else { grid[k + 1] };
            let (nu_gs, val_gs) = golden_section_max(|v| self.ln_level(v), lo, hi, NU_TOLERANCE);
            if val_gs > best {
                nu = nu_gs;
                best = val_gs;
            }
        }
        let eta = self.eta(nu);
        if best.is_finite() && best.exp() > IW_LEVEL_FLOOR {
            IwOutcome::Tuned(IwTuning {
                eta,
                nu,
                adjusted_level: best.exp(),
            })
        } else {
            IwOutcome::InfiniteWidth {
                eta,
                nu,
                ln_level: best,
            }
        }
    }
}

/// Maximizer of a unimodal `f` on the open interval `(lo, hi)`.
fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

pub(crate) fn check_tuning_inputs(alpha: f64, count: usize, c: f64) -> Result<()> {
    check_alpha(alpha)?;
    if count == 0 {
        return domain("need at least one candidate target");
    }
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("noise scale c must be positive, got {c}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2), 0.0, 1.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx.abs() < 1e-15);
    }
}
