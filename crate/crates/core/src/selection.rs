//! Randomized selection rules. Every rule returns the selected target together
//! with the noise it drew, so the conditional intervals can condition on it.
//!
//! Indices are 0-based throughout.

use nalgebra::DMatrix;

use crate::error::{domain, Error, Result};
use crate::lasso_dt::{cv_lambda, lasso_fit, thin, DEFAULT_LAMBDA_GRID};
use crate::stats::{sample_normal, RngStream};

/// Tolerance on the unit-norm column precondition.
pub const UNIT_NORM_TOL: f64 = 1e-8;

/// Sign information recorded alongside the noise.
#[derive(Debug, Clone, PartialEq)]
pub enum SignDatum {
    /// sign(zeta_i) for every coordinate (winner's curse, Laplace rule).
    PerCoordinate(Vec<f64>),
    /// sign of the selected noisy contrast (maximal contrast).
    Scalar(f64),
    Absent,
}

/// The selection together with its conditioning record.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionOutcome {
    /// Selected index, or for the lasso the support ordered by decreasing |beta|.
    pub selected: Vec<usize>,
    /// Realized noise vector.
    pub zeta: Vec<f64>,
    pub delta: SignDatum,
    /// Penalty used by the lasso rule.
    pub lambda: Option<f64>,
}

impl SelectionOutcome {
    /// The (first) selected index.
    pub fn index(&self) -> usize {
        self.selected[0]
    }

    /// The scalar sign datum, or the per-coordinate sign at the selected index.
    pub fn sign(&self) -> Option<f64> {
        match &self.delta {
            SignDatum::PerCoordinate(d) => Some(d[self.index()]),
            SignDatum::Scalar(d) => Some(*d),
            SignDatum::Absent => None,
        }
    }
}

/// Index of the maximum; the smallest index wins ties.
pub fn argmax_select(v: &[f64]) -> Result<usize> {
    if v.is_empty() {
        return domain("argmax of an empty sequence");
    }
    let mut best = 0;
    for (i, &x) in v.iter().enumerate().skip(1) {
        if x > v[best] {
            best = i;
        }
    }
    Ok(best)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        domain(format!("{name} must be positive, got {v}"))
    }
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// argmax_i (Y_i + zeta_i) with zeta_i ~ Laplace(c).
pub fn select_v1(y: &[f64], c: f64, stream: &mut RngStream) -> Result<SelectionOutcome> {
    check_positive("noise scale c", c)?;
    if y.is_empty() {
        return domain("select_v1 needs at least one observation");
    }
    let zeta: Vec<f64> = y
        .iter()
        .map(|_| loop {
            // sign(0) is undefined; zero draws are resampled.
            let z = stream.laplace(c);
            if z != 0.0 {
                break z;
            }
        })
        .collect();
    let noisy: Vec<f64> = y.iter().zip(&zeta).map(|(a, b)| a + b).collect();
    let i = argmax_select(&noisy)?;
    let delta = zeta.iter().map(|&z| sign(z)).collect();
    Ok(SelectionOutcome {
        selected: vec![i],
        zeta,
        delta: SignDatum::PerCoordinate(delta),
        lambda: None,
    })
}

/// argmax_i (Y_i + c zeta_i) with zeta_i ~ N(0, sigma^2): the Gaussian rule
/// whose thinned complement `Y - zeta/c` is independent of the selection.
pub fn select_gaussian(
    y: &[f64],
    c: f64,
    sigma: f64,
    stream: &mut RngStream,
) -> Result<SelectionOutcome> {
    check_positive("noise scale c", c)?;
    check_positive("sigma", sigma)?;
    let zeta = sample_normal(stream, y.len(), sigma)?;
    let noisy: Vec<f64> = y.iter().zip(&zeta).map(|(a, z)| a + c * z).collect();
    let i = argmax_select(&noisy)?;
    Ok(SelectionOutcome {
        selected: vec![i],
        zeta,
        delta: SignDatum::Absent,
        lambda: None,
    })
}

/// Errors unless every column of `x` has unit Euclidean norm.
pub fn check_unit_columns(x: &DMatrix<f64>) -> Result<()> {
    for (j, col) in x.column_iter().enumerate() {
        let norm = col.norm();
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::NotNormalized { column: j, norm });
        }
    }
    Ok(())
}

/// The index maximizing |z_j + zeta_j| (smallest on ties) and the sign of
/// that noisy contrast.
pub fn max_contrast_index(z: &[f64], zeta: &[f64]) -> Result<(usize, f64)> {
    if z.len() != zeta.len() {
        return domain("contrast and noise lengths differ");
    }
    let noisy: Vec<f64> = z.iter().zip(zeta).map(|(a, b)| (a + b).abs()).collect();
    let j = argmax_select(&noisy)?;
    Ok((j, sign(z[j] + zeta[j])))
}

/// argmax_j |X_j'Y + zeta_j| with zeta_j ~ Laplace(c).
pub fn select_v2(
    y: &[f64],
    x: &DMatrix<f64>,
    c: f64,
    stream: &mut RngStream,
) -> Result<SelectionOutcome> {
    check_positive("noise scale c", c)?;
    if x.nrows() != y.len() {
        return domain(format!("X has {} rows but Y has length {}", x.nrows(), y.len()));
    }
    check_unit_columns(x)?;
    let z = contrasts(x, y);
    let zeta: Vec<f64> = (0..x.ncols()).map(|_| stream.laplace(c)).collect();
    let (j, delta) = max_contrast_index(&z, &zeta)?;
    Ok(SelectionOutcome {
        selected: vec![j],
        zeta,
        delta: SignDatum::Scalar(delta),
        lambda: None,
    })
}

/// X'Y
pub fn contrasts(x: &DMatrix<f64>, y: &[f64]) -> Vec<f64> {
    x.column_iter().map(|col| col.iter().zip(y).map(|(a, b)| a * b).sum()).collect()
}

/// How the lasso penalty is chosen inside [`select_v3`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LambdaRule {
    Fixed(f64),
    CrossValidated { folds: usize, grid_size: usize },
}

impl LambdaRule {
    pub fn cv(folds: usize) -> Self {
        LambdaRule::CrossValidated {
            folds,
            grid_size: DEFAULT_LAMBDA_GRID,
        }
    }
}

/// Lasso support of `Y + c zeta`, zeta ~ N(0, sigma^2 I), ordered by
/// decreasing |beta|.
///
/// The noise is drawn first from `stream`; cross-validation then continues on
/// the same stream for its fold permutation.
pub fn select_v3(
    y: &[f64],
    x: &DMatrix<f64>,
    c: f64,
    sigma: f64,
    stream: &mut RngStream,
    rule: LambdaRule,
) -> Result<SelectionOutcome> {
    if x.nrows() != y.len() {
        return domain(format!("X has {} rows but Y has length {}", x.nrows(), y.len()));
    }
    check_unit_columns(x)?;
    let pair = thin(y, c, sigma, stream)?;
    let lambda = match rule {
        LambdaRule::Fixed(l) => l,
        LambdaRule::CrossValidated { folds, grid_size } => {
            if folds < 2 {
                return domain(format!("cross-validation needs at least 2 folds, got {folds}"));
            }
            cv_lambda(x, &pair.y_train, folds, grid_size, stream)?
        }
    };
    let fit = lasso_fit(x, &pair.y_train, lambda)?;
    let selected = fit.support_by_magnitude();
    if selected.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(SelectionOutcome {
        selected,
        zeta: pair.zeta,
        delta: SignDatum::Absent,
        lambda: Some(lambda),
    })
}
