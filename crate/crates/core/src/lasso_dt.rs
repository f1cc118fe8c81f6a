//! Lasso by coordinate descent, cross-validated penalty, Gaussian data
//! thinning, and the thinned OLS interval on the top lasso coefficient.
//!
//! The lasso objective is `||Y - X b||^2 + lambda ||b||_1` with an un-halved
//! quadratic, so the soft-threshold level is `lambda / 2`.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;

use crate::error::{domain, Error, Result};
use crate::interval::{check_alpha, Interval, Method};
use crate::selection::{check_unit_columns, SelectionOutcome};
use crate::stats::{normal_upper_quantile, sample_normal, RngStream};

pub const CD_TOLERANCE: f64 = 1e-8;
pub const CD_MAX_SWEEPS: usize = 10_000;
pub const DEFAULT_LAMBDA_GRID: usize = 50;
/// Smallest grid penalty as a fraction of `lambda_max`.
pub const LAMBDA_GRID_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct LassoFit {
    pub beta: Vec<f64>,
    pub lambda: f64,
    /// Full sweeps performed.
    pub iterations: usize,
    pub converged: bool,
}

impl LassoFit {
    /// Indices with nonzero coefficients, by decreasing |beta| (index breaks ties).
    pub fn support_by_magnitude(&self) -> Vec<usize> {
        let mut s: Vec<usize> = (0..self.beta.len()).filter(|&j| self.beta[j] != 0.0).collect();
        s.sort_by(|&a, &b| {
            self.beta[b]
                .abs()
                .total_cmp(&self.beta[a].abs())
                .then(a.cmp(&b))
        });
        s
    }
}

fn soft_threshold(x: f64, t: f64) -> f64 {
    if x > t {
        x - t
    } else if x < -t {
        x + t
    } else {
        0.0
    }
}

/// One cyclic pass over every coordinate; returns the largest coefficient change.
fn sweep(gram: &DMatrix<f64>, xty: &[f64], half: f64, beta: &mut [f64], grad: &mut [f64]) -> f64 {
    let p = xty.len();
    // column-major storage: column j is a contiguous slice
    let g = gram.as_slice();
    let mut max_change = 0.0f64;
    for j in 0..p {
        let col = &g[j * p..(j + 1) * p];
        let gjj = col[j];
        if gjj <= 0.0 {
            beta[j] = 0.0;
            continue;
        }
        let rho = xty[j] - grad[j] + gjj * beta[j];
        let next = soft_threshold(rho, half) / gjj;
        let step = next - beta[j];
        if step != 0.0 {
            for (gk, c) in grad.iter_mut().zip(col) {
                *gk += c * step;
            }
            beta[j] = next;
            max_change = max_change.max(step.abs());
        }
    }
    max_change
}

/// Sweeps between attempts to solve the active face exactly.
const FACE_SOLVE_EVERY: usize = 5;

/// Moves `beta` toward the minimizer of the objective on its current face
/// `{b : b_j = 0 off the support, sign(b_j) = sign(beta_j) on it}`.
///
/// The face minimizer solves `G_AA b = X_A'Y - (lambda/2) s_A`. If it keeps
/// the signs it is taken outright; otherwise `beta` steps toward it until the
/// first coefficient reaches zero, that coordinate leaves the support and the
/// solve repeats. The objective is quadratic on a face, so it never
/// increases. Returns whether `beta` changed.
fn solve_active_face(gram: &DMatrix<f64>, xty: &[f64], half: f64, beta: &mut [f64]) -> bool {
    let mut active: Vec<usize> = (0..beta.len()).filter(|&j| beta[j] != 0.0).collect();
    let mut changed = false;
    while !active.is_empty() {
        let g_aa = gram.select_rows(&active).select_columns(&active);
        let Some(chol) = g_aa.cholesky() else {
            return changed;
        };
        let rhs = DVector::from_iterator(
            active.len(),
            active.iter().map(|&j| xty[j] - half * beta[j].signum()),
        );
        let b = chol.solve(&rhs);
        if b.iter().any(|v| !v.is_finite()) {
            return changed;
        }
        // largest step along b - beta that keeps every sign
        let mut t = 1.0;
        for (&j, &v) in active.iter().zip(b.iter()) {
            if v == 0.0 || v.signum() != beta[j].signum() {
                t = f64::min(t, beta[j] / (beta[j] - v));
            }
        }
        for (&j, &v) in active.iter().zip(b.iter()) {
            let moved = beta[j] + t * (v - beta[j]);
            // coordinates reaching zero (or crossing by rounding) leave the support
            beta[j] = if moved == 0.0 || moved.signum() != beta[j].signum() { 0.0 } else { moved };
        }
        changed = true;
        if t >= 1.0 {
            break;
        }
        let before = active.len();
        active.retain(|&j| beta[j] != 0.0);
        if active.len() == before {
            // the blocking coordinate stopped a hair short of zero
            let (k, _) = active
                .iter()
                .enumerate()
                .map(|(k, &j)| (k, beta[j].abs()))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .expect("nonempty");
            beta[active[k]] = 0.0;
            active.remove(k);
        }
    }
    changed
}

fn gram_times(gram: &DMatrix<f64>, beta: &[f64]) -> Vec<f64> {
    (0..beta.len())
        .map(|j| gram.column(j).iter().zip(beta).map(|(g, b)| g * b).sum())
        .collect()
}

/// Cyclic coordinate descent on the Gram form of the problem.
///
/// `gram = X'X`, `xty = X'Y`; `beta` is the warm start and is updated in
/// place. Columns need not be normalized here. Every few sweeps the current
/// support is tried as the final one (see [`solve_active_face`]), which cuts
/// the sweep count on correlated designs; convergence is still declared only
/// by a full sweep that moves no coefficient by `CD_TOLERANCE`.
fn coordinate_descent(
    gram: &DMatrix<f64>,
    xty: &[f64],
    lambda: f64,
    beta: &mut [f64],
) -> (usize, bool) {
    let half = 0.5 * lambda;
    let mut grad = gram_times(gram, beta);
    for sweeps in 1..=CD_MAX_SWEEPS {
        if sweep(gram, xty, half, beta, &mut grad) < CD_TOLERANCE {
            return (sweeps, true);
        }
        if sweeps % FACE_SOLVE_EVERY == 0 && solve_active_face(gram, xty, half, beta) {
            grad = gram_times(gram, beta);
        }
    }
    (CD_MAX_SWEEPS, false)
}

/// Lasso fit on unit-norm columns. Non-convergence is flagged, not an error.
pub fn lasso_fit(x: &DMatrix<f64>, y: &[f64], lambda: f64) -> Result<LassoFit> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return domain(format!("lambda must be nonnegative, got {lambda}"));
    }
    if x.nrows() != y.len() {
        return domain(format!("X has {} rows but Y has length {}", x.nrows(), y.len()));
    }
    check_unit_columns(x)?;
    let gram = x.tr_mul(x);
    let xty = x.tr_mul(&DVector::from_column_slice(y));
    let mut beta = vec![0.0; x.ncols()];
    let (iterations, converged) = coordinate_descent(&gram, xty.as_slice(), lambda, &mut beta);
    Ok(LassoFit {
        beta,
        lambda,
        iterations,
        converged,
    })
}

/// Smallest penalty with an all-zero solution: `2 ||X'Y||_inf`.
pub fn lambda_max(x: &DMatrix<f64>, y: &[f64]) -> f64 {
    let xty = x.tr_mul(&DVector::from_column_slice(y));
    2.0 * xty.amax()
}

/// `size` penalties log-spaced from `lambda_max` down to `lambda_max * 1e-3`.
pub fn lambda_grid(lambda_max: f64, size: usize) -> Vec<f64> {
    if size <= 1 {
        return vec![lambda_max];
    }
    let ratio = LAMBDA_GRID_FLOOR.ln() / (size - 1) as f64;
    (0..size).map(|k| lambda_max * (ratio * k as f64).exp()).collect()
}

/// Contiguous folds over a seeded permutation of the rows.
pub fn fold_assignment(n: usize, folds: usize, stream: &mut RngStream) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(stream);
    let mut fold = vec![0; n];
    for (pos, &row) in perm.iter().enumerate() {
        fold[row] = pos * folds / n;
    }
    fold
}

/// Penalty minimizing the `folds`-fold held-out squared error over
/// [`lambda_grid`].
///
/// Each training fold is fit at `lambda * n_train / n` so the penalty keeps the
/// same meaning relative to a per-observation loss. Ties go to the larger
/// penalty.
pub fn cv_lambda(
    x: &DMatrix<f64>,
    y: &[f64],
    folds: usize,
    grid_size: usize,
    stream: &mut RngStream,
) -> Result<f64> {
    let n = y.len();
    if folds < 2 || folds > n {
        return domain(format!("need 2 <= folds <= n, got {folds} folds for n = {n}"));
    }
    if x.nrows() != n {
        return domain(format!("X has {} rows but Y has length {n}", x.nrows()));
    }
    let top = lambda_max(x, y);
    if !(top > 0.0) {
        return domain("X'Y is zero; every penalty gives the empty model");
    }
    let grid = lambda_grid(top, grid_size.max(1));
    let fold = fold_assignment(n, folds, stream);
    let p = x.ncols();
    let mut loss = vec![0.0; grid.len()];

    for f in 0..folds {
        let train: Vec<usize> = (0..n).filter(|&i| fold[i] != f).collect();
        let test: Vec<usize> = (0..n).filter(|&i| fold[i] == f).collect();
        let x_train = x.select_rows(&train);
        let y_train: Vec<f64> = train.iter().map(|&i| y[i]).collect();
        let gram = x_train.tr_mul(&x_train);
        let xty = x_train.tr_mul(&DVector::from_vec(y_train));
        let scale = train.len() as f64 / n as f64;
        let mut beta = vec![0.0; p];
        for (k, &lambda) in grid.iter().enumerate() {
            coordinate_descent(&gram, xty.as_slice(), lambda * scale, &mut beta);
            let active: Vec<usize> = (0..p).filter(|&j| beta[j] != 0.0).collect();
            loss[k] += test
                .iter()
                .map(|&i| {
                    let fit: f64 = active.iter().map(|&j| x[(i, j)] * beta[j]).sum();
                    (y[i] - fit).powi(2)
                })
                .sum::<f64>();
        }
    }
    let mut best = 0;
    for k in 1..grid.len() {
        if loss[k] < loss[best] {
            best = k;
        }
    }
    Ok(grid[best])
}

/// Independent train/test copies of Y from one Gaussian draw.
#[derive(Debug, Clone, PartialEq)]
pub struct ThinnedPair {
    /// `Y + c zeta`
    pub y_train: Vec<f64>,
    /// `Y - zeta / c`
    pub y_test: Vec<f64>,
    pub zeta: Vec<f64>,
    pub c: f64,
}

/// Gaussian data thinning with zeta ~ N(0, sigma^2 I).
///
/// The two parts are independent with variances `(1 + c^2) sigma^2` and
/// `(1 + 1/c^2) sigma^2`.
pub fn thin(y: &[f64], c: f64, sigma: f64, stream: &mut RngStream) -> Result<ThinnedPair> {
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("thinning scale c must be positive, got {c}"));
    }
    let zeta = sample_normal(stream, y.len(), sigma)?;
    Ok(ThinnedPair {
        y_train: y.iter().zip(&zeta).map(|(a, z)| a + c * z).collect(),
        y_test: y.iter().zip(&zeta).map(|(a, z)| a - z / c).collect(),
        zeta,
        c,
    })
}

/// Least squares of `y` on the columns `support` of `x`, in that order.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coef: Vec<f64>,
    /// (X_S'X_S)^{-1}
    pub inverse_gram: DMatrix<f64>,
}

pub fn ols_on_support(x: &DMatrix<f64>, support: &[usize], y: &[f64]) -> Result<OlsFit> {
    if support.is_empty() {
        return Err(Error::EmptySelection);
    }
    if support.len() > x.nrows() {
        return Err(Error::SingularDesign);
    }
    let xs = x.select_columns(support);
    let gram = xs.tr_mul(&xs);
    let chol = gram.cholesky().ok_or(Error::SingularDesign)?;
    let inverse_gram = chol.inverse();
    if inverse_gram.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularDesign);
    }
    let coef = &inverse_gram * xs.tr_mul(&DVector::from_column_slice(y));
    Ok(OlsFit {
        coef: coef.as_slice().to_vec(),
        inverse_gram,
    })
}

/// The selected-model target `(A_S mu)_1` for `A_S = (X_S'X_S)^{-1} X_S'`.
pub fn selected_target(x: &DMatrix<f64>, support: &[usize], mu: &[f64]) -> Result<f64> {
    Ok(ols_on_support(x, support, mu)?.coef[0])
}

/// Data-thinning interval for the coefficient of the top lasso feature:
/// OLS on `Y - zeta/c` with variance `sigma^2 (1 + 1/c^2) (X_S'X_S)^{-1}`.
pub fn dt_interval(
    y: &[f64],
    x: &DMatrix<f64>,
    out: &SelectionOutcome,
    c: f64,
    alpha: f64,
    sigma: f64,
) -> Result<Interval> {
    check_alpha(alpha)?;
    if !(c > 0.0) {
        return domain(format!("thinning scale c must be positive, got {c}"));
    }
    if out.zeta.len() != y.len() {
        return domain("noise record does not match Y");
    }
    let y_test: Vec<f64> = y.iter().zip(&out.zeta).map(|(a, z)| a - z / c).collect();
    let fit = ols_on_support(x, &out.selected, &y_test)?;
    let var = sigma * sigma * (1.0 + 1.0 / (c * c)) * fit.inverse_gram[(0, 0)];
    let z = normal_upper_quantile(alpha / 2.0)?;
    Interval::symmetric(fit.coef[0], z * var.sqrt(), 1.0 - alpha, Method::DataThinning)
}

/// Naive interval: full-data OLS on the selected support, as if it were fixed.
pub fn classical_interval_v3(
    y: &[f64],
    x: &DMatrix<f64>,
    out: &SelectionOutcome,
    alpha: f64,
    sigma: f64,
) -> Result<Interval> {
    let fit = ols_on_support(x, &out.selected, y)?;
    let sd = sigma * fit.inverse_gram[(0, 0)].sqrt();
    Interval::classical(fit.coef[0], sd, alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_columns(mut x: DMatrix<f64>) -> DMatrix<f64> {
        for mut col in x.column_iter_mut() {
            let n = col.norm();
            col /= n;
        }
        x
    }

    #[test]
    fn large_penalty_gives_zero() {
        let x = unit_columns(DMatrix::from_row_slice(4, 2, &[1.0, 0.5, 2.0, -1.0, 0.0, 1.0, 1.0, 3.0]));
        let y = [1.0, -2.0, 0.5, 3.0];
        let lmax = lambda_max(&x, &y);
        let fit = lasso_fit(&x, &y, lmax).unwrap();
        assert!(fit.beta.iter().all(|&b| b == 0.0));
        assert!(fit.converged);
        let fit = lasso_fit(&x, &y, 0.99 * lmax).unwrap();
        assert!(fit.beta.iter().any(|&b| b != 0.0));
    }

    #[test]
    fn ordering_is_by_magnitude() {
        let fit = LassoFit {
            beta: vec![0.0, -3.0, 1.0, 3.0, 0.5],
            lambda: 1.0,
            iterations: 1,
            converged: true,
        };
        assert_eq!(fit.support_by_magnitude(), vec![1, 3, 2, 4]);
    }

    #[test]
    fn grid_endpoints() {
        let g = lambda_grid(10.0, 50);
        assert_eq!(g.len(), 50);
        assert!((g[0] - 10.0).abs() < 1e-12);
        assert!((g[49] - 0.01).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn folds_are_balanced() {
        let mut s = RngStream::new(3, 0, "cv");
        let f = fold_assignment(10, 3, &mut s);
        let counts: Vec<usize> = (0..3).map(|k| f.iter().filter(|&&v| v == k).count()).collect();
        assert_eq!(counts.iter().sum::<usize>(), 10);
        assert!(counts.iter().all(|&c| c == 3 || c == 4));
    }

    #[test]
    fn rejects_bad_inputs() {
        let x = DMatrix::<f64>::identity(3, 3);
        assert!(lasso_fit(&x, &[1.0, 2.0, 3.0], -1.0).is_err());
        assert!(lasso_fit(&x, &[1.0, 2.0], 1.0).is_err());
        assert!(matches!(ols_on_support(&x, &[], &[0.0; 3]), Err(Error::EmptySelection)));
        let dup = DMatrix::from_row_slice(3, 2, &[1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(matches!(ols_on_support(&dup, &[0, 1], &[1.0, 2.0, 3.0]), Err(Error::SingularDesign)));
    }
}
