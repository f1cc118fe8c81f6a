use nalgebra::DMatrix;
use rand::seq::SliceRandom;

use crate::error::{domain, Result};
use crate::stats::{sample_exponential, RngStream};

/// Rows drawn i.i.d. from N_p(0, rho (11' - I) + I), before any scaling.
///
/// Each row is `sqrt(rho) g 1 + sqrt(1 - rho) eps` with a shared scalar `g`.
pub fn equicorrelated_rows(n: usize, p: usize, rho: f64, stream: &mut RngStream) -> Result<DMatrix<f64>> {
    if n == 0 || p == 0 {
        return domain(format!("design needs n, p >= 1, got n = {n}, p = {p}"));
    }
    if !(0.0..1.0).contains(&rho) {
        return domain(format!("rho must lie in [0, 1), got {rho}"));
    }
    let (shared, own) = (rho.sqrt(), (1.0 - rho).sqrt());
    let mut x = DMatrix::zeros(n, p);
    for i in 0..n {
        let g = stream.standard_normal();
        for j in 0..p {
            x[(i, j)] = shared * g + own * stream.standard_normal();
        }
    }
    Ok(x)
}

/// Equicorrelated Gaussian design with columns scaled to unit norm.
pub fn gen_design(n: usize, p: usize, rho: f64, stream: &mut RngStream) -> Result<DMatrix<f64>> {
    let mut x = equicorrelated_rows(n, p, rho, stream)?;
    for j in 0..p {
        let mut norm = x.column(j).norm();
        // An all-zero column has probability zero; redraw it from fresh rows.
        while norm == 0.0 {
            let fresh = equicorrelated_rows(n, 1, 0.0, stream)?;
            x.set_column(j, &fresh.column(0));
            norm = x.column(j).norm();
        }
        x.column_mut(j).unscale_mut(norm);
    }
    Ok(x)
}

/// A seeded-random `ceil(sparsity p)` coordinates are zero; the rest are
/// i.i.d. exponential with mean `exp_mean`.
pub fn gen_signal(p: usize, sparsity: f64, exp_mean: f64, stream: &mut RngStream) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&sparsity) {
        return domain(format!("sparsity must lie in [0, 1], got {sparsity}"));
    }
    if !(exp_mean > 0.0) {
        return domain(format!("exponential mean must be positive, got {exp_mean}"));
    }
    let zeros = ((sparsity * p as f64).ceil() as usize).min(p);
    let mut order: Vec<usize> = (0..p).collect();
    order.shuffle(stream);
    let mut phi = vec![0.0; p];
    let nonzero = &order[zeros..];
    if !nonzero.is_empty() {
        let draws = sample_exponential(stream, nonzero.len(), exp_mean)?;
        for (&j, v) in nonzero.iter().zip(draws) {
            phi[j] = v;
        }
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn columns_are_unit_norm() {
        let x = gen_design(50, 8, 0.5, &mut RngStream::new(1, 0, "design")).unwrap();
        for col in x.column_iter() {
            assert!((col.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn signal_sparsity() {
        let mut s = RngStream::new(2, 0, "signal");
        let phi = gen_signal(100, 0.5, 50.0 / 7.0, &mut s).unwrap();
        assert_eq!(phi.iter().filter(|&&v| v == 0.0).count(), 50);
        let phi = gen_signal(10, 1.0, 5.0, &mut s).unwrap();
        assert!(phi.iter().all(|&v| v == 0.0));
        assert!(gen_signal(10, 1.5, 5.0, &mut s).is_err());
        assert!(gen_design(5, 5, 1.0, &mut s).is_err());
    }
}
