//! Reference implementations that share no code with the library.
#![allow(dead_code)]

use nalgebra::DMatrix;
use selectica::stats::RngStream;

/// erf by its Maclaurin series (|x| <= 3) or the Laplace continued fraction
/// for erfc (|x| > 3), summed in plain f64.
pub fn erf_oracle(x: f64) -> f64 {
    if x < 0.0 {
        return -erf_oracle(-x);
    }
    if x <= 3.0 {
        // erf x = 2/sqrt(pi) sum (-1)^k x^(2k+1) / (k! (2k+1))
        let mut term = x;
        let mut sum = x;
        let x2 = x * x;
        for k in 1..200 {
            term *= -x2 / k as f64;
            let add = term / (2 * k + 1) as f64;
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        sum * 2.0 / std::f64::consts::PI.sqrt()
    } else {
        1.0 - erfc_cf(x)
    }
}

/// erfc x = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
fn erfc_cf(x: f64) -> f64 {
    let mut f = x;
    for k in (1..300).rev() {
        f = x + (k as f64 / 2.0) / f;
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / f
}

pub fn phi_oracle(x: f64) -> f64 {
    if x < -3.0 {
        0.5 * erfc_cf(-x / std::f64::consts::SQRT_2)
    } else {
        0.5 * (1.0 + erf_oracle(x / std::f64::consts::SQRT_2))
    }
}

/// Quantile by bisection on the oracle CDF.
pub fn quantile_oracle(p: f64) -> f64 {
    let (mut lo, mut hi) = (-40.0, 40.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi_oracle(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Closed-form truncated CDF from the oracle Phi (fine away from deep tails).
pub fn trunc_cdf_oracle(mean: f64, sd: f64, lo: f64, hi: f64, x: f64) -> f64 {
    let f = |t: f64| phi_oracle((t - mean) / sd);
    let x = x.clamp(lo, hi);
    (f(x) - f(lo)) / (f(hi) - f(lo))
}

/// Random n x p design with unit-norm columns.
pub fn unit_design(n: usize, p: usize, s: &mut RngStream) -> DMatrix<f64> {
    let mut x = DMatrix::from_fn(n, p, |_, _| s.standard_normal());
    for mut col in x.column_iter_mut() {
        let norm = col.norm();
        col /= norm;
    }
    x
}

/// First index of the maximum by a plain scan.
pub fn scan_argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for i in 0..v.len() {
        if v[i] > v[best] {
            best = i;
        }
    }
    best
}

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn variance(v: &[f64]) -> f64 {
    let m = mean(v);
    v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
}
