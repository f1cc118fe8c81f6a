//! Deterministic random streams and the samplers built on them.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, StandardNormal};
use sha2::{Digest, Sha256};

use crate::error::{domain, Result};

/// A generator keyed by `(master seed, replicate index, label)`.
///
/// The key is hashed into the ChaCha seed, so each triple owns an independent
/// sequence no matter which thread or in what order it is consumed.
#[derive(Debug, Clone)]
pub struct RngStream {
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64, index: u64, label: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(seed.to_le_bytes());
        hasher.update(index.to_le_bytes());
        hasher.update(label.as_bytes());
        let digest: [u8; 32] = hasher.finalize().into();
        Self {
            rng: ChaCha8Rng::from_seed(digest),
        }
    }

    /// Uniform on the open interval (0, 1).
    pub fn open_uniform(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.random();
            if u > 0.0 {
                return u;
            }
        }
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Laplace(0, scale) by inversion.
    pub fn laplace(&mut self, scale: f64) -> f64 {
        let u = self.open_uniform() - 0.5;
        -scale * u.signum() * (-2.0 * u.abs()).ln_1p()
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

fn check_scale(name: &str, n: usize, scale: f64) -> Result<()> {
    if n == 0 {
        return domain(format!("{name}: n must be at least 1"));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return domain(format!("{name}: scale must be positive, got {scale}"));
    }
    Ok(())
}

/// `n` i.i.d. N(0, sd^2) draws.
pub fn sample_normal(stream: &mut RngStream, n: usize, sd: f64) -> Result<Vec<f64>> {
    check_scale("sample_normal", n, sd)?;
    Ok((0..n).map(|_| sd * stream.standard_normal()).collect())
}

/// `n` i.i.d. draws with density exp(-|x|/scale) / (2 scale).
pub fn sample_laplace(stream: &mut RngStream, n: usize, scale: f64) -> Result<Vec<f64>> {
    check_scale("sample_laplace", n, scale)?;
    Ok((0..n).map(|_| stream.laplace(scale)).collect())
}

/// `n` i.i.d. exponential draws with the given mean.
pub fn sample_exponential(stream: &mut RngStream, n: usize, mean: f64) -> Result<Vec<f64>> {
    check_scale("sample_exponential", n, mean)?;
    let exp = Exp::new(1.0 / mean).map_err(|e| crate::Error::Domain(e.to_string()))?;
    Ok((0..n).map(|_| exp.sample(stream)).collect())
}
