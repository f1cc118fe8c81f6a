use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::interval::{check_alpha, Method};

/// Which selection problem a run studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Vignette {
    /// Winner's curse: the largest of n observations.
    V1,
    /// Maximal contrast over p unit-norm columns.
    V2,
    /// Top lasso-selected coefficient.
    V3,
}

impl Vignette {
    pub fn as_str(self) -> &'static str {
        match self {
            Vignette::V1 => "v1",
            Vignette::V2 => "v2",
            Vignette::V3 => "v3",
        }
    }

    pub fn methods(self) -> &'static [Method] {
        match self {
            Vignette::V1 => &[
                Method::Classical,
                Method::InferAndWiden,
                Method::Fission,
                Method::GaussThin,
            ],
            Vignette::V2 => &[Method::Classical, Method::InferAndWiden, Method::Rcsi],
            Vignette::V3 => &[Method::Classical, Method::DataThinning],
        }
    }
}

impl fmt::Display for Vignette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Vignette {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v1" => Ok(Vignette::V1),
            "v2" => Ok(Vignette::V2),
            "v3" => Ok(Vignette::V3),
            _ => domain(format!("unknown vignette '{s}' (expected v1, v2 or v3)")),
        }
    }
}

/// The mean vector's generating law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Signal {
    Null,
    /// `ceil(sparsity * dim)` zeros, the rest Exponential with this mean.
    Exponential { mean: f64, sparsity: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub vignette: Vignette,
    pub n: usize,
    /// Number of columns (ignored by the winner's curse, which uses `n`).
    pub p: usize,
    pub rho: f64,
    pub signal: Signal,
    pub c_grid: Vec<f64>,
    pub alpha: f64,
    pub sigma: f64,
    pub replicates: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    /// Use `mu = phi` instead of `mu = X phi` for the maximal contrast (needs n = p).
    pub mu_equals_phi: bool,
    pub cv_folds: usize,
    pub lambda_grid: usize,
    /// Worker threads; `None` uses the global pool. Output does not depend on it.
    pub threads: Option<usize>,
}

impl ExperimentConfig {
    /// Defaults: sigma = 1, alpha = 0.05, rho = 0.5, half-sparse exponential
    /// signal with mean 50/7 (null for the winner's curse), 250 replicates,
    /// every method of the vignette, 3-fold CV over 50 penalties.
    pub fn new(vignette: Vignette, n: usize, p: usize, c_grid: Vec<f64>) -> Self {
        let signal = match vignette {
            Vignette::V1 => Signal::Null,
            _ => Signal::Exponential {
                mean: 50.0 / 7.0,
                sparsity: 0.5,
            },
        };
        Self {
            vignette,
            n,
            p,
            rho: 0.5,
            signal,
            c_grid,
            alpha: 0.05,
            sigma: 1.0,
            replicates: 250,
            seed: 0,
            methods: vignette.methods().to_vec(),
            mu_equals_phi: false,
            cv_folds: 3,
            lambda_grid: crate::lasso_dt::DEFAULT_LAMBDA_GRID,
            threads: None,
        }
    }

    /// Dimension of the noise / candidate set.
    pub fn dim(&self) -> usize {
        match self.vignette {
            Vignette::V1 => self.n,
            _ => self.p,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || (self.vignette != Vignette::V1 && self.p == 0) {
            return domain("n and p must be at least 1");
        }
        if !(0.0..1.0).contains(&self.rho) {
            return domain(format!("rho must lie in [0, 1), got {}", self.rho));
        }
        if let Signal::Exponential { mean, sparsity } = self.signal {
            if !(mean > 0.0) {
                return domain(format!("signal mean must be positive, got {mean}"));
            }
            if !(0.0..=1.0).contains(&sparsity) {
                return domain(format!("sparsity must lie in [0, 1], got {sparsity}"));
            }
        }
        if self.c_grid.is_empty() {
            return domain("the c grid is empty");
        }
        if let Some(c) = self.c_grid.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
            return domain(format!("noise scales must be positive, got {c}"));
        }
        check_alpha(self.alpha)?;
        if !(self.sigma > 0.0) {
            return domain(format!("sigma must be positive, got {}", self.sigma));
        }
        if self.replicates == 0 {
            return domain("replicates must be at least 1");
        }
        if self.methods.is_empty() {
            return domain("no methods requested");
        }
        if let Some(m) = self.methods.iter().find(|m| !self.vignette.methods().contains(m)) {
            return domain(format!("method '{m}' does not apply to vignette {}", self.vignette));
        }
        if self.mu_equals_phi && (self.vignette != Vignette::V2 || self.n != self.p) {
            return domain("mu = phi is only defined for the maximal contrast with n = p");
        }
        if self.vignette == Vignette::V3 && (self.cv_folds < 2 || self.cv_folds > self.n) {
            return domain(format!("cv folds must lie in [2, n], got {}", self.cv_folds));
        }
        if self.threads == Some(0) {
            return domain("threads must be at least 1");
        }
        Ok(())
    }
}
