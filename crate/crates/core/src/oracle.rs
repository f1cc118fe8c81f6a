//! Monte-Carlo "oracle" infer-and-widen half-widths.
//!
//! With the true mean known, the narrowest symmetric interval around the
//! plug-in midpoint that reaches unconditional coverage `1 - alpha` has
//! half-width equal to the `1 - alpha` quantile of `|midpoint - target|`.
//! Midpoints: `Y_i` for the winner's curse, `X_j'Y` for the maximal contrast,
//! and the full-data OLS coefficient on the thinned-lasso support for the
//! lasso.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::lasso_dt::ols_on_support;
use crate::selection::{contrasts, select_v1, select_v2, select_v3, LambdaRule};
use crate::simlab::{DataModel, Vignette};
use crate::stats::RngStream;

pub const MIN_ORACLE_REPLICATES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub enum OracleModel {
    V1 { mu: Vec<f64> },
    V2 { x: DMatrix<f64>, mu: Vec<f64> },
    V3 { x: DMatrix<f64>, mu: Vec<f64>, rule: LambdaRule },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSpec {
    pub model: OracleModel,
    pub sigma: f64,
    pub c: f64,
    pub replicates: usize,
    /// Coverage levels `1 - alpha`.
    pub levels: Vec<f64>,
}

impl OracleSpec {
    /// Wraps a simulation-lab model; V3 uses cross-validated penalties.
    pub fn from_model(
        vignette: Vignette,
        model: &DataModel,
        cv_folds: usize,
        c: f64,
        sigma: f64,
        replicates: usize,
        levels: Vec<f64>,
    ) -> Result<Self> {
        let x = || model.x.clone().ok_or_else(|| Error::Domain("model has no design".into()));
        let mu = model.mu.clone();
        let model = match vignette {
            Vignette::V1 => OracleModel::V1 { mu },
            Vignette::V2 => OracleModel::V2 { x: x()?, mu },
            Vignette::V3 => OracleModel::V3 {
                x: x()?,
                mu,
                rule: LambdaRule::cv(cv_folds),
            },
        };
        Ok(Self {
            model,
            sigma,
            c,
            replicates,
            levels,
        })
    }

    pub fn vignette(&self) -> Vignette {
        match self.model {
            OracleModel::V1 { .. } => Vignette::V1,
            OracleModel::V2 { .. } => Vignette::V2,
            OracleModel::V3 { .. } => Vignette::V3,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < MIN_ORACLE_REPLICATES {
            return domain(format!(
                "oracle needs at least {MIN_ORACLE_REPLICATES} replicates, got {}",
                self.replicates
            ));
        }
        if self.levels.is_empty() || self.levels.iter().any(|l| !(*l > 0.0 && *l < 1.0)) {
            return domain("coverage levels must be a nonempty subset of (0, 1)");
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return domain(format!("noise scale c must be positive, got {}", self.c));
        }
        if !(self.sigma > 0.0) {
            return domain(format!("sigma must be positive, got {}", self.sigma));
        }
        let mu_len = match &self.model {
            OracleModel::V1 { mu } => mu.len(),
            OracleModel::V2 { x, mu } | OracleModel::V3 { x, mu, .. } => {
                if x.nrows() != mu.len() {
                    return domain("design rows do not match the mean");
                }
                mu.len()
            }
        };
        if mu_len == 0 {
            return domain("empty mean vector");
        }
        Ok(())
    }
}

/// Half-widths per level, in the order of `spec.levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCurve {
    pub levels: Vec<f64>,
    pub halfwidths: Vec<f64>,
    /// Replicates that contributed an error.
    pub used: usize,
    /// Lasso replicates with no usable selection.
    pub skipped: usize,
}

impl OracleCurve {
    pub fn halfwidth(&self, level: f64) -> Option<f64> {
        self.levels.iter().position(|l| *l == level).map(|k| self.halfwidths[k])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCoverage {
    pub levels: Vec<f64>,
    pub coverage: Vec<f64>,
    pub used: usize,
    pub skipped: usize,
}

/// Order statistic of rank `ceil(level * m)` (1-based) of an ascending sample.
pub fn empirical_quantile(sorted: &[f64], level: f64) -> f64 {
    let m = sorted.len();
    // guard against 0.95 * 10000 = 9500.000000000002
    let rank = ((level * m as f64) - 1e-9).ceil().max(1.0) as usize;
    sorted[rank.min(m) - 1]
}

fn replicate_error(spec: &OracleSpec, seed: u64, m: usize, label: &str) -> Result<Option<f64>> {
    let mut data = RngStream::new(seed, m as u64, &format!("{label}/data"));
    let mut select = RngStream::new(seed, m as u64, &format!("{label}/select"));
    let noise = |mu: &[f64], s: &mut RngStream| -> Result<(Vec<f64>, Vec<f64>)> {
        let eps = crate::stats::sample_normal(s, mu.len(), spec.sigma)?;
        let y = mu.iter().zip(&eps).map(|(a, b)| a + b).collect();
        Ok((y, eps))
    };
    match &spec.model {
        OracleModel::V1 { mu } => {
            let (y, eps) = noise(mu, &mut data)?;
            let i = select_v1(&y, spec.c, &mut select)?.index();
            Ok(Some(eps[i].abs()))
        }
        OracleModel::V2 { x, mu } => {
            let (y, eps) = noise(mu, &mut data)?;
            let j = select_v2(&y, x, spec.c, &mut select)?.index();
            Ok(Some(contrasts(x, &eps)[j].abs()))
        }
        OracleModel::V3 { x, mu, rule } => {
            let (y, eps) = noise(mu, &mut data)?;
            match select_v3(&y, x, spec.c, spec.sigma, &mut select, *rule) {
                // by linearity, midpoint - target is the OLS fit of the noise
                Ok(out) => match ols_on_support(x, &out.selected, &eps) {
                    Ok(fit) => Ok(Some(fit.coef[0].abs())),
                    Err(Error::SingularDesign) => Ok(None),
                    Err(e) => Err(e),
                },
                Err(Error::EmptySelection | Error::SingularDesign) => Ok(None),
                Err(e) => Err(e),
            }
        }
    }
}

/// `|midpoint - target|` over `spec.replicates` replicates, sorted ascending,
/// plus the number of skipped replicates.
pub fn oracle_errors(spec: &OracleSpec, seed: u64, label: &str) -> Result<(Vec<f64>, usize)> {
    spec.validate()?;
    let errors: Vec<Option<f64>> = (0..spec.replicates)
        .into_par_iter()
        .map(|m| replicate_error(spec, seed, m, label))
        .collect::<Result<_>>()?;
    let skipped = errors.iter().filter(|e| e.is_none()).count();
    let mut kept: Vec<f64> = errors.into_iter().flatten().collect();
    kept.sort_by(f64::total_cmp);
    Ok((kept, skipped))
}

pub fn oracle_halfwidth(spec: &OracleSpec, seed: u64) -> Result<OracleCurve> {
    let (errors, skipped) = oracle_errors(spec, seed, "oracle")?;
    if errors.is_empty() {
        return Err(Error::EmptySelection);
    }
    Ok(OracleCurve {
        levels: spec.levels.clone(),
        halfwidths: spec.levels.iter().map(|&l| empirical_quantile(&errors, l)).collect(),
        used: errors.len(),
        skipped,
    })
}

/// Coverage of `midpoint +/- halfwidth` on fresh replicates (independent of
/// the ones that built `curve`).
pub fn oracle_coverage_check(spec: &OracleSpec, curve: &OracleCurve, seed: u64) -> Result<OracleCoverage> {
    if curve.levels.len() != curve.halfwidths.len() {
        return domain("oracle curve levels and half-widths differ in length");
    }
    let (errors, skipped) = oracle_errors(spec, seed, "oracle-check")?;
    if errors.is_empty() {
        return Err(Error::EmptySelection);
    }
    let coverage = curve
        .halfwidths
        .iter()
        .map(|&h| errors.partition_point(|e| *e <= h) as f64 / errors.len() as f64)
        .collect();
    Ok(OracleCoverage {
        levels: curve.levels.clone(),
        coverage,
        used: errors.len(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_rank() {
        let v: Vec<f64> = (1..=100).map(f64::from).collect();
        assert_eq!(empirical_quantile(&v, 0.95), 95.0);
        assert_eq!(empirical_quantile(&v, 0.951), 96.0);
        assert_eq!(empirical_quantile(&v, 0.001), 1.0);
        let v: Vec<f64> = (1..=10000).map(f64::from).collect();
        assert_eq!(empirical_quantile(&v, 0.95), 9500.0);
    }

    #[test]
    fn spec_validation() {
        let spec = OracleSpec {
            model: OracleModel::V1 { mu: vec![0.0; 5] },
            sigma: 1.0,
            c: 1.0,
            replicates: 999,
            levels: vec![0.95],
        };
        assert!(spec.validate().is_err());
        let ok = OracleSpec { replicates: 1000, ..spec.clone() };
        assert!(ok.validate().is_ok());
        assert!(OracleSpec { levels: vec![1.0], ..ok }.validate().is_err());
    }
}
