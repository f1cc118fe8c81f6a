use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use selectica::{Method, Vignette};

#[derive(Debug, Parser)]
#[command(
    name = "selectica",
    version,
    about = "Infer-and-widen versus conditional selective intervals: simulation grids, oracle curves, worked examples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Winner's curse: the largest of n noisy means.
    V1(GridArgs),
    /// Maximal contrast over p unit-norm columns.
    V2(GridArgs),
    /// Top lasso-selected coefficient with data thinning.
    V3(GridArgs),
    /// Monte-Carlo oracle infer-and-widen half-widths and their coverage.
    Oracle(OracleArgs),
    /// Print one worked replicate.
    Demo(DemoArgs),
}

/// Noise scale(s): either c directly or the variance parametrization.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct NoiseArgs {
    /// Comma-separated noise scales c.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub c_grid: Option<Vec<f64>>,
    /// Comma-separated noise variances: 2c^2 for v1/v2 (Laplace), c^2 for v3 (Gaussian).
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub noise_var: Option<Vec<f64>>,
}

impl NoiseArgs {
    pub fn scales(&self, vignette: Vignette) -> Vec<f64> {
        match (&self.c_grid, &self.noise_var) {
            (Some(c), _) => c.clone(),
            (None, Some(v)) => v.iter().map(|&v| variance_to_scale(vignette, v)).collect(),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

pub fn variance_to_scale(vignette: Vignette, var: f64) -> f64 {
    match vignette {
        Vignette::V1 | Vignette::V2 => (var / 2.0).sqrt(),
        Vignette::V3 => var.sqrt(),
    }
}

/// Data-generating model shared by the grid and oracle subcommands.
#[derive(Debug, Args)]
pub struct ModelArgs {
    /// Number of observations.
    #[arg(long)]
    pub n: usize,
    /// Number of columns (v2/v3); defaults to n.
    #[arg(long)]
    pub p: Option<usize>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    /// Known noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Mean of the exponential nonzero signal; 0 means the null signal.
    /// Defaults to 0 for v1 and 50/7 otherwise.
    #[arg(long)]
    pub signal_mean: Option<f64>,
    /// Fraction of signal coordinates set to zero.
    #[arg(long, default_value_t = 0.5)]
    pub sparsity: f64,
    /// Equicorrelation of the design rows.
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Use mu = phi rather than mu = X phi (v2 with n = p).
    #[arg(long)]
    pub mu_equals_phi: bool,
    /// Cross-validation folds for the lasso penalty (v3).
    #[arg(long, default_value_t = 3)]
    pub cv_folds: usize,
    /// Master seed.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "SELECTICA_THREADS")]
    pub threads: Option<usize>,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Miscoverage level.
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Replicates per grid cell.
    #[arg(long, default_value_t = 250)]
    pub reps: usize,
    /// Comma-separated methods (default: every method of the vignette).
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    pub methods: Option<Vec<Method>>,
    /// Size of the cross-validation penalty grid (v3).
    #[arg(long, default_value_t = selectica::lasso_dt::DEFAULT_LAMBDA_GRID)]
    pub lambda_grid: usize,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = parse_vignette)]
    pub vignette: Vignette,
    #[command(flatten)]
    pub model: ModelArgs,
    /// Comma-separated coverage levels in (0, 1).
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.8,0.9,0.95")]
    pub coverage_grid: Vec<f64>,
    /// Monte-Carlo replicates (at least 1000).
    #[arg(long, default_value_t = 1000)]
    pub m: usize,
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(long, value_parser = parse_vignette)]
    pub vignette: Vignette,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Observations (default 10 for v1/v2, 40 for v3).
    #[arg(long)]
    pub n: Option<usize>,
    /// Columns (default 8).
    #[arg(long)]
    pub p: Option<usize>,
    /// Noise scale c (default sqrt(3/2), i.e. 2c^2 = 3, or 1 for v3).
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: selectica::Error| e.to_string())
}

fn parse_vignette(s: &str) -> Result<Vignette, String> {
    s.parse().map_err(|e: selectica::Error| e.to_string())
}
