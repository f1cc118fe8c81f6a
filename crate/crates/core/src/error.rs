use thiserror::Error;

/// Errors raised by the distribution, selection and interval routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested probability is below the range where a finite quantile exists.
    #[error("normal quantile not representable for p = {0:e}")]
    InfiniteQuantile(f64),

    #[error("degenerate truncation: support [{lo}, {hi}] has no representable mass under N({mean}, {sd}^2)")]
    DegenerateTruncation { mean: f64, sd: f64, lo: f64, hi: f64 },

    #[error("root not bracketed: target {target} unattainable within +/-{limit:e} of x = {x}")]
    RootNotBracketed { x: f64, target: f64, limit: f64 },

    #[error("lasso selected no features")]
    EmptySelection,

    #[error("selected design columns are rank deficient")]
    SingularDesign,

    #[error("column {column} of X has norm {norm}, expected 1")]
    NotNormalized { column: usize, norm: f64 },

    #[error("selection event violated: v_min = {v_min} > v_max = {v_max}")]
    InconsistentEvent { v_min: f64, v_max: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
