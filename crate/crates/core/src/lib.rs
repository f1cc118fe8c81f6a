//! Selective confidence intervals after randomized selection.
//!
//! Three selection problems are covered: the largest of `n` Gaussian means
//! ([`winners_curse`]), the maximal contrast `X_j'Y` ([`max_contrast`]) and the
//! top lasso coefficient ([`lasso_dt`]). For each, an infer-and-widen interval
//! (a classical interval with a stability-adjusted level) is set against a
//! conditional competitor: data fission, randomized conditional selective
//! inference and data thinning respectively. [`oracle`] gives the narrowest
//! possible infer-and-widen widths by Monte Carlo, and [`simlab`] runs the
//! comparison grids.
//!
//! All randomness flows through [`RngStream`], keyed by `(seed, index, label)`,
//! so results do not depend on thread scheduling.

// `!(x > 0.0)` is the NaN-rejecting check used for every parameter guard.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod interval;
pub mod iw;
pub mod lasso_dt;
pub mod max_contrast;
pub mod oracle;
pub mod selection;
pub mod simlab;
pub mod stats;
pub mod winners_curse;

pub use error::{Error, Result};
pub use interval::{Interval, Method};
pub use iw::{IwOutcome, IwTuning};
pub use oracle::{oracle_coverage_check, oracle_halfwidth, OracleCurve, OracleModel, OracleSpec};
pub use selection::{LambdaRule, SelectionOutcome, SignDatum};
pub use simlab::{ExperimentConfig, RunRecord, Signal, Status, Vignette};
pub use stats::{RealInterval, RngStream, TruncatedGaussian};
