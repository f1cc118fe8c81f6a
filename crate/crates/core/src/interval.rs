use std::fmt;
use std::str::FromStr;

use crate::error::{domain, Error, Result};
use crate::stats::normal_upper_quantile;

/// The interval constructions compared throughout the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    /// Plug-in interval that ignores selection.
    Classical,
    /// Infer-and-widen with the stability-based level adjustment.
    InferAndWiden,
    /// Laplace data fission (winner's curse).
    Fission,
    /// Gaussian thinning with the unbiased midpoint (winner's curse).
    GaussThin,
    /// Randomized conditional selective inference (maximal contrast).
    Rcsi,
    /// Gaussian data thinning after the lasso.
    DataThinning,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Classical,
        Method::InferAndWiden,
        Method::Fission,
        Method::GaussThin,
        Method::Rcsi,
        Method::DataThinning,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Classical => "classical",
            Method::InferAndWiden => "iw",
            Method::Fission => "fission",
            Method::GaussThin => "gauss_thin",
            Method::Rcsi => "rcsi",
            Method::DataThinning => "dt",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::Domain(format!("unknown method '{s}'")))
    }
}

/// A confidence interval with its nominal level `1 - alpha`.
///
/// Endpoints are infinite only for an infer-and-widen interval whose adjusted
/// level has no representable quantile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub level: f64,
    pub method: Method,
    pub midpoint: Option<f64>,
}

impl Interval {
    pub fn new(lo: f64, hi: f64, level: f64, method: Method) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi {
            return domain(format!("invalid interval endpoints [{lo}, {hi}]"));
        }
        check_level(level)?;
        Ok(Self {
            lo,
            hi,
            level,
            method,
            midpoint: None,
        })
    }

    /// `[mid - half_width, mid + half_width]`.
    pub fn symmetric(mid: f64, half_width: f64, level: f64, method: Method) -> Result<Self> {
        if !(half_width >= 0.0) {
            return domain(format!("half-width must be nonnegative, got {half_width}"));
        }
        let mut iv = Self::new(mid - half_width, mid + half_width, level, method)?;
        iv.midpoint = Some(mid);
        Ok(iv)
    }

    /// The unselective interval `mid +/- sd z_{1-alpha/2}`.
    pub fn classical(mid: f64, sd: f64, alpha: f64) -> Result<Self> {
        check_level(1.0 - alpha)?;
        let z = normal_upper_quantile(alpha / 2.0)?;
        Self::symmetric(mid, sd * z, 1.0 - alpha, Method::Classical)
    }

    pub fn infinite(mid: f64, level: f64, method: Method) -> Result<Self> {
        Self::symmetric(mid, f64::INFINITY, level, method)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_infinite(&self) -> bool {
        self.lo.is_infinite() || self.hi.is_infinite()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

pub(crate) fn check_level(level: f64) -> Result<()> {
    if level > 0.0 && level < 1.0 {
        Ok(())
    } else {
        domain(format!("level must lie in (0, 1), got {level}"))
    }
}

pub(crate) fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        domain(format!("alpha must lie in (0, 1), got {alpha}"))
    }
}
