use std::fmt;
use std::io::{self, Write};

use crate::error::Error;
use crate::interval::{Interval, Method};
use crate::simlab::config::Vignette;

pub const CSV_HEADER: &str =
    "vignette,method,n,p,c,alpha,rep,lower,upper,width,target,covered,status,seed_label";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Ok,
    Infinite,
    EmptySelection,
    /// The method could not produce an interval (degenerate truncation,
    /// singular design, ...).
    Degenerate,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Infinite => "infinite",
            Status::EmptySelection => "empty_selection",
            Status::Degenerate => "degenerate",
        }
    }

    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::EmptySelection => Status::EmptySelection,
            _ => Status::Degenerate,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One method's interval for one replicate of one grid cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub vignette: Vignette,
    pub method: Method,
    pub n: usize,
    pub p: usize,
    pub c: f64,
    pub alpha: f64,
    pub rep: usize,
    pub lower: f64,
    pub upper: f64,
    pub width: f64,
    pub target: f64,
    pub covered: bool,
    pub status: Status,
    pub seed_label: String,
}

/// Grid-cell coordinates shared by every record of a cell.
#[derive(Debug, Clone, Copy)]
pub(crate) struct CellCoords {
    pub vignette: Vignette,
    pub n: usize,
    pub p: usize,
    pub c: f64,
    pub alpha: f64,
}

impl RunRecord {
    pub(crate) fn from_result(
        cell: CellCoords,
        method: Method,
        rep: usize,
        seed_label: &str,
        target: f64,
        result: Result<Interval, Error>,
    ) -> Self {
        let (lower, upper, covered, status) = match result {
            Ok(iv) if iv.is_infinite() => (iv.lo, iv.hi, true, Status::Infinite),
            Ok(iv) => (iv.lo, iv.hi, iv.contains(target), Status::Ok),
            Err(e) => (f64::NAN, f64::NAN, false, Status::from_error(&e)),
        };
        Self {
            vignette: cell.vignette,
            method,
            n: cell.n,
            p: cell.p,
            c: cell.c,
            alpha: cell.alpha,
            rep,
            lower,
            upper,
            width: upper - lower,
            target,
            covered,
            status,
            seed_label: seed_label.to_string(),
        }
    }
}

/// Shortest round-trip decimal, with `inf`, `-inf` and `nan` spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

pub fn write_record<W: Write>(w: &mut W, r: &RunRecord) -> io::Result<()> {
    writeln!(
        w,
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        r.vignette,
        r.method,
        r.n,
        r.p,
        format_float(r.c),
        format_float(r.alpha),
        r.rep,
        format_float(r.lower),
        format_float(r.upper),
        format_float(r.width),
        format_float(r.target),
        u8::from(r.covered),
        r.status,
        r.seed_label
    )
}

/// Header plus one line per record, in the given order.
pub fn write_csv<W: Write>(mut w: W, records: &[RunRecord]) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in records {
        write_record(&mut w, r)?;
    }
    w.flush()
}
