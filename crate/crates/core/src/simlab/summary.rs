use std::collections::BTreeMap;

use crate::interval::Method;
use crate::simlab::config::Vignette;
use crate::simlab::record::{RunRecord, Status};

/// Aggregates for one (vignette, method, n, p, c, alpha) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub vignette: Vignette,
    pub method: Method,
    pub n: usize,
    pub p: usize,
    pub c: f64,
    pub alpha: f64,
    pub records: usize,
    pub ok: usize,
    pub infinite: usize,
    pub empty_selection: usize,
    pub degenerate: usize,
    /// Mean over finite (`ok`) widths; NaN when there are none.
    pub mean_width: f64,
    /// Covered fraction over records that produced an interval (ok or infinite).
    pub coverage: f64,
}

impl CellSummary {
    pub fn infinite_fraction(&self) -> f64 {
        self.infinite as f64 / self.records as f64
    }
}

type Key = (Vignette, usize, usize, u64, u64, usize);

fn method_rank(m: Method) -> usize {
    Method::ALL.iter().position(|x| *x == m).unwrap_or(usize::MAX)
}

/// Groups records by cell; cells are ordered by vignette, n, p, c, alpha, method.
pub fn summarize(records: &[RunRecord]) -> Vec<CellSummary> {
    let mut groups: BTreeMap<Key, Vec<&RunRecord>> = BTreeMap::new();
    for r in records {
        // positive finite floats order like their bit patterns
        let key = (r.vignette, r.n, r.p, r.c.to_bits(), r.alpha.to_bits(), method_rank(r.method));
        groups.entry(key).or_default().push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let first = rs[0];
            let count = |s: Status| rs.iter().filter(|r| r.status == s).count();
            let finite: Vec<f64> = rs.iter().filter(|r| r.status == Status::Ok).map(|r| r.width).collect();
            let answered: Vec<&&RunRecord> = rs
                .iter()
                .filter(|r| matches!(r.status, Status::Ok | Status::Infinite))
                .collect();
            let mean = |v: &[f64]| {
                if v.is_empty() {
                    f64::NAN
                } else {
                    v.iter().sum::<f64>() / v.len() as f64
                }
            };
            let covered: Vec<f64> = answered.iter().map(|r| f64::from(u8::from(r.covered))).collect();
            CellSummary {
                vignette: first.vignette,
                method: first.method,
                n: first.n,
                p: first.p,
                c: first.c,
                alpha: first.alpha,
                records: rs.len(),
                ok: count(Status::Ok),
                infinite: count(Status::Infinite),
                empty_selection: count(Status::EmptySelection),
                degenerate: count(Status::Degenerate),
                mean_width: mean(&finite),
                coverage: mean(&covered),
            }
        })
        .collect()
}

/// Mean-width ratio of two methods in one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthRatio {
    pub vignette: Vignette,
    pub n: usize,
    pub p: usize,
    pub c: f64,
    pub alpha: f64,
    /// `+inf` whenever the numerator method produced any infinite interval.
    pub ratio: f64,
    pub infinite: bool,
}

/// `mean width(numerator) / mean width(denominator)` for every cell holding both.
pub fn width_ratios(summaries: &[CellSummary], numerator: Method, denominator: Method) -> Vec<WidthRatio> {
    let same_cell = |a: &CellSummary, b: &CellSummary| {
        a.vignette == b.vignette && a.n == b.n && a.p == b.p && a.c == b.c && a.alpha == b.alpha
    };
    summaries
        .iter()
        .filter(|s| s.method == numerator)
        .filter_map(|num| {
            let den = summaries
                .iter()
                .find(|d| d.method == denominator && same_cell(num, d))?;
            let infinite = num.infinite > 0;
            let ratio = if infinite {
                f64::INFINITY
            } else {
                num.mean_width / den.mean_width
            };
            Some(WidthRatio {
                vignette: num.vignette,
                n: num.n,
                p: num.p,
                c: num.c,
                alpha: num.alpha,
                ratio,
                infinite,
            })
        })
        .collect()
}
