use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::interval::{Interval, Method};
use crate::iw::IwOutcome;
use crate::lasso_dt::{classical_interval_v3, dt_interval, selected_target};
use crate::max_contrast::{classical_interval_v2, iw_tuning_v2, rcsi_interval_v2};
use crate::selection::{contrasts, select_v1, select_v2, select_v3, LambdaRule, SelectionOutcome};
use crate::simlab::config::{ExperimentConfig, Signal, Vignette};
use crate::simlab::data::{gen_design, gen_signal};
use crate::simlab::record::{CellCoords, RunRecord};
use crate::stats::{sample_normal, RngStream};
use crate::winners_curse::{
    classical_interval_v1, fission_interval_v1, gauss_thin_interval_v1, iw_interval_from, iw_tuning_v1,
};

/// Fixed design (if any) and true mean shared by every replicate of a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DataModel {
    pub x: Option<DMatrix<f64>>,
    pub mu: Vec<f64>,
}

impl DataModel {
    /// One draw of `Y = mu + eps`, `eps ~ N(0, sigma^2 I)`.
    pub fn draw(&self, sigma: f64, stream: &mut RngStream) -> Result<Vec<f64>> {
        let eps = sample_normal(stream, self.mu.len(), sigma)?;
        Ok(self.mu.iter().zip(eps).map(|(m, e)| m + e).collect())
    }
}

/// Builds the design and mean from the master seed.
///
/// The design and the signal use their own streams, so changing the c grid or
/// the replicate count leaves them untouched.
pub fn build_model(config: &ExperimentConfig) -> Result<DataModel> {
    config.validate()?;
    let seed = config.seed;
    let signal = |len: usize| -> Result<Vec<f64>> {
        match config.signal {
            Signal::Null => Ok(vec![0.0; len]),
            Signal::Exponential { mean, sparsity } => {
                gen_signal(len, sparsity, mean, &mut RngStream::new(seed, 0, "signal"))
            }
        }
    };
    match config.vignette {
        Vignette::V1 => Ok(DataModel {
            x: None,
            mu: signal(config.n)?,
        }),
        Vignette::V2 | Vignette::V3 => {
            let x = gen_design(config.n, config.p, config.rho, &mut RngStream::new(seed, 0, "design"))?;
            let phi = signal(config.p)?;
            let mu = if config.mu_equals_phi {
                phi
            } else {
                (&x * nalgebra::DVector::from_vec(phi)).as_slice().to_vec()
            };
            Ok(DataModel { x: Some(x), mu })
        }
    }
}

pub fn seed_label(seed: u64, rep: usize, cell: usize) -> String {
    format!("s{seed}/r{rep}/c{cell}")
}

struct Cell {
    index: usize,
    coords: CellCoords,
    tuning: Option<IwOutcome>,
}

/// Runs every method of `config` on every (c, replicate) pair.
///
/// Records come out cell by cell, replicate by replicate, methods in the
/// configured order, whatever the thread count. Method failures become
/// records with a non-ok status.
pub fn run_grid(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    let model = build_model(config)?;
    let dim = config.dim();
    let mut cells = Vec::with_capacity(config.c_grid.len());
    for (index, &c) in config.c_grid.iter().enumerate() {
        let tuning = if config.methods.contains(&Method::InferAndWiden) {
            Some(match config.vignette {
                Vignette::V1 => iw_tuning_v1(config.alpha, dim, c)?,
                _ => iw_tuning_v2(config.alpha, dim, c)?,
            })
        } else {
            None
        };
        let coords = CellCoords {
            vignette: config.vignette,
            n: config.n,
            p: dim,
            c,
            alpha: config.alpha,
        };
        cells.push(Cell { index, coords, tuning });
    }

    let jobs: Vec<(usize, usize)> = (0..cells.len())
        .flat_map(|k| (0..config.replicates).map(move |r| (k, r)))
        .collect();
    let work = || -> Result<Vec<RunRecord>> {
        let chunks: Vec<Vec<RunRecord>> = jobs
            .par_iter()
            .map(|&(k, r)| run_replicate(config, &model, &cells[k], r))
            .collect::<Result<_>>()?;
        Ok(chunks.into_iter().flatten().collect())
    };
    match config.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    }
}

fn run_replicate(config: &ExperimentConfig, model: &DataModel, cell: &Cell, rep: usize) -> Result<Vec<RunRecord>> {
    let seed = config.seed;
    let (alpha, sigma, c) = (config.alpha, config.sigma, cell.coords.c);
    let label = seed_label(seed, rep, cell.index);
    let y = model.draw(sigma, &mut RngStream::new(seed, rep as u64, "data"))?;
    let mut select_stream = RngStream::new(seed, rep as u64, &format!("cell{}/select", cell.index));
    let record = |method: Method, target: f64, result: Result<Interval>| {
        RunRecord::from_result(cell.coords, method, rep, &label, target, result)
    };
    let iw = |mid: f64| match &cell.tuning {
        Some(t) => iw_interval_from(mid, t, alpha, sigma),
        None => domain("infer-and-widen tuning missing"),
    };

    let mut out = Vec::with_capacity(config.methods.len());
    match config.vignette {
        Vignette::V1 => {
            let sel = select_v1(&y, c, &mut select_stream)?;
            let i = sel.index();
            let target = model.mu[i];
            for &m in &config.methods {
                out.push(match m {
                    Method::Classical => record(m, target, classical_interval_v1(&y, &sel, alpha, sigma)),
                    Method::InferAndWiden => record(m, target, iw(y[i])),
                    Method::Fission => record(m, target, fission_interval_v1(&y, &sel, alpha, c, sigma)),
                    Method::GaussThin => {
                        // The thinning rule makes its own (Gaussian) selection.
                        let mut s = RngStream::new(seed, rep as u64, &format!("cell{}/gauss", cell.index));
                        match gauss_thin_interval_v1(&y, c, sigma, alpha, &mut s) {
                            Ok((g, iv)) => record(m, model.mu[g.index()], Ok(iv)),
                            Err(e) => record(m, f64::NAN, Err(e)),
                        }
                    }
                    _ => unreachable!("validated method list"),
                });
            }
        }
        Vignette::V2 => {
            let x = model.x.as_ref().expect("design present");
            let sel = select_v2(&y, x, c, &mut select_stream)?;
            let j = sel.index();
            let target = contrasts(x, &model.mu)[j];
            let stat = contrasts(x, &y)[j];
            for &m in &config.methods {
                out.push(match m {
                    Method::Classical => record(m, target, classical_interval_v2(&y, x, &sel, alpha, sigma)),
                    Method::InferAndWiden => record(m, target, iw(stat)),
                    Method::Rcsi => record(m, target, rcsi_interval_v2(&y, x, &sel, alpha, sigma)),
                    _ => unreachable!("validated method list"),
                });
            }
        }
        Vignette::V3 => {
            let x = model.x.as_ref().expect("design present");
            let rule = LambdaRule::CrossValidated {
                folds: config.cv_folds,
                grid_size: config.lambda_grid,
            };
            let sel: Result<SelectionOutcome> = select_v3(&y, x, c, sigma, &mut select_stream, rule);
            match sel {
                Ok(sel) => {
                    let target = selected_target(x, &sel.selected, &model.mu);
                    for &m in &config.methods {
                        let t = *target.as_ref().unwrap_or(&f64::NAN);
                        let result = match (&target, m) {
                            (Err(e), _) => Err(e.clone()),
                            (Ok(_), Method::Classical) => classical_interval_v3(&y, x, &sel, alpha, sigma),
                            (Ok(_), Method::DataThinning) => dt_interval(&y, x, &sel, c, alpha, sigma),
                            _ => unreachable!("validated method list"),
                        };
                        out.push(record(m, t, result));
                    }
                }
                Err(e) => {
                    for &m in &config.methods {
                        out.push(record(m, f64::NAN, Err(e.clone())));
                    }
                }
            }
        }
    }
    Ok(out)
}
