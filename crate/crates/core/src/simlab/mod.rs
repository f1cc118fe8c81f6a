//! Data generation, experiment grids, CSV persistence and aggregation.

mod config;
mod data;
mod grid;
mod record;
mod summary;

pub use config::{ExperimentConfig, Signal, Vignette};
pub use data::{equicorrelated_rows, gen_design, gen_signal};
pub use grid::{build_model, run_grid, seed_label, DataModel};
pub use record::{format_float, write_csv, write_record, RunRecord, Status, CSV_HEADER};
pub use summary::{summarize, width_ratios, CellSummary, WidthRatio};
