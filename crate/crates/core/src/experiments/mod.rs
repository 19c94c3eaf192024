//! Batch driver: experiment specs, seed sweeps, CSV rows and scaling fits.

mod runner;
mod scaling;
mod spec;

use thiserror::Error;

pub use runner::{
    read_rows, run_experiment, run_experiment_with, run_one, run_serial, workers_from_env, write_rows, write_rows_file,
    ResultRow, CSV_COLUMNS, SCHEMA, WORKERS_ENV,
};
pub use scaling::{fit, fit_rows, Fit, FitPoint, Model};
pub use spec::{Bandwidth, ExperimentSpec, Generator};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("{0}")]
    Spec(String),
}
