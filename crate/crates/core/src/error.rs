use thiserror::Error;

use crate::experiments::ExperimentError;
use crate::graph::GraphError;
use crate::lb::LbError;
use crate::oracle::OracleError;
use crate::sim::SimError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Lb(#[from] LbError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Experiment(#[from] ExperimentError),
    #[error("io error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
