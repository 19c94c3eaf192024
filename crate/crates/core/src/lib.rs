//! Message-counting simulation of synchronous distributed graph algorithms.
//!
//! The crate is organised bottom-up: [`graph`] holds the port-numbered
//! substrate, [`sim`] executes node programs round by round, [`lb`] builds
//! the lower-bound graph families, [`oracle`] solves small instances
//! exactly, [`algos`] contains the distributed algorithms and
//! [`experiments`] drives batches of runs.

pub mod algos;
pub mod error;
pub mod experiments;
pub mod graph;
pub mod lb;
pub mod oracle;
pub mod ratio;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
pub use graph::{EdgeRef, NodeId, Port, PortGraph};
pub use oracle::{Problem, Solution};
pub use sim::{BandwidthModel, KnowledgeModel, SimConfig, SimResult};
