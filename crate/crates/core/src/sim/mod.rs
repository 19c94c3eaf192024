//! Synchronous round executor.
//!
//! A run steps every node in round 1. Messages sent in round `r` are
//! delivered at round `r + 1`. A node is stepped again when it has mail or
//! when the wake-up it requested is due, so silent stretches cost nothing to
//! simulate and are never charged.

mod crossing;
mod engine;
mod payload;
mod trace;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{NodeId, Port};

pub use crossing::{run_pair_crossing_check, CrossingError, CrossingReport, CrossingVerdict};
pub use engine::{knowledge_of, private_seed, run};
pub use payload::{bits_for, Payload, Reader};
pub use trace::{write_trace, TraceRecord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KnowledgeModel {
    Kt0,
    Kt1,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BandwidthModel {
    /// At most `c * ceil(log2 n)` bits per message.
    Congest {
        c: u32,
    },
    Local,
}

impl Default for BandwidthModel {
    fn default() -> Self {
        BandwidthModel::Congest { c: 8 }
    }
}

impl BandwidthModel {
    pub fn limit_bits(self, n: usize) -> Option<usize> {
        match self {
            BandwidthModel::Congest { c } => Some(c as usize * ceil_log2(n).max(1)),
            BandwidthModel::Local => None,
        }
    }
}

pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    pub knowledge: KnowledgeModel,
    pub bandwidth: BandwidthModel,
    pub seed: u64,
    pub round_cap: u64,
    pub trace: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            knowledge: KnowledgeModel::Kt0,
            bandwidth: BandwidthModel::default(),
            seed: 0,
            round_cap: 1_000_000,
            trace: false,
        }
    }
}

impl SimConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trace(mut self) -> Self {
        self.trace = true;
        self
    }

    pub fn with_bandwidth(mut self, bandwidth: BandwidthModel) -> Self {
        self.bandwidth = bandwidth;
        self
    }

    pub fn with_knowledge(mut self, knowledge: KnowledgeModel) -> Self {
        self.knowledge = knowledge;
        self
    }

    pub fn with_round_cap(mut self, cap: u64) -> Self {
        self.round_cap = cap;
        self
    }
}

/// What a node knows before round 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeKnowledge {
    pub id: NodeId,
    pub degree: usize,
    pub n: usize,
    /// Width in bits of the largest ID in use.
    pub id_bits: u32,
    /// Neighbour ID behind each port (index `port - 1`); only under KT1.
    pub neighbor_ids: Option<Vec<NodeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Incoming {
    pub port: Port,
    /// Stamped by the engine: the ID of the node on the other side.
    pub sender: NodeId,
    pub payload: Payload,
}

#[derive(Debug)]
pub struct Outbox {
    degree: usize,
    pub(crate) msgs: Vec<(Port, Payload)>,
}

impl Outbox {
    pub(crate) fn new(degree: usize) -> Self {
        Outbox { degree, msgs: Vec::new() }
    }

    pub fn send(&mut self, port: Port, payload: Payload) {
        self.msgs.push((port, payload));
    }

    pub fn broadcast(&mut self, payload: &Payload) {
        for p in 1..=self.degree as Port {
            self.msgs.push((p, payload.clone()));
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_empty(&self) -> bool {
        self.msgs.is_empty()
    }
}

/// Scheduling request returned by every step.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Control {
    /// Step again next round.
    Continue,
    /// Step again at the given round, or earlier if mail arrives.
    Sleep(u64),
    /// Step again only when mail arrives.
    Idle,
    Halt,
}

pub trait NodeProgram {
    type Output: Clone + fmt::Debug + PartialEq + Serialize;

    fn step(&mut self, round: u64, inbox: &[Incoming], out: &mut Outbox) -> Control;

    fn output(&self) -> Self::Output;
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("bandwidth violation: node {node} round {round} port {port}: {bits} bits > limit {limit}")]
    Bandwidth { node: NodeId, round: u64, port: Port, bits: usize, limit: usize },
    #[error("node {node} round {round}: two messages on port {port}")]
    DuplicatePort { node: NodeId, round: u64, port: Port },
    #[error("node {node} round {round}: port {port} out of range")]
    BadPort { node: NodeId, round: u64, port: Port },
    #[error("node {node} round {round}: empty payload on port {port}")]
    EmptyPayload { node: NodeId, round: u64, port: Port },
    #[error("invalid configuration: {0}")]
    Config(String),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimResult<O> {
    pub rounds: u64,
    pub messages: u64,
    pub bits: u64,
    /// Messages sent in round `r` at index `r - 1`.
    pub per_round: Vec<u64>,
    /// Utilised edges as sorted `(min, max)` node-index pairs.
    pub utilized: Vec<(usize, usize)>,
    pub outputs: Vec<O>,
    pub timed_out: bool,
    /// Stopped because no node could act again although some had not halted.
    pub quiescent: bool,
    pub trace: Option<Vec<TraceRecord>>,
}

impl<O> SimResult<O> {
    pub fn is_utilized(&self, u: usize, v: usize) -> bool {
        self.utilized.binary_search(&(u.min(v), u.max(v))).is_ok()
    }

    pub const CSV_HEADER: &'static str = "rounds,messages,bits,utilized_edges,timed_out,quiescent";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.rounds,
            self.messages,
            self.bits,
            self.utilized.len(),
            self.timed_out,
            self.quiescent
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn congest_limit() {
        assert_eq!(BandwidthModel::default().limit_bits(1024), Some(80));
        assert_eq!(BandwidthModel::Congest { c: 8 }.limit_bits(1), Some(8));
        assert_eq!(BandwidthModel::Local.limit_bits(1024), None);
    }
}
