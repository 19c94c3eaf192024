use serde::Serialize;

use super::{run, NodeKnowledge, NodeProgram, SimConfig, SimError};
use crate::graph::{cross_edges, EdgeRef, GraphError, PortGraph};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CrossingVerdict {
    Pass,
    /// Node indices whose outputs differ between the two graphs.
    Fail(Vec<usize>),
    /// `e` or `e'` carried traffic, so nothing is claimed.
    Vacuous,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrossingReport {
    pub verdict: CrossingVerdict,
    pub messages: u64,
    pub crossed_messages: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CrossingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

/// Runs the program on `g`; when neither `e` nor `e2` carried a message,
/// reruns on the crossed graph and compares outputs node for node.
pub fn run_pair_crossing_check<P, F>(
    g: &PortGraph,
    e: EdgeRef,
    e2: EdgeRef,
    mut factory: F,
    cfg: &SimConfig,
) -> Result<CrossingReport, CrossingError>
where
    P: NodeProgram,
    F: FnMut(&NodeKnowledge, u64) -> P,
{
    let crossed = cross_edges(g, e, e2)?;
    let base = run(g, &mut factory, cfg)?;
    if base.is_utilized(e.u, e.v) || base.is_utilized(e2.u, e2.v) {
        return Ok(CrossingReport {
            verdict: CrossingVerdict::Vacuous,
            messages: base.messages,
            crossed_messages: None,
        });
    }
    let other = run(&crossed, &mut factory, cfg)?;
    let diff: Vec<usize> = (0..g.n()).filter(|&v| base.outputs[v] != other.outputs[v]).collect();
    let verdict = if diff.is_empty() { CrossingVerdict::Pass } else { CrossingVerdict::Fail(diff) };
    Ok(CrossingReport { verdict, messages: base.messages, crossed_messages: Some(other.messages) })
}
