//! Constant-round propose/accept matching.

use rand::Rng as _;
use serde::Serialize;

use crate::graph::{NodeId, Port, PortGraph};
use crate::oracle::Solution;
use crate::rng;
use crate::sim::{bits_for, Control, Incoming, NodeKnowledge, NodeProgram, Outbox, Payload};

const TAG: u32 = 2;
const T_DEG: u64 = 0;
const T_PROPOSE: u64 = 1;
const T_ACCEPT: u64 = 2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProposeConfig {
    pub alpha: f64,
    /// Spend one extra round sending the own degree to a random neighbour
    /// and derive `α = 1/(2r)` from the degrees seen locally.
    pub degree_exchange: bool,
}

impl ProposeConfig {
    pub fn new(alpha: f64) -> Self {
        ProposeConfig { alpha, degree_exchange: false }
    }

    /// `α = 1/(2r)` with `r = Δ/δ`.
    pub fn for_degrees(max_degree: usize, min_degree: usize) -> Self {
        let r = max_degree.max(1) as f64 / min_degree.max(1) as f64;
        ProposeConfig::new(1.0 / (2.0 * r))
    }

    pub fn for_graph(g: &PortGraph) -> Self {
        Self::for_degrees(g.max_degree(), g.min_degree())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProposeOutput {
    pub mate: Option<NodeId>,
    pub proposed: bool,
}

pub struct ProposeMatching {
    cfg: ProposeConfig,
    degree: usize,
    n: usize,
    rng: rng::Rng,
    seen_degrees: Vec<u64>,
    proposal: Option<Port>,
    mate: Option<NodeId>,
}

impl ProposeMatching {
    pub fn new(k: &NodeKnowledge, seed: u64, cfg: ProposeConfig) -> Self {
        ProposeMatching {
            cfg,
            degree: k.degree,
            n: k.n,
            rng: rng::rng(seed),
            seen_degrees: vec![k.degree as u64],
            proposal: None,
            mate: None,
        }
    }

    fn propose_round(&self) -> u64 {
        1 + self.cfg.degree_exchange as u64
    }

    fn alpha(&self) -> f64 {
        if !self.cfg.degree_exchange {
            return self.cfg.alpha;
        }
        let hi = *self.seen_degrees.iter().max().expect("own degree") as f64;
        let lo = *self.seen_degrees.iter().min().expect("own degree") as f64;
        lo.max(1.0) / (2.0 * hi.max(1.0))
    }

    fn random_port(&mut self) -> Port {
        self.rng.random_range(1..=self.degree as Port)
    }
}

impl NodeProgram for ProposeMatching {
    type Output = ProposeOutput;

    fn step(&mut self, round: u64, inbox: &[Incoming], out: &mut Outbox) -> Control {
        let pr = self.propose_round();
        if round < pr {
            if self.degree > 0 {
                let p = self.random_port();
                out.send(p, Payload::new().with(T_DEG, TAG).with(self.degree as u64, bits_for(self.n as u64)));
            }
            return Control::Continue;
        }
        if round == pr {
            for m in inbox {
                let mut r = m.payload.reader();
                if r.take(TAG) == Some(T_DEG) {
                    self.seen_degrees.push(r.take(bits_for(self.n as u64)).expect("degree"));
                }
            }
            if self.degree > 0 && self.rng.random_bool(self.alpha().clamp(0.0, 1.0)) {
                let p = self.random_port();
                self.proposal = Some(p);
                out.send(p, Payload::new().with(T_PROPOSE, TAG));
            }
            return Control::Continue;
        }
        if round == pr + 1 {
            let proposals: Vec<&Incoming> =
                inbox.iter().filter(|m| m.payload.reader().take(TAG) == Some(T_PROPOSE)).collect();
            let mut incident: Vec<Port> = proposals.iter().map(|m| m.port).collect();
            incident.extend(self.proposal);
            incident.sort_unstable();
            incident.dedup();
            if let ([m], [only]) = (proposals.as_slice(), incident.as_slice()) {
                debug_assert_eq!(m.port, *only);
                self.mate = Some(m.sender);
                if self.proposal != Some(m.port) {
                    out.send(m.port, Payload::new().with(T_ACCEPT, TAG));
                }
                return Control::Halt;
            }
            return if self.proposal.is_some() { Control::Continue } else { Control::Halt };
        }
        for m in inbox {
            if m.payload.reader().take(TAG) == Some(T_ACCEPT) && Some(m.port) == self.proposal {
                self.mate = Some(m.sender);
            }
        }
        Control::Halt
    }

    fn output(&self) -> ProposeOutput {
        ProposeOutput { mate: self.mate, proposed: self.proposal.is_some() }
    }
}

/// Matched edges confirmed by both endpoints.
pub fn matching_from_mates(g: &PortGraph, mates: &[Option<NodeId>]) -> Solution {
    let mut es = Vec::new();
    for v in 0..g.n() {
        if let Some(u) = mates[v].and_then(|id| g.index_of(id)) {
            if v < u && mates[u] == Some(g.id(v)) {
                es.push((v, u));
            }
        }
    }
    Solution::from_edges(es)
}
