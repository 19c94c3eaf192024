//! Phased randomized greedy MIS for `G(n, p)`.
//!
//! Iteration `g` (counted across phases) occupies rounds `1 + g·L ..` with
//! `L = T + 2`: activation, `T` rounds of ID-priority greedy among the active
//! nodes, and a final notice from the new MIS nodes to all neighbours.

use rand::Rng as _;
use serde::Serialize;

use crate::graph::{NodeId, Port, PortGraph};
use crate::oracle::{is_maximal_independent_set, OracleError, Problem, Solution};
use crate::rng;
use crate::sim::{bits_for, Control, Incoming, NodeKnowledge, NodeProgram, Outbox, Payload};

const TAG: u32 = 2;
const T_ACT: u64 = 0;
const T_JOIN: u64 = 1;
const T_OUT: u64 = 2;
const T_NOTE: u64 = 3;

pub const ITERATIONS_PER_PHASE: u32 = 15;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MisPhaseConfig {
    pub q: f64,
    pub phases: u32,
    pub iterations: u32,
    /// Rounds granted to each inner greedy run.
    pub t_mis: u64,
}

impl MisPhaseConfig {
    pub fn new(n: usize, p: f64) -> Self {
        Self::with_constant(n, p, 100.0)
    }

    /// `q = c·ln(n)/(p·n)` clipped to `(0, 1]`.
    pub fn with_constant(n: usize, p: f64, c: f64) -> Self {
        let ln = (n.max(1) as f64).ln();
        let raw = c * ln / (p * n as f64);
        let q = if raw.is_finite() && raw > 0.0 { raw.min(1.0) } else { 1.0 };
        let phases = (1.0 / q).log2().ceil() as u32 + 1;
        MisPhaseConfig { q, phases, iterations: ITERATIONS_PER_PHASE, t_mis: 40 * ln.ceil().max(1.0) as u64 }
    }

    pub fn iteration_len(&self) -> u64 {
        self.t_mis + 2
    }

    /// Activation probability in phase `i` (1-based); the last phase activates
    /// every undecided node.
    pub fn q_phase(&self, i: u32) -> f64 {
        if i >= self.phases {
            1.0
        } else {
            (self.q * 2f64.powi(i as i32 - 1)).min(1.0)
        }
    }

    pub fn total_iterations(&self) -> u64 {
        (self.phases as u64 - 1) * self.iterations as u64 + 1
    }

    /// `(phase, iteration)` of global iteration `g`, both 1-based.
    pub fn locate(&self, g: u64) -> (u32, u32) {
        let regular = (self.phases as u64 - 1) * self.iterations as u64;
        if g >= regular {
            (self.phases, 1)
        } else {
            ((g / self.iterations as u64) as u32 + 1, (g % self.iterations as u64) as u32 + 1)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
enum Status {
    Undecided,
    In,
    Out,
}

/// Per-node result; `key` is the `(phase, iteration, inner ID)` of the
/// iteration in which the node was last active.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MisOutput {
    pub in_mis: bool,
    pub decided: bool,
    pub key: Option<(u32, u32, u64)>,
    pub unconverged: bool,
}

pub struct GreedyMis {
    cfg: MisPhaseConfig,
    id: NodeId,
    degree: usize,
    id_space: u64,
    rng: rng::Rng,
    status: Status,
    key: Option<(u32, u32, u64)>,
    unconverged: bool,
    /// Inside the current iteration: active, and the undecided active
    /// neighbours as `(port, inner, id)`.
    active: bool,
    cand: Vec<(Port, u64, NodeId)>,
    iter: u64,
}

impl GreedyMis {
    pub fn new(k: &NodeKnowledge, seed: u64, cfg: MisPhaseConfig) -> Self {
        let n = k.n.max(1) as u64;
        GreedyMis {
            cfg,
            id: k.id,
            degree: k.degree,
            id_space: n.saturating_mul(n).saturating_mul(n),
            rng: rng::rng(seed),
            status: Status::Undecided,
            key: None,
            unconverged: false,
            active: false,
            cand: Vec::new(),
            iter: 0,
        }
    }

    fn inner_bits(&self) -> u32 {
        bits_for(self.id_space)
    }

    fn tagged(t: u64) -> Payload {
        Payload::new().with(t, TAG)
    }

    fn start(&self, g: u64) -> u64 {
        1 + g * self.cfg.iteration_len()
    }

    fn end_round(&self) -> u64 {
        self.start(self.cfg.total_iterations())
    }

    fn my_inner(&self) -> u64 {
        self.key.map(|k| k.2).unwrap_or(0)
    }

    fn try_join(&mut self, out: &mut Outbox) {
        if self.status != Status::Undecided || !self.active {
            return;
        }
        let me = (self.my_inner(), self.id);
        if self.cand.iter().all(|&(_, inner, id)| me < (inner, id)) {
            self.status = Status::In;
            for &(p, _, _) in &self.cand {
                out.send(p, Self::tagged(T_JOIN));
            }
        }
    }

    fn decide_out(&mut self, out: &mut Outbox, joiners: &[Port]) {
        if self.status != Status::Undecided {
            return;
        }
        self.status = Status::Out;
        if self.active {
            for &(p, _, _) in &self.cand {
                if !joiners.contains(&p) {
                    out.send(p, Self::tagged(T_OUT));
                }
            }
        }
    }
}

impl NodeProgram for GreedyMis {
    type Output = MisOutput;

    fn step(&mut self, round: u64, inbox: &[Incoming], out: &mut Outbox) -> Control {
        let len = self.cfg.iteration_len();
        let total = self.cfg.total_iterations();
        let g = (round - 1) / len;
        let offset = (round - 1) % len;
        if g != self.iter {
            self.iter = g;
            self.active = false;
            self.cand.clear();
        }

        // A notice from the previous iteration lands at offset 0.
        let notes = inbox.iter().filter(|m| m.payload.reader().take(TAG) == Some(T_NOTE)).count();
        if notes > 0 && self.status == Status::Undecided {
            self.status = Status::Out;
        }
        if g >= total {
            return Control::Halt;
        }
        if self.status == Status::Out {
            return Control::Halt;
        }

        if offset == 0 {
            if self.status != Status::Undecided {
                return Control::Sleep(self.end_round());
            }
            let (phase, it) = self.cfg.locate(g);
            let q = self.cfg.q_phase(phase);
            if q >= 1.0 || self.rng.random_bool(q) {
                let inner = self.rng.random_range(1..=self.id_space);
                self.active = true;
                self.key = Some((phase, it, inner));
                let p = Self::tagged(T_ACT).with(inner, self.inner_bits());
                for port in 1..=self.degree as Port {
                    out.send(port, p.clone());
                }
                return Control::Continue;
            }
            return Control::Sleep(self.start(g + 1));
        }

        if !self.active {
            // Stray activation traffic for an inactive node: ignore it.
            return Control::Sleep(self.start(g + 1));
        }

        let mut joiners = Vec::new();
        for m in inbox {
            let mut r = m.payload.reader();
            match r.take(TAG).expect("tag") {
                T_ACT => {
                    let inner = r.take(self.inner_bits()).expect("inner id");
                    self.cand.push((m.port, inner, m.sender));
                }
                T_JOIN => joiners.push(m.port),
                T_OUT => self.cand.retain(|&(p, _, _)| p != m.port),
                _ => {}
            }
        }
        if !joiners.is_empty() {
            self.decide_out(out, &joiners);
            return Control::Halt;
        }

        let t = self.cfg.t_mis;
        if offset <= t {
            self.try_join(out);
            return Control::Sleep(self.start(g) + t + 1);
        }

        // offset == t + 1: notice round.
        if self.status == Status::In {
            let p = Self::tagged(T_NOTE);
            for port in 1..=self.degree as Port {
                out.send(port, p.clone());
            }
            return Control::Halt;
        }
        self.unconverged = true;
        self.active = false;
        Control::Sleep(self.start(g + 1))
    }

    fn output(&self) -> MisOutput {
        MisOutput {
            in_mis: self.status == Status::In,
            decided: self.status != Status::Undecided,
            key: self.key,
            unconverged: self.unconverged,
        }
    }
}

/// Nodes in the MIS, as indices.
pub fn mis_members(outputs: &[MisOutput]) -> Vec<usize> {
    (0..outputs.len()).filter(|&v| outputs[v].in_mis).collect()
}

/// Sequential greedy MIS over the order induced by the recorded keys (never
/// active nodes last, ties by ID); true when it reproduces the run.
pub fn replay_matches(g: &PortGraph, outputs: &[MisOutput]) -> bool {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| (outputs[v].key.is_none(), outputs[v].key, g.id(v)));
    let mut taken = vec![false; g.n()];
    let mut blocked = vec![false; g.n()];
    for v in order {
        if !blocked[v] {
            taken[v] = true;
            blocked[v] = true;
            for u in g.neighbors(v) {
                blocked[u] = true;
            }
        }
    }
    (0..g.n()).all(|v| taken[v] == outputs[v].in_mis)
}

/// Solutions read off a maximal independent set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derived {
    pub maxis: Solution,
    pub mds: Solution,
    pub mvc: Solution,
}

pub fn mis_derived_solutions(g: &PortGraph, mis: &[usize]) -> Result<Derived, OracleError> {
    if !is_maximal_independent_set(g, mis) {
        return Err(OracleError::Invalid("input is not a maximal independent set".into()));
    }
    let mut inside = vec![false; g.n()];
    for &v in mis {
        inside[v] = true;
    }
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !inside[v]).collect();
    Ok(Derived {
        maxis: Solution::from_vertices(Problem::MaxIs, mis.to_vec()),
        mds: Solution::from_vertices(Problem::Mds, mis.to_vec()),
        mvc: Solution::from_vertices(Problem::Mvc, rest),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, empty, gen_gnp};
    use crate::sim::{run, SimConfig, SimResult};

    fn mis(g: &PortGraph, cfg: &MisPhaseConfig, seed: u64) -> SimResult<MisOutput> {
        run(g, |k, s| GreedyMis::new(k, s, cfg.clone()), &SimConfig::default().with_seed(seed)).unwrap()
    }

    #[test]
    fn phase_schedule() {
        let c = MisPhaseConfig::with_constant(1024, 0.5, 1.0);
        assert!(c.q < 1.0);
        assert_eq!(c.phases, (1.0 / c.q).log2().ceil() as u32 + 1);
        assert_eq!(c.q_phase(c.phases), 1.0);
        assert_eq!(c.locate(0), (1, 1));
        assert_eq!(c.locate(15), (2, 1));
        assert_eq!(c.locate(c.total_iterations() - 1), (c.phases, 1));
        assert_eq!(c.t_mis, 40 * 7);
        assert_eq!(MisPhaseConfig::new(10, 0.5).phases, 1);
    }

    #[test]
    fn empty_graph_takes_everyone() {
        let g = empty(9);
        let res = mis(&g, &MisPhaseConfig::new(9, 0.1), 1);
        assert!(res.outputs.iter().all(|o| o.in_mis));
        assert_eq!(res.messages, 0);
    }

    #[test]
    fn clique_takes_one() {
        let g = complete(12);
        let res = mis(&g, &MisPhaseConfig::new(12, 1.0), 3);
        assert_eq!(mis_members(&res.outputs).len(), 1);
        assert!(replay_matches(&g, &res.outputs));
    }

    #[test]
    fn multi_phase_runs_replay() {
        for s in 0..5 {
            let g = gen_gnp(120, 0.08, s).unwrap();
            let cfg = MisPhaseConfig::with_constant(120, 0.08, 2.0);
            assert!(cfg.phases > 1);
            let res = mis(&g, &cfg, s);
            let m = mis_members(&res.outputs);
            assert!(is_maximal_independent_set(&g, &m));
            assert!(replay_matches(&g, &res.outputs));
            assert!(res.outputs.iter().all(|o| o.decided && !o.unconverged));
        }
    }

    #[test]
    fn derived_solutions_on_four_cycle() {
        let g = cycle(4);
        let d = mis_derived_solutions(&g, &[0, 2]).unwrap();
        d.maxis.check(&g).unwrap();
        d.mds.check(&g).unwrap();
        d.mvc.check(&g).unwrap();
        assert_eq!(d.mvc.vertices(), &[1, 3]);
        assert!(mis_derived_solutions(&g, &[0]).is_err());
    }
}
