//! Baseline: collect the whole topology at the tree root, solve it exactly
//! and send everything back down.

use std::collections::BTreeSet;

use serde::Serialize;

use super::util::{msg, open, PortQueues, Tree};
use crate::graph::{NodeId, PortGraph};
use crate::oracle::{exact_with, Problem, SizeGuard, Solution, Witness};
use crate::sim::{Control, Incoming, NodeKnowledge, NodeProgram, Outbox};

const T_NODE: u8 = 2;
const T_EDGE: u8 = 3;
const T_UPDONE: u8 = 4;
const T_SOLV: u8 = 5;
const T_SOLM: u8 = 6;
const T_END: u8 = 7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GatherSolution {
    pub problem: Problem,
    /// Vertex solutions as IDs; matchings as ID pairs.
    pub ids: Vec<NodeId>,
    pub pairs: Vec<(NodeId, NodeId)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GatherOutput {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<(NodeId, NodeId)>,
    pub solutions: Vec<GatherSolution>,
    /// The root's solver refused the component.
    pub refused: bool,
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct GatherConfig {
    pub problems: Vec<Problem>,
    pub guard: SizeGuard,
}

impl Default for GatherConfig {
    fn default() -> Self {
        GatherConfig { problems: Problem::ALL.to_vec(), guard: SizeGuard::default() }
    }
}

pub struct GatherAll {
    cfg: GatherConfig,
    tree: Tree,
    q: PortQueues,
    started: bool,
    up_wait: usize,
    nodes: BTreeSet<NodeId>,
    edges: BTreeSet<(NodeId, NodeId)>,
    sols: Vec<GatherSolution>,
    refused: bool,
    done: bool,
}

impl GatherAll {
    pub fn new(k: &NodeKnowledge, cfg: GatherConfig) -> Self {
        GatherAll {
            cfg,
            tree: Tree::new(k),
            q: PortQueues::new(k.degree),
            started: false,
            up_wait: 0,
            nodes: BTreeSet::new(),
            edges: BTreeSet::new(),
            sols: Vec::new(),
            refused: false,
            done: false,
        }
    }

    fn w(&self) -> u32 {
        self.tree.id_bits
    }

    fn begin(&mut self) {
        self.started = true;
        self.up_wait = self.tree.children.len();
        let id = self.tree.id;
        self.nodes.insert(id);
        let mine: Vec<NodeId> =
            self.tree.nbr_ids.iter().map(|x| x.expect("neighbour id")).filter(|&x| x > id).collect();
        for b in mine {
            self.edges.insert((id, b));
        }
        if let Some(p) = self.tree.parent {
            let w = self.w();
            self.q.push(p, msg(T_NODE).with(id, w));
            for b in self.tree.nbr_ids.iter().flatten().filter(|&&b| b > id) {
                self.q.push(p, msg(T_EDGE).with(id, w).with(*b, w));
            }
        }
        self.maybe_up_done();
    }

    fn maybe_up_done(&mut self) {
        if !self.started || self.up_wait > 0 {
            return;
        }
        match self.tree.parent {
            Some(p) => self.q.push(p, msg(T_UPDONE)),
            None => self.solve_and_send(),
        }
        self.up_wait = usize::MAX;
    }

    fn solve_and_send(&mut self) {
        let ids: Vec<NodeId> = self.nodes.iter().copied().collect();
        let idx = |x: NodeId| ids.binary_search(&x).expect("known node");
        let pairs: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (idx(a), idx(b))).collect();
        let g = PortGraph::from_edges(ids.len(), &pairs)
            .and_then(|g| g.with_ids(ids.clone()))
            .expect("collected topology is a simple graph");
        for &problem in &self.cfg.problems {
            match exact_with(problem, &g, self.cfg.guard) {
                Ok(sol) => self.sols.push(to_ids(problem, &sol, &g)),
                Err(_) => self.refused = true,
            }
        }
        self.broadcast_down();
        self.done = true;
    }

    fn broadcast_down(&mut self) {
        let w = self.w();
        for &c in &self.tree.children {
            for &v in &self.nodes {
                self.q.push(c, msg(T_NODE).with(v, w));
            }
            for &(a, b) in &self.edges {
                self.q.push(c, msg(T_EDGE).with(a, w).with(b, w));
            }
            for s in &self.sols {
                let code = problem_code(s.problem);
                for &v in &s.ids {
                    self.q.push(c, msg(T_SOLV).with(code, 2).with(v, w));
                }
                for &(a, b) in &s.pairs {
                    self.q.push(c, msg(T_SOLM).with(a, w).with(b, w));
                }
            }
            self.q.push(c, msg(T_END).with(self.refused as u64, 1));
        }
    }

    fn is_from_parent(&self, m: &Incoming) -> bool {
        self.tree.parent == Some(m.port)
    }

    fn on_message(&mut self, m: &Incoming) {
        let w = self.w();
        let down = self.is_from_parent(m);
        let (tag, mut r) = open(m);
        match tag {
            T_NODE => {
                let v = r.take(w).expect("id");
                self.nodes.insert(v);
                self.relay(m, down);
            }
            T_EDGE => {
                let a = r.take(w).expect("id");
                let b = r.take(w).expect("id");
                self.edges.insert((a.min(b), a.max(b)));
                self.relay(m, down);
            }
            T_UPDONE => {
                self.up_wait -= 1;
                self.maybe_up_done();
            }
            T_SOLV => {
                let problem = code_problem(r.take(2).expect("code"));
                let v = r.take(w).expect("id");
                self.sol_entry(problem).ids.push(v);
                self.relay(m, true);
            }
            T_SOLM => {
                let a = r.take(w).expect("id");
                let b = r.take(w).expect("id");
                self.sol_entry(Problem::MaxM).pairs.push((a, b));
                self.relay(m, true);
            }
            T_END => {
                self.refused = r.take(1) == Some(1);
                let order = self.cfg.problems.clone();
                if !self.refused {
                    for &p in &order {
                        self.sol_entry(p);
                    }
                }
                self.sols.sort_by_key(|s| order.iter().position(|&p| p == s.problem));
                self.relay(m, true);
                self.done = true;
            }
            t => unreachable!("unexpected gather tag {t}"),
        }
    }

    fn sol_entry(&mut self, problem: Problem) -> &mut GatherSolution {
        let i = match self.sols.iter().position(|s| s.problem == problem) {
            Some(i) => i,
            None => {
                self.sols.push(GatherSolution { problem, ids: Vec::new(), pairs: Vec::new() });
                self.sols.len() - 1
            }
        };
        &mut self.sols[i]
    }

    /// Up-going records travel to the parent; down-going ones to all children.
    fn relay(&mut self, m: &Incoming, down: bool) {
        if down {
            for &c in &self.tree.children {
                self.q.push(c, m.payload.clone());
            }
        } else if let Some(p) = self.tree.parent {
            self.q.push(p, m.payload.clone());
        }
    }
}

fn problem_code(p: Problem) -> u64 {
    match p {
        Problem::Mvc => 0,
        Problem::Mds => 1,
        Problem::MaxIs => 2,
        Problem::MaxM => 3,
    }
}

fn code_problem(c: u64) -> Problem {
    [Problem::Mvc, Problem::Mds, Problem::MaxIs, Problem::MaxM][c as usize]
}

fn to_ids(problem: Problem, sol: &Solution, g: &PortGraph) -> GatherSolution {
    let (ids, pairs) = match &sol.witness {
        Witness::Vertices(_) => (sol.ids(g), Vec::new()),
        Witness::Edges(es) => (Vec::new(), es.iter().map(|&(a, b)| (g.id(a), g.id(b))).collect()),
    };
    GatherSolution { problem, ids, pairs }
}

impl NodeProgram for GatherAll {
    type Output = GatherOutput;

    fn step(&mut self, round: u64, inbox: &[Incoming], out: &mut Outbox) -> Control {
        for m in inbox {
            if !self.tree.handle(m, &mut self.q) {
                self.on_message(m);
            }
        }
        self.tree.wake(round, &mut self.q);
        let Some(ready) = self.tree.ready_round() else {
            return Control::Sleep(self.tree.start_round());
        };
        if !self.started && round >= ready {
            self.begin();
        }
        self.q.flush(out);
        if self.done && self.q.is_empty() {
            Control::Halt
        } else if !self.q.is_empty() {
            Control::Continue
        } else if !self.started {
            Control::Sleep(ready)
        } else {
            Control::Idle
        }
    }

    fn output(&self) -> GatherOutput {
        GatherOutput {
            nodes: self.nodes.iter().copied().collect(),
            edges: self.edges.iter().copied().collect(),
            solutions: self.sols.clone(),
            refused: self.refused,
            complete: self.done,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{empty, gen_gnp};
    use crate::oracle::optimum;
    use crate::sim::{run, SimConfig};

    fn gather(g: &PortGraph) -> crate::sim::SimResult<GatherOutput> {
        run(g, |k, _| GatherAll::new(k, GatherConfig::default()), &SimConfig::default()).unwrap()
    }

    #[test]
    fn everyone_learns_the_edge_list() {
        let g = gen_gnp(20, 0.3, 4).unwrap();
        let res = gather(&g);
        let mut want = g.id_edge_pairs();
        want.iter_mut().for_each(|e| *e = (e.0.min(e.1), e.0.max(e.1)));
        want.sort_unstable();
        for o in &res.outputs {
            assert!(o.complete);
            assert_eq!(o.edges, want);
        }
        assert!(res.messages <= 20u64.pow(3));
    }

    #[test]
    fn matches_oracles_at_twelve_nodes() {
        for s in 0..3 {
            let g = gen_gnp(12, 0.35, s).unwrap();
            let res = gather(&g);
            for sol in &res.outputs[0].solutions {
                let opt = optimum(sol.problem, &g, SizeGuard::default()).unwrap();
                let size = if sol.problem == Problem::MaxM { sol.pairs.len() } else { sol.ids.len() };
                if g.is_connected() {
                    assert_eq!(size, opt, "{:?}", sol.problem);
                }
            }
            assert!(res.outputs.iter().all(|o| o.solutions == res.outputs[0].solutions) || !g.is_connected());
        }
    }

    #[test]
    fn lone_node_is_silent() {
        let res = gather(&empty(1));
        assert_eq!(res.messages, 0);
        assert!(res.outputs[0].complete);
        assert_eq!(res.outputs[0].solutions.len(), 4);
    }
}
