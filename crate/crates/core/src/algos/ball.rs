//! Ball growing: repeatedly pick the smallest-ID active node, grow a BFS ball
//! around it until the ball optimum stops growing by more than a `1+ε`
//! factor, solve the ball exactly and remove it.
//!
//! A time-encoded flood builds one coordination tree per component. Each
//! iteration runs FIND/ECHO on that tree to locate the initiator; the
//! initiator then explores its ball layer by layer and learns the ball's
//! topology from JOIN and EDGE records convergecast along the ball tree.
//! Solution records are routed back down and a FIN_END/FIN_ACK wave closes
//! the iteration. All per-port traffic goes through FIFO queues.
//!
//! Per-problem rules, with `f` the ball optimum and lookahead `k`:
//!
//! | problem | condition                          | adds                     | deletes   |
//! |---------|------------------------------------|--------------------------|-----------|
//! | MaxIS   | `α(B_{r+1}) ≤ (1+ε)·α(B_r)`         | lex-min MaxIS of `B_r`   | `B_{r+1}` |
//! | MVC     | `τ(B_{r+1}) ≤ (1+ε)·τ(B_r)`         | lex-min MVC of `B_{r+1}` | `B_r`     |
//! | MaxM    | `ν(B_{r+2}) ≤ (1+ε)·ν(B_r)`         | max matching of `B_r`    | `B_{r+1}` |
//! | MDS     | `γ(C_{r+2}) ≤ (1+ε)·γ(C_r)`         | lex-min dominators       | nothing   |
//!
//! For MDS, `C_r` is the set of not yet dominated nodes within distance `r`
//! and `γ(C_r)` the fewest nodes of `B_{r+1}` dominating it; nodes are never
//! removed, dominated ones just stop being candidates.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::util::{msg, open, PortQueues, Tree};
use crate::graph::{NodeId, Port, PortGraph};
use crate::oracle::bitgraph::{self, BitGraph};
use crate::oracle::{max_matching_edges, Problem, Solution};
use crate::ratio::Ratio;
use crate::sim::{Control, Incoming, NodeKnowledge, NodeProgram, Outbox};

const T_FIND: u8 = 2;
const T_START: u8 = 3;
const T_HALT: u8 = 4;
const T_ITER_DONE: u8 = 5;
const T_GROW: u8 = 6;
const T_EXPLORE: u8 = 7;
const T_JOIN: u8 = 8;
const T_NACK: u8 = 9;
const T_EDGE: u8 = 10;
const T_FIN: u8 = 11;
const T_MATE: u8 = 12;
const T_END: u8 = 13;
const T_GONE: u8 = 14;

const NACK_OLD: u64 = 0;
const NACK_PEER: u64 = 1;
const NACK_NEW: u64 = 2;

const FIN_DEL: u64 = 0;
const FIN_SOL: u64 = 1;
const FIN_SOL_DEL: u64 = 2;
const FIN_COVER: u64 = 3;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BallGrowConfig {
    pub problem: Problem,
    pub eps: Ratio,
    /// Overrides the default radius cap.
    pub radius_cap: Option<u32>,
}

impl BallGrowConfig {
    pub fn new(problem: Problem, eps: Ratio) -> Result<Self, String> {
        if !eps.is_proper() {
            return Err(format!("ε must lie in (0,1), got {eps}"));
        }
        Ok(BallGrowConfig { problem, eps, radius_cap: None })
    }

    pub fn with_radius_cap(mut self, cap: u32) -> Self {
        self.radius_cap = Some(cap.max(1));
        self
    }

    /// Layers beyond `r` the growth condition looks at.
    pub fn lookahead(&self) -> u32 {
        match self.problem {
            Problem::MaxIs | Problem::Mvc => 1,
            Problem::MaxM | Problem::Mds => 2,
        }
    }

    /// `⌈ln n / ln(1+ε)⌉` for MaxIS; MVC starts from `τ(B_0) = 0` and needs
    /// one more layer; the two-layer conditions need twice as many.
    pub fn cap(&self, n: usize) -> u32 {
        if let Some(c) = self.radius_cap {
            return c;
        }
        let base = ((n.max(2) as f64).ln() / (1.0 + self.eps.to_f64()).ln()).ceil().max(1.0) as u32;
        match self.problem {
            Problem::MaxIs => base,
            Problem::Mvc => base + 1,
            Problem::MaxM | Problem::Mds => 2 * base + 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BallOutput {
    pub in_solution: bool,
    pub mate: Option<NodeId>,
    pub alive: bool,
    /// Radii of the iterations this node initiated.
    pub radii: Vec<u32>,
    /// Some iteration hit the radius cap before the condition held.
    pub capped: bool,
    /// Some ball exceeded the local exact solver; a valid fallback was used.
    pub overflow: bool,
}

#[derive(Clone, Debug, Default)]
struct Ball {
    layer: u32,
    parent: Option<Port>,
    children: Vec<Port>,
    route: BTreeMap<NodeId, Port>,
    wave: u32,
    wave_wait: usize,
    fin_wait: usize,
    delete: bool,
}

#[derive(Clone, Debug, Default)]
struct Leader {
    nodes: BTreeMap<NodeId, (u32, bool)>,
    edges: BTreeSet<(NodeId, NodeId)>,
    wave: u32,
    grew: bool,
}

enum Record {
    Fin(NodeId, u64),
    Mate(NodeId, NodeId),
}

impl Leader {
    fn set(&self, r: u32) -> Vec<NodeId> {
        self.nodes.iter().filter(|(_, &(l, _))| l <= r).map(|(&id, _)| id).collect()
    }

    fn layer(&self, id: NodeId) -> u32 {
        self.nodes[&id].0
    }

    fn open(&self, id: NodeId) -> bool {
        self.nodes[&id].1
    }

    /// Induced bit graph on `ids` (sorted), ranks in ID order.
    fn bits(&self, ids: &[NodeId]) -> Option<BitGraph> {
        if ids.len() > bitgraph::CAPACITY {
            return None;
        }
        let rank = |x: NodeId| ids.binary_search(&x).ok();
        let es: Vec<(usize, usize)> = self.edges.iter().filter_map(|&(a, b)| Some((rank(a)?, rank(b)?))).collect();
        Some(BitGraph::new(ids.len(), &es))
    }

    fn port_graph(&self, ids: &[NodeId]) -> PortGraph {
        let rank = |x: NodeId| ids.binary_search(&x).ok();
        let es: Vec<(usize, usize)> = self.edges.iter().filter_map(|&(a, b)| Some((rank(a)?, rank(b)?))).collect();
        PortGraph::from_edges(ids.len(), &es).expect("ball edges form a simple graph")
    }

    fn mask(ids: &[NodeId], keep: impl Fn(NodeId) -> bool) -> u64 {
        ids.iter().enumerate().filter(|(_, &x)| keep(x)).fold(0, |m, (i, _)| m | 1 << i)
    }

    /// Optimum of the ball of radius `r`; `None` when it is too large.
    fn value(&self, problem: Problem, r: u32) -> Option<u64> {
        match problem {
            Problem::MaxIs | Problem::Mvc => {
                let ids = self.set(r);
                let bg = self.bits(&ids)?;
                let a = bg.alpha(bg.all()) as u64;
                Some(if problem == Problem::MaxIs { a } else { ids.len() as u64 - a })
            }
            Problem::MaxM => Some(max_matching_edges(&self.port_graph(&self.set(r))).len() as u64),
            Problem::Mds => {
                let ids = self.set(r + 1);
                let bg = self.bits(&ids)?;
                let targets = Self::mask(&ids, |x| self.layer(x) <= r && self.open(x));
                Some(bg.lexmin_min_dominating(targets, bg.all()).expect("targets dominate themselves").count_ones()
                    as u64)
            }
        }
    }

    fn condition(&self, cfg: &BallGrowConfig, r: u32) -> Option<bool> {
        let small = self.value(cfg.problem, r)?;
        let big = self.value(cfg.problem, r + cfg.lookahead())?;
        let (num, den) = (cfg.eps.num(), cfg.eps.den());
        Some(big * den <= small * (num + den))
    }

    /// Records that settle the ball at radius `r`; the flag reports the
    /// fallback for oversized balls.
    fn records(&self, problem: Problem, r: u32) -> (Vec<Record>, bool) {
        let mut out = Vec::new();
        let mut overflow = false;
        match problem {
            Problem::MaxIs => {
                let inner = self.set(r);
                let sol: Vec<NodeId> = match self.bits(&inner) {
                    Some(bg) => bitgraph::iter(bg.lexmin_max_independent_set()).map(|i| inner[i]).collect(),
                    None => {
                        overflow = true;
                        self.greedy_mis(&inner)
                    }
                };
                for v in self.set(r + 1) {
                    out.push(Record::Fin(v, if sol.contains(&v) { FIN_SOL_DEL } else { FIN_DEL }));
                }
            }
            Problem::Mvc => {
                let outer = self.set(r + 1);
                let cover: Vec<NodeId> = match self.bits(&outer) {
                    Some(bg) => bitgraph::iter(bg.lexmin_min_vertex_cover()).map(|i| outer[i]).collect(),
                    None => {
                        overflow = true;
                        outer.clone()
                    }
                };
                for v in outer {
                    let inside = self.layer(v) <= r;
                    match (cover.contains(&v), inside) {
                        (true, true) => out.push(Record::Fin(v, FIN_SOL_DEL)),
                        (true, false) => out.push(Record::Fin(v, FIN_SOL)),
                        (false, true) => out.push(Record::Fin(v, FIN_DEL)),
                        (false, false) => {}
                    }
                }
            }
            Problem::MaxM => {
                let inner = self.set(r);
                for (a, b) in max_matching_edges(&self.port_graph(&inner)) {
                    out.push(Record::Mate(inner[a], inner[b]));
                    out.push(Record::Mate(inner[b], inner[a]));
                }
                for v in self.set(r + 1) {
                    out.push(Record::Fin(v, FIN_DEL));
                }
            }
            Problem::Mds => {
                let ids = self.set(r + 3);
                let targets: Vec<NodeId> =
                    ids.iter().copied().filter(|&x| self.layer(x) <= r + 2 && self.open(x)).collect();
                let dom: Vec<NodeId> = match self.bits(&ids) {
                    Some(bg) => {
                        let t = Self::mask(&ids, |x| targets.contains(&x));
                        let d = bg.lexmin_min_dominating(t, bg.all()).expect("targets dominate themselves");
                        bitgraph::iter(d).map(|i| ids[i]).collect()
                    }
                    None => {
                        overflow = true;
                        targets.clone()
                    }
                };
                for &v in &dom {
                    out.push(Record::Fin(v, FIN_SOL));
                }
                for &v in &targets {
                    out.push(Record::Fin(v, FIN_COVER));
                }
            }
        }
        (out, overflow)
    }

    fn greedy_mis(&self, ids: &[NodeId]) -> Vec<NodeId> {
        let mut taken: Vec<NodeId> = Vec::new();
        for &v in ids {
            let clash = taken.iter().any(|&u| self.edges.contains(&(u.min(v), u.max(v))));
            if !clash {
                taken.push(v);
            }
        }
        taken
    }
}

pub struct BallGrowing {
    cfg: BallGrowConfig,
    cap: u32,
    tree: Tree,
    q: PortQueues,
    live: Vec<bool>,
    alive: bool,
    covered: bool,
    in_sol: bool,
    mate: Option<NodeId>,
    started: bool,
    echo_wait: usize,
    best: Option<(NodeId, Option<Port>)>,
    ball: Option<Ball>,
    leader: Option<Leader>,
    halting: bool,
    radii: Vec<u32>,
    capped: bool,
    overflow: bool,
}

impl BallGrowing {
    pub fn new(k: &NodeKnowledge, cfg: BallGrowConfig) -> Self {
        BallGrowing {
            cap: cfg.cap(k.n),
            cfg,
            tree: Tree::new(k),
            q: PortQueues::new(k.degree),
            live: vec![true; k.degree],
            alive: true,
            covered: false,
            in_sol: false,
            mate: None,
            started: false,
            echo_wait: 0,
            best: None,
            ball: None,
            leader: None,
            halting: false,
            radii: Vec::new(),
            capped: false,
            overflow: false,
        }
    }

    fn w(&self) -> u32 {
        self.tree.id_bits
    }

    fn id(&self) -> NodeId {
        self.tree.id
    }

    fn is_mds(&self) -> bool {
        self.cfg.problem == Problem::Mds
    }

    fn candidate(&self) -> bool {
        if self.is_mds() {
            !self.covered
        } else {
            self.alive
        }
    }

    fn ports(&self) -> impl Iterator<Item = Port> + '_ {
        (1..=self.live.len() as Port).filter(|&p| self.live[p as usize - 1])
    }

    // Coordination tree.

    fn start_find(&mut self) {
        self.echo_wait = self.tree.children.len();
        self.best = self.candidate().then_some((self.id(), None));
        for c in self.tree.children.clone() {
            self.q.push(c, msg(T_FIND));
        }
        if self.echo_wait == 0 {
            self.echo_done();
        }
    }

    fn on_echo(&mut self, port: Port, has: bool, id: NodeId) {
        if has && self.best.is_none_or(|(b, _)| id < b) {
            self.best = Some((id, Some(port)));
        }
        self.echo_wait -= 1;
        if self.echo_wait == 0 {
            self.echo_done();
        }
    }

    fn echo_done(&mut self) {
        match self.tree.parent {
            Some(p) => {
                let (has, id) = self.best.map_or((0, 0), |(id, _)| (1, id));
                let w = self.w();
                self.q.push(p, msg(T_FIND).with(has, 1).with(id, w));
            }
            None => match self.best {
                None => self.halt_all(),
                Some(_) => self.on_start(),
            },
        }
    }

    fn on_start(&mut self) {
        match self.best.expect("start follows a candidate") {
            (_, None) => self.become_initiator(),
            (_, Some(p)) => self.q.push(p, msg(T_START)),
        }
    }

    fn halt_all(&mut self) {
        for c in self.tree.children.clone() {
            self.q.push(c, msg(T_HALT));
        }
        self.halting = true;
    }

    fn iteration_done(&mut self) {
        match self.tree.parent {
            Some(p) => self.q.push(p, msg(T_ITER_DONE)),
            None => self.start_find(),
        }
    }

    // Ball exploration.

    fn flag(&self) -> u64 {
        (self.is_mds() && !self.covered) as u64
    }

    fn become_initiator(&mut self) {
        let mut leader = Leader::default();
        leader.nodes.insert(self.id(), (0, self.flag() == 1));
        self.leader = Some(leader);
        self.ball = Some(Ball::default());
        self.start_wave(0);
    }

    fn start_wave(&mut self, wave: u32) {
        let w = self.w();
        let b = self.ball.as_mut().expect("in ball");
        b.wave = wave;
        if b.layer < wave {
            for &c in &b.children {
                self.q.push(c, msg(T_GROW).with(wave as u64, w));
            }
            b.wave_wait = b.children.len();
        } else {
            let parent = b.parent;
            let probes: Vec<Port> = self.ports().filter(|&p| Some(p) != parent).collect();
            for &p in &probes {
                self.q.push(p, msg(T_EXPLORE).with(wave as u64, w));
            }
            self.ball.as_mut().expect("in ball").wave_wait = probes.len();
        }
        self.check_wave();
    }

    fn check_wave(&mut self) {
        let b = self.ball.as_mut().expect("in ball");
        if b.wave_wait > 0 {
            return;
        }
        b.wave_wait = usize::MAX;
        match b.parent {
            Some(p) => self.q.push(p, msg(T_GROW)),
            None => self.wave_complete(),
        }
    }

    fn wave_done_one(&mut self) {
        let b = self.ball.as_mut().expect("in ball");
        b.wave_wait -= 1;
        self.check_wave();
    }

    /// Sends a JOIN or EDGE record towards the initiator.
    fn report_join(&mut self, id: NodeId, open: bool) {
        let w = self.w();
        match self.ball.as_ref().expect("in ball").parent {
            Some(p) => self.q.push(p, msg(T_JOIN).with(id, w).with(open as u64, 1)),
            None => {
                let l = self.leader.as_mut().expect("initiator");
                l.nodes.insert(id, (l.wave + 1, open));
                l.grew = true;
            }
        }
    }

    fn report_edge(&mut self, a: NodeId, b: NodeId) {
        let w = self.w();
        match self.ball.as_ref().expect("in ball").parent {
            Some(p) => self.q.push(p, msg(T_EDGE).with(a, w).with(b, w)),
            None => {
                self.leader.as_mut().expect("initiator").edges.insert((a.min(b), a.max(b)));
            }
        }
    }

    fn on_explore(&mut self, m: &Incoming, wave: u32) {
        let participates = self.is_mds() || self.alive;
        let state = match (&self.ball, participates) {
            (_, false) => NACK_OLD,
            (None, true) => {
                self.ball = Some(Ball { layer: wave + 1, parent: Some(m.port), ..Ball::default() });
                let w = self.w();
                self.q.push(m.port, msg(T_JOIN).with(self.id(), w).with(self.flag(), 1));
                return;
            }
            (Some(b), true) if b.layer == wave => NACK_PEER,
            (Some(b), true) if b.layer == wave + 1 => NACK_NEW,
            (Some(_), true) => NACK_OLD,
        };
        self.q.push(m.port, msg(T_NACK).with(state, 2));
    }

    fn on_join(&mut self, m: &Incoming, id: NodeId, open: bool) {
        let me = self.id();
        let b = self.ball.as_mut().expect("in ball");
        b.route.insert(id, m.port);
        let direct = b.layer == b.wave && !b.children.contains(&m.port);
        if direct {
            b.children.push(m.port);
        }
        self.report_join(id, open);
        if direct {
            self.report_edge(me, id);
            self.wave_done_one();
        }
    }

    fn on_nack(&mut self, m: &Incoming, state: u64) {
        let me = self.id();
        if state == NACK_NEW || (state == NACK_PEER && me < m.sender) {
            self.report_edge(me, m.sender);
        }
        self.wave_done_one();
    }

    fn wave_complete(&mut self) {
        let l = self.leader.as_ref().expect("initiator");
        let k = self.cfg.lookahead();
        let stable = !l.grew;
        if !stable && l.wave < k {
            return self.next_wave();
        }
        let mut r = l.wave.saturating_sub(k);
        let verdict = loop {
            match l.condition(&self.cfg, r) {
                None => break Some((r, true, false)),
                Some(true) => break Some((r, false, false)),
                Some(false) if r >= self.cap => break Some((r, false, true)),
                Some(false) if stable => r += 1,
                Some(false) => break None,
            }
        };
        match verdict {
            Some((r, overflow, capped)) => {
                self.overflow |= overflow;
                self.capped |= capped;
                self.finalize(r);
            }
            None => self.next_wave(),
        }
    }

    fn next_wave(&mut self) {
        let l = self.leader.as_mut().expect("initiator");
        l.wave += 1;
        l.grew = false;
        let wave = l.wave;
        self.start_wave(wave);
    }

    fn finalize(&mut self, r: u32) {
        let (records, overflow) = self.leader.as_ref().expect("initiator").records(self.cfg.problem, r);
        self.overflow |= overflow;
        self.radii.push(r);
        let w = self.w();
        let me = self.id();
        for rec in records {
            let (target, payload) = match rec {
                Record::Fin(t, code) => (t, msg(T_FIN).with(t, w).with(code, 2)),
                Record::Mate(t, partner) => (t, msg(T_MATE).with(t, w).with(partner, w)),
            };
            if target == me {
                self.apply(&payload);
            } else {
                let port = self.ball.as_ref().expect("in ball").route[&target];
                self.q.push(port, payload);
            }
        }
        self.leader = None;
        self.begin_end();
    }

    fn apply(&mut self, payload: &crate::sim::Payload) {
        let w = self.w();
        let mut r = payload.reader();
        let tag = r.take(super::util::TAG_BITS).expect("tag") as u8;
        let _target = r.take(w);
        match tag {
            T_FIN => match r.take(2).expect("code") {
                FIN_DEL => self.ball.as_mut().expect("in ball").delete = true,
                FIN_SOL => self.in_sol = true,
                FIN_SOL_DEL => {
                    self.in_sol = true;
                    self.ball.as_mut().expect("in ball").delete = true;
                }
                _ => self.covered = true,
            },
            T_MATE => self.mate = r.take(w),
            t => unreachable!("not a solution record: {t}"),
        }
    }

    fn on_record(&mut self, m: &Incoming) {
        let w = self.w();
        let target = open(m).1.take(w).expect("target");
        if target == self.id() {
            self.apply(&m.payload);
        } else {
            let port = self.ball.as_ref().expect("in ball").route[&target];
            self.q.push(port, m.payload.clone());
        }
    }

    fn begin_end(&mut self) {
        let b = self.ball.as_mut().expect("in ball");
        b.fin_wait = b.children.len();
        for &c in &b.children {
            self.q.push(c, msg(T_END));
        }
        self.check_end();
    }

    fn check_end(&mut self) {
        if self.ball.as_ref().expect("in ball").fin_wait > 0 {
            return;
        }
        let b = self.ball.take().expect("in ball");
        if b.delete && self.alive {
            self.alive = false;
            for p in self.ports().collect::<Vec<_>>() {
                self.q.push(p, msg(T_GONE));
            }
        }
        match b.parent {
            Some(p) => self.q.push(p, msg(T_END)),
            None => self.iteration_done(),
        }
    }

    fn on_message(&mut self, m: &Incoming) {
        let w = self.w();
        let (tag, mut r) = open(m);
        let from_ball_parent = self.ball.as_ref().is_some_and(|b| b.parent == Some(m.port));
        match tag {
            T_FIND if self.tree.parent == Some(m.port) => self.start_find(),
            T_FIND => {
                let has = r.take(1) == Some(1);
                let id = r.take(w).expect("id");
                self.on_echo(m.port, has, id);
            }
            T_START => self.on_start(),
            T_HALT => self.halt_all(),
            T_ITER_DONE => self.iteration_done(),
            T_GROW if from_ball_parent => {
                let wave = r.take(w).expect("wave") as u32;
                self.start_wave(wave);
            }
            T_GROW => self.wave_done_one(),
            T_EXPLORE => {
                let wave = r.take(w).expect("wave") as u32;
                self.on_explore(m, wave);
            }
            T_JOIN => {
                let id = r.take(w).expect("id");
                let open = r.take(1) == Some(1);
                self.on_join(m, id, open);
            }
            T_NACK => {
                let state = r.take(2).expect("state");
                self.on_nack(m, state);
            }
            T_EDGE => {
                let a = r.take(w).expect("id");
                let b = r.take(w).expect("id");
                self.report_edge(a, b);
            }
            T_FIN | T_MATE => self.on_record(m),
            T_END if from_ball_parent => self.begin_end(),
            T_END => {
                self.ball.as_mut().expect("in ball").fin_wait -= 1;
                self.check_end();
            }
            T_GONE => self.live[m.port as usize - 1] = false,
            t => unreachable!("unexpected ball tag {t}"),
        }
    }
}

impl NodeProgram for BallGrowing {
    type Output = BallOutput;

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
        if self.tree.is_root() && !self.started && round >= ready {
            self.started = true;
            self.start_find();
        }
        self.q.flush(out);
        if self.halting && self.q.is_empty() {
            Control::Halt
        } else if !self.q.is_empty() {
            Control::Continue
        } else if self.tree.is_root() && !self.started {
            Control::Sleep(ready)
        } else {
            Control::Idle
        }
    }

    fn output(&self) -> BallOutput {
        BallOutput {
            in_solution: self.in_sol,
            mate: self.mate,
            alive: self.alive,
            radii: self.radii.clone(),
            capped: self.capped,
            overflow: self.overflow,
        }
    }
}

/// Global solution assembled from the per-node outputs.
pub fn ball_solution(problem: Problem, g: &PortGraph, outputs: &[BallOutput]) -> Solution {
    match problem {
        Problem::MaxM => super::propose::matching_from_mates(g, &outputs.iter().map(|o| o.mate).collect::<Vec<_>>()),
        _ => Solution::from_vertices(problem, (0..g.n()).filter(|&v| outputs[v].in_solution).collect()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, gen_gnp, path, star};
    use crate::oracle::{optimum, SizeGuard};
    use crate::sim::{run, SimConfig, SimResult};

    fn half() -> Ratio {
        Ratio::new(1, 2).unwrap()
    }

    fn grow(g: &PortGraph, problem: Problem) -> (Solution, SimResult<BallOutput>) {
        let cfg = BallGrowConfig::new(problem, half()).unwrap();
        let res = run(g, |k, _| BallGrowing::new(k, cfg.clone()), &SimConfig::default()).unwrap();
        assert!(res.quiescent || !res.timed_out);
        assert!(!res.timed_out);
        (ball_solution(problem, g, &res.outputs), res)
    }

    #[test]
    fn star_maxis_takes_the_leaves() {
        let g = star(8);
        let (sol, _) = grow(&g, Problem::MaxIs);
        assert_eq!(sol.vertices(), &[1, 2, 3, 4, 5, 6, 7, 8]);
    }

    #[test]
    fn six_cycle_dominated_by_three() {
        let (sol, _) = grow(&cycle(6), Problem::Mds);
        sol.check(&cycle(6)).unwrap();
        assert!(sol.size <= 3);
    }

    #[test]
    fn single_node() {
        let g = PortGraph::from_edges(1, &[]).unwrap();
        for p in Problem::ALL {
            let (sol, res) = grow(&g, p);
            sol.check(&g).unwrap();
            assert_eq!(res.messages, 0);
        }
        assert_eq!(grow(&g, Problem::MaxIs).0.size, 1);
        assert_eq!(grow(&g, Problem::Mds).0.size, 1);
    }

    #[test]
    fn every_problem_within_ratio_on_small_graphs() {
        let guard = SizeGuard::default();
        let mut graphs = vec![path(7), cycle(9), star(5)];
        for s in 0..6 {
            graphs.push(gen_gnp(14, 0.25, s).unwrap());
        }
        for g in &graphs {
            for p in Problem::ALL {
                let (sol, res) = grow(g, p);
                sol.check(g).unwrap_or_else(|e| panic!("{p:?}: {e}"));
                let opt = optimum(p, g, guard).unwrap() as f64;
                let got = sol.size as f64;
                if p.is_covering() {
                    assert!(got <= 1.5 * opt, "{p:?} {got} vs {opt}");
                } else {
                    assert!(got * 1.5 >= opt, "{p:?} {got} vs {opt}");
                }
                let cap = BallGrowConfig::new(p, half()).unwrap().cap(g.n());
                for o in &res.outputs {
                    assert!(o.radii.iter().all(|&r| r <= cap));
                    assert!(!o.overflow);
                }
            }
        }
    }

    #[test]
    fn maxis_radius_within_log_bound() {
        for s in 0..4 {
            let g = gen_gnp(24, 0.15, s).unwrap();
            let (_, res) = grow(&g, Problem::MaxIs);
            let bound = ((24f64).ln() / 1.5f64.ln()).ceil() as u32;
            assert!(res.outputs.iter().flat_map(|o| &o.radii).all(|&r| r <= bound));
            assert!(res.outputs.iter().all(|o| !o.capped));
        }
    }

    #[test]
    fn caps_grow_with_lookahead() {
        let c = |p| BallGrowConfig::new(p, half()).unwrap().cap(100);
        assert_eq!(c(Problem::MaxIs), 12);
        assert_eq!(c(Problem::Mvc), 13);
        assert_eq!(c(Problem::MaxM), 26);
        assert!(BallGrowConfig::new(Problem::Mds, Ratio::new(3, 2).unwrap()).is_err());
    }
}
