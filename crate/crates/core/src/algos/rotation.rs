//! Hamiltonian cycle by random-walk extension and rotations, followed by a
//! matching of alternate path edges.
//!
//! Each path node stores its position and its predecessor/successor ports.
//! A rotation at `v_j` reverses the segment `v_{j+1}..v_k`; the reversal is
//! carried out by a FLIP message walking from the old head down to
//! `v_{j+1}`, so a rotation costs one message per segment node.

use rand::Rng as _;
use serde::Serialize;

use crate::graph::{NodeId, Port};
use crate::rng;
use crate::sim::{bits_for, Control, Incoming, NodeKnowledge, NodeProgram, Outbox, Payload};

const TAG: u32 = 3;
const T_PROBE: u64 = 0;
const T_JOINED: u64 = 1;
const T_NOOP: u64 = 2;
const T_ROT: u64 = 3;
const T_FLIP: u64 = 4;
const T_CLOSE: u64 = 5;
const T_DONE: u64 = 6;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RotationConfig {
    /// Step budget `c·n·ln n`.
    pub c: f64,
    /// ID of the node holding the initial one-node path.
    pub start: NodeId,
}

impl RotationConfig {
    pub fn budget(&self, n: usize) -> u64 {
        (self.c * n as f64 * (n.max(2) as f64).ln()).ceil() as u64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RotationOutput {
    pub mate: Option<NodeId>,
    pub on_path: bool,
    pub position: Option<u64>,
    /// Known to path nodes once the walk finished.
    pub success: Option<bool>,
    /// Steps used, reported by the final head.
    pub steps: Option<u64>,
}

type Link = (Port, NodeId);

pub struct RotationMatching {
    n: u64,
    degree: usize,
    id: NodeId,
    budget: u64,
    start: NodeId,
    rng: rng::Rng,
    pos: Option<u64>,
    pred: Option<Link>,
    succ: Option<Link>,
    /// Head with the step count so far; stepping waits one round after joining.
    head: Option<u64>,
    head_wait: bool,
    success: Option<bool>,
    steps: Option<u64>,
}

impl RotationMatching {
    pub fn new(k: &NodeKnowledge, seed: u64, cfg: &RotationConfig) -> Self {
        RotationMatching {
            n: k.n as u64,
            degree: k.degree,
            id: k.id,
            budget: cfg.budget(k.n),
            start: cfg.start,
            rng: rng::rng(seed),
            pos: None,
            pred: None,
            succ: None,
            head: None,
            head_wait: false,
            success: None,
            steps: None,
        }
    }

    fn pos_bits(&self) -> u32 {
        bits_for(self.n)
    }

    fn step_bits(&self) -> u32 {
        bits_for(self.budget + 1)
    }

    fn tagged(t: u64) -> Payload {
        Payload::new().with(t, TAG)
    }

    fn head_step(&mut self, out: &mut Outbox) -> Control {
        let steps = self.head.expect("head");
        if steps >= self.budget || self.degree == 0 {
            return self.finish(false, out);
        }
        self.head = Some(steps + 1);
        let port = self.rng.random_range(1..=self.degree as Port);
        let p =
            Self::tagged(T_PROBE).with(self.pos.expect("on path"), self.pos_bits()).with(steps + 1, self.step_bits());
        out.send(port, p);
        Control::Idle
    }

    fn finish(&mut self, ok: bool, out: &mut Outbox) -> Control {
        self.steps = self.head.take();
        self.settle(ok);
        if let Some((p, _)) = self.pred {
            out.send(p, Self::tagged(T_DONE).with(ok as u64, 1));
        }
        Control::Halt
    }

    fn settle(&mut self, ok: bool) {
        self.success = Some(ok);
    }
}

impl NodeProgram for RotationMatching {
    type Output = RotationOutput;

    fn step(&mut self, round: u64, inbox: &[Incoming], out: &mut Outbox) -> Control {
        if round == 1 && self.id == self.start {
            self.pos = Some(0);
            self.head = Some(0);
            if self.n <= 1 {
                return self.finish(true, out);
            }
            return self.head_step(out);
        }
        if self.head_wait {
            self.head_wait = false;
            return self.head_step(out);
        }
        let mut ctl = Control::Idle;
        for m in inbox {
            let mut r = m.payload.reader();
            let tag = r.take(TAG).expect("tag");
            match tag {
                T_PROBE => {
                    let k = r.take(self.pos_bits()).expect("pos");
                    let steps = r.take(self.step_bits()).expect("steps");
                    match self.pos {
                        None => {
                            self.pos = Some(k + 1);
                            self.pred = Some((m.port, m.sender));
                            out.send(m.port, Self::tagged(T_JOINED));
                            self.head = Some(steps);
                            self.head_wait = true;
                            ctl = Control::Continue;
                        }
                        Some(0) if k == self.n - 1 => {
                            out.send(m.port, Self::tagged(T_CLOSE));
                        }
                        Some(j) if j + 1 == k => {
                            out.send(m.port, Self::tagged(T_NOOP));
                        }
                        Some(j) => {
                            self.succ = Some((m.port, m.sender));
                            out.send(m.port, Self::tagged(T_ROT).with(j, self.pos_bits()));
                        }
                    }
                }
                T_JOINED => {
                    self.succ = Some((m.port, m.sender));
                    self.head = None;
                }
                T_NOOP => ctl = self.head_step(out),
                T_ROT => {
                    let j = r.take(self.pos_bits()).expect("pos");
                    let steps = self.head.take().expect("head");
                    let old_pred = self.pred.expect("head has a predecessor");
                    self.pred = Some((m.port, m.sender));
                    self.succ = Some(old_pred);
                    self.pos = Some(j + 1);
                    let p = Self::tagged(T_FLIP)
                        .with(j, self.pos_bits())
                        .with(j + 2, self.pos_bits())
                        .with(steps, self.step_bits());
                    out.send(old_pred.0, p);
                }
                T_FLIP => {
                    let j = r.take(self.pos_bits()).expect("pos");
                    let new_pos = r.take(self.pos_bits()).expect("pos");
                    let steps = r.take(self.step_bits()).expect("steps");
                    let old_pos = self.pos.expect("on path");
                    let old_pred = self.pred;
                    self.pred = Some((m.port, m.sender));
                    self.pos = Some(new_pos);
                    if old_pos == j + 1 {
                        self.succ = None;
                        self.head = Some(steps);
                        ctl = self.head_step(out);
                    } else {
                        let next = old_pred.expect("segment continues");
                        self.succ = Some(next);
                        let p = Self::tagged(T_FLIP)
                            .with(j, self.pos_bits())
                            .with(new_pos + 1, self.pos_bits())
                            .with(steps, self.step_bits());
                        out.send(next.0, p);
                    }
                }
                T_CLOSE => ctl = self.finish(true, out),
                T_DONE => {
                    let ok = r.take(1) == Some(1);
                    self.settle(ok);
                    if let Some((p, _)) = self.pred {
                        out.send(p, Self::tagged(T_DONE).with(ok as u64, 1));
                    }
                    ctl = Control::Halt;
                }
                t => unreachable!("unexpected rotation tag {t}"),
            }
        }
        ctl
    }

    fn output(&self) -> RotationOutput {
        let mate = match (self.success, self.pos) {
            (Some(true), Some(i)) if i % 2 == 0 => self.succ.map(|l| l.1),
            (Some(true), Some(_)) => self.pred.map(|l| l.1),
            _ => None,
        };
        RotationOutput {
            mate,
            on_path: self.pos.is_some(),
            position: self.pos,
            success: self.success,
            steps: self.steps,
        }
    }
}
