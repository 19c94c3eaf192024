use std::collections::VecDeque;

use crate::graph::{NodeId, Port};
use crate::sim::{Incoming, NodeKnowledge, Outbox, Payload, Reader};

/// Tag width shared by the tree-based programs.
pub(crate) const TAG_BITS: u32 = 4;

pub(crate) fn msg(tag: u8) -> Payload {
    Payload::new().with(tag as u64, TAG_BITS)
}

pub(crate) fn open(m: &Incoming) -> (u8, Reader<'_>) {
    let mut r = m.payload.reader();
    let tag = r.take(TAG_BITS).expect("tagged payload") as u8;
    (tag, r)
}

/// FIFO per port; one message per port leaves each round.
#[derive(Clone, Debug)]
pub(crate) struct PortQueues {
    q: Vec<VecDeque<Payload>>,
}

impl PortQueues {
    pub fn new(degree: usize) -> Self {
        PortQueues { q: vec![VecDeque::new(); degree] }
    }

    pub fn push(&mut self, port: Port, p: Payload) {
        self.q[port as usize - 1].push_back(p);
    }

    pub fn is_empty(&self) -> bool {
        self.q.iter().all(VecDeque::is_empty)
    }

    pub fn flush(&mut self, out: &mut Outbox) {
        for (i, q) in self.q.iter_mut().enumerate() {
            if let Some(p) = q.pop_front() {
                out.send(i as Port + 1, p);
            }
        }
    }
}

pub(crate) const T_FLOOD: u8 = 0;
pub(crate) const T_CHILD: u8 = 1;

/// Spanning forest by time-encoded BFS flooding: the node with ID `i` starts
/// a flood at round `i·(n+1)+1` unless some flood reached it earlier, so only
/// the minimum ID of each component floods. Every port carries exactly one
/// tree message in each direction, which also reveals all neighbour IDs.
#[derive(Clone, Debug)]
pub(crate) struct Tree {
    pub id: NodeId,
    pub n: usize,
    pub id_bits: u32,
    pub root: Option<NodeId>,
    pub parent: Option<Port>,
    pub children: Vec<Port>,
    pub nbr_ids: Vec<Option<NodeId>>,
}

impl Tree {
    pub fn new(k: &NodeKnowledge) -> Tree {
        Tree {
            id: k.id,
            n: k.n,
            id_bits: k.id_bits,
            root: None,
            parent: None,
            children: Vec::new(),
            nbr_ids: vec![None; k.degree],
        }
    }

    fn flood_round(&self, id: NodeId) -> u64 {
        id * (self.n as u64 + 1) + 1
    }

    pub fn start_round(&self) -> u64 {
        self.flood_round(self.id)
    }

    /// First round at which the whole component's tree is in place.
    pub fn ready_round(&self) -> Option<u64> {
        self.root.map(|r| self.flood_round(r) + self.n as u64 + 1)
    }

    pub fn is_root(&self) -> bool {
        self.root == Some(self.id)
    }

    /// Consumes tree traffic; returns false for any other message.
    pub fn handle(&mut self, m: &Incoming, q: &mut PortQueues) -> bool {
        let (tag, mut r) = open(m);
        self.nbr_ids[m.port as usize - 1] = Some(m.sender);
        match tag {
            T_FLOOD => {
                let root = r.take(self.id_bits).expect("flood root");
                if self.root.is_none() {
                    self.root = Some(root);
                    self.parent = Some(m.port);
                    q.push(m.port, msg(T_CHILD));
                    self.flood(q, Some(m.port));
                }
                true
            }
            T_CHILD => {
                self.children.push(m.port);
                true
            }
            _ => false,
        }
    }

    /// Becomes a root if the own start round has come and nobody reached us.
    pub fn wake(&mut self, round: u64, q: &mut PortQueues) {
        if self.root.is_none() && round >= self.start_round() {
            self.root = Some(self.id);
            self.flood(q, None);
        }
    }

    fn flood(&self, q: &mut PortQueues, skip: Option<Port>) {
        let p = msg(T_FLOOD).with(self.root.expect("rooted"), self.id_bits);
        for port in 1..=self.nbr_ids.len() as Port {
            if Some(port) != skip {
                q.push(port, p.clone());
            }
        }
    }
}
