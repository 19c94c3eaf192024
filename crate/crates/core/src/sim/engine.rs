use super::{
    Control, Incoming, KnowledgeModel, NodeKnowledge, NodeProgram, Outbox, SimConfig, SimError, SimResult, TraceRecord,
};
use crate::graph::{NodeId, Port, PortGraph};
use crate::rng::{self, tags};
use crate::sim::bits_for;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Wake {
    Next,
    At(u64),
    Idle,
    Halted,
}

/// Private seed of the node with ID `id` under run seed `seed`.
pub fn private_seed(seed: u64, id: NodeId) -> u64 {
    rng::derive(rng::derive(seed, tags::NODE_PRIVATE), id)
}

fn id_bits(g: &PortGraph) -> u32 {
    bits_for(g.ids().iter().copied().max().unwrap_or(1).max(g.n() as NodeId))
}

pub fn knowledge_of(g: &PortGraph, v: usize, model: KnowledgeModel) -> NodeKnowledge {
    knowledge_with(g, v, model, id_bits(g))
}

fn knowledge_with(g: &PortGraph, v: usize, model: KnowledgeModel, id_bits: u32) -> NodeKnowledge {
    NodeKnowledge {
        id: g.id(v),
        degree: g.degree(v),
        n: g.n(),
        id_bits,
        neighbor_ids: match model {
            KnowledgeModel::Kt0 => None,
            KnowledgeModel::Kt1 => Some(g.ports(v).iter().map(|h| g.id(h.nbr)).collect()),
        },
    }
}

/// Executes `factory`-built programs on `g` until every node halts, no node
/// can act again, or the round cap is reached.
pub fn run<P, F>(g: &PortGraph, mut factory: F, cfg: &SimConfig) -> Result<SimResult<P::Output>, SimError>
where
    P: NodeProgram,
    F: FnMut(&NodeKnowledge, u64) -> P,
{
    if cfg.round_cap == 0 {
        return Err(SimError::Config("round cap must be at least 1".into()));
    }
    let n = g.n();
    let limit = cfg.bandwidth.limit_bits(n);
    let bits_of_ids = id_bits(g);
    let mut programs: Vec<P> = (0..n)
        .map(|v| {
            let k = knowledge_with(g, v, cfg.knowledge, bits_of_ids);
            factory(&k, private_seed(cfg.seed, g.id(v)))
        })
        .collect();
    let mut wake = vec![Wake::Next; n];
    let mut inbox: Vec<Vec<Incoming>> = vec![Vec::new(); n];
    let mut next_inbox: Vec<Vec<Incoming>> = vec![Vec::new(); n];
    let mut port_used: Vec<Vec<bool>> = (0..n).map(|v| vec![false; g.degree(v)]).collect();
    let mut per_round: Vec<u64> = Vec::new();
    let mut trace = cfg.trace.then(Vec::new);
    let (mut messages, mut bits) = (0u64, 0u64);
    let mut round = 1u64;
    let mut last_round: u64;
    let mut timed_out = false;
    let mut quiescent = false;

    loop {
        let mut sent_this_round = 0u64;
        for v in 0..n {
            if wake[v] == Wake::Halted {
                inbox[v].clear();
                continue;
            }
            let due = match wake[v] {
                Wake::Next => true,
                Wake::At(r) => r <= round,
                Wake::Idle | Wake::Halted => false,
            };
            if !due && inbox[v].is_empty() {
                continue;
            }
            let mut mail = std::mem::take(&mut inbox[v]);
            mail.sort_by_key(|m| m.port);
            let mut out = Outbox::new(g.degree(v));
            let ctl = programs[v].step(round, &mail, &mut out);
            let node = g.id(v);
            let mut used = vec![false; g.degree(v)];
            for (port, payload) in out.msgs {
                if port == 0 || port as usize > g.degree(v) {
                    return Err(SimError::BadPort { node, round, port });
                }
                let pi = port as usize - 1;
                if used[pi] {
                    return Err(SimError::DuplicatePort { node, round, port });
                }
                used[pi] = true;
                let len = payload.len_bits();
                if len == 0 {
                    return Err(SimError::EmptyPayload { node, round, port });
                }
                if let Some(lim) = limit {
                    if len > lim {
                        return Err(SimError::Bandwidth { node, round, port, bits: len, limit: lim });
                    }
                }
                let h = g.half(v, port);
                messages += 1;
                bits += len as u64;
                sent_this_round += 1;
                port_used[v][pi] = true;
                if let Some(t) = trace.as_mut() {
                    t.push(TraceRecord {
                        round,
                        src_id: node,
                        src_port: port,
                        dst_id: g.id(h.nbr),
                        dst_port: h.back,
                        payload_hex: payload.to_hex(),
                        bits: len,
                    });
                }
                next_inbox[h.nbr].push(Incoming { port: h.back, sender: node, payload });
            }
            wake[v] = match ctl {
                Control::Continue => Wake::Next,
                Control::Sleep(r) => Wake::At(r.max(round + 1)),
                Control::Idle => Wake::Idle,
                Control::Halt => Wake::Halted,
            };
        }
        per_round.push(sent_this_round);
        last_round = round;
        std::mem::swap(&mut inbox, &mut next_inbox);

        if wake.iter().all(|w| *w == Wake::Halted) {
            break;
        }
        let mail_pending = (0..n).any(|v| wake[v] != Wake::Halted && !inbox[v].is_empty());
        let next = if mail_pending {
            Some(round + 1)
        } else {
            wake.iter()
                .filter_map(|w| match *w {
                    Wake::Next => Some(round + 1),
                    Wake::At(r) => Some(r),
                    Wake::Idle | Wake::Halted => None,
                })
                .min()
        };
        match next {
            None => {
                quiescent = true;
                break;
            }
            Some(r) if r > cfg.round_cap => {
                timed_out = true;
                break;
            }
            Some(r) => {
                per_round.resize((r - 1) as usize, 0);
                round = r;
            }
        }
    }
    per_round.truncate(last_round as usize);

    let mut utilized = Vec::new();
    for (v, row) in port_used.iter().enumerate() {
        for (i, &u) in row.iter().enumerate() {
            let w = g.half(v, i as Port + 1).nbr;
            if u {
                utilized.push((v.min(w), v.max(w)));
            }
        }
    }
    utilized.sort_unstable();
    utilized.dedup();

    Ok(SimResult {
        rounds: last_round,
        messages,
        bits,
        per_round,
        utilized,
        outputs: programs.iter().map(NodeProgram::output).collect(),
        timed_out,
        quiescent,
        trace,
    })
}
