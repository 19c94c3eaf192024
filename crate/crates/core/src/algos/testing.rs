//! Randomly generated deterministic node programs for simulator property
//! tests.

use crate::graph::Port;
use crate::rng::{derive, mix};
use crate::sim::{Control, Incoming, NodeKnowledge, NodeProgram, Outbox, Payload};

/// Parameters of one random program; the same value yields the same
/// transition function on every node.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FsmSpec {
    pub program: u64,
    /// Sending probability per port and round is `1 / sparsity`.
    pub sparsity: u64,
    pub rounds: u64,
    pub payload_bits: u32,
}

impl FsmSpec {
    pub fn new(program: u64) -> Self {
        FsmSpec { program, sparsity: 8, rounds: 6, payload_bits: 8 }
    }
}

/// A finite-state sender: the state starts from the program, the ID and the
/// degree, absorbs every received message and decides sends by hashing.
#[derive(Clone, Debug)]
pub struct RandomFsm {
    spec: FsmSpec,
    degree: usize,
    state: u64,
}

impl RandomFsm {
    pub fn new(k: &NodeKnowledge, spec: FsmSpec) -> Self {
        let state = derive(derive(spec.program, k.id), k.degree as u64);
        RandomFsm { spec, degree: k.degree, state }
    }
}

impl NodeProgram for RandomFsm {
    type Output = u64;

    fn step(&mut self, round: u64, inbox: &[Incoming], out: &mut Outbox) -> Control {
        for m in inbox {
            let body = m.payload.reader().take(self.spec.payload_bits).unwrap_or(0);
            self.state = mix(self.state ^ derive(m.port as u64, body ^ m.sender.rotate_left(17)));
        }
        if round > self.spec.rounds {
            return Control::Halt;
        }
        for port in 1..=self.degree as Port {
            let h = derive(self.state, round << 20 | port as u64);
            if h.is_multiple_of(self.spec.sparsity) {
                let mask = (1u64 << self.spec.payload_bits) - 1;
                out.send(port, Payload::new().with((h >> 8) & mask | 1, self.spec.payload_bits));
            }
        }
        self.state = mix(self.state.wrapping_add(round));
        Control::Continue
    }

    fn output(&self) -> u64 {
        self.state
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;
    use crate::sim::{run, SimConfig};

    #[test]
    fn same_program_same_run() {
        let g = cycle(10);
        let spec = FsmSpec::new(5);
        let a = run(&g, |k, _| RandomFsm::new(k, spec), &SimConfig::default()).unwrap();
        let b = run(&g, |k, _| RandomFsm::new(k, spec), &SimConfig::default()).unwrap();
        assert_eq!(a, b);
        assert!(a.messages > 0);
    }

    #[test]
    fn programs_differ() {
        let g = cycle(10);
        let a = run(&g, |k, _| RandomFsm::new(k, FsmSpec::new(1)), &SimConfig::default()).unwrap();
        let b = run(&g, |k, _| RandomFsm::new(k, FsmSpec::new(2)), &SimConfig::default()).unwrap();
        assert_ne!(a.outputs, b.outputs);
    }
}
