use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::graph::{NodeId, Port};

/// One sent message.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub round: u64,
    pub src_id: NodeId,
    pub src_port: Port,
    pub dst_id: NodeId,
    pub dst_port: Port,
    pub payload_hex: String,
    pub bits: usize,
}

/// JSON-lines dump, one record per line.
pub fn write_trace<W: Write>(records: &[TraceRecord], mut w: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut w, r)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}
