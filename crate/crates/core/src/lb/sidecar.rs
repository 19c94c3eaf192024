//! Instance files: a graph file plus a JSON sidecar next to it.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Bits, Family, LbError, LbInstance, Params, Predicted};
use crate::error::Error;
use crate::graph::{read_graph, write_graph_file, NodeId};

pub const SIDECAR_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SidecarNode {
    pub id: NodeId,
    pub name: String,
    pub part: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layer: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sidecar {
    pub schema: u32,
    pub family: Family,
    pub params: Params,
    /// Flattening of `x` and `y`.
    pub bit_order: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bits: Option<usize>,
    pub nodes: Vec<SidecarNode>,
    pub predicted: Predicted,
}

impl Sidecar {
    pub fn of(inst: &LbInstance) -> Sidecar {
        let g = &inst.graph;
        Sidecar {
            schema: SIDECAR_SCHEMA,
            family: inst.family,
            params: inst.params.clone(),
            bit_order: "row-major x[(i-1)*k+(j-1)], hex msb-first".into(),
            x: inst.x.as_ref().map(Bits::to_hex),
            y: inst.y.as_ref().map(Bits::to_hex),
            bits: inst.x.as_ref().map(Bits::len),
            nodes: (0..g.n())
                .map(|v| SidecarNode {
                    id: g.id(v),
                    name: inst.names[v].clone(),
                    part: inst.parts[v].clone(),
                    layer: inst.layers.as_ref().map(|l| l[v]),
                })
                .collect(),
            predicted: inst.predicted.clone(),
        }
    }
}

pub fn sidecar_path(graph_path: &Path) -> PathBuf {
    graph_path.with_extension("json")
}

fn io(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.display().to_string(), source }
}

/// Writes `path` (graph file) and its `.json` sidecar.
pub fn write_instance(inst: &LbInstance, path: &Path) -> Result<(), Error> {
    write_graph_file(&inst.graph, path)?;
    let side = sidecar_path(path);
    let mut text = serde_json::to_string_pretty(&Sidecar::of(inst)).expect("sidecar serialises");
    text.push('\n');
    std::fs::write(&side, text).map_err(io(&side))
}

pub fn read_instance(path: &Path) -> Result<LbInstance, Error> {
    let graph = read_graph(path)?;
    let side = sidecar_path(path);
    let text = std::fs::read_to_string(&side).map_err(io(&side))?;
    let s: Sidecar = serde_json::from_str(&text).map_err(|e| LbError::Sidecar(format!("{}: {e}", side.display())))?;
    if s.schema != SIDECAR_SCHEMA {
        return Err(LbError::Sidecar(format!("unsupported schema {}", s.schema)).into());
    }
    if s.nodes.len() != graph.n() {
        return Err(LbError::Sidecar(format!("{} sidecar nodes for {} graph nodes", s.nodes.len(), graph.n())).into());
    }
    let n = graph.n();
    let mut names = vec![String::new(); n];
    let mut parts = vec![String::new(); n];
    let mut layers = vec![0usize; n];
    let mut seen = vec![false; n];
    for node in &s.nodes {
        let v =
            graph.index_of(node.id).ok_or_else(|| LbError::Sidecar(format!("sidecar id {} not in graph", node.id)))?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(LbError::Sidecar(format!("id {} listed twice", node.id)).into());
        }
        names[v] = node.name.clone();
        parts[v] = node.part.clone();
        layers[v] = node.layer.unwrap_or(0);
    }
    let bits = |h: &Option<String>| -> Result<Option<Bits>, LbError> {
        match (h, s.bits) {
            (Some(h), Some(len)) => Bits::from_hex(h, len).map(Some),
            (None, _) => Ok(None),
            (Some(_), None) => Err(LbError::Sidecar("bit vector without length".into())),
        }
    };
    let has_layers = s.nodes.iter().all(|n| n.layer.is_some());
    Ok(LbInstance {
        graph,
        family: s.family,
        params: s.params.clone(),
        x: bits(&s.x)?,
        y: bits(&s.y)?,
        parts,
        names,
        layers: has_layers.then_some(layers),
        predicted: s.predicted,
    })
}
