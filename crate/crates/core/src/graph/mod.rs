//! Port-numbered undirected graphs.
//!
//! Every node `v` has an integer ID and numbers its incident edges with the
//! ports `1..=deg(v)`. The adjacency list of `v` is stored sorted by port, so
//! `adj[v][p - 1]` is the edge behind port `p`.

mod cross;
mod gen;
mod io;

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use cross::cross_edges;
pub use gen::{assign_ids, assign_ids_from, assign_ports, complete, cycle, empty, gen_gnp, mobius_ladder, path, star};
pub use io::{parse_graph, read_graph, write_graph, write_graph_file};

pub type NodeId = u64;
pub type Port = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("crossing precondition violated: {0}")]
    Crossing(String),
}

/// One endpoint's view of an edge: the neighbour index and the port the
/// neighbour uses for the same edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Half {
    pub nbr: usize,
    pub back: Port,
}

/// An edge `{u, v}` together with the port `pu` at `u` and `pv` at `v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeRef {
    pub u: usize,
    pub pu: Port,
    pub v: usize,
    pub pv: Port,
}

impl EdgeRef {
    pub fn reversed(self) -> EdgeRef {
        EdgeRef { u: self.v, pu: self.pv, v: self.u, pv: self.pu }
    }

    /// Endpoint pair with the smaller index first.
    pub fn key(self) -> (usize, usize) {
        (self.u.min(self.v), self.u.max(self.v))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PortGraph {
    ids: Vec<NodeId>,
    adj: Vec<Vec<Half>>,
    index: HashMap<NodeId, usize>,
    m: usize,
}

impl fmt::Debug for PortGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PortGraph").field("n", &self.n()).field("m", &self.m).finish()
    }
}

impl PortGraph {
    /// Builds and validates a graph from explicit IDs and port-ordered
    /// adjacency lists.
    pub fn from_parts(ids: Vec<NodeId>, adj: Vec<Vec<Half>>) -> Result<PortGraph, GraphError> {
        if ids.is_empty() {
            return Err(GraphError::Param("graph must have at least one node".into()));
        }
        if ids.len() != adj.len() {
            return Err(GraphError::Invalid(format!("{} ids but {} adjacency lists", ids.len(), adj.len())));
        }
        let mut index = HashMap::with_capacity(ids.len());
        for (v, &id) in ids.iter().enumerate() {
            if index.insert(id, v).is_some() {
                return Err(GraphError::Invalid(format!("duplicate id {id}")));
            }
        }
        let degree_sum: usize = adj.iter().map(Vec::len).sum();
        let g = PortGraph { ids, adj, index, m: degree_sum / 2 };
        g.validate()?;
        Ok(g)
    }

    /// Graph on nodes `0..n` with IDs `1..=n`; ports follow ascending
    /// neighbour index.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<PortGraph, GraphError> {
        if n == 0 {
            return Err(GraphError::Param("n must be at least 1".into()));
        }
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::Invalid(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(GraphError::Invalid(format!("self-loop at node {u}")));
            }
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        for (v, list) in nbrs.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(GraphError::Invalid(format!("parallel edge at node {v}")));
            }
        }
        let mut adj: Vec<Vec<Half>> = Vec::with_capacity(n);
        for v in 0..n {
            let row = nbrs[v]
                .iter()
                .map(|&w| {
                    let back = nbrs[w].binary_search(&v).expect("symmetric") as Port + 1;
                    Half { nbr: w, back }
                })
                .collect();
            adj.push(row);
        }
        PortGraph::from_parts((1..=n as NodeId).collect(), adj)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        let n = self.n();
        for (v, row) in self.adj.iter().enumerate() {
            let mut seen = vec![false; n];
            for (i, h) in row.iter().enumerate() {
                let p = i as Port + 1;
                if h.nbr >= n {
                    return Err(GraphError::Invalid(format!("node {v} port {p}: neighbour out of range")));
                }
                if h.nbr == v {
                    return Err(GraphError::Invalid(format!("self-loop at node {v}")));
                }
                if seen[h.nbr] {
                    return Err(GraphError::Invalid(format!("parallel edge between {v} and {}", h.nbr)));
                }
                seen[h.nbr] = true;
                let back = h.back.checked_sub(1).and_then(|i| self.adj[h.nbr].get(i as usize));
                match back {
                    Some(b) if b.nbr == v && b.back == p => {}
                    _ => {
                        return Err(GraphError::Invalid(format!(
                            "asymmetric edge: node {v} port {p} -> node {} port {}",
                            h.nbr, h.back
                        )))
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn id(&self, v: usize) -> NodeId {
        self.ids[v]
    }

    pub fn ids(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn index_of(&self, id: NodeId) -> Option<usize> {
        self.index.get(&id).copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Port-ordered adjacency of `v`.
    pub fn ports(&self, v: usize) -> &[Half] {
        &self.adj[v]
    }

    pub fn half(&self, v: usize, port: Port) -> Half {
        self.adj[v][port as usize - 1]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|h| h.nbr)
    }

    /// Port at `u` leading to `v`, if adjacent.
    pub fn port_to(&self, u: usize, v: usize) -> Option<Port> {
        self.adj[u].iter().position(|h| h.nbr == v).map(|i| i as Port + 1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.degree(u) <= self.degree(v) { (u, v) } else { (v, u) };
        self.adj[a].iter().any(|h| h.nbr == b)
    }

    pub fn edge_ref(&self, u: usize, v: usize) -> Option<EdgeRef> {
        let pu = self.port_to(u, v)?;
        let pv = self.half(u, pu).back;
        Some(EdgeRef { u, pu, v, pv })
    }

    /// Every edge once, oriented from the smaller to the larger index, in
    /// order of (smaller index, port).
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, row)| {
            row.iter().enumerate().filter(move |(_, h)| h.nbr > u).map(move |(i, h)| EdgeRef {
                u,
                pu: i as Port + 1,
                v: h.nbr,
                pv: h.back,
            })
        })
    }

    /// Sorted `(min, max)` index pairs.
    pub fn edge_pairs(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.edges().map(EdgeRef::key).collect();
        out.sort_unstable();
        out
    }

    /// Sorted `(min, max)` ID pairs.
    pub fn id_edge_pairs(&self) -> Vec<(NodeId, NodeId)> {
        let mut out: Vec<_> = self
            .edges()
            .map(|e| {
                let (a, b) = (self.id(e.u), self.id(e.v));
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Same structure and ports with a new ID map.
    pub fn with_ids(&self, ids: Vec<NodeId>) -> Result<PortGraph, GraphError> {
        if ids.len() != self.n() {
            return Err(GraphError::Param(format!("expected {} ids, got {}", self.n(), ids.len())));
        }
        PortGraph::from_parts(ids, self.adj.clone())
    }

    pub(crate) fn adjacency(&self) -> &[Vec<Half>] {
        &self.adj
    }

    /// Connected components as lists of node indices, each sorted.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let c = out.len();
            let mut stack = vec![s];
            let mut members = Vec::new();
            comp[s] = c;
            while let Some(v) = stack.pop() {
                members.push(v);
                for w in self.neighbors(v) {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Subgraph induced by `nodes` (kept in the given order, IDs preserved,
    /// ports renumbered by ascending position).
    pub fn induced(&self, nodes: &[usize]) -> Result<PortGraph, GraphError> {
        let pos: HashMap<usize, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut edges = Vec::new();
        for (i, &v) in nodes.iter().enumerate() {
            for w in self.neighbors(v) {
                if let Some(&j) = pos.get(&w) {
                    if i < j {
                        edges.push((i, j));
                    }
                }
            }
        }
        let g = PortGraph::from_edges(nodes.len(), &edges)?;
        g.with_ids(nodes.iter().map(|&v| self.id(v)).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_assigns_ports_by_neighbor_order() {
        let g = PortGraph::from_edges(3, &[(0, 2), (0, 1)]).unwrap();
        assert_eq!(g.half(0, 1).nbr, 1);
        assert_eq!(g.half(0, 2).nbr, 2);
        assert_eq!(g.m(), 2);
        assert_eq!(g.ids(), &[1, 2, 3]);
    }

    #[test]
    fn rejects_self_loops_and_parallel_edges() {
        assert!(PortGraph::from_edges(2, &[(0, 0)]).is_err());
        assert!(PortGraph::from_edges(2, &[(0, 1), (1, 0)]).is_err());
        assert!(PortGraph::from_edges(0, &[]).is_err());
    }

    #[test]
    fn single_node_allowed() {
        let g = PortGraph::from_edges(1, &[]).unwrap();
        assert_eq!((g.n(), g.m()), (1, 0));
    }

    #[test]
    fn rejects_duplicate_ids() {
        let g = path(3);
        assert!(g.with_ids(vec![1, 1, 2]).is_err());
    }

    #[test]
    fn detects_asymmetric_ports() {
        let adj = vec![vec![Half { nbr: 1, back: 1 }], vec![Half { nbr: 0, back: 2 }]];
        assert!(PortGraph::from_parts(vec![1, 2], adj).is_err());
    }

    #[test]
    fn edge_ref_roundtrip() {
        let g = cycle(5);
        for e in g.edges() {
            assert_eq!(g.edge_ref(e.u, e.v), Some(e));
            assert_eq!(g.edge_ref(e.v, e.u), Some(e.reversed()));
        }
        assert_eq!(g.edges().count(), 5);
    }

    #[test]
    fn components_of_disjoint_union() {
        let g = PortGraph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
    }

    #[test]
    fn induced_keeps_ids() {
        let g = complete(4).with_ids(vec![10, 20, 30, 40]).unwrap();
        let h = g.induced(&[3, 1]).unwrap();
        assert_eq!(h.ids(), &[40, 20]);
        assert_eq!(h.m(), 1);
    }
}
