use super::{EdgeRef, GraphError, Half, PortGraph};

/// Port-preserving crossing of `e = {u, v}` and `e2 = {u', v'}`.
///
/// Removes both edges and adds `{u, u'}` on ports `(p, p')` and `{v, v'}` on
/// ports `(q, q')`, where `p, q` are the ports of `e` at `u, v` and `p', q'`
/// those of `e2` at `u', v'`. IDs and every other port stay fixed.
pub fn cross_edges(g: &PortGraph, e: EdgeRef, e2: EdgeRef) -> Result<PortGraph, GraphError> {
    let n = g.n();
    for x in [e.u, e.v, e2.u, e2.v] {
        if x >= n {
            return Err(GraphError::Crossing(format!("node {x} out of range")));
        }
    }
    for (label, r) in [("e", e), ("e'", e2)] {
        if r.pu == 0 || r.pv == 0 || r.pu as usize > g.degree(r.u) || r.pv as usize > g.degree(r.v) {
            return Err(GraphError::Crossing(format!("{label}: port out of range")));
        }
        let h = g.half(r.u, r.pu);
        if h.nbr != r.v || h.back != r.pv {
            return Err(GraphError::Crossing(format!("{label} is not an edge with the given ports")));
        }
    }
    let nodes = [e.u, e.v, e2.u, e2.v];
    for i in 0..4 {
        for j in i + 1..4 {
            if nodes[i] == nodes[j] {
                return Err(GraphError::Crossing("edges share an endpoint".into()));
            }
        }
    }
    if g.has_edge(e.u, e2.u) {
        return Err(GraphError::Crossing("replacement edge {u,u'} already present".into()));
    }
    if g.has_edge(e.v, e2.v) {
        return Err(GraphError::Crossing("replacement edge {v,v'} already present".into()));
    }
    let mut adj = g.adjacency().to_vec();
    adj[e.u][e.pu as usize - 1] = Half { nbr: e2.u, back: e2.pu };
    adj[e2.u][e2.pu as usize - 1] = Half { nbr: e.u, back: e.pu };
    adj[e.v][e.pv as usize - 1] = Half { nbr: e2.v, back: e2.pv };
    adj[e2.v][e2.pv as usize - 1] = Half { nbr: e.v, back: e.pv };
    PortGraph::from_parts(g.ids().to_vec(), adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;

    #[test]
    fn four_cycle_crossing() {
        // a-b-c-d-a with a=0, b=1, c=2, d=3
        let g = cycle(4);
        let e = g.edge_ref(0, 1).unwrap();
        let e2 = g.edge_ref(2, 3).unwrap();
        let h = cross_edges(&g, e, e2).unwrap();
        assert!(h.has_edge(0, 2) && h.has_edge(1, 3));
        assert!(!h.has_edge(0, 1) && !h.has_edge(2, 3));
        assert!((0..4).all(|v| h.degree(v) == 2));
        assert_eq!(h.port_to(0, 2), Some(e.pu));
        assert_eq!(h.port_to(2, 0), Some(e2.pu));
        assert_eq!(h.port_to(1, 3), Some(e.pv));
        assert_eq!(h.port_to(3, 1), Some(e2.pv));
    }

    #[test]
    fn crossing_back_restores_original() {
        let g = cycle(6);
        let e = g.edge_ref(0, 1).unwrap();
        let e2 = g.edge_ref(3, 4).unwrap();
        let h = cross_edges(&g, e, e2).unwrap();
        let f = h.edge_ref(0, 3).unwrap();
        let f2 = h.edge_ref(1, 4).unwrap();
        let back = cross_edges(&h, f, f2).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn rejects_shared_endpoint_and_existing_edge() {
        let g = cycle(5);
        let e = g.edge_ref(0, 1).unwrap();
        let e2 = g.edge_ref(1, 2).unwrap();
        assert!(cross_edges(&g, e, e2).is_err());
        // u=0, u'=4 and {0,4} is a cycle edge
        let e = g.edge_ref(0, 1).unwrap();
        let e2 = g.edge_ref(4, 3).unwrap();
        assert!(matches!(cross_edges(&g, e, e2), Err(GraphError::Crossing(_))));
    }

    #[test]
    fn rejects_wrong_ports() {
        let g = cycle(6);
        let mut e = g.edge_ref(0, 1).unwrap();
        e.pu = 3;
        let e2 = g.edge_ref(3, 4).unwrap();
        assert!(cross_edges(&g, e, e2).is_err());
    }
}
