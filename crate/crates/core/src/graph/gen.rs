use rand::seq::index::sample;
use rand::seq::SliceRandom;
use rand::Rng as _;

use super::{GraphError, Half, NodeId, Port, PortGraph};
use crate::rng::{self, tags};

/// Erdős–Rényi `G(n, p)` with IDs and ports drawn from sub-seeds of `seed`.
pub fn gen_gnp(n: usize, p: f64, seed: u64) -> Result<PortGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::Param("n must be at least 1".into()));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(GraphError::Param(format!("p must lie in (0, 1], got {p}")));
    }
    let mut r = rng::rng(rng::derive(seed, tags::GNP_EDGES));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if p >= 1.0 || r.random::<f64>() < p {
                edges.push((u, v));
            }
        }
    }
    let g = PortGraph::from_edges(n, &edges)?;
    let g = assign_ids(&g, rng::derive(seed, tags::GNP_IDS));
    Ok(assign_ports(&g, rng::derive(seed, tags::GNP_PORTS)))
}

/// Uniformly random permutation of `1..=n` as IDs.
pub fn assign_ids(g: &PortGraph, seed: u64) -> PortGraph {
    let mut ids: Vec<NodeId> = (1..=g.n() as NodeId).collect();
    ids.shuffle(&mut rng::rng(seed));
    g.with_ids(ids).expect("permutation of distinct ids")
}

/// Distinct IDs drawn uniformly from `1..=bound`, in uniformly random order.
pub fn assign_ids_from(g: &PortGraph, bound: u64, seed: u64) -> Result<PortGraph, GraphError> {
    let n = g.n();
    if bound < n as u64 || bound > usize::MAX as u64 {
        return Err(GraphError::Param(format!("id universe 1..={bound} too small for {n} nodes")));
    }
    let mut r = rng::rng(seed);
    let mut ids: Vec<NodeId> = sample(&mut r, bound as usize, n).into_iter().map(|i| i as NodeId + 1).collect();
    ids.shuffle(&mut r);
    g.with_ids(ids)
}

/// Independent uniformly random port permutation at every node.
pub fn assign_ports(g: &PortGraph, seed: u64) -> PortGraph {
    let mut r = rng::rng(seed);
    let adj = g.adjacency();
    // perm[v][old_port - 1] = new_port
    let perm: Vec<Vec<Port>> = adj
        .iter()
        .map(|row| {
            let mut p: Vec<Port> = (1..=row.len() as Port).collect();
            p.shuffle(&mut r);
            p
        })
        .collect();
    let mut out: Vec<Vec<Half>> = adj.iter().map(|row| vec![Half { nbr: 0, back: 0 }; row.len()]).collect();
    for (v, row) in adj.iter().enumerate() {
        for (i, h) in row.iter().enumerate() {
            let new_port = perm[v][i];
            let new_back = perm[h.nbr][h.back as usize - 1];
            out[v][new_port as usize - 1] = Half { nbr: h.nbr, back: new_back };
        }
    }
    PortGraph::from_parts(g.ids().to_vec(), out).expect("port permutation keeps symmetry")
}

pub fn empty(n: usize) -> PortGraph {
    PortGraph::from_edges(n, &[]).expect("n >= 1")
}

pub fn complete(n: usize) -> PortGraph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    PortGraph::from_edges(n, &edges).expect("n >= 1")
}

pub fn path(n: usize) -> PortGraph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    PortGraph::from_edges(n, &edges).expect("n >= 1")
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> PortGraph {
    assert!(n >= 3, "cycle needs at least 3 nodes");
    let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    PortGraph::from_edges(n, &edges).expect("simple cycle")
}

/// Star with centre 0 and `leaves` leaves.
pub fn star(leaves: usize) -> PortGraph {
    let edges: Vec<_> = (1..=leaves).map(|v| (0, v)).collect();
    PortGraph::from_edges(leaves + 1, &edges).expect("simple star")
}

/// 3-regular ring: a cycle on even `n >= 6` plus the `n/2` diameters.
pub fn mobius_ladder(n: usize) -> Result<PortGraph, GraphError> {
    if n < 6 || n % 2 == 1 {
        return Err(GraphError::Param(format!("mobius ladder needs even n >= 6, got {n}")));
    }
    let mut edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
    edges.extend((0..n / 2).map(|v| (v, v + n / 2)));
    PortGraph::from_edges(n, &edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gnp_full_probability_is_complete() {
        let g = gen_gnp(5, 1.0, 9).unwrap();
        assert_eq!(g.m(), 10);
    }

    #[test]
    fn gnp_rejects_bad_parameters() {
        assert!(gen_gnp(5, 0.0, 1).is_err());
        assert!(gen_gnp(5, 1.5, 1).is_err());
        assert!(gen_gnp(5, f64::NAN, 1).is_err());
        assert!(gen_gnp(0, 0.5, 1).is_err());
    }

    #[test]
    fn gnp_is_deterministic() {
        assert_eq!(gen_gnp(40, 0.2, 3).unwrap(), gen_gnp(40, 0.2, 3).unwrap());
        assert_ne!(gen_gnp(40, 0.2, 3).unwrap(), gen_gnp(40, 0.2, 4).unwrap());
    }

    #[test]
    fn k2_ids_are_a_permutation() {
        let g = complete(2);
        for s in 0..10 {
            let mut ids = assign_ids(&g, s).ids().to_vec();
            ids.sort_unstable();
            assert_eq!(ids, vec![1, 2]);
        }
        assert_eq!(assign_ids(&g, 5), assign_ids(&g, 5));
    }

    #[test]
    fn degree_one_node_keeps_port_one() {
        let g = star(5);
        for s in 0..20 {
            let h = assign_ports(&g, s);
            for leaf in 1..=5 {
                assert_eq!(h.degree(leaf), 1);
                assert_eq!(h.half(leaf, 1).nbr, 0);
            }
        }
    }

    #[test]
    fn ports_preserve_adjacency() {
        let g = gen_gnp(30, 0.3, 2).unwrap();
        let h = assign_ports(&g, 77);
        assert_eq!(g.edge_pairs(), h.edge_pairs());
        assert_eq!(g.ids(), h.ids());
        h.validate().unwrap();
    }

    #[test]
    fn ids_from_large_universe() {
        let g = path(10);
        let h = assign_ids_from(&g, 1000, 4).unwrap();
        assert!(h.ids().iter().all(|&i| (1..=1000).contains(&i)));
        assert!(assign_ids_from(&g, 5, 4).is_err());
    }

    #[test]
    fn mobius_is_three_regular() {
        let g = mobius_ladder(60).unwrap();
        assert!((0..60).all(|v| g.degree(v) == 3));
        assert!(mobius_ladder(7).is_err());
    }
}
