use petgraph::algo::matching::maximum_matching;
use petgraph::graph::{NodeIndex, UnGraph};

use crate::graph::PortGraph;

/// Maximum-cardinality matching (blossom search), as sorted index pairs.
pub fn max_matching_edges(g: &PortGraph) -> Vec<(usize, usize)> {
    let mut pg = UnGraph::<(), ()>::with_capacity(g.n(), g.m());
    for _ in 0..g.n() {
        pg.add_node(());
    }
    for (u, v) in g.edge_pairs() {
        pg.add_edge(NodeIndex::new(u), NodeIndex::new(v), ());
    }
    let m = maximum_matching(&pg);
    let mut out: Vec<(usize, usize)> =
        m.edges().map(|(a, b)| (a.index().min(b.index()), a.index().max(b.index()))).collect();
    out.sort_unstable();
    out
}

/// Exhaustive maximum matching size; exponential, for cross-checks only.
pub fn brute_force_matching_size(g: &PortGraph) -> usize {
    fn go(edges: &[(usize, usize)], used: u64) -> usize {
        match edges.split_first() {
            None => 0,
            Some((&(a, b), rest)) => {
                let skip = go(rest, used);
                if used & (1 << a) == 0 && used & (1 << b) == 0 {
                    skip.max(1 + go(rest, used | 1 << a | 1 << b))
                } else {
                    skip
                }
            }
        }
    }
    assert!(g.n() <= 64, "brute force matching is limited to 64 nodes");
    go(&g.edge_pairs(), 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, gen_gnp, path};

    #[test]
    fn small_cases() {
        assert_eq!(max_matching_edges(&path(4)), vec![(0, 1), (2, 3)]);
        assert_eq!(max_matching_edges(&cycle(7)).len(), 3);
        assert_eq!(brute_force_matching_size(&cycle(7)), 3);
    }

    #[test]
    fn agrees_with_exhaustive_search_on_subsamples() {
        for seed in 0..10 {
            let g = gen_gnp(50, 0.3, seed).unwrap();
            let sub: Vec<usize> = (0..10).map(|i| i * 5 + (seed as usize % 5)).collect();
            let h = g.induced(&sub).unwrap();
            assert_eq!(max_matching_edges(&h).len(), brute_force_matching_size(&h));
        }
    }
}
