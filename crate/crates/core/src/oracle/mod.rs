//! Exact solvers for minimum vertex cover, minimum dominating set, maximum
//! independent set and maximum matching on small graphs.

pub mod bitgraph;
mod matching;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{NodeId, PortGraph};
use bitgraph::BitGraph;

pub use matching::{brute_force_matching_size, max_matching_edges};
pub use verify::{verify_instance, Verdict, VerifyReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Mvc,
    Mds,
    MaxIs,
    MaxM,
}

impl Problem {
    pub const ALL: [Problem; 4] = [Problem::Mvc, Problem::Mds, Problem::MaxIs, Problem::MaxM];

    pub fn name(self) -> &'static str {
        match self {
            Problem::Mvc => "mvc",
            Problem::Mds => "mds",
            Problem::MaxIs => "maxis",
            Problem::MaxM => "maxm",
        }
    }

    /// Minimisation problems.
    pub fn is_covering(self) -> bool {
        matches!(self, Problem::Mvc | Problem::Mds)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Problem {
    type Err = OracleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mvc" => Ok(Problem::Mvc),
            "mds" => Ok(Problem::Mds),
            "maxis" | "mis" => Ok(Problem::MaxIs),
            "maxm" | "matching" => Ok(Problem::MaxM),
            _ => Err(OracleError::UnknownProblem(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{problem} oracle refuses a {n}-vertex graph (size guard {limit})")]
    SizeGuard { problem: Problem, n: usize, limit: usize },
    #[error("unknown problem '{0}'")]
    UnknownProblem(String),
    #[error("invalid solution: {0}")]
    Invalid(String),
}

/// Vertex limits beyond which the exponential searches refuse to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeGuard {
    pub mvc_maxis: usize,
    pub mds: usize,
}

impl Default for SizeGuard {
    fn default() -> Self {
        SizeGuard { mvc_maxis: 40, mds: 30 }
    }
}

impl SizeGuard {
    fn check(&self, problem: Problem, n: usize) -> Result<(), OracleError> {
        let limit = match problem {
            Problem::Mvc | Problem::MaxIs => self.mvc_maxis,
            Problem::Mds => self.mds,
            Problem::MaxM => return Ok(()),
        }
        .min(bitgraph::CAPACITY);
        if n > limit {
            return Err(OracleError::SizeGuard { problem, n, limit });
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Witness {
    Vertices(Vec<usize>),
    Edges(Vec<(usize, usize)>),
}

/// A problem-tagged witness over node indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    pub problem: Problem,
    pub witness: Witness,
    pub size: usize,
}

impl Solution {
    pub fn from_vertices(problem: Problem, mut vs: Vec<usize>) -> Solution {
        vs.sort_unstable();
        vs.dedup();
        Solution { problem, size: vs.len(), witness: Witness::Vertices(vs) }
    }

    pub fn from_edges(mut es: Vec<(usize, usize)>) -> Solution {
        for e in es.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        es.sort_unstable();
        es.dedup();
        Solution { problem: Problem::MaxM, size: es.len(), witness: Witness::Edges(es) }
    }

    pub fn vertices(&self) -> &[usize] {
        match &self.witness {
            Witness::Vertices(v) => v,
            Witness::Edges(_) => &[],
        }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        match &self.witness {
            Witness::Edges(e) => e,
            Witness::Vertices(_) => &[],
        }
    }

    /// Witness IDs, sorted (endpoint IDs for matchings).
    pub fn ids(&self, g: &PortGraph) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = match &self.witness {
            Witness::Vertices(v) => v.iter().map(|&x| g.id(x)).collect(),
            Witness::Edges(e) => e.iter().flat_map(|&(a, b)| [g.id(a), g.id(b)]).collect(),
        };
        out.sort_unstable();
        out
    }

    /// Independent validity check of the witness against `g`.
    pub fn check(&self, g: &PortGraph) -> Result<(), OracleError> {
        let ok = match (&self.problem, &self.witness) {
            (Problem::MaxM, Witness::Edges(e)) => is_matching(g, e),
            (Problem::MaxM, Witness::Vertices(_)) => false,
            (_, Witness::Edges(_)) => false,
            (Problem::Mvc, Witness::Vertices(v)) => is_vertex_cover(g, v),
            (Problem::Mds, Witness::Vertices(v)) => is_dominating_set(g, v),
            (Problem::MaxIs, Witness::Vertices(v)) => is_independent_set(g, v),
        };
        let len = match &self.witness {
            Witness::Vertices(v) => v.len(),
            Witness::Edges(e) => e.len(),
        };
        if !ok || len != self.size {
            return Err(OracleError::Invalid(format!("{} witness of size {} fails", self.problem, self.size)));
        }
        Ok(())
    }
}

fn membership(n: usize, set: &[usize]) -> Option<Vec<bool>> {
    let mut inside = vec![false; n];
    for &v in set {
        if v >= n {
            return None;
        }
        inside[v] = true;
    }
    Some(inside)
}

pub fn is_vertex_cover(g: &PortGraph, set: &[usize]) -> bool {
    let Some(inside) = membership(g.n(), set) else { return false };
    g.edges().all(|e| inside[e.u] || inside[e.v])
}

pub fn is_dominating_set(g: &PortGraph, set: &[usize]) -> bool {
    let Some(inside) = membership(g.n(), set) else { return false };
    (0..g.n()).all(|v| inside[v] || g.neighbors(v).any(|w| inside[w]))
}

pub fn is_independent_set(g: &PortGraph, set: &[usize]) -> bool {
    let Some(inside) = membership(g.n(), set) else { return false };
    g.edges().all(|e| !(inside[e.u] && inside[e.v]))
}

/// Maximal independent set: independent and dominating.
pub fn is_maximal_independent_set(g: &PortGraph, set: &[usize]) -> bool {
    is_independent_set(g, set) && is_dominating_set(g, set)
}

pub fn is_matching(g: &PortGraph, edges: &[(usize, usize)]) -> bool {
    let mut used = vec![false; g.n()];
    for &(a, b) in edges {
        if a >= g.n() || b >= g.n() || a == b || !g.has_edge(a, b) || used[a] || used[b] {
            return false;
        }
        used[a] = true;
        used[b] = true;
    }
    true
}

/// Vertices ordered by ID, so bit order is ID order.
struct Ranked {
    order: Vec<usize>,
    bg: BitGraph,
}

fn ranked(g: &PortGraph) -> Ranked {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by_key(|&v| g.id(v));
    let mut rank = vec![0usize; g.n()];
    for (r, &v) in order.iter().enumerate() {
        rank[v] = r;
    }
    let edges: Vec<_> = g.edges().map(|e| (rank[e.u], rank[e.v])).collect();
    Ranked { bg: BitGraph::new(g.n(), &edges), order }
}

impl Ranked {
    fn unrank(&self, mask: u64) -> Vec<usize> {
        bitgraph::iter(mask).map(|r| self.order[r]).collect()
    }
}

pub fn exact_mvc(g: &PortGraph) -> Result<Solution, OracleError> {
    exact_with(Problem::Mvc, g, SizeGuard::default())
}

pub fn exact_mds(g: &PortGraph) -> Result<Solution, OracleError> {
    exact_with(Problem::Mds, g, SizeGuard::default())
}

pub fn exact_maxis(g: &PortGraph) -> Result<Solution, OracleError> {
    exact_with(Problem::MaxIs, g, SizeGuard::default())
}

pub fn exact_maxm(g: &PortGraph) -> Result<Solution, OracleError> {
    exact_with(Problem::MaxM, g, SizeGuard::default())
}

/// Exact optimum with the lexicographically smallest witness (by sorted ID
/// list) for vertex problems; the returned witness is re-checked.
pub fn exact_with(problem: Problem, g: &PortGraph, guard: SizeGuard) -> Result<Solution, OracleError> {
    guard.check(problem, g.n())?;
    let sol = match problem {
        Problem::MaxM => Solution::from_edges(max_matching_edges(g)),
        _ => {
            let r = ranked(g);
            let mask = match problem {
                Problem::Mvc => r.bg.lexmin_min_vertex_cover(),
                Problem::MaxIs => r.bg.lexmin_max_independent_set(),
                Problem::Mds => {
                    r.bg.lexmin_min_dominating(r.bg.all(), r.bg.all()).expect("every vertex dominates itself")
                }
                Problem::MaxM => unreachable!(),
            };
            Solution::from_vertices(problem, r.unrank(mask))
        }
    };
    sol.check(g)?;
    Ok(sol)
}

/// Optimum value only.
pub fn optimum(problem: Problem, g: &PortGraph, guard: SizeGuard) -> Result<usize, OracleError> {
    guard.check(problem, g.n())?;
    Ok(match problem {
        Problem::MaxM => max_matching_edges(g).len(),
        Problem::MaxIs => {
            let r = ranked(g);
            r.bg.alpha(r.bg.all()) as usize
        }
        Problem::Mvc => g.n() - optimum(Problem::MaxIs, g, guard)?,
        Problem::Mds => exact_with(Problem::Mds, g, guard)?.size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{assign_ids, complete, cycle, gen_gnp, path, star};

    #[test]
    fn clique_values() {
        let g = complete(4);
        assert_eq!(exact_mvc(&g).unwrap().size, 3);
        assert_eq!(exact_maxis(&g).unwrap().size, 1);
        assert_eq!(exact_mds(&g).unwrap().size, 1);
        assert_eq!(exact_maxm(&g).unwrap().size, 2);
    }

    #[test]
    fn five_cycle_values() {
        let g = cycle(5);
        assert_eq!(exact_mvc(&g).unwrap().size, 3);
        assert_eq!(exact_maxis(&g).unwrap().size, 2);
        assert_eq!(exact_mds(&g).unwrap().size, 2);
    }

    #[test]
    fn path_matching() {
        assert_eq!(exact_maxm(&path(4)).unwrap().size, 2);
        assert_eq!(exact_maxm(&path(5)).unwrap().size, 2);
    }

    #[test]
    fn witnesses_are_lexicographic_by_id() {
        // star with centre id 3: MDS = {centre}; MaxIS = leaves
        let g = star(3).with_ids(vec![3, 4, 1, 2]).unwrap();
        let is = exact_maxis(&g).unwrap();
        assert_eq!(is.ids(&g), vec![1, 2, 4]);
        let vc = exact_mvc(&g).unwrap();
        assert_eq!(vc.ids(&g), vec![3]);
        // 4-cycle ids 1..4 in order: MDS candidates {1,2},{1,3},...; lexmin is {1,2}
        let c = cycle(4);
        assert_eq!(exact_mds(&c).unwrap().ids(&c), vec![1, 2]);
    }

    #[test]
    fn size_guard_refuses() {
        let g = path(41);
        assert!(matches!(exact_mvc(&g), Err(OracleError::SizeGuard { limit: 40, .. })));
        assert!(matches!(exact_mds(&path(31)), Err(OracleError::SizeGuard { limit: 30, .. })));
        let loose = SizeGuard { mvc_maxis: 64, mds: 64 };
        assert_eq!(exact_with(Problem::Mvc, &g, loose).unwrap().size, 20);
        assert!(exact_maxm(&path(500)).is_ok());
    }

    #[test]
    fn relabeling_invariance_and_duality() {
        for seed in 0..8 {
            let g = gen_gnp(16, 0.3, seed).unwrap();
            let h = assign_ids(&g, seed + 100);
            for p in Problem::ALL {
                let a = exact_with(p, &g, SizeGuard::default()).unwrap().size;
                let b = exact_with(p, &h, SizeGuard::default()).unwrap().size;
                assert_eq!(a, b, "{p} seed {seed}");
            }
            let mvc = exact_mvc(&g).unwrap().size;
            let mis = exact_maxis(&g).unwrap().size;
            assert_eq!(mvc + mis, g.n());
            assert_eq!(optimum(Problem::Mvc, &g, SizeGuard::default()).unwrap(), mvc);
        }
    }

    #[test]
    fn checker_rejects_bad_witnesses() {
        let g = cycle(4);
        assert!(Solution::from_vertices(Problem::Mvc, vec![0]).check(&g).is_err());
        assert!(Solution::from_vertices(Problem::MaxIs, vec![0, 1]).check(&g).is_err());
        assert!(Solution::from_vertices(Problem::Mds, vec![0]).check(&g).is_err());
        assert!(Solution::from_edges(vec![(0, 1), (1, 2)]).check(&g).is_err());
        assert!(Solution::from_edges(vec![(0, 2)]).check(&g).is_err());
        assert!(Solution::from_edges(vec![(0, 1), (2, 3)]).check(&g).is_ok());
        assert!("bogus".parse::<Problem>().is_err());
        assert_eq!("MaxIS".parse::<Problem>().unwrap(), Problem::MaxIs);
    }
}
