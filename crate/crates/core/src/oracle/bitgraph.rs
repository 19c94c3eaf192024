//! Exact searches on graphs of at most 64 vertices stored as bitmasks.
//!
//! Vertex `i` of a [`BitGraph`] is bit `i`; lexicographic tie-breaking is by
//! vertex index, so callers order vertices by ID before building one.

pub const CAPACITY: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitGraph {
    n: usize,
    adj: Vec<u64>,
}

fn bit(v: usize) -> u64 {
    1u64 << v
}

fn above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        !0u64 << (v + 1)
    }
}

fn from(v: usize) -> u64 {
    if v >= 64 {
        0
    } else {
        !0u64 << v
    }
}

fn low(mask: u64) -> usize {
    mask.trailing_zeros() as usize
}

impl BitGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> BitGraph {
        assert!(n <= CAPACITY, "bit graphs hold at most {CAPACITY} vertices");
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            if u != v {
                adj[u] |= bit(v);
                adj[v] |= bit(u);
            }
        }
        BitGraph { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn all(&self) -> u64 {
        if self.n == 64 {
            !0
        } else {
            (1u64 << self.n) - 1
        }
    }

    pub fn nbrs(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn closed(&self, v: usize) -> u64 {
        self.adj[v] | bit(v)
    }

    pub fn is_independent(&self, set: u64) -> bool {
        iter(set).all(|v| self.adj[v] & set == 0)
    }

    /// Size of a maximum independent set inside `cand`.
    pub fn alpha(&self, cand: u64) -> u32 {
        self.max_independent_set_in(cand).count_ones()
    }

    /// A maximum independent set inside `cand` (deterministic, not
    /// necessarily lexicographically first).
    pub fn max_independent_set_in(&self, cand: u64) -> u64 {
        let best = greedy_is(self, cand);
        let mut s = Search { g: self, best: best.count_ones(), best_set: best };
        s.run(cand, 0, 0);
        s.best_set
    }

    /// Largest independent set containing `must` inside `must | allowed`,
    /// or `None` when `must` is not independent.
    pub fn alpha_with(&self, must: u64, allowed: u64) -> Option<u32> {
        if !self.is_independent(must) {
            return None;
        }
        let blocked = iter(must).fold(must, |acc, v| acc | self.adj[v]);
        Some(must.count_ones() + self.alpha(allowed & self.all() & !blocked))
    }

    /// Lexicographically smallest maximum independent set.
    pub fn lexmin_max_independent_set(&self) -> u64 {
        let target = self.alpha(self.all());
        let mut chosen = 0u64;
        for v in 0..self.n {
            let must = chosen | bit(v);
            if self.alpha_with(must, above(v)) == Some(target) {
                chosen = must;
            }
        }
        debug_assert_eq!(chosen.count_ones(), target);
        chosen
    }

    /// Lexicographically smallest minimum vertex cover.
    pub fn lexmin_min_vertex_cover(&self) -> u64 {
        let target = self.alpha(self.all());
        let mut cover = 0u64;
        let mut outside = 0u64;
        for v in 0..self.n {
            // v in the cover is feasible iff a maximum independent set avoids
            // v and the cover nodes and contains every earlier skipped node
            if self.alpha_with(outside, above(v)) == Some(target) {
                cover |= bit(v);
            } else {
                outside |= bit(v);
            }
        }
        debug_assert!(self.is_independent(outside));
        cover
    }

    /// Lexicographically smallest minimum set of `candidates` dominating
    /// every vertex of `targets` (closed neighbourhoods). `None` when some
    /// target has no candidate in its closed neighbourhood.
    pub fn lexmin_min_dominating(&self, targets: u64, candidates: u64) -> Option<u64> {
        let cover: Vec<u64> = (0..self.n).map(|c| self.closed(c) & targets).collect();
        for t in iter(targets) {
            if self.closed(t) & candidates == 0 {
                return None;
            }
        }
        if targets == 0 {
            return Some(0);
        }
        let best_gain = iter(candidates).map(|c| cover[c].count_ones()).max().unwrap_or(0);
        let lower = targets.count_ones().div_ceil(best_gain.max(1));
        for k in lower..=candidates.count_ones() {
            let mut d = Dom { g: self, cover: &cover, targets, candidates, best_gain, found: None };
            if d.search(0, k, 0, 0) {
                return d.found;
            }
        }
        None
    }

    pub fn is_dominating(&self, targets: u64, set: u64) -> bool {
        let dominated = iter(set).fold(0u64, |acc, v| acc | self.closed(v));
        targets & !dominated == 0
    }
}

pub fn iter(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = low(mask);
            mask &= mask - 1;
            Some(v)
        }
    })
}

fn greedy_is(g: &BitGraph, mut cand: u64) -> u64 {
    let mut set = 0u64;
    while cand != 0 {
        let v = iter(cand).min_by_key(|&v| (g.adj[v] & cand).count_ones()).expect("nonempty");
        set |= bit(v);
        cand &= !g.closed(v);
    }
    set
}

struct Search<'a> {
    g: &'a BitGraph,
    best: u32,
    best_set: u64,
}

impl Search<'_> {
    fn clique_cover_bound(&self, mut rem: u64) -> u32 {
        let mut count = 0;
        while rem != 0 {
            let v = low(rem);
            let mut clique = bit(v);
            let mut cands = rem & self.g.adj[v];
            while cands != 0 {
                let w = low(cands);
                clique |= bit(w);
                cands &= self.g.adj[w];
            }
            rem &= !clique;
            count += 1;
        }
        count
    }

    fn run(&mut self, mut cand: u64, mut cur: u64, mut size: u32) {
        loop {
            // vertices of degree at most one within cand are always safe picks
            let safe = iter(cand).find(|&v| (self.g.adj[v] & cand).count_ones() <= 1);
            match safe {
                Some(v) => {
                    cur |= bit(v);
                    size += 1;
                    cand &= !self.g.closed(v);
                }
                None => break,
            }
        }
        if cand == 0 {
            if size > self.best {
                self.best = size;
                self.best_set = cur;
            }
            return;
        }
        if size + cand.count_ones() <= self.best || size + self.clique_cover_bound(cand) <= self.best {
            return;
        }
        let v = iter(cand).max_by_key(|&v| (self.g.adj[v] & cand).count_ones()).expect("nonempty");
        self.run(cand & !self.g.closed(v), cur | bit(v), size + 1);
        self.run(cand & !bit(v), cur, size);
    }
}

struct Dom<'a> {
    g: &'a BitGraph,
    cover: &'a [u64],
    targets: u64,
    candidates: u64,
    best_gain: u32,
    found: Option<u64>,
}

impl Dom<'_> {
    fn search(&mut self, start: usize, left: u32, chosen: u64, dominated: u64) -> bool {
        let open = self.targets & !dominated;
        if open == 0 {
            self.found = Some(chosen);
            return true;
        }
        if left == 0 || left * self.best_gain < open.count_ones() {
            return false;
        }
        // the lowest undominated target needs a dominator chosen from here on
        let u = low(open);
        let options = self.g.closed(u) & self.candidates & from(start);
        if options == 0 {
            return false;
        }
        let last = 63 - options.leading_zeros() as usize;
        for c in start..=last {
            if self.candidates & bit(c) == 0 {
                continue;
            }
            if self.search(c + 1, left - 1, chosen | bit(c), dominated | self.cover[c]) {
                return true;
            }
        }
        false
    }
}
