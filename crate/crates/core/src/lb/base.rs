use super::{Builder, Cmp, Family, LbError, LbInstance, Params, Predicted};
use crate::graph::EdgeRef;
use crate::oracle::Problem;
use crate::ratio::Ratio;

/// Two disjoint copies of `X–Y–Z` with complete bipartite joins; node order
/// is `X, Y, Z, X', Y', Z'`.
fn two_copies(t: usize, y: usize) -> Result<(crate::graph::PortGraph, Vec<String>, Vec<String>), LbError> {
    let mut b = Builder::default();
    for prime in ["", "'"] {
        let mut part = |tag: &str, size: usize| -> Vec<usize> {
            let label = format!("{}{prime}", tag.to_uppercase());
            (1..=size).map(|i| b.add(format!("{tag}{prime}{i}"), &label)).collect::<Vec<_>>()
        };
        let xs = part("x", t);
        let ys = part("y", y);
        let zs = part("z", t);
        for &m in &ys {
            for &o in xs.iter().chain(&zs) {
                b.edge(m, o);
            }
        }
    }
    b.finish()
}

/// MVC base graph with `|X| = |Z| = t`, `|Y| = t/(4c)` per copy.
pub fn mvc_base_graph(t: usize, c: usize) -> Result<LbInstance, LbError> {
    if c == 0 || t == 0 || !t.is_multiple_of(4 * c) {
        return Err(LbError::Param(format!("t must be a positive multiple of 4c (t={t}, c={c})")));
    }
    let y = t / (4 * c);
    let (graph, parts, names) = two_copies(t, y)?;
    Ok(LbInstance {
        graph,
        family: Family::MvcBase,
        params: Params { t: Some(t), c: Some(c), ..Params::default() },
        x: None,
        y: None,
        parts,
        names,
        layers: None,
        // Y ∪ Y' covers both copies
        predicted: Predicted { problem: Problem::Mvc, cmp: Cmp::Eq, value: 2 * y, lemma: "mvc-base:union".into() },
    })
}

/// MaxIS base graph with `|X| = |Z| = t`, `|Y| = εt` per copy.
pub fn maxis_base_graph(t: usize, eps: Ratio) -> Result<LbInstance, LbError> {
    if !eps.is_proper() {
        return Err(LbError::Param(format!("eps must lie in (0,1), got {eps}")));
    }
    let y = match eps.exact_mul(t as u64) {
        Some(y) if y >= 1 => y as usize,
        _ => return Err(LbError::Param(format!("eps*t must be a positive integer (t={t}, eps={eps})"))),
    };
    let (graph, parts, names) = two_copies(t, y)?;
    Ok(LbInstance {
        graph,
        family: Family::MaxisBase,
        params: Params { t: Some(t), eps: Some(eps), ..Params::default() },
        x: None,
        y: None,
        parts,
        names,
        layers: None,
        predicted: Predicted { problem: Problem::MaxIs, cmp: Cmp::Eq, value: 4 * t, lemma: "maxis-base".into() },
    })
}

/// Crossing pairs `e = {y, z}`, `e' = {x', y'}` of a base graph, oriented so
/// that crossing adds `{y, y'}` and `{z, x'}`.
pub fn base_crossings(inst: &LbInstance) -> Result<Vec<(EdgeRef, EdgeRef)>, LbError> {
    if !matches!(inst.family, Family::MvcBase | Family::MaxisBase) {
        return Err(LbError::Family { expected: "mvc-base or maxis-base".into(), got: inst.family });
    }
    let g = &inst.graph;
    let (ys, zs, xps, yps) = (inst.part("Y"), inst.part("Z"), inst.part("X'"), inst.part("Y'"));
    let mut out = Vec::new();
    for &y in &ys {
        for &z in &zs {
            for &xp in &xps {
                for &yp in &yps {
                    let e = g.edge_ref(y, z).expect("complete join");
                    let e2 = g.edge_ref(yp, xp).expect("complete join");
                    out.push((e, e2));
                }
            }
        }
    }
    Ok(out)
}

/// MaxM lower-bound graph on `2n` nodes with `γ = ε/7`, random IDs from
/// `1..=2n` and uniform ports drawn from `seed`. Node order before
/// randomisation is `u_1..u_n, v_1..v_n`.
pub fn maxm_lb_graph(n: usize, eps: Ratio, seed: u64) -> Result<LbInstance, LbError> {
    if !eps.is_proper() {
        return Err(LbError::Param(format!("eps must lie in (0,1), got {eps}")));
    }
    let gamma = eps.div_int(7).ok_or_else(|| LbError::Param("eps denominator overflow".into()))?;
    let core = gamma.floor_mul(n as u64) as usize;
    if core == 0 {
        return Err(LbError::Param(format!("floor(eps*n/7) must be at least 1 (n={n}, eps={eps})")));
    }
    let mut b = Builder::default();
    let mut side = |tag: &str, c_label: &str, n_label: &str| -> Vec<usize> {
        (1..=n).map(|i| b.add(format!("{tag}{i}"), if i > n - core { c_label } else { n_label })).collect::<Vec<_>>()
    };
    let us = side("u", "C_A", "N_A");
    let vs = side("v", "C_B", "N_B");
    for half in [&us, &vs] {
        let (plain, clique) = half.split_at(n - core);
        b.clique(clique);
        for &p in plain {
            for &c in clique {
                b.edge(p, c);
            }
        }
    }
    for i in 0..n {
        b.edge(us[i], vs[i]);
    }
    let (graph, parts, names) = b.finish()?;
    let inst = LbInstance {
        graph,
        family: Family::MaxmLb,
        params: Params { n: Some(n), eps: Some(eps), ..Params::default() },
        x: None,
        y: None,
        parts,
        names,
        layers: None,
        predicted: Predicted { problem: Problem::MaxM, cmp: Cmp::Eq, value: n, lemma: "maxm-lb:valuable".into() },
    };
    Ok(inst.randomized(seed))
}
