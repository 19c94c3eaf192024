use super::{check_len, Bits, Builder, Cmp, Family, LbError, LbInstance, Params, Predicted};
use crate::graph::EdgeRef;
use crate::oracle::Problem;

/// MDS crossing family on `6n + 2` vertices; node order is
/// `A1, A2, B1, B2, C1, C2, a*, b*`.
pub fn mds_crossing_graph(n: usize, x: &Bits, y: &Bits) -> Result<LbInstance, LbError> {
    if n < 2 {
        return Err(LbError::Param(format!("n must be at least 2, got {n}")));
    }
    check_len("x", x, n * n)?;
    check_len("y", y, n * n)?;
    let mut b = Builder::default();
    let mut part = |tag: &str, label: &str| -> Vec<usize> {
        (1..=n).map(|i| b.add(format!("{tag}^{i}"), label)).collect::<Vec<_>>()
    };
    let a1 = part("a1", "A1");
    let a2 = part("a2", "A2");
    let b1 = part("b1", "B1");
    let b2 = part("b2", "B2");
    let c1 = part("c1", "C1");
    let c2 = part("c2", "C2");
    let a_star = b.add("a*".into(), "a*");
    let b_star = b.add("b*".into(), "b*");
    b.clique(&c1);
    b.clique(&c2);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                b.edge(c1[i], a1[j]);
                b.edge(c1[i], b1[j]);
                b.edge(c2[i], a2[j]);
                b.edge(c2[i], b2[j]);
            }
        }
        b.edge(a_star, a1[i]);
        b.edge(b_star, b1[i]);
    }
    for i in 1..=n {
        for j in 1..=n {
            if x.at(n, i, j) {
                b.edge(a1[i - 1], a2[j - 1]);
            }
            if y.at(n, i, j) {
                b.edge(b1[i - 1], b2[j - 1]);
            }
        }
    }
    let predicted = if x.intersects(y) {
        Predicted { problem: Problem::Mds, cmp: Cmp::Le, value: 4, lemma: "mds-crossing:intersecting".into() }
    } else {
        Predicted { problem: Problem::Mds, cmp: Cmp::Ge, value: 5, lemma: "mds-crossing:disjoint".into() }
    };
    let (graph, parts, names) = b.finish()?;
    Ok(LbInstance {
        graph,
        family: Family::MdsCrossing,
        params: Params { n: Some(n), ..Params::default() },
        x: Some(x.clone()),
        y: Some(y.clone()),
        parts,
        names,
        layers: None,
        predicted,
    })
}

/// `a1^i ~ a2^j` in the fixed member: `j ∈ {i, …, i + n/2 − 1}` cyclically.
fn fixed_adjacent(n: usize, i: usize, j: usize) -> bool {
    (j + n - i) % n < n / 2
}

/// The member with a fixed `n/2`-regular `A1–A2` band and its complement
/// between `B1` and `B2`.
pub fn mds_fixed_member(n: usize) -> Result<LbInstance, LbError> {
    if n < 4 || n % 2 == 1 {
        return Err(LbError::Param(format!("n must be even and at least 4, got {n}")));
    }
    let x = Bits::from_bools((1..=n).flat_map(|i| (1..=n).map(move |j| fixed_adjacent(n, i, j))).collect());
    let mut inst = mds_crossing_graph(n, &x, &x.complement())?;
    inst.family = Family::MdsFixed;
    inst.predicted.lemma = "mds-fixed:disjoint".into();
    Ok(inst)
}

/// Crossing partners for the `A1–A2` edge `{a1^i, a2^j}` of a fixed member:
/// every edge `{a1^p, a2^q}` with `a1^p` not adjacent to `a2^j` and `a2^q`
/// not adjacent to `a1^i`. Each pair is oriented for
/// [`cross_edges`](crate::graph::cross_edges), which then adds
/// `{a1^i, a2^q}` and `{a2^j, a1^p}`.
pub fn eligible_crossings(inst: &LbInstance, i: usize, j: usize) -> Result<Vec<(EdgeRef, EdgeRef)>, LbError> {
    if inst.family != Family::MdsFixed {
        return Err(LbError::Family { expected: Family::MdsFixed.to_string(), got: inst.family });
    }
    let n = inst.params.n.unwrap_or(0);
    let g = &inst.graph;
    let node = |tag: &str, i: usize| inst.node(&format!("{tag}^{i}")).expect("fixed member layout");
    let (ai, aj) = (node("a1", i), node("a2", j));
    let e = g.edge_ref(ai, aj).ok_or_else(|| LbError::Param(format!("a1^{i} and a2^{j} are not adjacent")))?;
    let mut out = Vec::new();
    for p in 1..=n {
        let ap = node("a1", p);
        if g.has_edge(ap, aj) {
            continue;
        }
        for q in 1..=n {
            let aq = node("a2", q);
            if g.has_edge(ai, aq) {
                continue;
            }
            if let Some(e2) = g.edge_ref(aq, ap) {
                out.push((e, e2));
            }
        }
    }
    Ok(out)
}

/// Closed-form count of crossing partners of `{a1^i, a2^j}`: with
/// `d = (j − i) mod n`, pairs `s ∈ 1..=n/2`, `t ∈ 0..n/2` with
/// `d − n/2 ≤ t − s ≤ d − 1`.
pub fn eligible_count_formula(n: usize, i: usize, j: usize) -> usize {
    let h = n as i64 / 2;
    let d = ((j + n - i) % n) as i64;
    let mut count = 0;
    for s in 1..=h {
        for t in 0..h {
            if (d - h..=d - 1).contains(&(t - s)) {
                count += 1;
            }
        }
    }
    count
}
