use std::collections::BTreeSet;

use serde::Serialize;

use super::{check_len, log2_exact, Bits, Builder, Cmp, Family, LbError, LbInstance, Params, Predicted};
use crate::oracle::{Problem, SizeGuard};

/// Bit `h` (1-based) of the 0-based binary form of index `i ∈ 1..=k`.
fn bit_of(i: usize, h: usize) -> bool {
    (i - 1) >> (h - 1) & 1 == 1
}

fn check_l(l: usize) -> Result<(), LbError> {
    if l < 2 || l % 2 == 1 {
        return Err(LbError::Param(format!("l must be even and at least 2, got {l}")));
    }
    Ok(())
}

/// Row vertices `A1, A2, B1, B2`, each of size `k`.
struct Rows {
    a1: Vec<usize>,
    a2: Vec<usize>,
    b1: Vec<usize>,
    b2: Vec<usize>,
}

fn rows(b: &mut Builder, k: usize) -> Rows {
    let mut part =
        |tag: &str, label: &str| -> Vec<usize> { (1..=k).map(|i| b.add(format!("{tag}^{i}"), label)).collect() };
    Rows { a1: part("a1", "A1"), a2: part("a2", "A2"), b1: part("b1", "B1"), b2: part("b2", "B2") }
}

/// Gadget vertices `t_i^j, f_i^j` (and `u_i^j`) indexed by level `j`.
struct Gadget {
    t: Vec<usize>,
    f: Vec<usize>,
    u: Vec<usize>,
}

fn gadget(b: &mut Builder, i: usize, l: usize, with_u: bool) -> Gadget {
    let label = format!("C{i}");
    let t = (1..=l).map(|j| b.add(format!("t{i}^{j}"), &label)).collect();
    let f = (1..=l).map(|j| b.add(format!("f{i}^{j}"), &label)).collect();
    let u = if with_u { (1..=l).map(|j| b.add(format!("u{i}^{j}"), &label)).collect() } else { Vec::new() };
    Gadget { t, f, u }
}

/// Cycle order of a gadget, as node indices.
fn cycle_order(g: &Gadget, l: usize) -> Vec<usize> {
    let with_u = !g.u.is_empty();
    let mut order = Vec::new();
    for j in 1..=l {
        if j % 2 == 1 {
            order.push(g.f[j - 1]);
        } else {
            if with_u {
                order.push(g.u[j - 1]);
            }
            order.push(g.t[j - 1]);
        }
    }
    for j in (1..=l).rev() {
        if j % 2 == 0 {
            order.push(g.f[j - 1]);
        } else {
            if with_u {
                order.push(g.u[j - 1]);
            }
            order.push(g.t[j - 1]);
        }
    }
    order
}

fn build_exact(family: Family, k: usize, l: usize, x: &Bits, y: &Bits) -> Result<LbInstance, LbError> {
    let lg = log2_exact(k, "k")?;
    check_l(l)?;
    check_len("x", x, k * k)?;
    check_len("y", y, k * k)?;
    let mds = family == Family::MdsExact;
    let mut b = Builder::default();
    let r = rows(&mut b, k);
    let gadgets: Vec<Gadget> = (1..=2 * lg).map(|i| gadget(&mut b, i, l, mds)).collect();

    if !mds {
        for part in [&r.a1, &r.a2, &r.b1, &r.b2] {
            b.clique(part);
        }
    }
    for g in &gadgets {
        let order = cycle_order(g, l);
        for w in 0..order.len() {
            b.edge(order[w], order[(w + 1) % order.len()]);
        }
    }
    for i in 1..=k {
        for h in 1..=lg {
            let (lo, hi) = (&gadgets[h - 1], &gadgets[h + lg - 1]);
            let pick = |g: &Gadget, level: usize| if bit_of(i, h) { g.t[level - 1] } else { g.f[level - 1] };
            b.edge(r.a1[i - 1], pick(lo, 1));
            b.edge(r.b1[i - 1], pick(lo, l));
            b.edge(r.a2[i - 1], pick(hi, 1));
            b.edge(r.b2[i - 1], pick(hi, l));
        }
    }
    // MVC joins rows on a zero bit, MDS on a one bit
    for i in 1..=k {
        for j in 1..=k {
            if x.at(k, i, j) == mds {
                b.edge(r.a1[i - 1], r.a2[j - 1]);
            }
            if y.at(k, i, j) == mds {
                b.edge(r.b1[i - 1], r.b2[j - 1]);
            }
        }
    }

    let mut layers = vec![0usize; b_len(&r, &gadgets)];
    for &v in r.a1.iter().chain(&r.a2) {
        layers[v] = 1;
    }
    for &v in r.b1.iter().chain(&r.b2) {
        layers[v] = l;
    }
    for g in &gadgets {
        for j in 1..=l {
            layers[g.t[j - 1]] = j;
            layers[g.f[j - 1]] = j;
            if mds {
                layers[g.u[j - 1]] = j;
            }
        }
    }

    let intersect = x.intersects(y);
    let predicted = if mds {
        let base = 2 * l * lg;
        if intersect {
            Predicted { problem: Problem::Mds, cmp: Cmp::Le, value: base + 2, lemma: "mds-exact:intersecting".into() }
        } else {
            Predicted { problem: Problem::Mds, cmp: Cmp::Ge, value: base + 3, lemma: "mds-exact:disjoint".into() }
        }
    } else {
        let base = 4 * k + 2 * l * lg;
        if intersect {
            Predicted { problem: Problem::Mvc, cmp: Cmp::Eq, value: base - 4, lemma: "mvc-exact:intersecting".into() }
        } else {
            Predicted { problem: Problem::Mvc, cmp: Cmp::Ge, value: base - 3, lemma: "mvc-exact:disjoint".into() }
        }
    };
    let (graph, parts, names) = b.finish()?;
    Ok(LbInstance {
        graph,
        family,
        params: Params { k: Some(k), l: Some(l), ..Params::default() },
        x: Some(x.clone()),
        y: Some(y.clone()),
        parts,
        names,
        layers: Some(layers),
        predicted,
    })
}

fn b_len(r: &Rows, gadgets: &[Gadget]) -> usize {
    4 * r.a1.len() + gadgets.iter().map(|g| g.t.len() + g.f.len() + g.u.len()).sum::<usize>()
}

/// Exact-MVC family on `4k + 4ℓ·log₂k` vertices.
pub fn mvc_exact_family(k: usize, l: usize, x: &Bits, y: &Bits) -> Result<LbInstance, LbError> {
    build_exact(Family::MvcExact, k, l, x, y)
}

/// Exact-MDS family on `4k + 6ℓ·log₂k` vertices.
pub fn mds_exact_family(k: usize, l: usize, x: &Bits, y: &Bits) -> Result<LbInstance, LbError> {
    build_exact(Family::MdsExact, k, l, x, y)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    /// Flipping any bit of `x` changes only edges inside `V₁`.
    pub prop1: bool,
    /// Flipping any bit of `y` changes only edges inside `V_ℓ`.
    pub prop2: bool,
    /// Every edge joins equal or adjacent layers.
    pub prop3: bool,
    /// Oracle optimum agrees with the prediction; `None` when not run.
    pub prop4: Option<bool>,
    /// The `ℓ−1` prefix cuts have pairwise disjoint crossing edge sets.
    pub cuts_disjoint: bool,
}

impl SeparationReport {
    pub fn all_pass(&self) -> bool {
        self.prop1 && self.prop2 && self.prop3 && self.prop4 != Some(false) && self.cuts_disjoint
    }
}

fn edge_set(inst: &LbInstance) -> BTreeSet<(usize, usize)> {
    inst.graph.edge_pairs().into_iter().collect()
}

/// Checks the separation properties of an exact-family instance. The oracle
/// is consulted only when `guard` is given.
pub fn check_separation(inst: &LbInstance, guard: Option<SizeGuard>) -> Result<SeparationReport, LbError> {
    if !matches!(inst.family, Family::MvcExact | Family::MdsExact) {
        return Err(LbError::Family { expected: "mvc-exact or mds-exact".into(), got: inst.family });
    }
    let (k, l) = (inst.params.k.unwrap_or(0), inst.params.l.unwrap_or(0));
    let (x, y) = match (&inst.x, &inst.y) {
        (Some(x), Some(y)) => (x, y),
        _ => return Err(LbError::Sidecar("exact family without bit vectors".into())),
    };
    let layers = inst.layers.as_ref().ok_or_else(|| LbError::Sidecar("missing layers".into()))?;
    let base = edge_set(inst);
    let only_inside = |other: &LbInstance, layer: usize| {
        let o = edge_set(other);
        base.symmetric_difference(&o).all(|&(u, v)| layers[u] == layer && layers[v] == layer)
    };
    let mut prop1 = true;
    let mut prop2 = true;
    for pos in 0..k * k {
        prop1 &= only_inside(&build_exact(inst.family, k, l, &x.flipped(pos), y)?, 1);
        prop2 &= only_inside(&build_exact(inst.family, k, l, x, &y.flipped(pos))?, l);
    }
    let prop3 = base.iter().all(|&(u, v)| layers[u].abs_diff(layers[v]) <= 1);
    let cuts: Vec<BTreeSet<(usize, usize)>> =
        (1..l).map(|i| base.iter().copied().filter(|&(u, v)| (layers[u] <= i) != (layers[v] <= i)).collect()).collect();
    let cuts_disjoint = (0..cuts.len()).all(|a| (a + 1..cuts.len()).all(|b| cuts[a].is_disjoint(&cuts[b])));
    let prop4 = match guard {
        None => None,
        Some(g) => match crate::oracle::optimum(inst.predicted.problem, &inst.graph, g) {
            Ok(opt) => Some(inst.predicted.cmp.holds(opt, inst.predicted.value)),
            Err(_) => None,
        },
    };
    Ok(SeparationReport { prop1, prop2, prop3, prop4, cuts_disjoint })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_mds, exact_mvc};

    fn ones(k: usize) -> Bits {
        Bits::ones(k * k)
    }

    #[test]
    fn vertex_counts() {
        for (k, l) in [(2usize, 2usize), (2, 4), (4, 2), (4, 6)] {
            let lg = k.trailing_zeros() as usize;
            let g = mvc_exact_family(k, l, &ones(k), &ones(k)).unwrap();
            assert_eq!(g.graph.n(), 4 * k + 4 * l * lg);
            let h = mds_exact_family(k, l, &ones(k), &ones(k)).unwrap();
            assert_eq!(h.graph.n(), 4 * k + 6 * l * lg);
        }
    }

    #[test]
    fn parameter_errors() {
        assert!(mvc_exact_family(3, 2, &ones(3), &ones(3)).unwrap_err().to_string().contains("k must be a power of 2"));
        assert!(mvc_exact_family(2, 3, &ones(2), &ones(2)).is_err());
        assert!(mds_exact_family(2, 2, &Bits::ones(3), &ones(2)).is_err());
    }

    #[test]
    fn mvc_gadget_cycle_order() {
        let inst = mvc_exact_family(2, 4, &ones(2), &ones(2)).unwrap();
        let seq = ["f1^1", "t1^2", "f1^3", "t1^4", "f1^4", "t1^3", "f1^2", "t1^1"];
        let g = &inst.graph;
        for w in 0..seq.len() {
            let (a, b) = (inst.node(seq[w]).unwrap(), inst.node(seq[(w + 1) % seq.len()]).unwrap());
            assert!(g.has_edge(a, b), "{} - {}", seq[w], seq[(w + 1) % seq.len()]);
        }
        let c1 = inst.part("C1");
        assert_eq!(c1.len(), 8);
        let inner: usize = c1.iter().map(|&v| g.neighbors(v).filter(|w| c1.contains(w)).count()).sum();
        assert_eq!(inner, 16);
    }

    #[test]
    fn mds_u_vertices_have_degree_two() {
        let inst = mds_exact_family(2, 4, &ones(2), &ones(2)).unwrap();
        for (v, name) in inst.names.iter().enumerate() {
            if name.starts_with('u') {
                assert_eq!(inst.graph.degree(v), 2, "{name}");
            }
        }
        assert!(inst.graph.has_edge(inst.node("f1^1").unwrap(), inst.node("u1^2").unwrap()));
        assert!(inst.graph.has_edge(inst.node("u1^1").unwrap(), inst.node("t1^1").unwrap()));
    }

    #[test]
    fn predicted_values() {
        let p = mvc_exact_family(2, 2, &ones(2), &ones(2)).unwrap().predicted;
        assert_eq!((p.cmp, p.value), (Cmp::Eq, 8));
        let p = mvc_exact_family(2, 2, &ones(2), &Bits::zeros(4)).unwrap().predicted;
        assert_eq!((p.cmp, p.value), (Cmp::Ge, 9));
        let p = mds_exact_family(2, 2, &ones(2), &ones(2)).unwrap().predicted;
        assert_eq!((p.cmp, p.value), (Cmp::Le, 6));
        let p = mds_exact_family(2, 2, &ones(2), &Bits::zeros(4)).unwrap().predicted;
        assert_eq!((p.cmp, p.value), (Cmp::Ge, 7));
    }

    #[test]
    fn oracle_confirms_small_cases() {
        let g = mvc_exact_family(2, 2, &ones(2), &ones(2)).unwrap();
        assert_eq!(exact_mvc(&g.graph).unwrap().size, 8);
        let g = mvc_exact_family(2, 2, &ones(2), &Bits::zeros(4)).unwrap();
        assert!(exact_mvc(&g.graph).unwrap().size >= 9);
        let g = mds_exact_family(2, 2, &ones(2), &ones(2)).unwrap();
        assert!(exact_mds(&g.graph).unwrap().size <= 6);
        let g = mds_exact_family(2, 2, &Bits::from_hex("a", 4).unwrap(), &Bits::from_hex("5", 4).unwrap()).unwrap();
        assert!(exact_mds(&g.graph).unwrap().size >= 7);
    }

    #[test]
    fn separation_holds() {
        let x = Bits::from_hex("6", 4).unwrap();
        let y = Bits::from_hex("9", 4).unwrap();
        for l in [2, 4] {
            let inst = mvc_exact_family(2, l, &x, &y).unwrap();
            let r = check_separation(&inst, Some(SizeGuard::default())).unwrap();
            assert!(r.all_pass(), "{r:?}");
            assert_eq!(r.prop4, Some(true));
            let inst = mds_exact_family(2, l, &x, &y).unwrap();
            assert!(check_separation(&inst, None).unwrap().all_pass());
        }
    }
}
