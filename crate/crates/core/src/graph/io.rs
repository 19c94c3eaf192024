//! Text graph format.
//!
//! ```text
//! pg <n> <m>
//! node <id> <deg>        (n lines, node order)
//! edge <u> <pu> <v> <pv> (m lines, endpoints given by id)
//! ```

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use super::{GraphError, Half, NodeId, Port, PortGraph};
use crate::error::Error;

pub fn write_graph(g: &PortGraph) -> String {
    let mut s = String::new();
    writeln!(s, "pg {} {}", g.n(), g.m()).unwrap();
    for v in 0..g.n() {
        writeln!(s, "node {} {}", g.id(v), g.degree(v)).unwrap();
    }
    for e in g.edges() {
        writeln!(s, "edge {} {} {} {}", g.id(e.u), e.pu, g.id(e.v), e.pv).unwrap();
    }
    s
}

fn perr(line: usize, msg: impl Into<String>) -> GraphError {
    GraphError::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let t = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    t.parse().map_err(|_| perr(line, format!("bad {what} '{t}'")))
}

pub fn parse_graph(text: &str) -> Result<PortGraph, GraphError> {
    let mut lines =
        text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| perr(1, "empty input"))?;
    let mut tok = header.split_whitespace();
    if tok.next() != Some("pg") {
        return Err(perr(hl, "expected header 'pg <n> <m>'"));
    }
    let n: usize = num(tok.next(), hl, "n")?;
    let m: usize = num(tok.next(), hl, "m")?;
    if tok.next().is_some() {
        return Err(perr(hl, "trailing tokens in header"));
    }
    if n == 0 {
        return Err(perr(hl, "n must be at least 1"));
    }
    let mut ids: Vec<NodeId> = Vec::with_capacity(n);
    let mut index: HashMap<NodeId, usize> = HashMap::with_capacity(n);
    let mut adj: Vec<Vec<Option<Half>>> = Vec::with_capacity(n);
    let mut edges_seen = 0usize;
    for (ln, l) in lines {
        let mut tok = l.split_whitespace();
        match tok.next() {
            Some("node") => {
                if ids.len() == n {
                    return Err(perr(ln, format!("more than {n} node lines")));
                }
                if edges_seen > 0 {
                    return Err(perr(ln, "node line after edge lines"));
                }
                let id: NodeId = num(tok.next(), ln, "id")?;
                let deg: usize = num(tok.next(), ln, "degree")?;
                if index.insert(id, ids.len()).is_some() {
                    return Err(perr(ln, format!("duplicate id {id}")));
                }
                if deg >= n {
                    return Err(perr(ln, format!("degree {deg} impossible with n={n}")));
                }
                ids.push(id);
                adj.push(vec![None; deg]);
            }
            Some("edge") => {
                if ids.len() != n {
                    return Err(perr(ln, format!("edge before all {n} node lines")));
                }
                let u: NodeId = num(tok.next(), ln, "u")?;
                let pu: Port = num(tok.next(), ln, "pu")?;
                let v: NodeId = num(tok.next(), ln, "v")?;
                let pv: Port = num(tok.next(), ln, "pv")?;
                let ui = *index.get(&u).ok_or_else(|| perr(ln, format!("unknown id {u}")))?;
                let vi = *index.get(&v).ok_or_else(|| perr(ln, format!("unknown id {v}")))?;
                if ui == vi {
                    return Err(perr(ln, format!("self-loop at {u}")));
                }
                for (x, xi, p) in [(u, ui, pu), (v, vi, pv)] {
                    if p == 0 || p as usize > adj[xi].len() {
                        return Err(perr(ln, format!("port {p} out of range at node {x}")));
                    }
                    if adj[xi][p as usize - 1].is_some() {
                        return Err(perr(ln, format!("port {p} at node {x} used twice")));
                    }
                }
                if adj[ui].iter().flatten().any(|h| h.nbr == vi) {
                    return Err(perr(ln, format!("parallel edge {u}-{v}")));
                }
                adj[ui][pu as usize - 1] = Some(Half { nbr: vi, back: pv });
                adj[vi][pv as usize - 1] = Some(Half { nbr: ui, back: pu });
                edges_seen += 1;
            }
            Some(other) => return Err(perr(ln, format!("unknown record '{other}'"))),
            None => unreachable!("blank lines filtered"),
        }
        if tok.next().is_some() {
            return Err(perr(ln, "trailing tokens"));
        }
    }
    let last = text.lines().count().max(1);
    if ids.len() != n {
        return Err(perr(last, format!("expected {n} node lines, found {}", ids.len())));
    }
    if edges_seen != m {
        return Err(perr(last, format!("header declares {m} edges, found {edges_seen}")));
    }
    let mut full = Vec::with_capacity(n);
    for (v, row) in adj.into_iter().enumerate() {
        let filled: Option<Vec<Half>> = row.into_iter().collect();
        full.push(filled.ok_or_else(|| perr(last, format!("node {} has unfilled ports", ids[v])))?);
    }
    PortGraph::from_parts(ids, full).map_err(|e| perr(last, e.to_string()))
}

pub fn read_graph(path: &Path) -> Result<PortGraph, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.display().to_string(), source })?;
    Ok(parse_graph(&text)?)
}

pub fn write_graph_file(g: &PortGraph, path: &Path) -> Result<(), Error> {
    std::fs::write(path, write_graph(g)).map_err(|source| Error::Io { path: path.display().to_string(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_gnp, star};

    #[test]
    fn roundtrip_is_bit_exact() {
        let g = gen_gnp(25, 0.3, 11).unwrap();
        let text = write_graph(&g);
        let h = parse_graph(&text).unwrap();
        assert_eq!(g, h);
        assert_eq!(write_graph(&h), text);
    }

    #[test]
    fn reports_line_numbers() {
        let bad = "pg 2 1\nnode 1 1\nnode 2 1\nedge 1 1 3 1\n";
        assert_eq!(parse_graph(bad).unwrap_err(), GraphError::Parse { line: 4, msg: "unknown id 3".into() });
        let bad = "pg 2 1\nnode 1 1\nnode 1 1\n";
        assert!(matches!(parse_graph(bad), Err(GraphError::Parse { line: 3, .. })));
        let bad = "pg 3 2\nnode 1 2\nnode 2 1\nnode 3 1\nedge 1 1 2 1\nedge 1 1 3 1\n";
        assert!(matches!(parse_graph(bad), Err(GraphError::Parse { line: 6, .. })));
        let bad = "pg 2 1\nnode 1 1\nnode 2 1\n";
        assert!(matches!(parse_graph(bad), Err(GraphError::Parse { .. })));
        assert!(parse_graph("graph 1 0\n").is_err());
    }

    #[test]
    fn star_text_shape() {
        let text = write_graph(&star(2));
        assert_eq!(text, "pg 3 2\nnode 1 2\nnode 2 1\nnode 3 1\nedge 1 1 2 1\nedge 1 2 3 1\n");
    }
}
