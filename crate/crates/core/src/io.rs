//! Text formats. All vertex ids in files are 1-based.
//!
//! * Edge list: `p edge n m`, then `e u v` per edge; `c` starts a comment.
//! * Embedding: `r v: w1 ... wk` gives the clockwise rotation at `v`;
//!   `outer: f` picks the outer face by its 0-based index in face-tracing
//!   order.
//! * Tree decomposition (PACE): `s td nbags maxbag nverts`, `b id v...`,
//!   then one line `i j` per tree edge. The tree is rooted at bag 1.
//! * Targets: whitespace-separated vertex ids, order preserved; `c` starts
//!   a comment.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::guarding::TreeDecomposition;
use crate::plane::PlaneGraph;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() || toks[0] == "c" || toks[0].starts_with('#') {
            None
        } else {
            Some((i + 1, toks))
        }
    })
}

fn parse_num(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>()
        .map_err(|_| Error::parse(line, format!("expected a nonnegative integer, found {tok:?}")))
}

fn parse_vertex(tok: &str, line: usize, n: usize) -> Result<usize> {
    let v = parse_num(tok, line)?;
    if v == 0 || v > n {
        return Err(Error::parse(line, format!("vertex {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<(usize, usize)> = None;
    let mut b: Option<GraphBuilder> = None;
    let mut seen = 0;
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "p" => {
                if header.is_some() {
                    return Err(Error::parse(line, "duplicate header"));
                }
                if toks.len() != 4 || toks[1] != "edge" {
                    return Err(Error::parse(line, "header must be `p edge n m`"));
                }
                let n = parse_num(toks[2], line)?;
                let m = parse_num(toks[3], line)?;
                header = Some((n, m));
                b = Some(GraphBuilder::new(n));
            }
            "e" => {
                let (n, _) = header.ok_or_else(|| Error::parse(line, "edge before header"))?;
                if toks.len() != 3 {
                    return Err(Error::parse(line, "edge line must be `e u v`"));
                }
                let u = parse_vertex(toks[1], line, n)?;
                let v = parse_vertex(toks[2], line, n)?;
                if u == v {
                    return Err(Error::parse(line, "self-loop"));
                }
                if !b.as_mut().expect("header seen").add_edge(u, v)? {
                    return Err(Error::parse(line, "duplicate edge"));
                }
                seen += 1;
            }
            other => return Err(Error::parse(line, format!("unknown line type {other:?}"))),
        }
    }
    let (_, m) = header.ok_or_else(|| Error::parse(0, "missing `p edge n m` header"))?;
    if seen != m {
        return Err(Error::parse(0, format!("header announces {m} edges, found {seen}")));
    }
    Ok(b.expect("header seen").build())
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut s = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "e {} {}", u + 1, v + 1);
    }
    s
}

pub fn parse_embedding(g: Graph, text: &str) -> Result<PlaneGraph> {
    let n = g.n();
    let mut rotation: Vec<Option<Vec<usize>>> = vec![None; n];
    let mut outer = None;
    for (line, toks) in content_lines(text) {
        if toks[0] == "outer:" || toks[0] == "outer" {
            let rest: Vec<&str> = toks[1..].iter().copied().filter(|t| *t != ":").collect();
            if rest.len() != 1 {
                return Err(Error::parse(line, "outer line must be `outer: f`"));
            }
            outer = Some(parse_num(rest[0], line)?);
        } else if toks[0] == "r" {
            let head = toks
                .get(1)
                .ok_or_else(|| Error::parse(line, "rotation line must be `r v: w1 ... wk`"))?;
            let (vtok, mut rest) = match head.strip_suffix(':') {
                Some(v) => (v, toks[2..].to_vec()),
                None => {
                    if toks.get(2) != Some(&":") {
                        return Err(Error::parse(line, "missing `:` after the vertex"));
                    }
                    (*head, toks[3..].to_vec())
                }
            };
            let v = parse_vertex(vtok, line, n)?;
            if rotation[v].is_some() {
                return Err(Error::parse(line, format!("second rotation for vertex {}", v + 1)));
            }
            let ws = rest
                .drain(..)
                .map(|t| parse_vertex(t, line, n))
                .collect::<Result<Vec<_>>>()?;
            rotation[v] = Some(ws);
        } else {
            return Err(Error::parse(line, format!("unknown line type {:?}", toks[0])));
        }
    }
    let rotation = rotation
        .into_iter()
        .enumerate()
        .map(|(v, r)| match r {
            Some(r) => Ok(r),
            None if g.degree(v) == 0 => Ok(Vec::new()),
            None => Err(Error::InvalidEmbedding(format!("no rotation for vertex {}", v + 1))),
        })
        .collect::<Result<Vec<_>>>()?;
    let outer = outer.ok_or_else(|| Error::parse(0, "missing `outer: f` line"))?;
    PlaneGraph::new(g, rotation, outer)
}

pub fn write_embedding(pg: &PlaneGraph) -> String {
    let mut s = String::new();
    for (v, rot) in pg.rotations().iter().enumerate() {
        let _ = write!(s, "r {}:", v + 1);
        for &w in rot {
            let _ = write!(s, " {}", w + 1);
        }
        s.push('\n');
    }
    let _ = writeln!(s, "outer: {}", pg.outer_face());
    s
}

pub fn parse_pace_td(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (line, toks) in content_lines(text) {
        match toks[0] {
            "s" => {
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(Error::parse(line, "header must be `s td nbags maxbag nverts`"));
                }
                let nb = parse_num(toks[2], line)?;
                let nv = parse_num(toks[4], line)?;
                header = Some((nb, nv));
                bags = vec![None; nb];
            }
            "b" => {
                let (nb, nv) = header.ok_or_else(|| Error::parse(line, "bag before header"))?;
                let id = parse_vertex(toks.get(1).copied().unwrap_or(""), line, nb)?;
                if bags[id].is_some() {
                    return Err(Error::parse(line, format!("bag {} defined twice", id + 1)));
                }
                bags[id] = Some(
                    toks[2..]
                        .iter()
                        .map(|t| parse_vertex(t, line, nv))
                        .collect::<Result<_>>()?,
                );
            }
            _ => {
                let (nb, _) = header.ok_or_else(|| Error::parse(line, "tree edge before header"))?;
                if toks.len() != 2 {
                    return Err(Error::parse(line, "tree edge line must be `i j`"));
                }
                edges.push((parse_vertex(toks[0], line, nb)?, parse_vertex(toks[1], line, nb)?));
            }
        }
    }
    let (_, nv) = header.ok_or_else(|| Error::parse(0, "missing `s td` header"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(0, format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    if bags.is_empty() {
        return Err(Error::parse(0, "decomposition has no bags"));
    }
    Ok((TreeDecomposition::from_tree_edges(bags, &edges, 0)?, nv))
}

/// PACE output; the root is written as bag 1.
pub fn write_pace_td(td: &TreeDecomposition, n_vertices: usize) -> String {
    // Relabel so the root comes first.
    let order = td.preorder();
    let mut id = vec![0; td.num_nodes()];
    for (i, &x) in order.iter().enumerate() {
        id[x] = i + 1;
    }
    let maxbag = td.bags().iter().map(Vec::len).max().unwrap_or(0);
    let mut s = format!("s td {} {} {}\n", td.num_nodes(), maxbag, n_vertices);
    for &x in &order {
        let _ = write!(s, "b {}", id[x]);
        for &v in td.bag(x) {
            let _ = write!(s, " {}", v + 1);
        }
        s.push('\n');
    }
    for (x, p) in td.tree_edges() {
        let _ = writeln!(s, "{} {}", id[p], id[x]);
    }
    s
}

pub fn parse_targets(text: &str, n: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for (line, toks) in content_lines(text) {
        for t in toks {
            out.push(parse_vertex(t, line, n)?);
        }
    }
    Ok(out)
}

pub fn write_targets(targets: &[usize]) -> String {
    let mut s = String::new();
    for &a in targets {
        let _ = writeln!(s, "{}", a + 1);
    }
    s
}
