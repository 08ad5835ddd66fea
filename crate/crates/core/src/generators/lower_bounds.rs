//! Deterministic families with many distance profiles or traces.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{subdivide_edges, Graph, GraphBuilder};
use crate::guarding::TreeDecomposition;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LowerBoundInstance {
    pub graph: Graph,
    pub targets: Vec<usize>,
    pub r: u32,
    /// Closed-form lower bound on distinct profiles (treewidth families) or
    /// traces (the 1-planar family) at radius `r` on `targets`.
    pub predicted_count: u128,
    /// For the treewidth family: `coords[id]` is the tuple of tree vertex
    /// `id`, for ids below `ℓ^{t+1}`.
    pub coords: Vec<Vec<usize>>,
    /// Width-`t` decomposition witnessing the treewidth bound, if any.
    pub td: Option<TreeDecomposition>,
}

/// Id of `x ∈ [0, ℓ-1]^{t+1}` in lexicographic order.
pub fn coord_id(ell: usize, x: &[usize]) -> usize {
    x.iter().fold(0, |acc, &xi| acc * ell + xi)
}

fn id_coord(ell: usize, t: usize, mut id: usize) -> Vec<usize> {
    let mut x = vec![0; t + 1];
    for xi in x.iter_mut().rev() {
        *xi = id % ell;
        id /= ell;
    }
    x
}

/// Distances `(d_0, …, d_t)` predicted for tree vertex `x`: `d_0` is its
/// depth and `d_i = (ℓ-1-x_{i-1}) + Σ_{j≥i} x_j` its distance to `a_i`
/// minus `r/2`.
pub fn encode(ell: usize, x: &[usize]) -> Vec<usize> {
    let t = x.len() - 1;
    let suffix = |i: usize| x[i..].iter().sum::<usize>();
    let mut d = vec![suffix(0)];
    d.extend((1..=t).map(|i| (ell - 1 - x[i - 1]) + suffix(i)));
    d
}

/// Inverts [`encode`]. With `S_i = Σ_{j≥i} x_j` one has `S_0 = d_0` and
/// `d_i = ℓ - 1 + S_{i-1} - 2x_{i-1}`, so each coordinate follows from the
/// previous suffix sum and the last equals the remaining sum. Returns `None`
/// when the system has no solution in `[0, ℓ-1]^{t+1}`.
pub fn decode_coords(t: usize, ell: usize, d: &[usize]) -> Option<Vec<usize>> {
    if d.len() != t + 1 || ell == 0 {
        return None;
    }
    let mut x = Vec::with_capacity(t + 1);
    let mut suffix = d[0] as i64;
    for &di in &d[1..] {
        let twice = ell as i64 - 1 + suffix - di as i64;
        if twice < 0 || twice % 2 != 0 {
            return None;
        }
        let xi = twice / 2;
        if xi >= ell as i64 {
            return None;
        }
        x.push(xi as usize);
        suffix -= xi;
    }
    if suffix < 0 || suffix >= ell as i64 {
        return None;
    }
    x.push(suffix as usize);
    (encode(ell, &x) == d).then_some(x)
}

/// Decomposition of a graph that becomes a tree once `apices` are removed:
/// one bag `{v, parent(v)} ∪ apices` per remaining vertex.
fn apex_tree_td(g: &Graph, apices: &[usize], root: usize) -> Result<TreeDecomposition> {
    let mut is_apex = vec![false; g.n()];
    for &a in apices {
        is_apex[a] = true;
    }
    let mut node = vec![usize::MAX; g.n()];
    let mut parent = Vec::new();
    let mut bags = Vec::new();
    let mut queue = VecDeque::from([root]);
    node[root] = 0;
    parent.push(None);
    bags.push(vec![root]);
    let mut tree_edges = 0;
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if is_apex[w] {
                continue;
            }
            if node[w] == usize::MAX {
                node[w] = bags.len();
                parent.push(Some(node[u]));
                bags.push(vec![w, u]);
                queue.push_back(w);
            }
            tree_edges += 1;
        }
    }
    let kept = g.n() - apices.len();
    if bags.len() != kept || tree_edges / 2 != kept - 1 {
        return Err(Error::InvariantBroken("graph minus the apices is not a tree".into()));
    }
    for b in &mut bags {
        b.extend_from_slice(apices);
    }
    TreeDecomposition::new(parent, bags)
}

/// Treewidth-`t` graph with at least `ℓ^{t+1}` distinct `r`-profiles on
/// `t + 1` targets, `ℓ = r / (2(t+1))`.
///
/// The tree `T` lives on `[0, ℓ-1]^{t+1}`, rooted at `0 = a_0`, and the
/// parent of a vertex decrements its last nonzero coordinate. Target `a_i`
/// (`i ≥ 1`) is joined by a path of length `r/2` to every vertex of the form
/// `x_0 … x_{i-2} (ℓ-1) 0 … 0`.
pub fn lb_treewidth(t: usize, r: u32) -> Result<LowerBoundInstance> {
    if t == 0 || r == 0 {
        return Err(Error::InvalidArgument("t and r must be positive".into()));
    }
    let modulus = (1u64 << t.min(63)) * (t as u64 + 1);
    if t >= 63 || !(r as u64).is_multiple_of(modulus) {
        return Err(Error::InvalidArgument(format!(
            "2^t(t+1) = {modulus} must divide r = {r}"
        )));
    }
    let ell = r as usize / (2 * (t + 1));
    let half = r as usize / 2;
    let tree_n = ell.pow(t as u32 + 1);
    let mut b = GraphBuilder::new(tree_n + t);
    let coords: Vec<Vec<usize>> = (0..tree_n).map(|id| id_coord(ell, t, id)).collect();
    for (id, x) in coords.iter().enumerate() {
        if let Some(i) = x.iter().rposition(|&xi| xi != 0) {
            let mut p = x.clone();
            p[i] -= 1;
            b.add_edge(id, coord_id(ell, &p))?;
        }
    }
    let a: Vec<usize> = std::iter::once(0).chain(tree_n..tree_n + t).collect();
    for i in 1..=t {
        for prefix in 0..ell.pow(i as u32 - 1) {
            let mut anchor = id_coord(ell, t, 0);
            let head = if i >= 2 { id_coord(ell, i - 2, prefix) } else { Vec::new() };
            anchor[..i - 1].copy_from_slice(&head[..i - 1]);
            anchor[i - 1] = ell - 1;
            let mut prev = a[i];
            for _ in 1..half {
                let w = b.add_vertex();
                b.add_edge(prev, w)?;
                prev = w;
            }
            b.add_edge(prev, coord_id(ell, &anchor))?;
        }
    }
    let graph = b.build();
    let td = apex_tree_td(&graph, &a[2.min(a.len())..], 0)?;
    Ok(LowerBoundInstance {
        graph,
        targets: a,
        r,
        predicted_count: (ell as u128).pow(t as u32 + 1),
        coords,
        td: Some(td),
    })
}

/// Warm-up family: independent targets `a_1 … a_t` and, for every
/// `x ∈ [r/2, r]^t`, a vertex `v_x` joined to each `a_i` by a path of length
/// `x_i`. Each `v_x` has profile `x`, so there are at least `(r/2)^t`.
pub fn lb_treewidth_simple(t: usize, r: u32) -> Result<LowerBoundInstance> {
    if t == 0 || r == 0 || !r.is_multiple_of(2) {
        return Err(Error::InvalidArgument("t positive and r positive and even required".into()));
    }
    let lo = r as usize / 2;
    let side = r as usize - lo + 1;
    let count = side.pow(t as u32);
    let mut b = GraphBuilder::new(t);
    for idx in 0..count {
        let v = b.add_vertex();
        let mut rest = idx;
        for i in 0..t {
            let len = lo + rest % side;
            rest /= side;
            let mut prev = v;
            for _ in 1..len {
                let w = b.add_vertex();
                b.add_edge(prev, w)?;
                prev = w;
            }
            b.add_edge(prev, i)?;
        }
    }
    let graph = b.build();
    let targets: Vec<usize> = (0..t).collect();
    let td = apex_tree_td(&graph, &targets[1..], 0)?;
    Ok(LowerBoundInstance {
        graph,
        targets,
        r,
        predicted_count: (lo as u128).pow(t as u32),
        coords: Vec::new(),
        td: Some(td),
    })
}

/// 1-planar family whose `r`-balls shatter `ℓ = √(r+1)` targets.
///
/// Each target `a_i` roots a complete binary tree of depth `ℓ` whose leaf
/// `a_i^X` is reached by following the membership bits of `X ⊆ [ℓ]`. A
/// vertex `v_X` is adjacent to `a_i^X` for `i ∈ X`. Every edge is then
/// subdivided `ℓ-2` times, so `dist(v_X, a_i) = (ℓ+1)(ℓ-1) = r` exactly
/// when `i ∈ X`.
///
/// Ids: targets `0..ℓ`, then for each tree its internal vertices and leaves
/// in heap order, then `v_X` for `X = 0 .. 2^ℓ` as bitmasks, then the
/// subdivision vertices.
pub fn lb_1planar(r: u32) -> Result<LowerBoundInstance> {
    let ell = (r as f64 + 1.0).sqrt().round() as usize;
    if ell * ell != r as usize + 1 || ell < 2 {
        return Err(Error::InvalidArgument(format!(
            "r + 1 = {} must be a perfect square of at least 4",
            r as u64 + 1
        )));
    }
    if ell > 16 {
        return Err(Error::InvalidArgument("ℓ above 16 gives an impractically large graph".into()));
    }
    let leaves = 1usize << ell;
    let mut b = GraphBuilder::new(ell);
    let mut leaf_of = vec![vec![0usize; leaves]; ell];
    for (i, leaf_row) in leaf_of.iter_mut().enumerate() {
        // Heap layout: node 1 is the root, children of h are 2h and 2h+1.
        let total = 2 * leaves;
        let mut id = vec![0usize; total];
        id[1] = i;
        for h in 2..total {
            id[h] = b.add_vertex();
            b.add_edge(id[h / 2], id[h])?;
        }
        for (x, slot) in leaf_row.iter_mut().enumerate() {
            // Bit j of X picks the child taken at depth j+1.
            let mut h = 1;
            for j in 0..ell {
                h = 2 * h + ((x >> j) & 1);
            }
            *slot = id[h];
        }
    }
    for x in 0..leaves {
        let v = b.add_vertex();
        for (i, row) in leaf_of.iter().enumerate() {
            if x >> i & 1 == 1 {
                b.add_edge(v, row[x])?;
            }
        }
    }
    let graph = subdivide_edges(&b.build(), ell - 2);
    Ok(LowerBoundInstance {
        graph,
        targets: (0..ell).collect(),
        r,
        predicted_count: 1u128 << ell,
        coords: Vec::new(),
        td: None,
    })
}
