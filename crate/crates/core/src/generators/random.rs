//! Seeded generators for bound-verification instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};
use crate::guarding::{ProductCoordinates, TreeDecomposition};
use crate::plane::PlaneGraph;

/// Random `t`-tree on `n` vertices with each edge then kept with
/// probability `keep`. The decomposition has one bag per `(t+1)`-clique
/// created while growing the `t`-tree, so it stays valid after deletions.
pub fn gen_ktree_subgraph(t: usize, n: usize, keep: f64, seed: u64) -> Result<(Graph, TreeDecomposition)> {
    if t == 0 {
        return Err(Error::InvalidArgument("t must be positive".into()));
    }
    if n < t + 1 {
        return Err(Error::InvalidArgument(format!("a {t}-tree needs at least {} vertices", t + 1)));
    }
    if !(0.0..=1.0).contains(&keep) {
        return Err(Error::InvalidArgument("keep probability must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..=t {
        for v in u + 1..=t {
            edges.push((u, v));
        }
    }
    let mut bags: Vec<Vec<usize>> = vec![(0..=t).collect()];
    let mut parent = vec![None];
    for v in t + 1..n {
        let host = rng.gen_range(0..bags.len());
        let drop = rng.gen_range(0..=t);
        let mut bag = bags[host].clone();
        bag.remove(drop);
        edges.extend(bag.iter().map(|&u| (u, v)));
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        parent.push(Some(host));
    }
    let kept: Vec<(usize, usize)> = edges.into_iter().filter(|_| rng.gen_bool(keep)).collect();
    let g = Graph::from_edges(n, kept)?;
    Ok((g, TreeDecomposition::new(parent, bags)?))
}

fn grid_coords(w: usize, h: usize) -> Vec<(f64, f64)> {
    (0..w * h).map(|id| ((id % w) as f64, (id / w) as f64)).collect()
}

fn grid_edges(w: usize, h: usize) -> Vec<(usize, usize)> {
    let mut e = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let id = y * w + x;
            if x + 1 < w {
                e.push((id, id + 1));
            }
            if y + 1 < h {
                e.push((id, id + w));
            }
        }
    }
    e
}

/// The `w × h` grid drawn with vertex `y·w + x` at `(x, y)`.
pub fn gen_grid_disk(w: usize, h: usize) -> Result<PlaneGraph> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument("grid sides must be positive".into()));
    }
    let g = Graph::from_edges(w * h, grid_edges(w, h))?;
    PlaneGraph::from_coordinates(g, &grid_coords(w, h))
}

/// Path decomposition of the `w × h` grid with bags `{i, …, i+w}` in
/// row-major order; its width is `w` (or `n - 1` for a single row).
pub fn grid_td(w: usize, h: usize) -> Result<TreeDecomposition> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument("grid sides must be positive".into()));
    }
    let n = w * h;
    if h == 1 {
        return Ok(TreeDecomposition::trivial((0..n).collect()));
    }
    let bags: Vec<Vec<usize>> = (0..n - w).map(|i| (i..=i + w).collect()).collect();
    let parent = (0..bags.len()).map(|i| i.checked_sub(1)).collect();
    TreeDecomposition::new(parent, bags)
}

/// Connected plane graph drawn on a `w × h` grid: each unit square gets a
/// diagonal (random direction) with probability `diagonal`, a random
/// spanning tree is kept, and every other edge survives with probability
/// `keep`.
pub fn gen_random_plane(w: usize, h: usize, diagonal: f64, keep: f64, seed: u64) -> Result<PlaneGraph> {
    if w == 0 || h == 0 {
        return Err(Error::InvalidArgument("grid sides must be positive".into()));
    }
    if !(0.0..=1.0).contains(&diagonal) || !(0.0..=1.0).contains(&keep) {
        return Err(Error::InvalidArgument("probabilities must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = grid_edges(w, h);
    for y in 0..h.saturating_sub(1) {
        for x in 0..w.saturating_sub(1) {
            if rng.gen_bool(diagonal) {
                let id = y * w + x;
                edges.push(if rng.gen_bool(0.5) { (id, id + w + 1) } else { (id + 1, id + w) });
            }
        }
    }
    edges.shuffle(&mut rng);
    let mut root: Vec<usize> = (0..w * h).collect();
    fn find(root: &mut [usize], mut v: usize) -> usize {
        while root[v] != v {
            root[v] = root[root[v]];
            v = root[v];
        }
        v
    }
    let mut b = GraphBuilder::new(w * h);
    for (u, v) in edges {
        let (ru, rv) = (find(&mut root, u), find(&mut root, v));
        if ru != rv {
            root[ru] = rv;
            b.add_edge(u, v)?;
        } else if rng.gen_bool(keep) {
            b.add_edge(u, v)?;
        }
    }
    PlaneGraph::from_coordinates(b.build(), &grid_coords(w, h))
}

/// Random subgraph of `H ⊠ P_p ⊠ K_c` keeping each product edge with
/// probability `density`. Vertex `(h, i, k)` gets id `(i·|H| + h)·c + k`.
pub fn gen_product(
    host: &Graph,
    td: &TreeDecomposition,
    p: usize,
    c: usize,
    density: f64,
    seed: u64,
) -> Result<ProductCoordinates> {
    if p == 0 || c == 0 {
        return Err(Error::InvalidArgument("path length and clique size must be positive".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument("density must lie in [0, 1]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nh = host.n();
    let id = |h: usize, i: usize, k: usize| (i * nh + h) * c + k;
    let n = nh * p * c;
    let mut b = GraphBuilder::new(n);
    for i in 0..p {
        for h in 0..nh {
            // Host neighbours (and h itself) at path offsets 0 and +1.
            let mut hs: Vec<usize> = host.neighbors(h).to_vec();
            hs.push(h);
            for k in 0..c {
                let u = id(h, i, k);
                for &h2 in &hs {
                    for i2 in [i, i + 1] {
                        if i2 >= p {
                            continue;
                        }
                        for k2 in 0..c {
                            let v = id(h2, i2, k2);
                            // Each unordered pair once: same layer pairs only with u < v.
                            if (i2 == i && v <= u) || b.has_edge(u, v) {
                                continue;
                            }
                            if rng.gen_bool(density) {
                                b.add_edge(u, v)?;
                            }
                        }
                    }
                }
            }
        }
    }
    let mut h_vertex = vec![0; n];
    let mut path_index = vec![0; n];
    let mut clique_index = vec![0; n];
    for i in 0..p {
        for h in 0..nh {
            for k in 0..c {
                let v = id(h, i, k);
                h_vertex[v] = h;
                path_index[v] = i;
                clique_index[v] = k;
            }
        }
    }
    let pc = ProductCoordinates {
        graph: b.build(),
        host: host.clone(),
        host_td: td.clone(),
        h_vertex,
        path_index,
        clique_index,
        c,
    };
    pc.check_invariants()?;
    Ok(pc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guarding::validate_tree_decomposition;

    #[test]
    fn ktrees() {
        let (g, td) = gen_ktree_subgraph(1, 20, 1.0, 3).unwrap();
        assert_eq!(g.m(), 19);
        assert!(g.is_connected());
        validate_tree_decomposition(&g, &td).unwrap();
        for t in 1..5 {
            let (g, td) = gen_ktree_subgraph(t, 30, 1.0, t as u64).unwrap();
            assert_eq!(g.m(), t * (t + 1) / 2 + (30 - t - 1) * t);
            assert_eq!(td.width(), t);
            validate_tree_decomposition(&g, &td).unwrap();
            let (g, td) = gen_ktree_subgraph(t, 30, 0.0, t as u64).unwrap();
            assert_eq!(g.m(), 0);
            validate_tree_decomposition(&g, &td).unwrap();
        }
        assert!(gen_ktree_subgraph(3, 3, 1.0, 0).is_err());
        let a = gen_ktree_subgraph(2, 25, 0.5, 9).unwrap();
        let b = gen_ktree_subgraph(2, 25, 0.5, 9).unwrap();
        assert_eq!(a.0, b.0);
    }

    #[test]
    fn grid_disk_2x2_is_a_square() {
        let pg = gen_grid_disk(2, 2).unwrap();
        assert_eq!(pg.graph().m(), 4);
        assert_eq!(pg.faces().len(), 2);
        assert_eq!(pg.outer_cycle().unwrap().len(), 4);
    }

    #[test]
    fn grid_decompositions_are_valid() {
        for (w, h) in [(1, 1), (3, 1), (1, 4), (3, 3), (5, 2), (2, 6)] {
            let g = gen_grid_disk(w, h).unwrap();
            let td = grid_td(w, h).unwrap();
            validate_tree_decomposition(g.graph(), &td).unwrap();
            assert!(td.width() <= w.max(1) || h == 1);
        }
    }

    #[test]
    fn random_plane_is_connected() {
        for seed in 0..10 {
            let pg = gen_random_plane(6, 5, 0.5, 0.5, seed).unwrap();
            assert!(pg.graph().is_connected());
        }
    }

    #[test]
    fn product_examples() {
        let pc = gen_product(&Graph::empty(1), &TreeDecomposition::trivial(vec![0]), 5, 1, 1.0, 0).unwrap();
        assert_eq!(pc.graph, Graph::from_edges(5, (1..5).map(|i| (i - 1, i))).unwrap());
        let host = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let td = TreeDecomposition::new(vec![None, Some(0)], vec![vec![0, 1], vec![1, 2]]).unwrap();
        for seed in 0..5 {
            let pc = gen_product(&host, &td, 4, 2, 0.6, seed).unwrap();
            pc.check_invariants().unwrap();
        }
        let full = gen_product(&host, &td, 2, 1, 1.0, 0).unwrap();
        // P3 ⊠ P2 has 2·2 + 3 + 2·2 edges.
        assert_eq!(full.graph.m(), 11);
    }
}
