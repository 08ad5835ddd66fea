//! Weak reachability: `v ∈ WReach_r[u]` when some path of length at most
//! `r` from `u` to `v` has `v` as its minimum in the order. Equivalently,
//! `dist(u, v) <= r` inside the subgraph induced by vertices not below `v`.

use std::collections::VecDeque;

use rayon::prelude::*;

use crate::graph::{Bfs, Graph, INF};

use super::td::LinearOrder;

/// Scratch BFS confined to vertices at or above a threshold rank.
struct AboveBfs {
    dist: Vec<u32>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl AboveBfs {
    fn new(n: usize) -> Self {
        AboveBfs {
            dist: vec![INF; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Vertices reachable from `src` within `r` steps through vertices whose
    /// rank is at least `rank(src)`.
    fn run(&mut self, g: &Graph, pos: &[usize], src: usize, r: u32, stop_at: Option<usize>) -> &[usize] {
        for &v in &self.touched {
            self.dist[v] = INF;
        }
        self.touched.clear();
        self.queue.clear();
        let floor = pos[src];
        self.dist[src] = 0;
        self.touched.push(src);
        self.queue.push_back(src);
        while let Some(x) = self.queue.pop_front() {
            if Some(x) == stop_at {
                break;
            }
            let d = self.dist[x];
            if d >= r {
                continue;
            }
            for &y in g.neighbors(x) {
                if self.dist[y] == INF && pos[y] >= floor {
                    self.dist[y] = d + 1;
                    self.touched.push(y);
                    self.queue.push_back(y);
                }
            }
        }
        &self.touched
    }
}

/// `WReach_r[u]`, sorted by vertex id. Always contains `u`.
pub fn wreach(g: &Graph, ord: &LinearOrder, r: u32, u: usize) -> Vec<usize> {
    let pos = ord.positions();
    let mut ball = Bfs::new(g.n());
    let candidates: Vec<usize> = ball
        .run(g, &[u], Some(r), None)
        .iter()
        .copied()
        .filter(|&v| pos[v] <= pos[u])
        .collect();
    let mut scratch = AboveBfs::new(g.n());
    let mut out: Vec<usize> = candidates
        .into_iter()
        .filter(|&v| {
            scratch.run(g, pos, v, r, Some(u));
            scratch.dist[u] <= r
        })
        .collect();
    out.sort_unstable();
    out
}

/// `WReach_r[u]` for every vertex, each sorted by id. Runs one confined BFS
/// per vertex `v`, crediting `v` to every vertex it reaches.
pub fn wreach_all(g: &Graph, ord: &LinearOrder, r: u32) -> Vec<Vec<usize>> {
    let pos = ord.positions();
    let reached: Vec<Vec<usize>> = (0..g.n())
        .into_par_iter()
        .map_init(
            || AboveBfs::new(g.n()),
            |bfs, v| bfs.run(g, pos, v, r, None).to_vec(),
        )
        .collect();
    let mut out = vec![Vec::new(); g.n()];
    for (v, us) in reached.into_iter().enumerate() {
        for u in us {
            out[u].push(v);
        }
    }
    out
}

/// Size of the largest weakly reachable set: the weak `r`-colouring number
/// of the order.
pub fn wcol(g: &Graph, ord: &LinearOrder, r: u32) -> usize {
    wreach_all(g, ord, r).iter().map(Vec::len).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::GraphBuilder;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Enumerates all simple paths of length at most `r` from `u`.
    fn oracle(g: &Graph, ord: &LinearOrder, r: u32, u: usize) -> Vec<usize> {
        fn go(g: &Graph, ord: &LinearOrder, r: u32, path: &mut Vec<usize>, out: &mut Vec<bool>) {
            let last = *path.last().unwrap();
            let min = *path.iter().min_by_key(|&&x| ord.position(x)).unwrap();
            if min == last {
                out[last] = true;
            }
            if path.len() as u32 > r {
                return;
            }
            for &y in g.neighbors(last) {
                if !path.contains(&y) {
                    path.push(y);
                    go(g, ord, r, path, out);
                    path.pop();
                }
            }
        }
        let mut out = vec![false; g.n()];
        go(g, ord, r, &mut vec![u], &mut out);
        (0..g.n()).filter(|&v| out[v]).collect()
    }

    fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Graph {
        let mut b = GraphBuilder::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    b.add_edge(u, v).unwrap();
                }
            }
        }
        b.build()
    }

    #[test]
    fn path_example() {
        let g = Graph::from_edges(6, (1..6).map(|i| (i - 1, i))).unwrap();
        let ord = LinearOrder::identity(6);
        assert_eq!(wreach(&g, &ord, 2, 4), vec![2, 3, 4]);
        assert_eq!(wreach(&g, &ord, 0, 4), vec![4]);
    }

    #[test]
    fn matches_path_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let n = rng.gen_range(2..=12);
            let g = random_graph(n, 0.3, &mut rng);
            let mut seq: Vec<usize> = (0..n).collect();
            for i in (1..n).rev() {
                seq.swap(i, rng.gen_range(0..=i));
            }
            let ord = LinearOrder::from_sequence(seq).unwrap();
            for r in 0..=4 {
                let all = wreach_all(&g, &ord, r);
                for u in 0..n {
                    let expect = oracle(&g, &ord, r, u);
                    assert_eq!(wreach(&g, &ord, r, u), expect);
                    assert_eq!(all[u], expect);
                }
            }
        }
    }
}
