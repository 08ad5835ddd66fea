//! Undirected simple graphs and breadth-first distance machinery.
//!
//! Vertex ids are always `0..n`. Adjacency lists are kept sorted so that
//! `has_edge` is a binary search and every traversal is deterministic.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distance value used for unreachable vertices.
///
/// Distances are stored as `u32`; `INF` never equals a real hop count.
pub const INF: u32 = u32::MAX;

/// Immutable undirected simple graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
            labels: None,
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut b = GraphBuilder::new(n);
        for (u, v) in edges {
            if !b.add_edge(u, v)? {
                return Err(Error::InvalidGraph(format!("duplicate edge {{{u},{v}}}")));
            }
        }
        Ok(b.build())
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: v, n: self.n() })
        }
    }

    pub fn check_vertices<'a>(&self, vs: impl IntoIterator<Item = &'a usize>) -> Result<()> {
        vs.into_iter().try_for_each(|&v| self.check_vertex(v))
    }

    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }

    /// Connected component index per vertex and the number of components.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut comp = vec![usize::MAX; self.n()];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                for &w in self.neighbors(u) {
                    if comp[w] == usize::MAX {
                        comp[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        (comp, count)
    }

    pub fn is_connected(&self) -> bool {
        self.n() == 0 || self.components().1 == 1
    }

    /// Subgraph induced by `vertices`; returns the graph and the map from
    /// new ids to old ids (in the order given).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut b = GraphBuilder::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in self.neighbors(v) {
                let j = index[w];
                if j != usize::MAX && i < j {
                    b.add_edge(i, j).expect("ids in range");
                }
            }
        }
        (b.build(), vertices.to_vec())
    }

    /// All-pairs hop distances; `INF` for unreachable pairs.
    pub fn distance_matrix(&self) -> Vec<Vec<u32>> {
        let mut scratch = Bfs::new(self.n());
        (0..self.n())
            .map(|s| {
                scratch.run(self, &[s], None, None);
                scratch.dist.clone()
            })
            .collect()
    }

    /// Diameter of a connected graph; `None` if disconnected or empty.
    pub fn diameter(&self) -> Option<u32> {
        if self.n() == 0 {
            return None;
        }
        let mut scratch = Bfs::new(self.n());
        let mut best = 0;
        for s in 0..self.n() {
            scratch.run(self, &[s], None, None);
            for &d in &scratch.dist {
                if d == INF {
                    return None;
                }
                best = best.max(d);
            }
        }
        Some(best)
    }
}

/// Incremental builder that silently reports duplicate edges.
#[derive(Clone, Debug)]
pub struct GraphBuilder {
    adj: Vec<Vec<usize>>,
}

impl GraphBuilder {
    pub fn new(n: usize) -> Self {
        GraphBuilder { adj: vec![Vec::new(); n] }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Adds `{u,v}`; returns `false` when the edge was already present.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<bool> {
        let n = self.adj.len();
        for x in [u, v] {
            if x >= n {
                return Err(Error::InvalidVertex { vertex: x, n });
            }
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("self-loop at {u}")));
        }
        if self.adj[u].contains(&v) {
            return Ok(false);
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        Ok(true)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn build(mut self) -> Graph {
        let mut m2 = 0;
        for ns in &mut self.adj {
            ns.sort_unstable();
            m2 += ns.len();
        }
        Graph {
            adj: self.adj,
            m: m2 / 2,
            labels: None,
        }
    }
}

impl From<&Graph> for GraphBuilder {
    fn from(g: &Graph) -> Self {
        GraphBuilder { adj: g.adj.clone() }
    }
}

/// Reusable BFS scratch space. Each run resets only what it touched.
#[derive(Clone, Debug)]
pub struct Bfs {
    pub dist: Vec<u32>,
    touched: Vec<usize>,
    queue: VecDeque<usize>,
}

impl Bfs {
    pub fn new(n: usize) -> Self {
        Bfs {
            dist: vec![INF; n],
            touched: Vec::new(),
            queue: VecDeque::new(),
        }
    }

    /// Multi-source BFS truncated at `limit` (inclusive) that never enters
    /// vertices flagged in `blocked`. Returns the vertices reached, in BFS
    /// order.
    pub fn run(
        &mut self,
        g: &Graph,
        sources: &[usize],
        limit: Option<u32>,
        blocked: Option<&[bool]>,
    ) -> &[usize] {
        for &v in &self.touched {
            self.dist[v] = INF;
        }
        self.touched.clear();
        self.queue.clear();
        let limit = limit.unwrap_or(INF - 1);
        let is_blocked = |v: usize| blocked.is_some_and(|b| b[v]);
        for &s in sources {
            if self.dist[s] == INF && !is_blocked(s) {
                self.dist[s] = 0;
                self.touched.push(s);
                self.queue.push_back(s);
            }
        }
        while let Some(u) = self.queue.pop_front() {
            let du = self.dist[u];
            if du >= limit {
                continue;
            }
            for &w in g.neighbors(u) {
                if self.dist[w] == INF && !is_blocked(w) {
                    self.dist[w] = du + 1;
                    self.touched.push(w);
                    self.queue.push_back(w);
                }
            }
        }
        &self.touched
    }
}

/// Exact hop distance from every vertex to the nearest source; `INF` marks
/// unreachable vertices.
pub fn bfs_distances(g: &Graph, sources: &[usize]) -> Result<Vec<u32>> {
    if sources.is_empty() {
        return Err(Error::EmptySourceSet);
    }
    g.check_vertices(sources)?;
    let mut bfs = Bfs::new(g.n());
    bfs.run(g, sources, None, None);
    Ok(bfs.dist)
}

/// Rooted spanning forest given by parent pointers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootedForest {
    parent: Vec<Option<usize>>,
    roots: Vec<usize>,
    depth: Vec<u32>,
    height: u32,
}

impl RootedForest {
    /// Builds a forest from parent pointers, checking acyclicity and that
    /// every tree edge exists in `g`.
    pub fn new(g: &Graph, parent: Vec<Option<usize>>) -> Result<Self> {
        if parent.len() != g.n() {
            return Err(Error::InvalidArgument(format!(
                "parent array has {} entries for {} vertices",
                parent.len(),
                g.n()
            )));
        }
        for (v, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                g.check_vertex(p)?;
                if !g.has_edge(v, p) {
                    return Err(Error::InvalidArgument(format!(
                        "forest edge {{{v},{p}}} is not a graph edge"
                    )));
                }
            }
        }
        let n = g.n();
        let mut depth = vec![INF; n];
        let roots: Vec<usize> = (0..n).filter(|&v| parent[v].is_none()).collect();
        for &r in &roots {
            depth[r] = 0;
        }
        let mut chain = Vec::new();
        for v in 0..n {
            let mut x = v;
            chain.clear();
            while depth[x] == INF {
                chain.push(x);
                if chain.len() > n {
                    return Err(Error::InvalidArgument("parent pointers contain a cycle".into()));
                }
                x = parent[x].expect("non-root has a parent");
            }
            let mut d = depth[x];
            for &y in chain.iter().rev() {
                d += 1;
                depth[y] = d;
            }
        }
        let height = depth.iter().copied().max().unwrap_or(0);
        Ok(RootedForest { parent, roots, depth, height })
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_root(&self, v: usize) -> bool {
        self.parent[v].is_none()
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Vertical path from `v` up to its root, `v` first.
    pub fn path_to_root(&self, v: usize) -> Vec<usize> {
        let mut path = vec![v];
        let mut x = v;
        while let Some(p) = self.parent[x] {
            path.push(p);
            x = p;
        }
        path
    }

    pub fn root_of(&self, v: usize) -> usize {
        *self.path_to_root(v).last().expect("path is nonempty")
    }
}

/// BFS forest rooted at `roots`; each non-root takes as parent its
/// smallest-id neighbour one level closer to the roots.
pub fn bfs_forest_from_set(g: &Graph, roots: &[usize]) -> Result<RootedForest> {
    let dist = bfs_distances(g, roots)?;
    if let Some(v) = dist.iter().position(|&d| d == INF) {
        return Err(Error::Unreachable(v));
    }
    let parent = (0..g.n())
        .map(|v| {
            if dist[v] == 0 {
                None
            } else {
                g.neighbors(v).iter().copied().find(|&w| dist[w] + 1 == dist[v])
            }
        })
        .collect();
    RootedForest::new(g, parent)
}

/// Replaces every edge by a path with `k` new internal vertices.
///
/// Original vertices keep their ids; the internal vertices of edge `(u,v)`
/// (with `u < v`, in edge order) follow, listed from `u` towards `v`.
pub fn subdivide_edges(g: &Graph, k: usize) -> Graph {
    if k == 0 {
        return g.clone();
    }
    let mut b = GraphBuilder::new(g.n() + k * g.m());
    let mut next = g.n();
    for (u, v) in g.edges() {
        let mut prev = u;
        for _ in 0..k {
            b.add_edge(prev, next).expect("fresh ids");
            prev = next;
            next += 1;
        }
        b.add_edge(prev, v).expect("fresh ids");
    }
    let mut out = b.build();
    out.labels = g.labels.clone().map(|mut l| {
        l.extend((g.n()..out.n()).map(|i| format!("s{i}")));
        l
    });
    out
}

/// Attaches a new path with `len` edges at `anchor`; returns the new graph
/// and the far endpoint of the path.
pub fn add_pendant_path(g: &Graph, anchor: usize, len: usize) -> Result<(Graph, usize)> {
    g.check_vertex(anchor)?;
    if len == 0 {
        return Err(Error::InvalidArgument("pendant path length must be positive".into()));
    }
    let mut b = GraphBuilder::from(g);
    let mut prev = anchor;
    for _ in 0..len {
        let w = b.add_vertex();
        b.add_edge(prev, w)?;
        prev = w;
    }
    Ok((b.build(), prev))
}
