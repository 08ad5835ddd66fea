//! Cutting a plane graph open along a tree, and the greedy Steiner tree
//! that feeds it.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Graph, GraphBuilder, INF};
use crate::plane::PlaneGraph;

/// A tree inside some graph: its vertex set and edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tree {
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
}

impl Tree {
    /// Checks that the edges form a tree on exactly `vertices` and lie in
    /// `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        g.check_vertices(&self.vertices)?;
        let vs: BTreeSet<usize> = self.vertices.iter().copied().collect();
        if vs.len() != self.vertices.len() || vs.is_empty() {
            return Err(Error::InvalidArgument("tree vertex list is empty or repeats a vertex".into()));
        }
        if self.edges.len() + 1 != vs.len() {
            return Err(Error::InvalidArgument("tree must have exactly |V| - 1 edges".into()));
        }
        let mut b = GraphBuilder::new(g.n());
        for &(u, v) in &self.edges {
            if !vs.contains(&u) || !vs.contains(&v) || !g.has_edge(u, v) {
                return Err(Error::InvalidArgument(format!("tree edge {{{u},{v}}} is not usable")));
            }
            if !b.add_edge(u, v)? {
                return Err(Error::InvalidArgument(format!("tree edge {{{u},{v}}} repeated")));
            }
        }
        let t = b.build();
        let dist = bfs_distances(&t, &self.vertices[..1])?;
        if self.vertices.iter().any(|&v| dist[v] == INF) {
            return Err(Error::InvalidArgument("tree is disconnected".into()));
        }
        Ok(())
    }
}

/// Grows a tree from the first target, repeatedly attaching the closest
/// unconnected target (smallest id on ties) by a shortest path. When every
/// vertex is within `r` of `A`, each step adds at most `2r + 1` edges; the
/// resulting bound `(2r+1)(|A|-1)` is checked.
pub fn steiner_tree_greedy(g: &Graph, targets: &[usize], r: u32) -> Result<Tree> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(targets)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut vertices = vec![targets[0]];
    in_tree[targets[0]] = true;
    let mut edges = Vec::new();
    let mut wanted: BTreeSet<usize> = targets.iter().copied().filter(|&a| a != targets[0]).collect();
    let mut dist = vec![INF; n];
    let mut parent = vec![usize::MAX; n];
    while !wanted.is_empty() {
        dist.iter_mut().for_each(|d| *d = INF);
        let mut queue: VecDeque<usize> = vertices.iter().copied().collect();
        for &v in &vertices {
            dist[v] = 0;
        }
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x) {
                if dist[y] == INF {
                    dist[y] = dist[x] + 1;
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let &a = wanted
            .iter()
            .min_by_key(|&&a| (dist[a], a))
            .expect("nonempty");
        if dist[a] > 2 * r + 1 {
            return Err(Error::Precondition(format!(
                "target {a} is {} steps from the tree; some vertex is farther than r = {r} from the targets",
                dist[a]
            )));
        }
        let mut x = a;
        while !in_tree[x] {
            in_tree[x] = true;
            vertices.push(x);
            edges.push((parent[x], x));
            wanted.remove(&x);
            x = parent[x];
        }
    }
    let bound = (2 * r as usize + 1) * (targets.len() - 1);
    if edges.len() > bound {
        return Err(Error::InvariantBroken(format!(
            "greedy tree has {} edges, more than (2r+1)(|A|-1) = {bound}",
            edges.len()
        )));
    }
    Ok(Tree { vertices, edges })
}

/// Result of cutting along a tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CutOpen {
    pub plane: PlaneGraph,
    /// Corner vertices in boundary (Euler tour) order; `|A'| = 2|E(T)|`.
    pub targets: Vec<usize>,
    /// Original vertex of each new vertex; `None` for a subdivision vertex.
    pub origin: Vec<Option<usize>>,
    /// The tree actually cut along (a single-vertex tree is first extended
    /// by one edge).
    pub tree: Tree,
    /// Whether `|A'| <= 2(2r+1)|A|`.
    pub within_bound: bool,
}

/// Cuts `pg` open along the tree `tree`, which must contain every target.
///
/// Every tree vertex `u` is replaced by one copy per corner, i.e. per wedge
/// between consecutive tree neighbours in the rotation at `u`. Non-tree
/// edges attach to the copy whose wedge contains them, every tree edge is
/// doubled, and the tree becomes a new face, chosen as the outer face, whose
/// boundary walks the corners in Euler-tour order. When the tree has a
/// single edge the two copies of that edge would be parallel; one of them is
/// subdivided to keep the graph simple.
pub fn cut_along_tree(pg: &PlaneGraph, targets: &[usize], tree: &Tree, r: u32) -> Result<CutOpen> {
    let g = pg.graph();
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(targets)?;
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    tree.validate(g)?;
    let tree_set: BTreeSet<usize> = tree.vertices.iter().copied().collect();
    if let Some(&a) = targets.iter().find(|a| !tree_set.contains(a)) {
        return Err(Error::InvalidArgument(format!("target {a} is not in the tree")));
    }
    let mut tree = tree.clone();
    if tree.edges.is_empty() {
        let u = tree.vertices[0];
        let &w = g
            .neighbors(u)
            .first()
            .ok_or_else(|| Error::Precondition("graph has no edges to cut along".into()))?;
        tree.vertices.push(w);
        tree.edges.push((u, w));
    }

    let n = g.n();
    let mut in_tree = vec![false; n];
    let mut tadj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
    for &(u, v) in &tree.edges {
        tadj[u].insert(v);
        tadj[v].insert(u);
        in_tree[u] = true;
        in_tree[v] = true;
    }
    // tn[u]: tree neighbours in clockwise order; wedge[u][i]: corner index of
    // rotation position i; corner[u][j]: id of the j-th corner.
    let mut tn: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut wedge: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut corner: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut origin: Vec<Option<usize>> = (0..n).map(Some).collect();
    for u in 0..n {
        if !in_tree[u] {
            continue;
        }
        let rot = pg.rotation(u);
        tn[u] = rot.iter().copied().filter(|w| tadj[u].contains(w)).collect();
        let first = rot.iter().position(|w| tadj[u].contains(w)).expect("tree vertex has a tree edge");
        let mut wi = vec![0; rot.len()];
        let mut cur = 0;
        for s in 0..rot.len() {
            let p = (first + s) % rot.len();
            if s > 0 && tadj[u].contains(&rot[p]) {
                cur += 1;
            }
            wi[p] = cur;
        }
        wedge[u] = wi;
        corner[u] = (0..tn[u].len())
            .map(|j| {
                if j == 0 {
                    u
                } else {
                    origin.push(Some(u));
                    origin.len() - 1
                }
            })
            .collect();
    }
    let index_in = |list: &[usize], x: usize| list.iter().position(|&y| y == x).expect("present");
    // Copy of `x` that sees neighbour `u`.
    let map = |x: usize, u: usize| -> usize {
        if in_tree[x] {
            corner[x][wedge[x][index_in(pg.rotation(x), u)]]
        } else {
            x
        }
    };

    let total = origin.len();
    let mut rot_new: Vec<Vec<usize>> = vec![Vec::new(); total];
    for x in 0..n {
        if in_tree[x] {
            let d = tn[x].len();
            let rot = pg.rotation(x);
            for j in 0..d {
                let w = tn[x][j];
                let w2 = tn[x][(j + 1) % d];
                let c = corner[x][j];
                let dw = tn[w].len();
                let back = corner[w][(index_in(&tn[w], x) + dw - 1) % dw];
                let fwd = corner[w2][index_in(&tn[w2], x)];
                let mut list = vec![back];
                let start = index_in(rot, w);
                for s in 1..rot.len() {
                    let y = rot[(start + s) % rot.len()];
                    if tadj[x].contains(&y) {
                        break;
                    }
                    list.push(map(y, x));
                }
                list.push(fwd);
                rot_new[c] = list;
            }
        } else {
            rot_new[x] = pg.rotation(x).iter().map(|&y| map(y, x)).collect();
        }
    }

    let single_edge = tree.edges.len() == 1;
    if single_edge {
        let (a, b) = tree.edges[0];
        let s = rot_new.len();
        origin.push(None);
        let last = rot_new[a].len() - 1;
        rot_new[a][last] = s;
        rot_new[b][0] = s;
        rot_new.push(vec![a, b]);
    }

    let mut builder = GraphBuilder::new(rot_new.len());
    for (x, rot) in rot_new.iter().enumerate() {
        for &y in rot {
            if x < y && !builder.add_edge(x, y)? {
                return Err(Error::InvariantBroken(format!("parallel edges between copies {x} and {y}")));
            }
        }
    }
    let new_graph = builder.build();
    let start = corner[tree.vertices[0]][0];
    let first = rot_new[start][0];
    let mut plane = PlaneGraph::assemble(new_graph, rot_new, BTreeSet::new())?;
    plane.set_outer_dart(start, first)?;

    let boundary: Vec<usize> = plane.faces()[plane.outer_face()]
        .vertices()
        .into_iter()
        .filter(|&v| origin[v].is_some())
        .collect();
    let expected = 2 * tree.edges.len();
    if boundary.len() != expected || boundary.iter().any(|&v| !in_tree[origin[v].expect("not subdivision")]) {
        return Err(Error::InvariantBroken(format!(
            "cut face has {} corners, expected {expected}",
            boundary.len()
        )));
    }
    let within_bound = boundary.len() <= 2 * (2 * r as usize + 1) * targets.len();
    Ok(CutOpen {
        plane,
        targets: boundary,
        origin,
        tree,
        within_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(w: usize, h: usize) -> PlaneGraph {
        let mut b = GraphBuilder::new(w * h);
        let mut coords = Vec::new();
        for y in 0..h {
            for x in 0..w {
                coords.push((x as f64, y as f64));
                if x + 1 < w {
                    b.add_edge(y * w + x, y * w + x + 1).unwrap();
                }
                if y + 1 < h {
                    b.add_edge(y * w + x, (y + 1) * w + x).unwrap();
                }
            }
        }
        PlaneGraph::from_coordinates(b.build(), &coords).unwrap()
    }

    #[test]
    fn steiner_examples() {
        let p5 = Graph::from_edges(5, (1..5).map(|i| (i - 1, i))).unwrap();
        let t = steiner_tree_greedy(&p5, &[2], 2).unwrap();
        assert!(t.edges.is_empty());
        let t = steiner_tree_greedy(&p5, &[0, 4], 4).unwrap();
        assert_eq!(t.edges.len(), 4);
        t.validate(&p5).unwrap();
        let two = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert!(matches!(steiner_tree_greedy(&two, &[0], 1), Err(Error::Disconnected)));
    }

    #[test]
    fn single_edge_tree_on_k2() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let pg = PlaneGraph::new(g, vec![vec![1], vec![0]], 0).unwrap();
        let tree = Tree { vertices: vec![0, 1], edges: vec![(0, 1)] };
        let cut = cut_along_tree(&pg, &[0, 1], &tree, 1).unwrap();
        assert_eq!(cut.targets.len(), 2);
        assert_eq!(cut.plane.graph().n(), 3);
        assert_eq!(cut.plane.outer_cycle().unwrap().len(), 3);
    }

    #[test]
    fn grid_corners_along_shortest_path() {
        let pg = grid(3, 3);
        let tree = Tree {
            vertices: vec![0, 1, 2, 5, 8],
            edges: vec![(0, 1), (1, 2), (2, 5), (5, 8)],
        };
        let cut = cut_along_tree(&pg, &[0, 8], &tree, 4).unwrap();
        assert_eq!(cut.targets.len(), 8);
        assert_eq!(cut.plane.graph().n(), 9 + 3);
        assert_eq!(cut.plane.graph().m(), 12 + 4);
        let outer = cut.plane.outer_cycle().unwrap();
        assert_eq!(outer.len(), 8);
        let origins: Vec<usize> = cut.targets.iter().map(|&v| cut.origin[v].unwrap()).collect();
        // Euler tour of a path visits interior vertices twice.
        for v in [1, 2, 5] {
            assert_eq!(origins.iter().filter(|&&o| o == v).count(), 2);
        }
    }

    #[test]
    fn single_vertex_tree_is_extended() {
        let pg = grid(3, 3);
        let tree = Tree { vertices: vec![4], edges: vec![] };
        let cut = cut_along_tree(&pg, &[4], &tree, 1).unwrap();
        assert_eq!(cut.tree.edges, vec![(4, 1)]);
        assert_eq!(cut.targets.len(), 2);
    }

    #[test]
    fn rejects_bad_trees() {
        let pg = grid(3, 3);
        let not_tree = Tree { vertices: vec![0, 1, 3, 4], edges: vec![(0, 1), (1, 4), (4, 3), (3, 0)] };
        assert!(cut_along_tree(&pg, &[0], &not_tree, 1).is_err());
        let t = Tree { vertices: vec![0, 1], edges: vec![(0, 1)] };
        assert!(cut_along_tree(&pg, &[8], &t, 1).is_err());
    }
}
