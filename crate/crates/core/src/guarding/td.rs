//! Rooted tree decompositions and the vertex orders they induce.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Rooted tree of bags. Bags are kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    parent: Vec<Option<usize>>,
    root: usize,
    bags: Vec<Vec<usize>>,
    children: Vec<Vec<usize>>,
}

/// First problem found by [`validate_tree_decomposition`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TdViolation {
    BagVertexOutOfRange { node: usize, vertex: usize },
    VertexNotCovered { vertex: usize },
    VertexSubtreeDisconnected { vertex: usize, nodes: Vec<usize> },
    EdgeNotCovered { u: usize, v: usize },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::BagVertexOutOfRange { node, vertex } => {
                write!(f, "bag {node} contains vertex {vertex}, which is not in the graph")
            }
            TdViolation::VertexNotCovered { vertex } => {
                write!(f, "vertex {vertex} lies in no bag")
            }
            TdViolation::VertexSubtreeDisconnected { vertex, nodes } => {
                write!(f, "bags containing vertex {vertex} are not connected in the tree (nodes {nodes:?})")
            }
            TdViolation::EdgeNotCovered { u, v } => {
                write!(f, "edge {{{u},{v}}} is contained in no bag")
            }
        }
    }
}

impl TreeDecomposition {
    /// Builds a decomposition from parent pointers; exactly one node must be
    /// parentless and the pointers must be acyclic.
    pub fn new(parent: Vec<Option<usize>>, bags: Vec<Vec<usize>>) -> Result<Self> {
        let k = parent.len();
        if k == 0 || bags.len() != k {
            return Err(Error::InvalidArgument(
                "a tree decomposition needs at least one node and one bag per node".into(),
            ));
        }
        let roots: Vec<usize> = (0..k).filter(|&i| parent[i].is_none()).collect();
        if roots.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "decomposition tree must have exactly one root, found {}",
                roots.len()
            )));
        }
        let mut children = vec![Vec::new(); k];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = *p {
                if p >= k {
                    return Err(Error::InvalidArgument(format!("node {i} has unknown parent {p}")));
                }
                children[p].push(i);
            }
        }
        let td = TreeDecomposition {
            parent,
            root: roots[0],
            bags: bags
                .into_iter()
                .map(|mut b| {
                    b.sort_unstable();
                    b.dedup();
                    b
                })
                .collect(),
            children,
        };
        if td.preorder().len() != k {
            return Err(Error::InvalidArgument("decomposition tree contains a cycle".into()));
        }
        Ok(td)
    }

    /// Builds a decomposition from an undirected tree on the bags, rooted at
    /// `root`.
    pub fn from_tree_edges(bags: Vec<Vec<usize>>, edges: &[(usize, usize)], root: usize) -> Result<Self> {
        let k = bags.len();
        if root >= k {
            return Err(Error::InvalidArgument(format!("root node {root} out of range")));
        }
        if edges.len() + 1 != k {
            return Err(Error::InvalidArgument(format!(
                "a tree on {k} nodes needs {} edges, got {}",
                k.saturating_sub(1),
                edges.len()
            )));
        }
        let mut adj = vec![Vec::new(); k];
        for &(x, y) in edges {
            if x >= k || y >= k || x == y {
                return Err(Error::InvalidArgument(format!("bad tree edge ({x},{y})")));
            }
            adj[x].push(y);
            adj[y].push(x);
        }
        let mut parent = vec![None; k];
        let mut seen = vec![false; k];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    stack.push(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::InvalidArgument("decomposition tree is disconnected".into()));
        }
        Self::new(parent, bags)
    }

    /// Single-bag decomposition.
    pub fn trivial(vertices: Vec<usize>) -> Self {
        Self::new(vec![None], vec![vertices]).expect("one node is a tree")
    }

    pub fn num_nodes(&self) -> usize {
        self.bags.len()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, node: usize) -> Option<usize> {
        self.parent[node]
    }

    pub fn parents(&self) -> &[Option<usize>] {
        &self.parent
    }

    pub fn children(&self, node: usize) -> &[usize] {
        &self.children[node]
    }

    pub fn bag(&self, node: usize) -> &[usize] {
        &self.bags[node]
    }

    pub fn bags(&self) -> &[Vec<usize>] {
        &self.bags
    }

    /// Maximum bag size minus one (`0` for all-empty bags).
    pub fn width(&self) -> usize {
        self.bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1)
    }

    /// Undirected tree edges `(child, parent)`.
    pub fn tree_edges(&self) -> Vec<(usize, usize)> {
        (0..self.num_nodes())
            .filter_map(|i| self.parent[i].map(|p| (i, p)))
            .collect()
    }

    /// Nodes in DFS preorder from the root, children in increasing id order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_nodes());
        let mut seen = vec![false; self.num_nodes()];
        let mut stack = vec![self.root];
        while let Some(x) = stack.pop() {
            if std::mem::replace(&mut seen[x], true) {
                continue;
            }
            out.push(x);
            let mut ch = self.children[x].clone();
            ch.sort_unstable();
            stack.extend(ch.into_iter().rev());
        }
        out
    }

    /// Depth of every node (root at 0).
    pub fn depths(&self) -> Vec<usize> {
        let mut depth = vec![0; self.num_nodes()];
        for x in self.preorder() {
            if let Some(p) = self.parent[x] {
                depth[x] = depth[p] + 1;
            }
        }
        depth
    }

    /// For each graph vertex `v < n`, the shallowest node whose bag contains
    /// `v` (`None` when `v` is in no bag).
    pub fn top_nodes(&self, n: usize) -> Vec<Option<usize>> {
        let mut top = vec![None; n];
        for x in self.preorder() {
            for &v in &self.bags[x] {
                if v < n && top[v].is_none() {
                    top[v] = Some(x);
                }
            }
        }
        top
    }

    /// Contracts every tree edge whose two bags are equal. Node ids are
    /// renumbered keeping the relative order of surviving nodes.
    pub fn normalized(&self) -> TreeDecomposition {
        let k = self.num_nodes();
        // rep[x]: surviving node that x is merged into.
        let mut rep: Vec<usize> = (0..k).collect();
        for x in self.preorder() {
            if let Some(p) = self.parent[x] {
                if self.bags[x] == self.bags[p] {
                    rep[x] = rep[p];
                }
            }
        }
        let survivors: Vec<usize> = (0..k).filter(|&x| rep[x] == x).collect();
        let mut new_id = vec![usize::MAX; k];
        for (i, &x) in survivors.iter().enumerate() {
            new_id[x] = i;
        }
        let parent = survivors
            .iter()
            .map(|&x| self.parent[x].map(|p| new_id[rep[p]]))
            .collect();
        let bags = survivors.iter().map(|&x| self.bags[x].clone()).collect();
        TreeDecomposition::new(parent, bags).expect("contraction keeps a rooted tree")
    }

    /// True when no tree edge joins two equal bags.
    pub fn is_normalized(&self) -> bool {
        (0..self.num_nodes()).all(|x| self.parent[x].is_none_or(|p| self.bags[p] != self.bags[x]))
    }
}

/// Checks that every vertex lies in a nonempty connected set of bags and
/// that every edge lies in some bag. Reports the first violation found.
pub fn validate_tree_decomposition(g: &Graph, td: &TreeDecomposition) -> std::result::Result<(), TdViolation> {
    let n = g.n();
    for (node, bag) in td.bags().iter().enumerate() {
        if let Some(&vertex) = bag.iter().find(|&&v| v >= n) {
            return Err(TdViolation::BagVertexOutOfRange { node, vertex });
        }
    }
    // A vertex's bags are connected iff exactly one of them has a parent
    // not containing the vertex (or no parent at all).
    let mut heads = vec![0usize; n];
    for x in 0..td.num_nodes() {
        for &v in td.bag(x) {
            let parent_has = td.parent(x).is_some_and(|p| td.bag(p).binary_search(&v).is_ok());
            if !parent_has {
                heads[v] += 1;
            }
        }
    }
    for (v, &h) in heads.iter().enumerate() {
        if h == 0 {
            return Err(TdViolation::VertexNotCovered { vertex: v });
        }
        if h > 1 {
            let nodes = (0..td.num_nodes())
                .filter(|&x| td.bag(x).binary_search(&v).is_ok())
                .collect();
            return Err(TdViolation::VertexSubtreeDisconnected { vertex: v, nodes });
        }
    }
    let top = td.top_nodes(n);
    let depth = td.depths();
    for (u, v) in g.edges() {
        // The deeper of the two top nodes must contain both endpoints.
        let (tu, tv) = (top[u].expect("covered"), top[v].expect("covered"));
        let x = if depth[tu] >= depth[tv] { tu } else { tv };
        let bag = td.bag(x);
        if bag.binary_search(&u).is_err() || bag.binary_search(&v).is_err() {
            return Err(TdViolation::EdgeNotCovered { u, v });
        }
    }
    Ok(())
}

/// Bijection between vertices and ranks `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearOrder {
    order: Vec<usize>,
    position: Vec<usize>,
}

impl LinearOrder {
    /// `order[i]` is the vertex of rank `i`; must be a permutation.
    pub fn from_sequence(order: Vec<usize>) -> Result<Self> {
        let n = order.len();
        let mut position = vec![usize::MAX; n];
        for (i, &v) in order.iter().enumerate() {
            if v >= n || position[v] != usize::MAX {
                return Err(Error::InvalidArgument("order is not a permutation".into()));
            }
            position[v] = i;
        }
        Ok(LinearOrder { order, position })
    }

    pub fn identity(n: usize) -> Self {
        Self::from_sequence((0..n).collect()).expect("identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn position(&self, v: usize) -> usize {
        self.position[v]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    pub fn sequence(&self) -> &[usize] {
        &self.order
    }

    pub fn less(&self, u: usize, v: usize) -> bool {
        self.position[u] < self.position[v]
    }
}

/// Orders vertices by the preorder index of their top node, then by id, so
/// that `t_v` strictly above `t_w` forces `v` before `w`.
pub fn order_from_td(g: &Graph, td: &TreeDecomposition) -> Result<LinearOrder> {
    validate_tree_decomposition(g, td).map_err(Error::InvalidTreeDecomposition)?;
    let mut pre_index = vec![0; td.num_nodes()];
    for (i, x) in td.preorder().into_iter().enumerate() {
        pre_index[x] = i;
    }
    let top = td.top_nodes(g.n());
    let mut seq: Vec<usize> = (0..g.n()).collect();
    seq.sort_by_key(|&v| (pre_index[top[v].expect("validated")], v));
    LinearOrder::from_sequence(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[test]
    fn validation_examples() {
        let p3 = path(3);
        let td = TreeDecomposition::new(vec![None, Some(0)], vec![vec![0, 1], vec![1, 2]]).unwrap();
        assert_eq!(validate_tree_decomposition(&p3, &td), Ok(()));
        assert_eq!(td.width(), 1);

        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(
            validate_tree_decomposition(&tri, &td),
            Err(TdViolation::EdgeNotCovered { u: 0, v: 2 })
        );

        let two = Graph::empty(2);
        let bad = TreeDecomposition::new(
            vec![None, Some(0), Some(1)],
            vec![vec![0], vec![1], vec![0]],
        )
        .unwrap();
        assert!(matches!(
            validate_tree_decomposition(&two, &bad),
            Err(TdViolation::VertexSubtreeDisconnected { vertex: 0, .. })
        ));
        let missing = TreeDecomposition::trivial(vec![0]);
        assert_eq!(
            validate_tree_decomposition(&two, &missing),
            Err(TdViolation::VertexNotCovered { vertex: 1 })
        );
    }

    #[test]
    fn rejects_malformed_trees() {
        assert!(TreeDecomposition::new(vec![Some(1), Some(0)], vec![vec![], vec![]]).is_err());
        assert!(TreeDecomposition::new(vec![None, None], vec![vec![], vec![]]).is_err());
        assert!(TreeDecomposition::from_tree_edges(vec![vec![0], vec![0], vec![0]], &[(0, 1)], 0).is_err());
    }

    #[test]
    fn normalization_contracts_equal_bags() {
        let td = TreeDecomposition::new(
            vec![None, Some(0), Some(1), Some(1)],
            vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![0, 3]],
        )
        .unwrap();
        assert!(!td.is_normalized());
        let n = td.normalized();
        assert!(n.is_normalized());
        assert_eq!(n.num_nodes(), 3);
        assert_eq!(n.parent(1), Some(0));
        assert_eq!(n.parent(2), Some(0));
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (0, 3)]).unwrap();
        assert_eq!(validate_tree_decomposition(&g, &n), Ok(()));
    }

    #[test]
    fn order_examples() {
        let k3 = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let ord = order_from_td(&k3, &TreeDecomposition::trivial(vec![0, 1, 2])).unwrap();
        assert_eq!(ord.sequence(), &[0, 1, 2]);

        let k2 = path(2);
        let td = TreeDecomposition::new(vec![None, Some(0)], vec![vec![1], vec![0, 1]]).unwrap();
        let ord = order_from_td(&k2, &td).unwrap();
        assert_eq!(ord.sequence(), &[1, 0]);
    }

    #[test]
    fn order_respects_ancestry() {
        // Path decomposition of P6 rooted in the middle.
        let g = path(6);
        let bags: Vec<Vec<usize>> = (0..5).map(|i| vec![i, i + 1]).collect();
        let edges: Vec<(usize, usize)> = (0..4).map(|i| (i, i + 1)).collect();
        let td = TreeDecomposition::from_tree_edges(bags, &edges, 2).unwrap();
        let ord = order_from_td(&g, &td).unwrap();
        let top = td.top_nodes(6);
        let depth = td.depths();
        for v in 0..6 {
            for w in 0..6 {
                let (tv, tw) = (top[v].unwrap(), top[w].unwrap());
                // tv a proper ancestor of tw
                let mut x = tw;
                let mut above = false;
                while let Some(p) = td.parent(x) {
                    if p == tv {
                        above = true;
                    }
                    x = p;
                }
                if above {
                    assert!(depth[tv] < depth[tw]);
                    assert!(ord.less(v, w));
                }
            }
        }
    }
}
