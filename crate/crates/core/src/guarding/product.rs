use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

use super::td::{order_from_td, validate_tree_decomposition, TreeDecomposition};
use super::wreach::wreach;
use super::GuardingFamily;

/// A graph `G` given as a subgraph of `H ⊠ P ⊠ K_c`: each vertex carries a
/// host vertex `h(v)`, a path position `p(v)` and a clique index `k(v)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductCoordinates {
    pub graph: Graph,
    pub host: Graph,
    pub host_td: TreeDecomposition,
    pub h_vertex: Vec<usize>,
    pub path_index: Vec<usize>,
    pub clique_index: Vec<usize>,
    pub c: usize,
}

impl ProductCoordinates {
    /// Checks lengths and ranges, injectivity of `(h, p, k)`, the host
    /// decomposition, and strong-product adjacency of every edge of `G`.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.graph.n();
        if self.h_vertex.len() != n || self.path_index.len() != n || self.clique_index.len() != n {
            return Err(Error::InvalidArgument("one coordinate triple per vertex required".into()));
        }
        if self.c == 0 {
            return Err(Error::InvalidArgument("clique size must be positive".into()));
        }
        validate_tree_decomposition(&self.host, &self.host_td).map_err(Error::InvalidTreeDecomposition)?;
        let mut seen = HashSet::new();
        for v in 0..n {
            if self.h_vertex[v] >= self.host.n() {
                return Err(Error::InvalidArgument(format!("vertex {v}: host vertex out of range")));
            }
            if self.clique_index[v] >= self.c {
                return Err(Error::InvalidArgument(format!("vertex {v}: clique index out of range")));
            }
            if !seen.insert((self.h_vertex[v], self.path_index[v], self.clique_index[v])) {
                return Err(Error::InvalidArgument(format!("vertex {v}: repeated coordinates")));
            }
        }
        for (u, v) in self.graph.edges() {
            let (hu, hv) = (self.h_vertex[u], self.h_vertex[v]);
            if self.path_index[u].abs_diff(self.path_index[v]) > 1
                || (hu != hv && !self.host.has_edge(hu, hv))
            {
                return Err(Error::InvalidArgument(format!(
                    "edge {{{u},{v}}} is not an edge of the strong product"
                )));
            }
        }
        Ok(())
    }

    /// Width of the host decomposition.
    pub fn t(&self) -> usize {
        self.host_td.width()
    }

    /// Vertices of interval `j`: path positions `2rj ..= 2rj + 4r - 1`.
    pub fn intervals(&self, r: u32) -> Vec<Vec<usize>> {
        let r = r as usize;
        let p_max = self.path_index.iter().copied().max().unwrap_or(0);
        let count = p_max / (2 * r) + 1;
        let mut out = vec![Vec::new(); count];
        for v in 0..self.graph.n() {
            let p = self.path_index[v];
            // j with 2rj <= p <= 2rj + 4r - 1, i.e. j in {p/2r - 1, p/2r}.
            let hi = p / (2 * r);
            out[hi].push(v);
            if hi >= 1 {
                out[hi - 1].push(v);
            }
        }
        out
    }
}

struct ProductSet {
    interval: usize,
    members: Vec<usize>,
}

fn product_sets(pc: &ProductCoordinates, targets: &[usize], r: u32) -> Result<(Vec<Vec<usize>>, Vec<ProductSet>)> {
    if r == 0 {
        return Err(Error::InvalidArgument("product guarding needs r >= 1".into()));
    }
    pc.check_invariants()?;
    pc.graph.check_vertices(targets)?;
    let host_ord = order_from_td(&pc.host, &pc.host_td)?;
    let top = pc.host_td.top_nodes(pc.host.n());
    let intervals = pc.intervals(r);
    let mut is_target = vec![false; pc.graph.n()];
    for &a in targets {
        is_target[a] = true;
    }
    let mut sets = Vec::new();
    for (j, interval) in intervals.iter().enumerate() {
        let mut host_reach = BTreeSet::new();
        for &a in interval.iter().filter(|&&v| is_target[v]) {
            host_reach.extend(wreach(&pc.host, &host_ord, r, pc.h_vertex[a]));
        }
        let nodes: BTreeSet<usize> = host_reach.iter().map(|&x| top[x].expect("validated")).collect();
        for z in nodes {
            let bag = pc.host_td.bag(z);
            let members = interval
                .iter()
                .copied()
                .filter(|&v| bag.binary_search(&pc.h_vertex[v]).is_ok())
                .collect();
            sets.push(ProductSet { interval: j, members });
        }
    }
    Ok((intervals, sets))
}

/// Guarding family for a product-structured graph. For each interval `I_j`
/// of `4r` consecutive layers, the host vertices weakly `r`-reachable from
/// the targets in `I_j` select decomposition nodes `z`, and each node
/// contributes the vertices of `I_j` whose host vertex lies in bag `X_z`.
pub fn guarding_product(pc: &ProductCoordinates, targets: &[usize], r: u32) -> Result<GuardingFamily> {
    let (_, sets) = product_sets(pc, targets, r)?;
    let p = 4 * pc.c * (pc.t() + 1) * r as usize;
    Ok(GuardingFamily::new(sets.into_iter().map(|s| s.members).collect(), r, p))
}

/// Pieces `(I_j, S)` for every member `S` built in interval `j`, plus
/// `(I_j, ∅)` for every interval, suitable for the covers-and-cuts check.
pub fn guarding_product_pieces(
    pc: &ProductCoordinates,
    targets: &[usize],
    r: u32,
) -> Result<Vec<(Vec<usize>, Vec<usize>)>> {
    let (intervals, sets) = product_sets(pc, targets, r)?;
    let mut pieces: Vec<(Vec<usize>, Vec<usize>)> = sets
        .into_iter()
        .map(|s| (intervals[s.interval].clone(), s.members))
        .collect();
    pieces.extend(intervals.into_iter().filter(|i| !i.is_empty()).map(|i| (i, Vec::new())));
    Ok(pieces)
}
