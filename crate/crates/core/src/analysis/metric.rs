//! Resolving sets and exact metric dimension by exhaustive search.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// True when the distance vectors to `s` are pairwise distinct. In a
/// connected graph these vectors are the profiles on `s` at distance equal
/// to the diameter.
pub fn is_resolving(g: &Graph, s: &[usize]) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    g.check_vertices(s)?;
    let dist: Vec<Vec<u32>> = s
        .iter()
        .map(|&x| crate::graph::bfs_distances(g, &[x]))
        .collect::<Result<_>>()?;
    Ok(resolves(&dist, g.n()))
}

fn resolves<R: AsRef<[u32]>>(rows: &[R], n: usize) -> bool {
    let mut seen = HashSet::with_capacity(n);
    (0..n).all(|v| seen.insert(rows.iter().map(|row| row.as_ref()[v]).collect::<Vec<u32>>()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MetricDimension {
    Exact { k: usize, set: Vec<usize> },
    /// No resolving set of size below the cap exists.
    AtLeast(usize),
}

/// Advances `comb` to the next `k`-combination of `0..n` in lexicographic
/// order; false when exhausted.
fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    let Some(i) = (0..k).rev().find(|&i| comb[i] < n - k + i) else {
        return false;
    };
    comb[i] += 1;
    for j in i + 1..k {
        comb[j] = comb[j - 1] + 1;
    }
    true
}

/// Smallest resolving set, trying sizes `0, 1, …` below `cap_k`; the
/// lexicographically first set of the minimum size is returned.
pub fn metric_dimension_exact(g: &Graph, cap_k: usize) -> Result<MetricDimension> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let dist = g.distance_matrix();
    for k in 0..cap_k.min(n + 1) {
        let found = if k == 0 {
            (n <= 1).then(Vec::new)
        } else {
            // Split the search by the first element so it parallelises.
            (0..=n - k).into_par_iter().find_map_first(|first| {
                let mut comb: Vec<usize> = (first..first + k).collect();
                loop {
                    if comb[0] != first {
                        return None;
                    }
                    let rows: Vec<&[u32]> = comb.iter().map(|&x| dist[x].as_slice()).collect();
                    if resolves(&rows, n) {
                        return Some(comb);
                    }
                    if !next_combination(&mut comb, n) {
                        return None;
                    }
                }
            })
        };
        if let Some(set) = found {
            return Ok(MetricDimension::Exact { k, set });
        }
    }
    Ok(MetricDimension::AtLeast(cap_k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn k(g: &Graph) -> usize {
        match metric_dimension_exact(g, 12).unwrap() {
            MetricDimension::Exact { k, set } => {
                assert!(is_resolving(g, &set).unwrap());
                k
            }
            MetricDimension::AtLeast(_) => panic!("cap reached"),
        }
    }

    #[test]
    fn classic_values() {
        assert_eq!(k(&path(1)), 0);
        assert_eq!(k(&path(6)), 1);
        assert_eq!(k(&cycle(4)), 2);
        assert_eq!(k(&cycle(7)), 2);
        assert_eq!(k(&complete(3)), 2);
        assert_eq!(k(&complete(5)), 4);
    }

    #[test]
    fn minimality_against_subsets() {
        // Two triangles joined by an edge: no smaller set resolves.
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let kk = k(&g);
        for mask in 0u32..1 << 6 {
            if (mask.count_ones() as usize) < kk {
                let s: Vec<usize> = (0..6).filter(|&i| mask >> i & 1 == 1).collect();
                assert!(!is_resolving(&g, &s).unwrap());
            }
        }
    }

    #[test]
    fn cap_and_errors() {
        assert_eq!(metric_dimension_exact(&complete(5), 3).unwrap(), MetricDimension::AtLeast(3));
        assert!(metric_dimension_exact(&Graph::empty(2), 3).is_err());
        assert!(is_resolving(&Graph::empty(2), &[0]).is_err());
    }
}
