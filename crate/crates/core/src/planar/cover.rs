//! `(r, d, k)`-sparse covers: vertex sets containing every closed `r`-ball,
//! each inducing a subgraph of radius at most `d`, with every vertex in at
//! most `k` sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph, INF};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseCover {
    /// Sorted vertex sets.
    pub sets: Vec<Vec<usize>>,
    pub r: u32,
    pub d: u32,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoverViolation {
    /// No set contains the closed `r`-ball around this vertex.
    BallNotContained { vertex: usize },
    /// The induced subgraph on this set has radius above `d` (`INF` when
    /// disconnected). With sampling, `radius` is the best sampled centre.
    RadiusTooLarge { set: usize, radius: u32 },
    /// The vertex lies in more than `k` sets.
    MultiplicityTooLarge { vertex: usize, count: usize },
    /// A set mentions a vertex outside the graph.
    VertexOutOfRange { set: usize, vertex: usize },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverReport {
    pub violations: Vec<CoverViolation>,
    /// Largest radius found over all sets (upper bound when sampled).
    pub measured_d: u32,
    pub measured_k: usize,
    /// Radii were computed from a sample of centres rather than all of them.
    pub sampled: bool,
}

impl CoverReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Radius of `g[set]` using the given candidate centres.
fn induced_radius(g: &Graph, set: &[usize], centres: &[usize]) -> u32 {
    let mut blocked = vec![true; g.n()];
    for &v in set {
        blocked[v] = false;
    }
    let mut bfs = Bfs::new(g.n());
    centres
        .iter()
        .map(|&c| {
            let reached = bfs.run(g, &[c], None, Some(&blocked)).to_vec();
            if reached.len() < set.len() {
                INF
            } else {
                reached.iter().map(|&v| bfs.dist[v]).max().unwrap_or(0)
            }
        })
        .min()
        .unwrap_or(0)
}

/// Checks all three cover properties. Radii are exact unless `sample` is
/// given, in which case at most that many evenly spaced centres are tried
/// per set and the report is flagged as sampled.
pub fn check_sparse_cover(g: &Graph, cover: &SparseCover, sample: Option<usize>) -> CoverReport {
    let n = g.n();
    let mut violations = Vec::new();
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(cover.sets.len());
    for (i, s) in cover.sets.iter().enumerate() {
        let mut s = s.clone();
        s.sort_unstable();
        s.dedup();
        if let Some(&v) = s.iter().find(|&&v| v >= n) {
            violations.push(CoverViolation::VertexOutOfRange { set: i, vertex: v });
            s.retain(|&v| v < n);
        }
        for &v in &s {
            member_of[v].push(i);
        }
        sets.push(s);
    }

    let ball_failures: Vec<usize> = (0..n)
        .into_par_iter()
        .map_init(
            || Bfs::new(n),
            |bfs, v| {
                let ball = bfs.run(g, &[v], Some(cover.r), None);
                let ok = member_of[v]
                    .iter()
                    .any(|&i| ball.iter().all(|u| sets[i].binary_search(u).is_ok()));
                (!ok).then_some(v)
            },
        )
        .flatten()
        .collect();
    violations.extend(ball_failures.into_iter().map(|vertex| CoverViolation::BallNotContained { vertex }));

    let sampled = sample.is_some_and(|s| sets.iter().any(|x| x.len() > s));
    let radii: Vec<u32> = sets
        .par_iter()
        .map(|s| match sample {
            Some(cap) if s.len() > cap && cap > 0 => {
                let step = s.len().div_ceil(cap);
                let centres: Vec<usize> = s.iter().copied().step_by(step).collect();
                induced_radius(g, s, &centres)
            }
            _ => induced_radius(g, s, s),
        })
        .collect();
    for (i, &rad) in radii.iter().enumerate() {
        if rad > cover.d {
            violations.push(CoverViolation::RadiusTooLarge { set: i, radius: rad });
        }
    }
    for (v, m) in member_of.iter().enumerate() {
        if m.len() > cover.k {
            violations.push(CoverViolation::MultiplicityTooLarge { vertex: v, count: m.len() });
        }
    }
    CoverReport {
        violations,
        measured_d: radii.iter().copied().max().unwrap_or(0),
        measured_k: member_of.iter().map(Vec::len).max().unwrap_or(0),
        sampled,
    }
}

/// Balls of radius `3r` around a maximal set of points pairwise more than
/// `2r` apart, chosen greedily by id. `d` is the largest eccentricity of a
/// centre inside its ball and `k` the measured multiplicity; neither is
/// tuned to any external constant.
pub fn sparse_cover_greedy(g: &Graph, r: u32) -> Result<SparseCover> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.n();
    let mut covered = vec![false; n];
    let mut net = Vec::new();
    let mut bfs = Bfs::new(n);
    for v in 0..n {
        if covered[v] {
            continue;
        }
        net.push(v);
        for &u in bfs.run(g, &[v], Some(2 * r), None) {
            covered[u] = true;
        }
    }
    let mut sets = Vec::with_capacity(net.len());
    let mut d = 0;
    let mut mult = vec![0usize; n];
    for &c in &net {
        let ball = bfs.run(g, &[c], Some(3 * r), None);
        let mut s = ball.to_vec();
        d = d.max(s.iter().map(|&v| bfs.dist[v]).max().unwrap_or(0));
        s.sort_unstable();
        for &v in &s {
            mult[v] += 1;
        }
        sets.push(s);
    }
    Ok(SparseCover {
        sets,
        r,
        d,
        k: mult.into_iter().max().unwrap_or(0),
    })
}
