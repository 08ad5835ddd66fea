//! Set systems, ball systems, VC dimension and the Sauer–Shelah trace bound.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph, INF};

/// A family of subsets of an ordered universe. Members are sorted and
/// deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetSystem {
    pub universe: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl SetSystem {
    pub fn new(universe: Vec<usize>, members: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        let mut uni = universe.clone();
        uni.sort_unstable();
        uni.dedup();
        if uni.len() != universe.len() {
            return Err(Error::InvalidArgument("universe has repeated elements".into()));
        }
        let mut set = BTreeSet::new();
        for mut m in members {
            m.sort_unstable();
            m.dedup();
            if let Some(&x) = m.iter().find(|x| uni.binary_search(x).is_err()) {
                return Err(Error::InvalidArgument(format!("member element {x} outside the universe")));
            }
            set.insert(m);
        }
        Ok(SetSystem {
            universe,
            members: set.into_iter().collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Distinct traces `A ∩ F` over all members `F`.
    pub fn traces(&self, a: &[usize]) -> BTreeSet<Vec<usize>> {
        let mut a = a.to_vec();
        a.sort_unstable();
        a.dedup();
        self.members
            .iter()
            .map(|m| a.iter().copied().filter(|x| m.binary_search(x).is_ok()).collect())
            .collect()
    }
}

/// Which radii contribute balls.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Radii {
    /// Every radius from 0 to the eccentricity of the centre.
    All,
    Only(Vec<u32>),
}

/// Balls `N^ρ[v]` over all vertices and the requested radii, deduplicated,
/// over the universe `V(g)`.
pub fn ball_system(g: &Graph, radii: &Radii) -> SetSystem {
    let n = g.n();
    let balls: BTreeSet<Vec<usize>> = (0..n)
        .into_par_iter()
        .map_init(
            || Bfs::new(n),
            |bfs, v| {
                let order = bfs.run(g, &[v], None, None).to_vec();
                let ecc = order.last().map(|&u| bfs.dist[u]).unwrap_or(0);
                let wanted: Vec<u32> = match radii {
                    Radii::All => (0..=ecc).collect(),
                    Radii::Only(rs) => rs.clone(),
                };
                // BFS order is sorted by distance, so each ball is a prefix.
                wanted
                    .into_iter()
                    .map(|rho| {
                        let mut ball: Vec<usize> = order
                            .iter()
                            .copied()
                            .take_while(|&u| bfs.dist[u] != INF && bfs.dist[u] <= rho)
                            .collect();
                        ball.sort_unstable();
                        ball
                    })
                    .collect::<Vec<_>>()
            },
        )
        .flatten()
        .collect();
    SetSystem {
        universe: (0..n).collect(),
        members: balls.into_iter().collect(),
    }
}

/// The system `{A ∩ F}` over universe `A`.
pub fn trace_system(s: &SetSystem, a: &[usize]) -> Result<SetSystem> {
    SetSystem::new(a.to_vec(), s.traces(a))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VcDimension {
    Exact(usize),
    /// Some set of the cap's size is shattered; the search stopped there.
    AtLeast(usize),
}

impl VcDimension {
    /// Lower bound on the dimension (exact when [`VcDimension::Exact`]).
    pub fn value(self) -> usize {
        match self {
            VcDimension::Exact(d) | VcDimension::AtLeast(d) => d,
        }
    }
}

impl std::fmt::Display for VcDimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VcDimension::Exact(d) => write!(f, "{d}"),
            VcDimension::AtLeast(d) => write!(f, ">={d}"),
        }
    }
}

/// Largest shattered subset, searched by increasing size up to `cap`
/// (between 1 and 8). Shattered sets are closed under taking subsets, so
/// each candidate of size `d` extends a shattered set of size `d - 1` by a
/// larger element.
pub fn vc_dimension(s: &SetSystem, cap: usize) -> Result<VcDimension> {
    if !(1..=8).contains(&cap) {
        return Err(Error::InvalidArgument(format!("VC search cap must lie in 1..=8, got {cap}")));
    }
    let universe = &s.universe;
    let words = universe.len().div_ceil(64).max(1);
    let position: HashMap<usize, usize> = universe.iter().enumerate().map(|(i, &u)| (u, i)).collect();
    let index = |x: usize| position[&x];
    let masks: Vec<Vec<u64>> = s
        .members
        .iter()
        .map(|m| {
            let mut bits = vec![0u64; words];
            for &x in m {
                let i = index(x);
                bits[i / 64] |= 1 << (i % 64);
            }
            bits
        })
        .collect();
    let has = |m: &[u64], i: usize| m[i / 64] >> (i % 64) & 1 == 1;
    let shattered = |x: &[usize]| {
        let need = 1usize << x.len();
        if masks.len() < need {
            return false;
        }
        let mut seen = vec![false; need];
        let mut count = 0;
        for m in &masks {
            let t = x.iter().enumerate().fold(0, |acc, (j, &i)| acc | (usize::from(has(m, i)) << j));
            if !seen[t] {
                seen[t] = true;
                count += 1;
                if count == need {
                    return true;
                }
            }
        }
        false
    };

    // Size 0: the empty set is shattered iff the system is nonempty.
    if masks.is_empty() {
        return Ok(VcDimension::Exact(0));
    }
    let mut level: Vec<Vec<usize>> = vec![Vec::new()];
    for d in 1..=cap {
        let next: Vec<Vec<usize>> = level
            .par_iter()
            .flat_map_iter(|base| {
                let start = base.last().map_or(0, |&l| l + 1);
                (start..universe.len()).map(move |i| {
                    let mut x = base.clone();
                    x.push(i);
                    x
                })
            })
            .filter(|x| shattered(x))
            .collect();
        if next.is_empty() {
            return Ok(VcDimension::Exact(d - 1));
        }
        level = next;
    }
    Ok(VcDimension::AtLeast(cap))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SauerShelahReport {
    pub traces: usize,
    pub bound: u128,
    pub holds: bool,
}

/// Compares the number of traces on `a` with `|a|^d`. The inequality can
/// fail for `|a| = 1`, where both the empty and the full trace may occur
/// while `1^d = 1`; the report states the literal comparison either way.
pub fn sauer_shelah_check(s: &SetSystem, a: &[usize], d: u32) -> Result<SauerShelahReport> {
    if d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    if a.is_empty() {
        return Err(Error::EmptyTargets);
    }
    let traces = s.traces(a).len();
    let mut distinct = a.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let bound = (distinct.len() as u128).saturating_pow(d);
    Ok(SauerShelahReport {
        traces,
        bound,
        holds: traces as u128 <= bound,
    })
}
