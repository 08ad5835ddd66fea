//! Capped distance profiles, profile sets and neighbourhood traces.

use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph, GraphBuilder, INF};

/// `x` if `x <= r`, otherwise infinity.
pub fn cap(r: u32, x: u32) -> u32 {
    if x <= r {
        x
    } else {
        INF
    }
}

/// Capped distances from one vertex to each element of an ordered target
/// list. `INF` stands for "farther than r".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Profile(pub Vec<u32>);

impl Profile {
    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn is_all_infinite(&self) -> bool {
        self.0.iter().all(|&x| x == INF)
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for &x in &self.0 {
            if x == INF {
                seq.serialize_element("inf")?;
            } else {
                seq.serialize_element(&x)?;
            }
        }
        seq.end()
    }
}

/// Deduplicated set of profiles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProfileSet {
    profiles: HashSet<Profile>,
    includes_all_infinity: bool,
}

impl ProfileSet {
    pub fn len(&self) -> usize {
        self.profiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.profiles.is_empty()
    }

    pub fn contains(&self, p: &Profile) -> bool {
        self.profiles.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Profile> {
        self.profiles.iter()
    }

    /// Whether the all-infinity profile was allowed in this set.
    pub fn includes_all_infinity(&self) -> bool {
        self.includes_all_infinity
    }

    pub fn sorted(&self) -> Vec<Profile> {
        let mut v: Vec<Profile> = self.profiles.iter().cloned().collect();
        v.sort();
        v
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ProfileOptions {
    /// Keep the all-infinity profile when some vertex of `U` realizes it.
    pub include_all_infinity: bool,
}

pub fn profile_of(g: &Graph, u: usize, targets: &[usize], r: u32) -> Result<Profile> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertex(u)?;
    g.check_vertices(targets)?;
    let mut bfs = Bfs::new(g.n());
    bfs.run(g, &[u], Some(r), None);
    Ok(Profile(targets.iter().map(|&a| bfs.dist[a]).collect()))
}

/// Row `i` holds the distances (truncated at `r`) from `targets[i]`.
fn target_distances(g: &Graph, targets: &[usize], r: u32) -> Vec<Vec<u32>> {
    targets
        .par_iter()
        .map_init(
            || Bfs::new(g.n()),
            |bfs, &a| {
                bfs.run(g, &[a], Some(r), None);
                bfs.dist.clone()
            },
        )
        .collect()
}

pub fn profile_set(g: &Graph, sources: &[usize], targets: &[usize], r: u32) -> Result<ProfileSet> {
    profile_set_with(g, sources, targets, r, ProfileOptions::default())
}

/// All profiles of vertices in `sources` on `targets`, computed with one
/// truncated BFS per target.
pub fn profile_set_with(
    g: &Graph,
    sources: &[usize],
    targets: &[usize],
    r: u32,
    opts: ProfileOptions,
) -> Result<ProfileSet> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(sources)?;
    g.check_vertices(targets)?;
    let rows = target_distances(g, targets, r);
    let profiles: HashSet<Profile> = sources
        .par_iter()
        .map(|&u| Profile(rows.iter().map(|row| row[u]).collect()))
        .filter(|p| opts.include_all_infinity || !p.is_all_infinite())
        .collect();
    Ok(ProfileSet {
        profiles,
        includes_all_infinity: opts.include_all_infinity,
    })
}

/// All distinct traces `N^r[v] ∩ A` over `v ∈ V(g)`, each as a sorted list.
/// The empty trace is included when some vertex sees no target.
pub fn neighborhood_traces(g: &Graph, targets: &[usize], r: u32) -> Result<BTreeSet<Vec<usize>>> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(targets)?;
    let mut a: Vec<usize> = targets.to_vec();
    a.sort_unstable();
    a.dedup();
    let rows = target_distances(g, &a, r);
    let words = a.len().div_ceil(64);
    let masks: HashSet<Vec<u64>> = (0..g.n())
        .into_par_iter()
        .map(|v| {
            let mut m = vec![0u64; words];
            for (i, row) in rows.iter().enumerate() {
                if row[v] <= r {
                    m[i / 64] |= 1 << (i % 64);
                }
            }
            m
        })
        .collect();
    Ok(masks
        .into_iter()
        .map(|m| {
            (0..a.len())
                .filter(|&i| m[i / 64] >> (i % 64) & 1 == 1)
                .map(|i| a[i])
                .collect()
        })
        .collect())
}

/// Attaches to each target `a` a path `a_0 a_1 ... a_r` with `a_r = a`.
/// Returns the new graph and `A'`, listed target by target as
/// `a_0, ..., a_r`, so `|A'| = (r+1)|A|`.
pub fn glue_paths(g: &Graph, targets: &[usize], r: u32) -> Result<(Graph, Vec<usize>)> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(targets)?;
    let mut b = GraphBuilder::from(g);
    let mut out = Vec::with_capacity(targets.len() * (r as usize + 1));
    for &a in targets {
        let path: Vec<usize> = (0..r).map(|_| b.add_vertex()).collect();
        for w in path.windows(2) {
            b.add_edge(w[0], w[1])?;
        }
        if let Some(&last) = path.last() {
            b.add_edge(last, a)?;
        }
        out.extend(path);
        out.push(a);
    }
    Ok((b.build(), out))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    fn naive(g: &Graph, targets: &[usize], r: u32) -> HashSet<Profile> {
        let all = g.distance_matrix();
        (0..g.n())
            .map(|u| Profile(targets.iter().map(|&a| cap(r, all[u][a])).collect()))
            .filter(|p| !p.is_all_infinite())
            .collect()
    }

    #[test]
    fn cap_examples() {
        assert_eq!(cap(3, 2), 2);
        assert_eq!(cap(3, 3), 3);
        assert_eq!(cap(3, 4), INF);
        assert_eq!(cap(3, INF), INF);
    }

    #[test]
    fn profile_of_examples() {
        let p3 = path(3);
        assert_eq!(profile_of(&p3, 0, &[0, 2], 1).unwrap().0, vec![0, INF]);
        assert_eq!(profile_of(&p3, 1, &[0, 2], 2).unwrap().0, vec![1, 1]);
        let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(profile_of(&c4, 0, &[1, 2, 3], 2).unwrap().0, vec![1, 2, 1]);
        assert!(matches!(profile_of(&p3, 0, &[], 1), Err(Error::EmptyTargets)));
    }

    #[test]
    fn profile_set_examples() {
        let k5 = complete(5);
        let all: Vec<usize> = (0..5).collect();
        let s = profile_set(&k5, &all, &[0], 1).unwrap();
        assert_eq!(s.sorted(), vec![Profile(vec![0]), Profile(vec![1])]);
        let p5 = path(5);
        assert_eq!(profile_set(&p5, &all, &[0], 4).unwrap().len(), 5);
        assert_eq!(profile_set(&p5, &all, &[0], 2).unwrap().len(), 3);
        let with = profile_set_with(
            &p5,
            &all,
            &[0],
            2,
            ProfileOptions { include_all_infinity: true },
        )
        .unwrap();
        assert_eq!(with.len(), 4);
    }

    #[test]
    fn profile_set_matches_all_pairs_oracle() {
        let g = Graph::from_edges(
            8,
            [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (6, 7)],
        )
        .unwrap();
        let all: Vec<usize> = (0..8).collect();
        for r in 0..5 {
            for targets in [vec![0], vec![2, 5], vec![6, 1, 4]] {
                let fast: HashSet<Profile> =
                    profile_set(&g, &all, &targets, r).unwrap().iter().cloned().collect();
                assert_eq!(fast, naive(&g, &targets, r));
            }
        }
    }

    #[test]
    fn traces_examples() {
        let k4 = complete(4);
        let t = neighborhood_traces(&k4, &[0], 1).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![vec![0]]);
        let p3 = path(3);
        let t = neighborhood_traces(&p3, &[0, 2], 1).unwrap();
        let expect: BTreeSet<Vec<usize>> = [vec![0], vec![2], vec![0, 2]].into_iter().collect();
        assert_eq!(t, expect);
        let p5 = path(5);
        let t = neighborhood_traces(&p5, &[0], 1).unwrap();
        assert!(t.contains(&vec![]));
    }

    #[test]
    fn glue_examples() {
        let p3 = path(3);
        let (g0, a0) = glue_paths(&p3, &[0, 2], 0).unwrap();
        assert_eq!(g0, p3);
        assert_eq!(a0, vec![0, 2]);
        let k1 = Graph::empty(1);
        let (g, a) = glue_paths(&k1, &[0], 2).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.m(), 2);
        assert_eq!(a.len(), 3);
        assert_eq!(g.diameter(), Some(2));
    }

    #[test]
    fn profile_serializes_infinity_as_string() {
        let p = Profile(vec![0, INF, 2]);
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"[0,"inf",2]"#);
    }
}
