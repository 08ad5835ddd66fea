use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Bfs, Graph, INF};
use crate::profiles::profile_set;

use super::GuardingFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GuardVerdict {
    Valid,
    /// Smallest-id vertex within distance `r` of `A` that no member guards.
    Unguarded(usize),
}

impl GuardVerdict {
    pub fn is_valid(&self) -> bool {
        matches!(self, GuardVerdict::Valid)
    }
}

/// Checks the guarding condition. A member `S` guards `v` when `v ∈ S` or
/// `dist_{G-S}(v, A \ S) > r`; one truncated BFS from `A \ S` in `G - S`
/// per member decides this for all `v` at once.
pub fn check_guarding(g: &Graph, targets: &[usize], r: u32, fam: &GuardingFamily) -> Result<GuardVerdict> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(targets)?;
    for s in &fam.sets {
        g.check_vertices(s)?;
    }
    let n = g.n();
    let mut bfs = Bfs::new(n);
    let mut pending: Vec<usize> = bfs.run(g, targets, Some(r), None).to_vec();
    pending.sort_unstable();

    let guarded: Vec<bool> = fam
        .sets
        .par_iter()
        .fold(
            || (vec![false; n], vec![false; n], Bfs::new(n)),
            |(mut guarded, mut in_s, mut bfs), s| {
                for &x in s {
                    in_s[x] = true;
                }
                let sources: Vec<usize> = targets.iter().copied().filter(|&a| !in_s[a]).collect();
                bfs.run(g, &sources, Some(r), Some(&in_s));
                for &v in &pending {
                    if in_s[v] || bfs.dist[v] == INF {
                        guarded[v] = true;
                    }
                }
                for &x in s {
                    in_s[x] = false;
                }
                (guarded, in_s, bfs)
            },
        )
        .map(|(guarded, _, _)| guarded)
        .reduce(
            || vec![false; n],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x |= y;
                }
                a
            },
        );
    Ok(match pending.into_iter().find(|&v| !guarded[v]) {
        Some(v) => GuardVerdict::Unguarded(v),
        None => GuardVerdict::Valid,
    })
}

/// Whether the single set `s` guards `v`: `v ∈ s`, or `v` is farther than
/// `r` from `A \ s` once `s` is deleted.
pub fn guards(g: &Graph, targets: &[usize], r: u32, s: &[usize], v: usize) -> Result<bool> {
    g.check_vertices(targets)?;
    g.check_vertices(s)?;
    g.check_vertex(v)?;
    let mut in_s = vec![false; g.n()];
    for &x in s {
        in_s[x] = true;
    }
    if in_s[v] {
        return Ok(true);
    }
    let sources: Vec<usize> = targets.iter().copied().filter(|&a| !in_s[a]).collect();
    let mut bfs = Bfs::new(g.n());
    bfs.run(g, &sources, Some(r), Some(&in_s));
    Ok(bfs.dist[v] == INF)
}

/// Outcome of [`check_covers_and_cuts`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoversCutsReport {
    /// Smallest vertex for which no piece certifies the hypothesis.
    pub failing: Option<usize>,
    /// `|Π_{r,G}[V → A]|`, computed when no vertex fails.
    pub profiles: Option<usize>,
    /// `Σ_i |Π_{r,G[V_i]}[V_i → S_i]|`, computed when no vertex fails.
    pub piece_profiles: Option<usize>,
}

impl CoversCutsReport {
    pub fn holds(&self) -> bool {
        self.failing.is_none() && self.profiles <= self.piece_profiles
    }
}

/// For every vertex `v`, looks for a piece `(V_i, S_i)` with `v ∈ V_i` such
/// that every `a ∈ A` within distance `r` of `v` has a shortest `(v,a)`-path
/// whose maximal prefix inside `V_i` meets `S_i`. Decided by a dynamic
/// programme over the shortest-path DAG from `v`. When every vertex passes,
/// the resulting profile-count inequality is also evaluated.
pub fn check_covers_and_cuts(
    g: &Graph,
    targets: &[usize],
    r: u32,
    pieces: &[(Vec<usize>, Vec<usize>)],
) -> Result<CoversCutsReport> {
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(targets)?;
    let n = g.n();
    let mut covered = vec![false; n];
    let mut members: Vec<(Vec<bool>, Vec<bool>)> = Vec::with_capacity(pieces.len());
    for (i, (vi, si)) in pieces.iter().enumerate() {
        g.check_vertices(vi)?;
        g.check_vertices(si)?;
        let mut in_v = vec![false; n];
        let mut in_s = vec![false; n];
        for &x in vi {
            in_v[x] = true;
            covered[x] = true;
        }
        for &x in si {
            if !in_v[x] {
                return Err(Error::Precondition(format!(
                    "piece {i}: cut vertex {x} lies outside its part"
                )));
            }
            in_s[x] = true;
        }
        members.push((in_v, in_s));
    }
    if let Some(v) = covered.iter().position(|&c| !c) {
        return Err(Error::Precondition(format!("vertex {v} is in no piece")));
    }
    let mut is_target = vec![false; n];
    for &a in targets {
        is_target[a] = true;
    }

    let failing = (0..n)
        .into_par_iter()
        .map_init(
            || (Bfs::new(n), vec![false; n], vec![false; n]),
            |(bfs, inside, hit), v| {
                let order = bfs.run(g, &[v], Some(r), None).to_vec();
                let dist = &bfs.dist;
                let ok = members.iter().any(|(in_v, in_s)| {
                    if !in_v[v] {
                        return false;
                    }
                    for &x in &order {
                        if x == v {
                            inside[x] = !in_s[x];
                            hit[x] = in_s[x];
                            continue;
                        }
                        let dx = dist[x];
                        let (mut pin, mut phit) = (false, false);
                        for &p in g.neighbors(x) {
                            if dist[p] != INF && dist[p] + 1 == dx {
                                pin |= inside[p];
                                phit |= hit[p];
                            }
                        }
                        inside[x] = in_v[x] && !in_s[x] && pin;
                        hit[x] = phit || (in_s[x] && pin);
                    }
                    order.iter().all(|&x| !is_target[x] || hit[x])
                });
                (!ok).then_some(v)
            },
        )
        .flatten()
        .min();

    if failing.is_some() {
        return Ok(CoversCutsReport {
            failing,
            profiles: None,
            piece_profiles: None,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let lhs = profile_set(g, &all, targets, r)?.len();
    let mut rhs = 0;
    for (vi, si) in pieces {
        if si.is_empty() {
            continue;
        }
        let (sub, map) = g.induced_subgraph(vi);
        let mut local = vec![usize::MAX; n];
        for (i, &x) in map.iter().enumerate() {
            local[x] = i;
        }
        let s_local: Vec<usize> = si.iter().map(|&x| local[x]).collect();
        let sub_all: Vec<usize> = (0..sub.n()).collect();
        rhs += profile_set(&sub, &sub_all, &s_local, r)?.len();
    }
    Ok(CoversCutsReport {
        failing: None,
        profiles: Some(lhs),
        piece_profiles: Some(rhs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    /// Brute-force path condition: does `s` meet every (v, A)-path of length
    /// at most r?
    fn blocks_all_paths(g: &Graph, targets: &[usize], r: u32, s: &[usize], v: usize) -> bool {
        fn go(g: &Graph, t: &[usize], r: u32, s: &[usize], path: &mut Vec<usize>) -> bool {
            let last = *path.last().unwrap();
            if t.contains(&last) && !path.iter().any(|x| s.contains(x)) {
                return false;
            }
            if path.len() as u32 > r {
                return true;
            }
            for &y in g.neighbors(last) {
                if !path.contains(&y) {
                    path.push(y);
                    let ok = go(g, t, r, s, path);
                    path.pop();
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
        go(g, targets, r, s, &mut vec![v])
    }

    #[test]
    fn singleton_family_guards() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4)]).unwrap();
        let fam = GuardingFamily::new((0..5).map(|v| vec![v]).collect(), 2, 1);
        assert_eq!(check_guarding(&g, &[0, 4], 2, &fam).unwrap(), GuardVerdict::Valid);
        let empty = GuardingFamily::new(vec![vec![]], 2, 0);
        assert_eq!(check_guarding(&g, &[4], 2, &empty).unwrap(), GuardVerdict::Unguarded(0));
    }

    #[test]
    fn p3_example() {
        let g = path(3);
        let fam = GuardingFamily::new(vec![vec![1]], 2, 1);
        assert_eq!(check_guarding(&g, &[2], 2, &fam).unwrap(), GuardVerdict::Unguarded(2));
        assert!(blocks_all_paths(&g, &[2], 2, &[1], 0));
        assert!(!blocks_all_paths(&g, &[2], 2, &[1], 2));
        assert!(check_guarding(&g, &[], 2, &fam).is_err());
    }

    #[test]
    fn distance_criterion_matches_path_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..60 {
            let n = rng.gen_range(3..=9);
            let mut b = crate::graph::GraphBuilder::new(n);
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.35) {
                        b.add_edge(u, v).unwrap();
                    }
                }
            }
            let g = b.build();
            let targets: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            if targets.is_empty() {
                continue;
            }
            let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
            let r = rng.gen_range(0..=4);
            let fam = GuardingFamily::new(vec![s.clone()], r, n);
            let dist = crate::graph::bfs_distances(&g, &targets).unwrap();
            let expect = (0..n).find(|&v| dist[v] <= r && !blocks_all_paths(&g, &targets, r, &s, v));
            let got = match check_guarding(&g, &targets, r, &fam).unwrap() {
                GuardVerdict::Valid => None,
                GuardVerdict::Unguarded(v) => Some(v),
            };
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn covers_and_cuts_single_piece() {
        let g = Graph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]).unwrap();
        let all: Vec<usize> = (0..6).collect();
        let rep = check_covers_and_cuts(&g, &[0, 3], 2, &[(all.clone(), vec![0, 3])]).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.profiles, rep.piece_profiles);
        // An empty cut certifies nothing for vertices near A.
        let rep = check_covers_and_cuts(&g, &[0], 2, &[(all.clone(), vec![])]).unwrap();
        assert_eq!(rep.failing, Some(0));
        assert!(check_covers_and_cuts(&g, &[0], 2, &[(vec![0, 1], vec![2])]).is_err());
        assert!(check_covers_and_cuts(&g, &[0], 2, &[(vec![0, 1], vec![0])]).is_err());
    }

    #[test]
    fn covers_and_cuts_uses_prefix_inside_piece() {
        // P5 split into two overlapping halves; vertex 2 is the cut.
        let g = path(5);
        let pieces = vec![(vec![0, 1, 2], vec![2]), (vec![2, 3, 4], vec![2, 4])];
        let rep = check_covers_and_cuts(&g, &[4], 4, &pieces).unwrap();
        assert!(rep.holds(), "{rep:?}");
    }
}
