//! Randomised invariants, each checked against an oracle written
//! independently of the library code.

use std::collections::{BTreeSet, HashSet, VecDeque};

use proptest::prelude::*;

use profile_lab::analysis::{is_resolving, metric_dimension_exact, vc_dimension, MetricDimension, SetSystem};
use profile_lab::generators::{gen_ktree_subgraph, gen_product, gen_random_plane, lb_treewidth};
use profile_lab::graph::{bfs_distances, subdivide_edges};
use profile_lab::guarding::{
    check_guarding, guarding_product, guarding_td, guarding_wcol, order_from_td, wreach, LinearOrder,
};
use profile_lab::planar::{cut_along_tree, rainbow_faces, sperner_find, steiner_tree_greedy};
use profile_lab::profiles::{neighborhood_traces, profile_set};
use profile_lab::{Graph, INF};

fn oracle_bfs(g: &Graph, s: usize) -> Vec<u32> {
    let mut d = vec![INF; g.n()];
    d[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for &w in g.neighbors(u) {
            if d[w] == INF {
                d[w] = d[u] + 1;
                q.push_back(w);
            }
        }
    }
    d
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        (Just(n), proptest::collection::vec(any::<bool>(), pairs))
            .prop_map(|(n, bits)| {
                let mut edges = Vec::new();
                let mut i = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        // Thin out the coin flips so graphs stay sparse.
                        if bits[i] && (u * 7 + v * 13) % 3 == 0 {
                            edges.push((u, v));
                        }
                        i += 1;
                    }
                }
                Graph::from_edges(n, edges).unwrap()
            })
    })
}

fn targets_for(n: usize, seeds: &[usize]) -> Vec<usize> {
    let mut a: Vec<usize> = seeds.iter().map(|s| s % n).collect();
    a.sort_unstable();
    a.dedup();
    a
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bfs_recurrence_and_triangle_inequality(g in graph_strategy(30), s in 0usize..30) {
        let s = s % g.n();
        let d = bfs_distances(&g, &[s]).unwrap();
        prop_assert_eq!(&d, &oracle_bfs(&g, s));
        for v in 0..g.n() {
            if d[v] != INF && d[v] > 0 {
                prop_assert!(g.neighbors(v).iter().any(|&w| d[w] == d[v] - 1));
            }
            for &w in g.neighbors(v) {
                if d[v] != INF {
                    prop_assert!(d[w] <= d[v] + 1);
                }
            }
        }
    }

    #[test]
    fn profile_set_matches_per_source_oracle(
        g in graph_strategy(40),
        seeds in proptest::collection::vec(0usize..1000, 1..8),
        r in 0u32..6,
    ) {
        let a = targets_for(g.n(), &seeds);
        let all: Vec<usize> = (0..g.n()).collect();
        let got: HashSet<Vec<u32>> = profile_set(&g, &all, &a, r).unwrap().iter().map(|p| p.0.clone()).collect();
        let want: HashSet<Vec<u32>> = (0..g.n())
            .map(|u| {
                let d = oracle_bfs(&g, u);
                a.iter().map(|&x| if d[x] <= r { d[x] } else { INF }).collect::<Vec<u32>>()
            })
            .filter(|p| p.iter().any(|&x| x != INF))
            .collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn traces_follow_from_larger_radius_profiles(
        g in graph_strategy(30),
        seeds in proptest::collection::vec(0usize..1000, 1..6),
        r in 0u32..4,
        extra in 0u32..4,
    ) {
        let a = targets_for(g.n(), &seeds);
        let big = r + extra;
        let derived: BTreeSet<Vec<usize>> = (0..g.n())
            .map(|u| {
                let d = oracle_bfs(&g, u);
                // The r'-profile capped at r.
                a.iter().copied().filter(|&x| d[x] <= big && d[x] <= r).collect()
            })
            .collect();
        prop_assert_eq!(neighborhood_traces(&g, &a, r).unwrap(), derived);
    }

    #[test]
    fn subdivision_scales_distances(g in graph_strategy(12), k in 0usize..4) {
        let s = subdivide_edges(&g, k);
        for u in 0..g.n() {
            let before = oracle_bfs(&g, u);
            let after = oracle_bfs(&s, u);
            for v in 0..g.n() {
                let want = if before[v] == INF { INF } else { before[v] * (k as u32 + 1) };
                prop_assert_eq!(after[v], want);
            }
        }
    }

    #[test]
    fn plane_faces_satisfy_euler(w in 2usize..8, h in 2usize..8, diag in 0.0f64..1.0, keep in 0.0f64..1.0, seed: u64) {
        let pg = gen_random_plane(w, h, diag, keep, seed).unwrap();
        let g = pg.graph();
        let total: usize = pg.faces().iter().map(|f| f.len()).sum();
        prop_assert_eq!(total, 2 * g.m());
        prop_assert_eq!(g.n() + pg.faces().len(), g.m() + 2);
    }

    #[test]
    fn triangulation_keeps_outer_cycle(w in 2usize..7, h in 2usize..7, diag in 0.0f64..1.0, seed: u64) {
        let pg = gen_random_plane(w, h, diag, 1.0, seed).unwrap();
        let tri = pg.triangulate_inner_faces().unwrap();
        prop_assert!(tri.is_near_triangulation());
        prop_assert_eq!(tri.graph().n(), pg.graph().n());
        prop_assert_eq!(tri.outer_cycle().unwrap().len(), pg.outer_cycle().unwrap().len());
        let outer: BTreeSet<usize> = pg.outer_cycle().unwrap().into_iter().collect();
        let outer_tri: BTreeSet<usize> = tri.outer_cycle().unwrap().into_iter().collect();
        prop_assert_eq!(outer, outer_tri);
        let faces: Vec<BTreeSet<usize>> =
            pg.inner_faces().map(|(_, f)| f.vertices().into_iter().collect()).collect();
        for (u, v) in tri.graph().edges() {
            if !pg.graph().has_edge(u, v) {
                let hosts = faces.iter().filter(|f| f.contains(&u) && f.contains(&v)).count();
                prop_assert!(hosts >= 1);
            }
        }
    }

    #[test]
    fn wreach_contains_root_and_grows_with_r(g in graph_strategy(14), perm_seed: u64) {
        let n = g.n();
        let mut seq: Vec<usize> = (0..n).collect();
        // Deterministic shuffle from the seed.
        let mut x = perm_seed | 1;
        for i in (1..n).rev() {
            x ^= x << 13; x ^= x >> 7; x ^= x << 17;
            seq.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let ord = LinearOrder::from_sequence(seq).unwrap();
        for u in 0..n {
            let mut prev: BTreeSet<usize> = BTreeSet::new();
            for r in 0..5 {
                let cur: BTreeSet<usize> = wreach(&g, &ord, r, u).into_iter().collect();
                prop_assert!(cur.contains(&u));
                prop_assert!(prev.is_subset(&cur));
                prop_assert_eq!(&cur, &brute_wreach(&g, &ord, r, u));
                prev = cur;
            }
        }
    }

    #[test]
    fn vc_dimension_is_monotone(
        members in proptest::collection::vec(proptest::collection::vec(0usize..6, 0..6), 1..12),
        extra in proptest::collection::vec(0usize..6, 0..6),
    ) {
        let base = SetSystem::new((0..6).collect(), members.clone()).unwrap();
        let mut more = members;
        more.push(extra);
        let bigger = SetSystem::new((0..6).collect(), more).unwrap();
        let d0 = vc_dimension(&base, 6).unwrap().value();
        let d1 = vc_dimension(&bigger, 6).unwrap().value();
        prop_assert!(d0 <= d1);
        prop_assert_eq!(d0, brute_vc(&base));
    }
}

/// Weak reachability by enumerating every simple path of length at most
/// `r` from `u`: `v` is reached when it is the order-minimum of the path.
fn brute_wreach(g: &Graph, ord: &LinearOrder, r: u32, u: usize) -> BTreeSet<usize> {
    fn walk(g: &Graph, ord: &LinearOrder, r: u32, path: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        let min = *path.iter().min_by_key(|&&x| ord.position(x)).unwrap();
        if min == *path.last().unwrap() {
            out.insert(min);
        }
        if path.len() as u32 > r {
            return;
        }
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if !path.contains(&w) {
                path.push(w);
                walk(g, ord, r, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    walk(g, ord, r, &mut vec![u], &mut out);
    out
}

fn brute_vc(s: &SetSystem) -> usize {
    let k = s.universe.len();
    let mut best = 0;
    for mask in 0u32..1 << k {
        let x: Vec<usize> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| s.universe[i]).collect();
        if x.len() > best && s.traces(&x).len() == 1 << x.len() && !s.is_empty() {
            best = x.len();
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn guarding_constructions_are_valid(
        t in 1usize..4,
        n in 8usize..60,
        keep in 0.3f64..1.0,
        seed: u64,
        seeds in proptest::collection::vec(0usize..1000, 1..6),
        r in 1u32..6,
    ) {
        let n = n.max(t + 1);
        let (g, td) = gen_ktree_subgraph(t, n, keep, seed).unwrap();
        let a = targets_for(n, &seeds);
        let fam = guarding_td(&g, &td, &a, r, Some(t)).unwrap();
        prop_assert!(check_guarding(&g, &a, r, &fam).unwrap().is_valid());
        prop_assert!(fam.max_member_size() <= t);
        let ord = order_from_td(&g, &td.normalized()).unwrap();
        let fam_w = guarding_wcol(&g, &ord, &a, r).unwrap();
        prop_assert!(check_guarding(&g, &a, r, &fam_w).unwrap().is_valid());

        // Each guarded vertex's profile on A is determined by the guarding
        // member and the profile on it.
        let all: Vec<usize> = (0..n).collect();
        let on_a = profile_set(&g, &all, &a, r).unwrap().len();
        let max_on_s = fam
            .sets
            .iter()
            .filter(|s| !s.is_empty())
            .map(|s| profile_set(&g, &all, s, r).unwrap().len())
            .max()
            .unwrap_or(0);
        prop_assert!(on_a <= fam.len() * max_on_s);
    }

    #[test]
    fn product_guarding_is_valid(
        hn in 2usize..6,
        p in 1usize..12,
        c in 1usize..3,
        density in 0.3f64..1.0,
        seed: u64,
        seeds in proptest::collection::vec(0usize..1000, 1..5),
        r in 1u32..4,
    ) {
        let (host, td) = gen_ktree_subgraph(1, hn, 1.0, seed).unwrap();
        let pc = gen_product(&host, &td, p, c, density, seed ^ 1).unwrap();
        let a = targets_for(pc.graph.n(), &seeds);
        let fam = guarding_product(&pc, &a, r).unwrap();
        prop_assert!(check_guarding(&pc.graph, &a, r, &fam).unwrap().is_valid());
        prop_assert!(fam.max_member_size() <= 4 * c * (pc.t() + 1) * r as usize);
    }

    #[test]
    fn cut_along_tree_doubles_tree_edges(
        w in 3usize..7,
        h in 3usize..7,
        seed: u64,
        seeds in proptest::collection::vec(0usize..1000, 1..5),
        r in 1u32..4,
    ) {
        let pg = gen_random_plane(w, h, 0.5, 0.7, seed).unwrap();
        let a = targets_for(pg.graph().n(), &seeds);
        let Ok(tree) = steiner_tree_greedy(pg.graph(), &a, r) else {
            // Some vertex lies farther than r from the targets.
            return Ok(());
        };
        let cut = cut_along_tree(&pg, &a, &tree, r).unwrap();
        prop_assert_eq!(cut.targets.len(), 2 * cut.tree.edges.len());
        let g2 = cut.plane.graph();
        prop_assert_eq!(g2.n() + cut.plane.faces().len(), g2.m() + 2);
    }

    #[test]
    fn sperner_output_is_rainbow(w in 2usize..8, h in 2usize..8, seed: u64, cuts in (0usize..1000, 0usize..1000), colours in proptest::collection::vec(1u8..=3, 64)) {
        let pg = gen_random_plane(w, h, 1.0, 1.0, seed).unwrap();
        let ng = pg.triangulate_inner_faces().unwrap();
        let cyc = ng.outer_cycle().unwrap();
        let k = cyc.len();
        let i = 1 + cuts.0 % (k - 2);
        let j = i + 1 + cuts.1 % (k - i - 1);
        let mut col: Vec<u8> = (0..ng.graph().n()).map(|v| colours[v % colours.len()]).collect();
        for (idx, &v) in cyc.iter().enumerate() {
            col[v] = if idx < i { 1 } else if idx < j { 2 } else { 3 };
        }
        let found = sperner_find(&ng, &col, [&cyc[..i], &cyc[i..j], &cyc[j..]]).unwrap();
        prop_assert!(rainbow_faces(&ng, &col).contains(&found));
    }
}

#[test]
fn lb_treewidth_tree_is_within_r_of_targets() {
    for (t, r) in [(1, 8), (2, 12), (1, 16)] {
        let lb = lb_treewidth(t, r).unwrap();
        let ell = r as usize / (2 * (t + 1));
        let tree_vertices = ell.pow(t as u32 + 1);
        for &a in &lb.targets {
            let d = oracle_bfs(&lb.graph, a);
            assert!((0..tree_vertices).all(|x| d[x] <= r));
        }
    }
}

#[test]
fn metric_dimension_is_minimal_on_small_graphs() {
    // Connected graphs on up to 9 vertices from a fixed pseudo-random stream.
    let mut x: u64 = 0x5DEECE66D;
    let mut next = || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    for n in 2..=9usize {
        for _ in 0..6 {
            let mut edges: Vec<(usize, usize)> = (1..n).map(|v| ((next() as usize) % v, v)).collect();
            for _ in 0..n / 2 {
                let (u, v) = ((next() as usize) % n, (next() as usize) % n);
                if u != v && !edges.contains(&(u.min(v), u.max(v))) && !edges.contains(&(u.max(v), u.min(v))) {
                    edges.push((u.min(v), u.max(v)));
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let MetricDimension::Exact { k, set } = metric_dimension_exact(&g, n + 1).unwrap() else {
                panic!("cap above n always finds a set");
            };
            assert!(is_resolving(&g, &set).unwrap());
            for mask in 0u32..1 << n {
                if (mask.count_ones() as usize) < k {
                    let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                    assert!(!brute_resolves(&g, &s));
                }
            }
        }
    }
}

fn brute_resolves(g: &Graph, s: &[usize]) -> bool {
    let rows: Vec<Vec<u32>> = s.iter().map(|&x| oracle_bfs(g, x)).collect();
    let vecs: HashSet<Vec<u32>> = (0..g.n()).map(|v| rows.iter().map(|r| r[v]).collect()).collect();
    vecs.len() == g.n()
}
