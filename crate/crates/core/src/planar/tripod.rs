//! Decomposition of a near-triangulated disc into short faces using tripods:
//! three disjoint vertical forest paths whose sources span a triangular face.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, RootedForest};
use crate::plane::{Face, PlaneGraph};

use super::sperner::sperner_find;

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tripod {
    /// Centre triangle, listed by colour 1, 2, 3 at creation time.
    pub center: [usize; 3],
    /// `branches[i]` runs from `center[i]` down to its root.
    pub branches: [Vec<usize>; 3],
    pub feet: [usize; 3],
    pub distinguished_foot: usize,
}

impl Tripod {
    fn from_center(forest: &RootedForest, center: [usize; 3]) -> Result<Self> {
        let branches = center.map(|c| forest.path_to_root(c));
        let mut seen = BTreeSet::new();
        for b in &branches {
            for &v in b {
                if !seen.insert(v) {
                    return Err(Error::InvariantBroken(format!("tripod branches meet at vertex {v}")));
                }
            }
        }
        let feet = [0, 1, 2].map(|i| *branches[i].last().expect("nonempty"));
        Ok(Tripod {
            center,
            feet,
            distinguished_foot: feet[2],
            branches,
        })
    }

    fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let c = self.center;
        self.branches
            .iter()
            .flat_map(|b| b.windows(2).map(|w| norm(w[0], w[1])))
            .chain([norm(c[0], c[1]), norm(c[1], c[2]), norm(c[0], c[2])])
    }

    /// The side made of branches `i` and `j`, read as foot of `i` up to the
    /// centre, across the centre edge, and down to the foot of `j`.
    fn side(&self, i: usize, j: usize) -> Vec<usize> {
        let mut s: Vec<usize> = self.branches[i].iter().rev().copied().collect();
        s.extend(self.branches[j].iter().copied());
        s
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TripodDecomposition {
    /// Triangulation of the input in which `H` lives.
    pub triangulated: PlaneGraph,
    /// Outer cycle `C`.
    pub cycle: Vec<usize>,
    /// Edge set of `H`, as `(min, max)` pairs.
    pub h_edges: BTreeSet<(usize, usize)>,
    pub tripods: Vec<Tripod>,
}

impl TripodDecomposition {
    /// `H` with the embedding inherited from the triangulation.
    pub fn h_plane(&self) -> Result<PlaneGraph> {
        self.triangulated.restrict_edges(|u, v| self.h_edges.contains(&norm(u, v)))
    }
}

fn face_violation(face: &Face, original: &Graph, r: u32) -> Option<String> {
    if !face.is_simple_cycle() {
        return Some("not bounded by a cycle".into());
    }
    if face.len() > 6 * r as usize {
        return Some(format!("length {} exceeds 6r = {}", face.len(), 6 * r));
    }
    let extra = face.darts.iter().filter(|&&(u, v)| !original.has_edge(u, v)).count();
    if extra > 3 {
        return Some(format!("{extra} edges not in the original graph"));
    }
    None
}

fn validate_input(pg: &PlaneGraph, forest: &RootedForest, r: u32) -> Result<Vec<usize>> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let g = pg.graph();
    if forest.parents().len() != g.n() {
        return Err(Error::InvalidArgument("forest does not span the graph".into()));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let cycle = pg.outer_cycle()?;
    let on_c: BTreeSet<usize> = cycle.iter().copied().collect();
    let roots: BTreeSet<usize> = forest.roots().iter().copied().collect();
    if roots != on_c {
        return Err(Error::Precondition("forest roots are not exactly the outer cycle".into()));
    }
    if forest.height() > r {
        return Err(Error::Precondition(format!(
            "forest height {} exceeds r = {r}",
            forest.height()
        )));
    }
    for v in 0..g.n() {
        if let Some(p) = forest.parent(v) {
            if !g.has_edge(v, p) {
                return Err(Error::Precondition(format!("forest edge {{{v},{p}}} is not a graph edge")));
            }
        }
    }
    Ok(cycle)
}

/// Builds `H ⊆ G̃` containing the outer cycle `C` whose inner faces number
/// at most `3|V(C)|/r + 1`, each bounded by a cycle of length at most `6r`
/// with at most three edges outside `G`.
///
/// Starts from a Sperner tripod for a three-way split of `C`, then
/// repeatedly takes the first inner face of `H` that is too long (or has too
/// many added edges), colours the disc it bounds, and inserts the tripod of
/// a rainbow triangle inside it. Branches always run down to their roots.
pub fn tripod_decomposition(pg: &PlaneGraph, forest: &RootedForest, r: u32) -> Result<TripodDecomposition> {
    let cycle = validate_input(pg, forest, r)?;
    let gt = pg.triangulate_inner_faces()?;
    let original = pg.graph();
    let k = cycle.len();

    let s1 = k / 3;
    let s2 = (k - s1) / 2;
    let paths = [&cycle[..s1], &cycle[s1..s1 + s2], &cycle[s1 + s2..]];
    let mut coloring = vec![0u8; original.n()];
    for (i, p) in paths.iter().enumerate() {
        for &v in *p {
            coloring[v] = i as u8 + 1;
        }
    }
    for v in 0..original.n() {
        coloring[v] = coloring[forest.root_of(v)];
    }
    let (x, y, z) = sperner_find(&gt, &coloring, paths)?;
    let first = Tripod::from_center(forest, [x, y, z])?;

    let mut h_edges: BTreeSet<(usize, usize)> =
        (0..k).map(|i| norm(cycle[i], cycle[(i + 1) % k])).collect();
    h_edges.extend(first.edges());
    let mut dec = TripodDecomposition {
        triangulated: gt,
        cycle,
        h_edges,
        tripods: vec![first],
    };

    for _ in 0..k + 5 {
        let hp = dec.h_plane()?;
        let bad = hp
            .inner_faces()
            .find(|(_, f)| face_violation(f, original, r).is_some())
            .map(|(_, f)| f.clone());
        let Some(face) = bad else {
            return Ok(dec);
        };
        let tripod = split_face(&dec, forest, &face, r)?;
        dec.h_edges.extend(tripod.edges());
        dec.tripods.push(tripod);
    }
    Err(Error::InvariantBroken("tripod insertion did not converge".into()))
}

fn split_face(dec: &TripodDecomposition, forest: &RootedForest, face: &Face, r: u32) -> Result<Tripod> {
    let gt = &dec.triangulated;
    let k = dec.cycle.len();
    let mut cpos = vec![usize::MAX; gt.graph().n()];
    for (i, &c) in dec.cycle.iter().enumerate() {
        cpos[c] = i;
    }
    let is_c_edge = |u: usize, v: usize| {
        cpos[u] != usize::MAX && cpos[v] != usize::MAX && {
            let d = cpos[u].abs_diff(cpos[v]);
            d == 1 || d == k - 1
        }
    };
    if !face.is_simple_cycle() {
        return Err(Error::InvariantBroken("face to split is not bounded by a cycle".into()));
    }
    let darts = &face.darts;
    let len = darts.len();
    let flags: Vec<bool> = darts.iter().map(|&(u, v)| is_c_edge(u, v)).collect();
    let starts: Vec<usize> = (0..len).filter(|&i| flags[i] && !flags[(i + len - 1) % len]).collect();
    if starts.len() != 1 {
        return Err(Error::InvariantBroken(format!(
            "face meets the outer cycle in {} paths, expected one",
            starts.len()
        )));
    }
    let start = starts[0];
    let run = (0..len).take_while(|&s| flags[(start + s) % len]).count();
    let p: Vec<usize> = (0..=run).map(|s| darts[(start + s) % len].0).collect();
    let q: Vec<usize> = (run..=len).map(|s| darts[(start + s) % len].0).collect();
    let kp = run; // P_f = p_0 .. p_kp

    // Q_f must be a side of an existing tripod, read from p_kp back to p_0.
    let (q1, q2) = dec
        .tripods
        .iter()
        .flat_map(|t| {
            [(0, 1), (1, 0), (0, 2), (2, 0), (1, 2), (2, 1)]
                .into_iter()
                .map(move |(i, j)| (t, i, j))
        })
        .find(|&(t, i, j)| t.side(i, j) == q)
        .map(|(t, i, _)| {
            let bi = t.branches[i].len();
            (q[1..bi].to_vec(), q[bi..q.len() - 1].to_vec())
        })
        .ok_or_else(|| {
            Error::InvariantBroken("face boundary off the outer cycle is not a tripod side".into())
        })?;

    let r = r as usize;
    if kp + 1 < 2 * r + 1 {
        return Err(Error::InvariantBroken(format!(
            "boundary path of the face has {} vertices, too few for three colour classes with r = {r}",
            kp + 1
        )));
    }
    let mut coloring = vec![0u8; gt.graph().n()];
    let p1: Vec<usize> = p[kp + 1 - r..].iter().chain(&q1).copied().collect();
    let p2: Vec<usize> = q2.iter().chain(&p[..r]).copied().collect();
    let p3: Vec<usize> = p[r..=kp - r].to_vec();
    for (c, path) in [(1u8, &p1), (2, &p2), (3, &p3)] {
        for &v in path {
            coloring[v] = c;
        }
    }

    // Faces of the triangulation inside the disc bounded by this face.
    let h_has = |u: usize, v: usize| dec.h_edges.contains(&norm(u, v));
    let mut inside = vec![false; gt.faces().len()];
    let seed = gt.face_of_dart(darts[0].0, darts[0].1).expect("dart of H is a dart of G~");
    inside[seed] = true;
    let mut queue = VecDeque::from([seed]);
    let mut region_edges = BTreeSet::new();
    let mut region_vertices = BTreeSet::new();
    while let Some(f) = queue.pop_front() {
        for &(u, v) in &gt.faces()[f].darts {
            region_edges.insert(norm(u, v));
            region_vertices.insert(u);
            if !h_has(u, v) {
                let g2 = gt.face_of_dart(v, u).expect("twin dart");
                if !inside[g2] {
                    inside[g2] = true;
                    queue.push_back(g2);
                }
            }
        }
    }
    for &v in &region_vertices {
        if coloring[v] == 0 {
            let chain = forest.path_to_root(v);
            let hit = chain
                .iter()
                .copied()
                .find(|&x| coloring[x] != 0)
                .ok_or_else(|| Error::InvariantBroken(format!("vertex {v} never meets the face boundary")))?;
            // Colour every interior vertex met on the way to the boundary.
            let c = coloring[hit];
            for &x in chain.iter().take_while(|&&x| x != hit) {
                coloring[x] = c;
            }
        }
    }
    // Vertices outside the disc are isolated in the region graph.
    for c in coloring.iter_mut().filter(|c| **c == 0) {
        *c = 1;
    }
    let region = gt.restrict_edges_with_outer(|u, v| region_edges.contains(&norm(u, v)), (p[1], p[0]))?;
    let (x, y, z) = sperner_find(&region, &coloring, [&p1, &p2, &p3])?;
    Tripod::from_center(forest, [x, y, z])
}

/// Independent verification of a decomposition.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct TripodReport {
    pub inner_faces: usize,
    pub cycle_length: usize,
    pub max_face_length: usize,
    pub max_added_edges: usize,
    pub violations: Vec<String>,
}

impl TripodReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Re-derives `H` from the stored edges and checks every stated property:
/// `C ⊆ H`; the inner-face count bound; each inner face a cycle of length at
/// most `6r` with at most three added edges; the tripod shape (disjoint
/// vertical branches ending on `C`, centre a triangular face of the
/// triangulation); distinguished feet pairwise at least `r` apart along `C`;
/// and `V(H) = V(C) ∪ V(tripods)`.
pub fn check_tripod_decomposition(
    pg: &PlaneGraph,
    forest: &RootedForest,
    r: u32,
    dec: &TripodDecomposition,
) -> Result<TripodReport> {
    let cycle = validate_input(pg, forest, r)?;
    let gt = pg.triangulate_inner_faces()?;
    let mut rep = TripodReport {
        cycle_length: cycle.len(),
        ..Default::default()
    };
    if gt.rotations() != dec.triangulated.rotations() {
        rep.violations.push("stored triangulation differs from the input's".into());
    }
    let k = cycle.len();
    let original = pg.graph();
    for i in 0..k {
        if !dec.h_edges.contains(&norm(cycle[i], cycle[(i + 1) % k])) {
            rep.violations.push(format!("cycle edge {{{},{}}} missing from H", cycle[i], cycle[(i + 1) % k]));
        }
    }
    for &(u, v) in &dec.h_edges {
        if !gt.graph().has_edge(u, v) {
            rep.violations.push(format!("H edge {{{u},{v}}} is not in the triangulation"));
        }
    }
    if !rep.violations.is_empty() {
        return Ok(rep);
    }
    let hp = gt.restrict_edges(|u, v| dec.h_edges.contains(&norm(u, v)))?;
    for (fid, f) in hp.inner_faces() {
        rep.inner_faces += 1;
        rep.max_face_length = rep.max_face_length.max(f.len());
        let extra = f.darts.iter().filter(|&&(u, v)| !original.has_edge(u, v)).count();
        rep.max_added_edges = rep.max_added_edges.max(extra);
        if let Some(why) = face_violation(f, original, r) {
            rep.violations.push(format!("inner face {fid}: {why}"));
        }
    }
    if rep.inner_faces * r as usize > 3 * k + r as usize {
        rep.violations.push(format!(
            "{} inner faces exceed 3|V(C)|/r + 1 with |V(C)| = {k}, r = {r}",
            rep.inner_faces
        ));
    }

    let mut cpos = vec![usize::MAX; original.n()];
    for (i, &c) in cycle.iter().enumerate() {
        cpos[c] = i;
    }
    let mut tripod_vertices = BTreeSet::new();
    for (ti, t) in dec.tripods.iter().enumerate() {
        let mut seen = BTreeSet::new();
        for (bi, b) in t.branches.iter().enumerate() {
            if b.first() != Some(&t.center[bi]) || b.last() != Some(&t.feet[bi]) {
                rep.violations.push(format!("tripod {ti}: branch {bi} does not join centre to foot"));
            }
            if b.windows(2).any(|w| forest.parent(w[0]) != Some(w[1])) {
                rep.violations.push(format!("tripod {ti}: branch {bi} is not vertical"));
            }
            if b.len() > forest.height() as usize + 1 {
                rep.violations.push(format!("tripod {ti}: branch {bi} longer than the forest height"));
            }
            if cpos[t.feet[bi]] == usize::MAX {
                rep.violations.push(format!("tripod {ti}: foot {} not on the outer cycle", t.feet[bi]));
            }
            for &v in b {
                if !seen.insert(v) {
                    rep.violations.push(format!("tripod {ti}: branches share vertex {v}"));
                }
                tripod_vertices.insert(v);
            }
        }
        let c = t.center;
        let is_face = gt.inner_faces().any(|(_, f)| {
            let mut vs = f.vertices();
            vs.sort_unstable();
            let mut cs = c.to_vec();
            cs.sort_unstable();
            vs == cs
        });
        if !is_face {
            rep.violations.push(format!("tripod {ti}: centre {c:?} is not an inner triangle"));
        }
        if !t.feet.contains(&t.distinguished_foot) {
            rep.violations.push(format!("tripod {ti}: distinguished foot is not a foot"));
        }
    }
    let feet: Vec<usize> = dec.tripods.iter().map(|t| t.distinguished_foot).collect();
    for i in 0..feet.len() {
        for j in i + 1..feet.len() {
            let (a, b) = (cpos[feet[i]], cpos[feet[j]]);
            if a == usize::MAX || b == usize::MAX {
                continue;
            }
            let d = a.abs_diff(b).min(k - a.abs_diff(b));
            if d < r as usize {
                rep.violations.push(format!(
                    "distinguished feet {} and {} are {d} apart on the cycle",
                    feet[i], feet[j]
                ));
            }
        }
    }
    let h_vertices: BTreeSet<usize> = dec.h_edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    let expected: BTreeSet<usize> = cycle.iter().copied().chain(tripod_vertices).collect();
    if h_vertices != expected {
        rep.violations.push("V(H) differs from V(C) ∪ V(tripods)".into());
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{bfs_forest_from_set, GraphBuilder};

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

    fn run(w: usize, h: usize, r: u32) -> (TripodDecomposition, TripodReport) {
        let pg = grid(w, h);
        let c = pg.outer_cycle().unwrap();
        let f = bfs_forest_from_set(pg.graph(), &c).unwrap();
        let dec = tripod_decomposition(&pg, &f, r).unwrap();
        let rep = check_tripod_decomposition(&pg, &f, r, &dec).unwrap();
        (dec, rep)
    }

    #[test]
    fn small_cycle_needs_one_tripod() {
        let (dec, rep) = run(3, 3, 2);
        assert!(rep.passes(), "{:?}", rep.violations);
        assert_eq!(dec.tripods.len(), 1);
        assert!(rep.inner_faces <= 4);
    }

    #[test]
    fn long_strip_gets_split() {
        let (dec, rep) = run(20, 5, 2);
        assert!(rep.passes(), "{:?}", rep.violations);
        assert!(dec.tripods.len() > 1);
    }

    #[test]
    fn large_r_keeps_initial_tripod() {
        let (dec, rep) = run(4, 4, 8);
        assert!(rep.passes(), "{:?}", rep.violations);
        assert_eq!(dec.tripods.len(), 1);
    }

    #[test]
    fn grid_sweep() {
        for w in 2..=13 {
            for h in 2..=9 {
                for r in 1..=4u32 {
                    let depth = (w.min(h) - 1) / 2;
                    if depth as u32 > r {
                        continue;
                    }
                    let (_, rep) = run(w, h, r);
                    assert!(rep.passes(), "{w}x{h} r={r}: {:?}", rep.violations);
                }
            }
        }
    }

    #[test]
    fn rejects_tall_forest() {
        let pg = grid(7, 7);
        let c = pg.outer_cycle().unwrap();
        let f = bfs_forest_from_set(pg.graph(), &c).unwrap();
        assert!(matches!(tripod_decomposition(&pg, &f, 2), Err(Error::Precondition(_))));
    }
}
