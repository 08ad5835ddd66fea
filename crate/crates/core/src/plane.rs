//! Plane graphs given by a rotation system.
//!
//! `rotation[v]` lists the neighbours of `v` in clockwise order. A dart is
//! an ordered pair `(u, v)` for an edge `{u, v}`; the face to the left of
//! dart `u -> v` continues with `v -> w` where `w` follows `u` in the
//! rotation at `v`. With clockwise rotations, inner faces of a straight-line
//! drawing are traced counter-clockwise.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphBuilder};

/// A face as the cyclic sequence of darts bounding it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    pub darts: Vec<(usize, usize)>,
}

impl Face {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Tail vertices of the darts, in traversal order.
    pub fn vertices(&self) -> Vec<usize> {
        self.darts.iter().map(|&(u, _)| u).collect()
    }

    /// True when the boundary walk visits no vertex twice and has length at
    /// least 3.
    pub fn is_simple_cycle(&self) -> bool {
        let vs = self.vertices();
        let set: BTreeSet<usize> = vs.iter().copied().collect();
        vs.len() >= 3 && set.len() == vs.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneGraph {
    graph: Graph,
    rotation: Vec<Vec<usize>>,
    faces: Vec<Face>,
    /// Dart offsets: dart `(u, rotation[u][i])` has id `offset[u] + i`.
    offset: Vec<usize>,
    dart_face: Vec<usize>,
    outer_face: Option<usize>,
    synthetic: BTreeSet<(usize, usize)>,
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

impl PlaneGraph {
    /// Validates the rotation system, traces faces, checks Euler's formula
    /// and selects face `outer_face` (an index into the traced face list).
    pub fn new(graph: Graph, rotation: Vec<Vec<usize>>, outer_face: usize) -> Result<Self> {
        let mut pg = Self::assemble(graph, rotation, BTreeSet::new())?;
        if pg.graph.m() == 0 {
            return Err(Error::InvalidEmbedding("graph has no edges, hence no faces".into()));
        }
        if outer_face >= pg.faces.len() {
            return Err(Error::InvalidEmbedding(format!(
                "outer face {outer_face} does not exist ({} faces)",
                pg.faces.len()
            )));
        }
        pg.outer_face = Some(outer_face);
        Ok(pg)
    }

    /// Embedding from straight-line coordinates; the outer face is the one
    /// traced clockwise (most negative signed area).
    pub fn from_coordinates(graph: Graph, coords: &[(f64, f64)]) -> Result<Self> {
        if coords.len() != graph.n() {
            return Err(Error::InvalidArgument("one coordinate per vertex required".into()));
        }
        let rotation = (0..graph.n())
            .map(|v| {
                let (x0, y0) = coords[v];
                let mut ns: Vec<(f64, usize)> = graph
                    .neighbors(v)
                    .iter()
                    .map(|&w| ((coords[w].1 - y0).atan2(coords[w].0 - x0), w))
                    .collect();
                // Clockwise = decreasing angle.
                ns.sort_by(|a, b| b.0.total_cmp(&a.0));
                ns.into_iter().map(|(_, w)| w).collect()
            })
            .collect();
        let mut pg = Self::assemble(graph, rotation, BTreeSet::new())?;
        let area = |f: &Face| -> f64 {
            f.darts
                .iter()
                .map(|&(u, v)| coords[u].0 * coords[v].1 - coords[v].0 * coords[u].1)
                .sum::<f64>()
        };
        pg.outer_face = pg
            .faces
            .iter()
            .enumerate()
            .min_by(|a, b| area(a.1).total_cmp(&area(b.1)))
            .map(|(i, _)| i);
        Ok(pg)
    }

    pub(crate) fn assemble(
        graph: Graph,
        rotation: Vec<Vec<usize>>,
        synthetic: BTreeSet<(usize, usize)>,
    ) -> Result<Self> {
        let n = graph.n();
        if rotation.len() != n {
            return Err(Error::InvalidEmbedding(format!(
                "rotation given for {} vertices, graph has {n}",
                rotation.len()
            )));
        }
        for (v, rot) in rotation.iter().enumerate() {
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            if sorted != graph.neighbors(v) {
                return Err(Error::InvalidEmbedding(format!(
                    "rotation at vertex {v} is not a permutation of its neighbours"
                )));
            }
        }
        let mut offset = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for rot in &rotation {
            offset.push(acc);
            acc += rot.len();
        }
        offset.push(acc);
        let mut pg = PlaneGraph {
            graph,
            rotation,
            faces: Vec::new(),
            offset,
            dart_face: vec![usize::MAX; acc],
            outer_face: None,
            synthetic,
        };
        pg.trace();
        pg.check_euler()?;
        Ok(pg)
    }

    fn index_in_rotation(&self, v: usize, u: usize) -> usize {
        self.rotation[v]
            .iter()
            .position(|&w| w == u)
            .expect("rotation is consistent with adjacency")
    }

    /// Dart id of `u -> v`.
    pub fn dart_id(&self, u: usize, v: usize) -> Option<usize> {
        self.rotation
            .get(u)?
            .iter()
            .position(|&w| w == v)
            .map(|i| self.offset[u] + i)
    }

    /// The dart following `u -> v` on its face.
    pub fn next_dart(&self, u: usize, v: usize) -> (usize, usize) {
        let j = self.index_in_rotation(v, u);
        let rot = &self.rotation[v];
        (v, rot[(j + 1) % rot.len()])
    }

    fn trace(&mut self) {
        let n = self.graph.n();
        for u in 0..n {
            for i in 0..self.rotation[u].len() {
                if self.dart_face[self.offset[u] + i] != usize::MAX {
                    continue;
                }
                let fid = self.faces.len();
                let mut darts = Vec::new();
                let start = (u, self.rotation[u][i]);
                let mut d = start;
                loop {
                    let id = self.dart_id(d.0, d.1).expect("dart exists");
                    self.dart_face[id] = fid;
                    darts.push(d);
                    d = self.next_dart(d.0, d.1);
                    if d == start {
                        break;
                    }
                }
                self.faces.push(Face { darts });
            }
        }
    }

    fn check_euler(&self) -> Result<()> {
        let (comp, count) = self.graph.components();
        let mut nv = vec![0i64; count];
        let mut ne = vec![0i64; count];
        let mut nf = vec![0i64; count];
        for v in 0..self.graph.n() {
            nv[comp[v]] += 1;
            ne[comp[v]] += self.graph.degree(v) as i64;
        }
        for f in &self.faces {
            nf[comp[f.darts[0].0]] += 1;
        }
        for c in 0..count {
            if ne[c] == 0 {
                continue;
            }
            let chi = nv[c] - ne[c] / 2 + nf[c];
            if chi != 2 {
                return Err(Error::InvalidEmbedding(format!(
                    "rotation system is not planar: V - E + F = {chi} on a component"
                )));
            }
        }
        Ok(())
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    /// Faces in tracing order: vertices by id, darts of each vertex in
    /// rotation order, a new face at each unvisited dart.
    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face_of_dart(&self, u: usize, v: usize) -> Option<usize> {
        self.dart_id(u, v).map(|id| self.dart_face[id])
    }

    pub fn outer_face(&self) -> usize {
        self.outer_face.expect("plane graph with edges has an outer face")
    }

    pub fn inner_faces(&self) -> impl Iterator<Item = (usize, &Face)> + '_ {
        let outer = self.outer_face;
        self.faces.iter().enumerate().filter(move |(i, _)| Some(*i) != outer)
    }

    /// Vertex sequence of the outer face, which must be a simple cycle.
    pub fn outer_cycle(&self) -> Result<Vec<usize>> {
        let f = &self.faces[self.outer_face()];
        if !f.is_simple_cycle() {
            return Err(Error::Precondition("outer face is not bounded by a cycle".into()));
        }
        Ok(f.vertices())
    }

    pub(crate) fn set_outer_dart(&mut self, u: usize, v: usize) -> Result<()> {
        self.outer_face = Some(
            self.face_of_dart(u, v)
                .ok_or_else(|| Error::InvalidEmbedding(format!("no dart {u}->{v}")))?,
        );
        Ok(())
    }

    /// Whether edge `{u,v}` was added by a triangulation step.
    pub fn is_synthetic(&self, u: usize, v: usize) -> bool {
        self.synthetic.contains(&norm(u, v))
    }

    pub fn synthetic_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.synthetic
    }

    /// Same embedding restricted to the edges accepted by `keep`. The outer
    /// face is the face containing the old outer face's first dart, which
    /// therefore must be kept.
    pub fn restrict_edges(&self, keep: impl Fn(usize, usize) -> bool) -> Result<PlaneGraph> {
        let outer_dart = self.faces[self.outer_face()].darts[0];
        self.restrict_edges_with_outer(keep, outer_dart)
    }

    /// Restriction to the accepted edges whose outer face is the face left of
    /// `outer_dart`.
    pub fn restrict_edges_with_outer(
        &self,
        keep: impl Fn(usize, usize) -> bool,
        outer_dart: (usize, usize),
    ) -> Result<PlaneGraph> {
        let mut b = GraphBuilder::new(self.graph.n());
        for (u, v) in self.graph.edges() {
            if keep(u, v) {
                b.add_edge(u, v)?;
            }
        }
        let g = b.build();
        let rotation = self
            .rotation
            .iter()
            .enumerate()
            .map(|(u, rot)| rot.iter().copied().filter(|&v| g.has_edge(u, v)).collect())
            .collect();
        let synthetic = self
            .synthetic
            .iter()
            .copied()
            .filter(|&(u, v)| g.has_edge(u, v))
            .collect();
        if !g.has_edge(outer_dart.0, outer_dart.1) {
            return Err(Error::InvalidArgument("restriction removes the outer face marker".into()));
        }
        let mut pg = Self::assemble(g, rotation, synthetic)?;
        pg.outer_face = pg.face_of_dart(outer_dart.0, outer_dart.1);
        Ok(pg)
    }

    /// Fan-triangulates every inner face from its least-id vertex. When a
    /// fan chord already exists elsewhere in the embedding, the next vertex
    /// of the face (by id) is tried; as a last resort ears are clipped one
    /// at a time. Added edges are recorded as synthetic.
    pub fn triangulate_inner_faces(&self) -> Result<PlaneGraph> {
        for (fid, f) in self.faces.iter().enumerate() {
            if !f.is_simple_cycle() {
                return Err(Error::FacesNotCycles(fid));
            }
        }
        let mut b = GraphBuilder::from(&self.graph);
        let mut rot = self.rotation.clone();
        let mut synthetic = self.synthetic.clone();
        for (_, f) in self.inner_faces() {
            let poly = f.vertices();
            if poly.len() > 3 {
                triangulate_polygon(poly, &mut b, &mut rot, &mut synthetic)?;
            }
        }
        let outer_dart = self.faces[self.outer_face()].darts[0];
        let mut pg = Self::assemble(b.build(), rot, synthetic)?;
        pg.outer_face = pg.face_of_dart(outer_dart.0, outer_dart.1);
        Ok(pg)
    }

    /// True when every inner face is a triangle and the outer face a cycle.
    pub fn is_near_triangulation(&self) -> bool {
        self.faces[self.outer_face()].is_simple_cycle()
            && self.inner_faces().all(|(_, f)| f.is_simple_cycle() && f.len() == 3)
    }
}

fn insert_after(rot: &mut Vec<usize>, after: usize, new: usize) {
    let i = rot.iter().position(|&w| w == after).expect("corner exists");
    rot.insert(i + 1, new);
}

/// Adds chord `poly[i] -- poly[j]` inside the face traced by `poly`.
fn add_chord(
    poly: &[usize],
    i: usize,
    j: usize,
    b: &mut GraphBuilder,
    rot: &mut [Vec<usize>],
    synthetic: &mut BTreeSet<(usize, usize)>,
) -> Result<()> {
    let k = poly.len();
    let (x, y) = (poly[i], poly[j]);
    let px = poly[(i + k - 1) % k];
    let py = poly[(j + k - 1) % k];
    if !b.add_edge(x, y)? {
        return Err(Error::InvariantBroken(format!("chord {{{x},{y}}} already present")));
    }
    insert_after(&mut rot[x], px, y);
    insert_after(&mut rot[y], py, x);
    synthetic.insert(norm(x, y));
    Ok(())
}

fn triangulate_polygon(
    mut poly: Vec<usize>,
    b: &mut GraphBuilder,
    rot: &mut [Vec<usize>],
    synthetic: &mut BTreeSet<(usize, usize)>,
) -> Result<()> {
    let k = poly.len();
    let mut by_id: Vec<usize> = (0..k).collect();
    by_id.sort_by_key(|&i| poly[i]);
    let center = by_id.into_iter().find(|&c| {
        (2..k - 1).all(|s| !b.has_edge(poly[c], poly[(c + s) % k]))
    });
    if let Some(c) = center {
        poly.rotate_left(c);
        // Fan from poly[0]: repeatedly clip the ear poly[0], poly[1], poly[2].
        while poly.len() > 3 {
            add_chord(&poly, 0, 2, b, rot, synthetic)?;
            poly.remove(1);
        }
        return Ok(());
    }
    while poly.len() > 3 {
        let k = poly.len();
        let i = (0..k)
            .find(|&i| !b.has_edge(poly[i], poly[(i + 2) % k]))
            .ok_or_else(|| Error::InvariantBroken("no chord available to clip an ear".into()))?;
        add_chord(&poly, i, (i + 2) % k, b, rot, synthetic)?;
        poly.remove((i + 1) % k);
    }
    Ok(())
}
