//! Rainbow faces in 3-coloured near-triangulations.

use crate::error::{Error, Result};
use crate::plane::PlaneGraph;

fn check_boundary(ng: &PlaneGraph, coloring: &[u8], paths: [&[usize]; 3]) -> Result<()> {
    let n = ng.graph().n();
    if coloring.len() != n {
        return Err(Error::InvalidArgument("one colour per vertex required".into()));
    }
    if let Some(v) = coloring.iter().position(|&c| !(1..=3).contains(&c)) {
        return Err(Error::InvalidArgument(format!("vertex {v} has colour outside 1..=3")));
    }
    if !ng.is_near_triangulation() {
        return Err(Error::Precondition("graph is not a near-triangulation".into()));
    }
    let outer = ng.outer_cycle()?;
    if paths.iter().any(|p| p.is_empty()) {
        return Err(Error::Precondition("boundary paths must be nonempty".into()));
    }
    let concat: Vec<usize> = paths.iter().flat_map(|p| p.iter().copied()).collect();
    let k = outer.len();
    let is_rotation = |seq: &[usize]| {
        seq.len() == k
            && (0..k).any(|s| (0..k).all(|i| seq[i] == outer[(s + i) % k]))
    };
    let mut rev = concat.clone();
    rev.reverse();
    if !is_rotation(&concat) && !is_rotation(&rev) {
        return Err(Error::Precondition(
            "boundary paths do not partition the outer cycle in order".into(),
        ));
    }
    for (i, p) in paths.iter().enumerate() {
        if let Some(&v) = p.iter().find(|&&v| coloring[v] as usize != i + 1) {
            return Err(Error::Precondition(format!(
                "boundary vertex {v} on path {} has colour {}",
                i + 1,
                coloring[v]
            )));
        }
    }
    Ok(())
}

fn rainbow(coloring: &[u8], tri: &[usize]) -> Option<(usize, usize, usize)> {
    let find = |c: u8| tri.iter().copied().find(|&v| coloring[v] == c);
    Some((find(1)?, find(2)?, find(3)?))
}

/// Every inner face whose three vertices carry colours 1, 2 and 3, as
/// `(x, y, z)` with those colours respectively.
pub fn rainbow_faces(ng: &PlaneGraph, coloring: &[u8]) -> Vec<(usize, usize, usize)> {
    ng.inner_faces()
        .filter(|(_, f)| f.len() == 3)
        .filter_map(|(_, f)| rainbow(coloring, &f.vertices()))
        .collect()
}

/// Finds a rainbow inner face by entering through the unique outer edge
/// coloured {1,2} and walking across {1,2}-edges.
pub fn sperner_find(ng: &PlaneGraph, coloring: &[u8], paths: [&[usize]; 3]) -> Result<(usize, usize, usize)> {
    check_boundary(ng, coloring, paths)?;
    let outer_id = ng.outer_face();
    let is_12 = |u: usize, v: usize| {
        let (a, b) = (coloring[u], coloring[v]);
        (a == 1 && b == 2) || (a == 2 && b == 1)
    };
    let door = ng.faces()[outer_id]
        .darts
        .iter()
        .copied()
        .find(|&(u, v)| is_12(u, v))
        .ok_or_else(|| Error::InvariantBroken("no boundary edge coloured {1,2}".into()))?;
    // The inner face on the door edge is left of the reversed dart.
    let mut dart = (door.1, door.0);
    for _ in 0..=ng.faces().len() {
        let f = ng.face_of_dart(dart.0, dart.1).expect("dart exists");
        if f == outer_id {
            return Err(Error::InvariantBroken("walk left through the outer face".into()));
        }
        let tri = ng.faces()[f].vertices();
        if let Some(found) = rainbow(coloring, &tri) {
            debug_assert!(rainbow_faces(ng, coloring).contains(&found));
            return Ok(found);
        }
        // Leave through the other {1,2} edge of this triangle.
        let exit = ng.faces()[f]
            .darts
            .iter()
            .copied()
            .find(|&(u, v)| is_12(u, v) && (u, v) != dart)
            .ok_or_else(|| Error::InvariantBroken("triangle without a second {1,2} edge".into()))?;
        dart = (exit.1, exit.0);
    }
    Err(Error::InvariantBroken("walk did not terminate".into()))
}
