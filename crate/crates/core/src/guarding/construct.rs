use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graph::{bfs_distances, Graph};

use super::td::{order_from_td, validate_tree_decomposition, LinearOrder, TreeDecomposition};
use super::wreach::wreach;
use super::GuardingFamily;

/// Guarding family from a tree decomposition of width at most `t`.
///
/// The decomposition is normalized first. With the order induced by the
/// decomposition, `A'` is the union of `WReach_r[a]` over `a ∈ A` and `B`
/// collects the top nodes of `A'`. Every bag of `B` with at most `t`
/// vertices is a member; a bag of size `t+1` contributes all of its
/// `t`-subsets. Here `t = max(width, 1)`.
pub fn guarding_td(
    g: &Graph,
    td: &TreeDecomposition,
    targets: &[usize],
    r: u32,
    max_width: Option<usize>,
) -> Result<GuardingFamily> {
    g.check_vertices(targets)?;
    validate_tree_decomposition(g, td).map_err(Error::InvalidTreeDecomposition)?;
    let width = td.width();
    if let Some(allowed) = max_width {
        if width > allowed {
            return Err(Error::WidthExceeded { width, allowed });
        }
    }
    let td = td.normalized();
    let t = width.max(1);
    let ord = order_from_td(g, &td)?;
    let top = td.top_nodes(g.n());

    let mut reach = BTreeSet::new();
    for &a in targets {
        reach.extend(wreach(g, &ord, r, a));
    }
    let nodes: BTreeSet<usize> = reach.iter().map(|&v| top[v].expect("validated")).collect();

    let mut sets = Vec::new();
    for z in nodes {
        let bag = td.bag(z);
        if bag.len() <= t {
            sets.push(bag.to_vec());
        } else {
            for skip in 0..bag.len() {
                sets.push(
                    bag.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
    }
    Ok(GuardingFamily::new(sets, r, t))
}

/// Guarding family from an arbitrary vertex order:
/// `B = ∪_{a∈A} WReach_r[a]` and one member `WReach_{2r}[w]` per `w ∈ B`.
pub fn guarding_wcol(g: &Graph, ord: &LinearOrder, targets: &[usize], r: u32) -> Result<GuardingFamily> {
    Ok(guarding_wcol_with_assignment(g, ord, targets, r)?.0)
}

/// As [`guarding_wcol`], also returning for every vertex `u` within
/// distance `r` of `A` the index of its designated guard: the member of
/// `φ(u)`, the order-maximum of `B ∩ WReach_r[u]`.
pub fn guarding_wcol_with_assignment(
    g: &Graph,
    ord: &LinearOrder,
    targets: &[usize],
    r: u32,
) -> Result<(GuardingFamily, Vec<(usize, usize)>)> {
    if ord.len() != g.n() {
        return Err(Error::InvalidArgument("order does not match the graph".into()));
    }
    if targets.is_empty() {
        return Err(Error::EmptyTargets);
    }
    g.check_vertices(targets)?;
    let mut in_b = vec![false; g.n()];
    for &a in targets {
        for v in wreach(g, ord, r, a) {
            in_b[v] = true;
        }
    }
    let b: Vec<usize> = (0..g.n()).filter(|&v| in_b[v]).collect();
    let mut index_of = vec![usize::MAX; g.n()];
    let mut sets = Vec::with_capacity(b.len());
    for (i, &w) in b.iter().enumerate() {
        index_of[w] = i;
        sets.push(wreach(g, ord, 2 * r, w));
    }
    let p = sets.iter().map(Vec::len).max().unwrap_or(0);

    let dist = bfs_distances(g, targets)?;
    let mut assignment = Vec::new();
    for u in 0..g.n() {
        if dist[u] > r {
            continue;
        }
        let phi = wreach(g, ord, r, u)
            .into_iter()
            .filter(|&v| in_b[v])
            .max_by_key(|&v| ord.position(v))
            .ok_or_else(|| {
                Error::InvariantBroken(format!("vertex {u} weakly reaches no vertex of B"))
            })?;
        assignment.push((u, index_of[phi]));
    }
    // Members are distinct by construction except when two WReach sets
    // coincide; keep indices aligned by not deduplicating.
    Ok((GuardingFamily { sets, r, p }, assignment))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::guarding::check::{check_guarding, guards, GuardVerdict};

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn path_td(n: usize) -> TreeDecomposition {
        let bags = (0..n - 1).map(|i| vec![i, i + 1]).collect();
        let parent = (0..n - 1).map(|i| i.checked_sub(1)).collect();
        TreeDecomposition::new(parent, bags).unwrap()
    }

    #[test]
    fn td_family_on_path() {
        let g = path(5);
        let td = path_td(5);
        let fam = guarding_td(&g, &td, &[0], 4, Some(1)).unwrap();
        assert!(fam.sets.iter().all(|s| s.len() <= 1));
        assert_eq!(check_guarding(&g, &[0], 4, &fam).unwrap(), GuardVerdict::Valid);
        let all: Vec<usize> = (0..5).collect();
        let fam = guarding_td(&g, &td, &all, 4, None).unwrap();
        assert_eq!(check_guarding(&g, &all, 4, &fam).unwrap(), GuardVerdict::Valid);
        let fam = guarding_td(&g, &td, &[2, 3], 0, None).unwrap();
        assert!(fam.sets.contains(&vec![2]) && fam.sets.contains(&vec![3]));
        assert!(matches!(
            guarding_td(&g, &TreeDecomposition::trivial((0..5).collect()), &[0], 1, Some(2)),
            Err(Error::WidthExceeded { width: 4, allowed: 2 })
        ));
    }

    #[test]
    fn wcol_family_on_path() {
        let g = path(5);
        let ord = LinearOrder::identity(5);
        let (fam, assign) = guarding_wcol_with_assignment(&g, &ord, &[4], 2).unwrap();
        assert_eq!(fam.len(), 3);
        assert_eq!(fam.sets[0], wreach(&g, &ord, 4, 2));
        assert_eq!(check_guarding(&g, &[4], 2, &fam).unwrap(), GuardVerdict::Valid);
        // Each designated guard works on its own.
        for (u, i) in assign {
            assert!(guards(&g, &[4], 2, &fam.sets[i], u).unwrap());
        }
        assert!(guarding_wcol(&g, &ord, &[], 2).is_err());
    }
}
