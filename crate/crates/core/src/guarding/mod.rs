//! Tree decompositions, weak reachability, guarding-family constructions and
//! their validators.
//!
//! An `(r, p)`-guarding family for `A` is a collection of vertex sets of
//! size at most `p` such that every vertex `v` within distance `r` of `A`
//! has a member `S` meeting every `(v, A)`-path of length at most `r`.

mod check;
mod construct;
mod product;
mod td;
mod wreach;

use serde::{Deserialize, Serialize};

pub use check::{check_covers_and_cuts, check_guarding, guards, CoversCutsReport, GuardVerdict};
pub use construct::{guarding_td, guarding_wcol, guarding_wcol_with_assignment};
pub use product::{guarding_product, guarding_product_pieces, ProductCoordinates};
pub use td::{order_from_td, validate_tree_decomposition, LinearOrder, TdViolation, TreeDecomposition};
pub use wreach::{wcol, wreach, wreach_all};

/// Candidate guarding family. Never trusted: pass it to [`check_guarding`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GuardingFamily {
    pub sets: Vec<Vec<usize>>,
    pub r: u32,
    /// Size cap every member respects.
    pub p: usize,
}

impl GuardingFamily {
    /// Sorts and dedups each set, then drops repeated sets keeping first
    /// occurrences.
    pub fn new(sets: Vec<Vec<usize>>, r: u32, p: usize) -> Self {
        let mut seen = std::collections::HashSet::new();
        let sets = sets
            .into_iter()
            .map(|mut s| {
                s.sort_unstable();
                s.dedup();
                s
            })
            .filter(|s| seen.insert(s.clone()))
            .collect();
        GuardingFamily { sets, r, p }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn max_member_size(&self) -> usize {
        self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Whether every member respects the size cap `p`.
    pub fn respects_cap(&self) -> bool {
        self.max_member_size() <= self.p
    }
}
