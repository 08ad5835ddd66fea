//! Plane-graph procedures: cutting along a tree, Sperner search, tripod
//! decompositions and sparse covers.

mod cover;
mod cut;
mod sperner;
mod tripod;

pub use cover::{check_sparse_cover, sparse_cover_greedy, CoverReport, CoverViolation, SparseCover};
pub use cut::{cut_along_tree, steiner_tree_greedy, CutOpen, Tree};
pub use sperner::{rainbow_faces, sperner_find};
pub use tripod::{check_tripod_decomposition, tripod_decomposition, Tripod, TripodDecomposition, TripodReport};
