//! Exact neighbourhood-complexity tooling for sparse graphs.
//!
//! The crate computes capped distance profiles and neighbourhood traces,
//! builds and validates guarding families (from tree decompositions, weak
//! reachability orders and product coordinates), runs plane-graph procedures
//! (cutting along a tree, Sperner search, tripod decompositions, sparse
//! covers), generates lower-bound families, and measures VC and metric
//! dimension against closed-form bounds.

pub mod analysis;
pub mod error;
pub mod generators;
pub mod graph;
pub mod guarding;
pub mod io;
pub mod planar;
pub mod plane;
pub mod profiles;

pub use error::{Error, Result};
pub use graph::{Graph, GraphBuilder, RootedForest, INF};
pub use plane::{Face, PlaneGraph};
