//! Lower-bound families and seeded random instances.

mod lower_bounds;
mod random;

pub use lower_bounds::{
    coord_id, decode_coords, encode, lb_1planar, lb_treewidth, lb_treewidth_simple, LowerBoundInstance,
};
pub use random::{gen_grid_disk, gen_ktree_subgraph, gen_product, gen_random_plane, grid_td};
