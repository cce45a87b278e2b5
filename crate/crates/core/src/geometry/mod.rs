//! Exact compact convex sets in R^d (d <= 3 for polytopes): Minkowski
//! arithmetic, support functions, excess and Hausdorff distance.

mod convex;
pub(crate) mod hull;
pub(crate) mod nearest;

pub use convex::{
    convex_hull_union, excess, hausdorff, minkowski_sum, point_distance, scalar_mul, ConvexSet, Direction,
};
pub use hull::Halfspace;
