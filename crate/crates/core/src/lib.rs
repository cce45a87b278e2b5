//! Random compact convex sets, their embedding into function space via
//! support functions, the generalized Hukuhara difference, set-valued
//! distribution functions and a set-valued Brownian motion.
//!
//! ```
//! use setbm::{embed, gh_diff_interval, ConvexSet, DirectionGrid, GhCase};
//!
//! let a = ConvexSet::interval(0.0, 4.0).unwrap();
//! let b = ConvexSet::interval(1.0, 2.0).unwrap();
//! let d = gh_diff_interval(&a, &b).unwrap();
//! assert_eq!(d.case, GhCase::CaseI);
//! assert_eq!(d.value, Some(ConvexSet::interval(-1.0, 2.0).unwrap()));
//!
//! let grid = DirectionGrid::line();
//! assert_eq!(embed(&a, &grid).unwrap().values(), &[0.0, 4.0]);
//! ```

pub mod brownian;
pub mod distribution;
pub mod embedding;
pub mod error;
pub mod geometry;
pub mod hukuhara;
mod linalg;
pub mod rng;
pub mod stats;

pub use brownian::{simulate_bm, PathSet, ProcessPath, TimeGrid};
pub use distribution::{
    distribution_function, embedded_distribution_check, exponential_pair_analytic_f, exponential_pair_variable,
    DistributionEstimate, EmbeddedDistributionReport, SetRandomVariable,
};
pub use embedding::{embed, scaled_embed, DirectionGrid, EmbeddedElement, Evaluation};
pub use error::{Error, Result};
pub use geometry::{
    convex_hull_union, excess, hausdorff, minkowski_sum, point_distance, scalar_mul, ConvexSet, Direction,
};
pub use hukuhara::{check_gh_identities, gh_diff, gh_diff_interval, GhCase, GhResult, IdentityReport};
pub use stats::MomentReport;
