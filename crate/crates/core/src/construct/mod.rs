//! Counting, antichains, and constructions of hereditarily rigid relations.

mod abstract_trace;
mod antichain;
mod build;
mod counting;

pub use abstract_trace::{rho_from_trace, AbstractTrace};
pub use antichain::{dual_2, is_antichain, middle_layer, IndexAntichain, MiddleLayer};
pub use build::{construct_2rigid, construct_ellrigid, ell_rigid_trace, two_rigid_trace};
pub use counting::{
    binomial, ell_rigid_bound_holds, ell_rigid_capacity, exists_2rigid, factorial,
    falling_factorial, max_k_2rigid, middle_binomial, r_bounds, sperner_bound_holds,
    surjection_count, two_rigid_capacity,
};
