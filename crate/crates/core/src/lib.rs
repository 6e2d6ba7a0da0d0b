//! Partial polymorphisms, hereditary rigidity and strongly rigid families of
//! relations on finite domains.
//!
//! The crate is organised bottom-up:
//!
//! - [`kernel`]: tuples, relations and partial functions on `k = {0..k-1}`.
//! - [`preserve`]: the preservation check and unary partial polymorphisms.
//! - [`rigidity`]: deciding hereditary `ℓ`-rigidity and computing trace maps.
//! - [`construct`]: building hereditarily rigid relations from antichains.
//! - [`strongrigid`]: the family `Δ_t^h` on `{0,1}` and its clone chain.
//!
//! ```
//! use rigidrel::kernel::Relation;
//! use rigidrel::rigidity::is_hereditarily_ell_rigid;
//!
//! let le = Relation::from_tuples(2, 2, [[0, 0], [0, 1], [1, 1]]).unwrap();
//! assert!(is_hereditarily_ell_rigid(&le, 2).unwrap().verdict);
//! ```

pub mod construct;
mod error;
pub mod kernel;
pub mod preserve;
pub mod rigidity;
pub mod strongrigid;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/relations.md")]
    mod relations {}
    #[doc = include_str!("../../../book/src/preservation.md")]
    mod preservation {}
    #[doc = include_str!("../../../book/src/rigidity.md")]
    mod rigidity {}
    #[doc = include_str!("../../../book/src/constructions.md")]
    mod constructions {}
    #[doc = include_str!("../../../book/src/strong-rigidity.md")]
    mod strong_rigidity {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
