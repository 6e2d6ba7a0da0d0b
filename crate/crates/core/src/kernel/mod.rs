//! Value types: tuples, relations and partial functions over `{0..k-1}`.

mod bits;
mod function;
mod relation;
pub mod tuple;

pub use bits::Bits;
pub use function::{PartialFn, PartialUnaryFn};
pub use relation::{Relation, RelationJson, MAX_TUPLE_SPACE};
pub use tuple::{beta, beta_below, image_size, tuple_rank, tuple_unrank, Domain};

/// `f <= g` for n-ary partial functions.
pub fn subfunction_of(f: &PartialFn, g: &PartialFn) -> crate::Result<bool> {
    f.subfunction_of(g)
}
