use crate::error::{Error, Result};
use crate::kernel::tuple::{injective_tuples, rank_unchecked, set_partitions};
use crate::kernel::Relation;
use crate::rigidity::{first_comparable_pair, TraceMap};

/// A trace assignment built without a relation, checked to be equivariant:
/// `T(x∘π) = π⁻¹(T(x))` for every permutation `π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractTrace(TraceMap);

impl AbstractTrace {
    pub fn new(map: TraceMap) -> Result<Self> {
        if let Some(x) = map.first_equivariance_failure() {
            return Err(Error::NotEquivariant(x));
        }
        Ok(AbstractTrace(map))
    }

    pub fn map(&self) -> &TraceMap {
        &self.0
    }

    pub fn into_map(self) -> TraceMap {
        self.0
    }

    pub fn is_injective(&self) -> bool {
        self.0.is_injective()
    }

    /// The values are pairwise incomparable and `T` is injective.
    pub fn is_strict_antichain(&self) -> bool {
        first_comparable_pair(&self.0).is_none()
    }

    pub fn to_relation(&self) -> Result<Relation> {
        rho_from_trace(&self.0)
    }
}

/// `rho_T`: every tuple with fewer than `ell` distinct entries, plus `x∘i`
/// for each key `x` and pattern `i ∈ T(x)`.
///
/// Rejects assignments that are not equivariant.
pub fn rho_from_trace(t: &TraceMap) -> Result<Relation> {
    if let Some(x) = t.first_equivariance_failure() {
        return Err(Error::NotEquivariant(x));
    }
    let (k, ell, h) = (t.k(), t.ell(), t.arity());
    let mut rho = Relation::empty(k, h)?;
    let mut w = vec![0usize; h];
    for blocks in 1..ell.min(h + 1) {
        let labelings = injective_tuples(k, blocks);
        for part in set_partitions(h, blocks) {
            for labels in &labelings {
                for (slot, &b) in w.iter_mut().zip(&part) {
                    *slot = labels[b];
                }
                rho.insert(&w)?;
            }
        }
    }
    let space = t.space();
    for (x, set) in t.keys().iter().zip(t.sets()) {
        for idx in set.iter() {
            for (slot, &i) in w.iter_mut().zip(space.pattern(idx)) {
                *slot = x[i];
            }
            debug_assert!(rank_unchecked(&w, k) < rho.tuple_space());
            rho.insert(&w)?;
        }
    }
    Ok(rho)
}
