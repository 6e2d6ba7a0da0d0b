//! Hereditary `ell`-rigidity.
//!
//! A relation `rho` on `{0..k-1}` is hereditarily `ell`-rigid when the unary
//! partial functions preserving it are exactly `Ω_<ell(k)`: the subfunctions
//! of the identity together with the maps whose image has fewer than `ell`
//! points. The decision procedure in [`is_hereditarily_ell_rigid`] checks
//! two conditions: every member of `Ω_<ell(k)` preserves `rho`, and no
//! member of `Ψ_ell(k)` does, where `Ψ_ell(k)` is the set of injective maps
//! with an `ell`-point domain that are not below the identity.
//!
//! [`brute_force_rigidity`] compares the full set `pPol^(1)(rho)` with
//! `Ω_<ell(k)` and serves as the oracle for the fast path at small `k`.

mod decide;
mod trace;

pub use decide::{
    brute_force_rigidity, domain_realized, is_hereditarily_ell_rigid, omega_contained,
    orbit_closure, psi_excluded, BRUTE_FORCE_MAX_K,
};
pub use trace::{
    f_arrow, first_comparable_pair, trace, trace_incomparability, PatternSpace, TraceMap,
};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::tuple::{combinations, injective_tuples};
use crate::kernel::{PartialUnaryFn, Relation};
use crate::preserve::unary_preserves;

/// `Ω_<ell(k)` as a membership predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaClass {
    k: usize,
    ell: usize,
}

impl OmegaClass {
    pub fn new(k: usize, ell: usize) -> Result<Self> {
        check_ell(k, ell)?;
        Ok(OmegaClass { k, ell })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn contains(&self, f: &PartialUnaryFn) -> bool {
        f.k() == self.k && omega_member(f, self.ell)
    }
}

pub(crate) fn check_ell(k: usize, ell: usize) -> Result<()> {
    if ell == 0 || ell > k {
        return Err(Error::EllOutOfRange { ell, k });
    }
    Ok(())
}

/// `f ∈ Ω_<ell`: `f <= id` or `|img(f)| < ell`.
pub fn omega_member(f: &PartialUnaryFn, ell: usize) -> bool {
    f.is_below_identity() || f.image_size() < ell
}

/// `f ∈ Ψ_ell`: injective, `|dom(f)| = ell`, and not below the identity.
pub fn psi_member(f: &PartialUnaryFn, ell: usize) -> bool {
    f.domain_size() == ell && f.is_injective() && !f.is_below_identity()
}

/// All of `Ψ_ell(k)`: domains in lexicographic order of their sorted
/// elements, then values in lexicographic order.
pub fn enumerate_psi(k: usize, ell: usize) -> Result<Vec<PartialUnaryFn>> {
    check_ell(k, ell)?;
    let values = injective_tuples(k, ell);
    let mut out = Vec::new();
    for dom in combinations(k, ell) {
        for v in &values {
            if *v == dom {
                continue;
            }
            let pairs: Vec<(usize, usize)> = dom.iter().copied().zip(v.iter().copied()).collect();
            out.push(PartialUnaryFn::from_pairs(k, &pairs)?);
        }
    }
    Ok(out)
}

/// Which of the two rigidity conditions failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailingSide {
    /// A member of `Ω_<ell(k)` does not preserve the relation.
    OmegaContainment,
    /// A member of `Ψ_ell(k)` preserves the relation.
    PsiExclusion,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RigidityReport {
    pub ell: usize,
    pub verdict: bool,
    pub failing_function: Option<PartialUnaryFn>,
    pub failing_side: Option<FailingSide>,
}

impl RigidityReport {
    pub(crate) fn holds(ell: usize) -> Self {
        RigidityReport {
            ell,
            verdict: true,
            failing_function: None,
            failing_side: None,
        }
    }

    pub(crate) fn fails(ell: usize, side: FailingSide, f: PartialUnaryFn) -> Self {
        RigidityReport {
            ell,
            verdict: false,
            failing_function: Some(f),
            failing_side: Some(side),
        }
    }

    /// Confirms a negative verdict by re-running the failing function
    /// through the preservation check. Positive verdicts replay trivially.
    pub fn replay(&self, rho: &Relation) -> bool {
        match (&self.failing_function, self.failing_side) {
            (None, None) => self.verdict,
            (Some(f), Some(FailingSide::OmegaContainment)) => {
                !self.verdict
                    && omega_member(f, self.ell)
                    && unary_preserves(f, rho).is_ok_and(|v| !v.preserved())
            }
            (Some(f), Some(FailingSide::PsiExclusion)) => {
                !self.verdict
                    && psi_member(f, self.ell)
                    && unary_preserves(f, rho).is_ok_and(|v| v.preserved())
            }
            _ => false,
        }
    }
}

impl std::fmt::Display for RigidityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (&self.failing_function, self.failing_side) {
            (Some(g), Some(FailingSide::OmegaContainment)) => {
                write!(
                    f,
                    "not {}-rigid: {g:?} is in Omega but does not preserve",
                    self.ell
                )
            }
            (Some(g), Some(FailingSide::PsiExclusion)) => {
                write!(f, "not {}-rigid: {g:?} is in Psi and preserves", self.ell)
            }
            _ => write!(f, "hereditarily {}-rigid", self.ell),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_examples() {
        assert!(omega_member(&PartialUnaryFn::identity(3).unwrap(), 2));
        assert!(omega_member(&PartialUnaryFn::constant(3, 0).unwrap(), 2));
        let neg = PartialUnaryFn::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(!omega_member(&neg, 2));
        assert!(OmegaClass::new(2, 3).is_err());
    }

    #[test]
    fn psi_examples() {
        let neg = PartialUnaryFn::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(enumerate_psi(2, 2).unwrap(), vec![neg]);
        assert_eq!(enumerate_psi(3, 2).unwrap().len(), 15);
        assert_eq!(
            enumerate_psi(2, 1).unwrap(),
            vec![
                PartialUnaryFn::from_pairs(2, &[(0, 1)]).unwrap(),
                PartialUnaryFn::from_pairs(2, &[(1, 0)]).unwrap()
            ]
        );
    }

    #[test]
    fn psi_cardinality() {
        for k in 2..=5usize {
            for ell in 1..=k {
                let binom = combinations(k, ell).len();
                let falling: usize = (k - ell + 1..=k).product();
                let all = enumerate_psi(k, ell).unwrap();
                assert_eq!(all.len(), binom * (falling - 1));
                assert!(all
                    .iter()
                    .all(|f| psi_member(f, ell) && !omega_member(f, ell)));
            }
        }
    }

    #[test]
    fn psi_is_domain_ell_complement_of_omega() {
        for k in 2..=4 {
            for ell in 1..=k {
                let psi = enumerate_psi(k, ell).unwrap();
                for f in PartialUnaryFn::all(k) {
                    let expect = f.domain_size() == ell && !omega_member(&f, ell);
                    assert_eq!(psi.contains(&f), expect);
                }
            }
        }
    }
}
