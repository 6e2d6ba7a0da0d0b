//! Deterministic constructors of hereditarily rigid relations.
//!
//! Both follow the same recipe: pick pairwise incomparable pattern sets
//! from a middle layer, spread them equivariantly over the injective
//! tuples, build `rho_T`, and run the decision procedure on the result
//! before handing it back.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::abstract_trace::AbstractTrace;
use super::antichain::{dual_2, middle_layer};
use super::counting::{ell_rigid_capacity, exists_2rigid, falling_factorial, two_rigid_capacity};
use crate::error::{Error, Result};
use crate::kernel::tuple::{combinations, permutations};
use crate::kernel::{Bits, Relation};
use crate::rigidity::{check_ell, is_hereditarily_ell_rigid, PatternSpace, TraceMap};

fn verified(trace: AbstractTrace, ell: usize) -> Result<Relation> {
    if !trace.is_strict_antichain() {
        return Err(Error::InvalidArgument(
            "constructed trace values are not pairwise incomparable".into(),
        ));
    }
    let rho = trace.to_relation()?;
    let report = is_hereditarily_ell_rigid(&rho, ell)?;
    if !report.verdict {
        return Err(Error::ConstructionFailed(Box::new(report)));
    }
    Ok(rho)
}

/// The equivariant trace used by [`construct_2rigid`].
///
/// Unordered pairs `a < b` are taken in lexicographic order. Each receives
/// the first middle-layer set `X` not yet used (its dual is then unused as
/// well), with `T(a,b) = X` and `T(b,a) = X^d`.
pub fn two_rigid_trace(k: usize, h: usize) -> Result<AbstractTrace> {
    if !exists_2rigid(k as u64, h as u32) {
        return Err(Error::BoundViolated {
            inequality: "k(k-1) <= C(2^h-2, 2^(h-1)-1)",
            lhs: falling_factorial(k as u64, 2).to_string(),
            rhs: two_rigid_capacity(h as u32).to_string(),
        });
    }
    let space = Arc::new(PatternSpace::new(2, h)?);
    let mut layer = middle_layer(space.len(), &[]);
    let mut used: HashSet<Bits> = HashSet::new();
    let mut assigned: HashMap<Vec<usize>, Bits> = HashMap::new();
    for pair in combinations(k, 2) {
        let x = loop {
            let x = layer.next().ok_or_else(|| Error::Capacity {
                what: "middle layer exhausted".into(),
                limit: two_rigid_capacity(h as u32).to_string(),
            })?;
            if !used.contains(&x) {
                break x;
            }
        };
        let d = dual_2(&space, &x);
        debug_assert!(d != x && !used.contains(&d));
        used.insert(x.clone());
        used.insert(d.clone());
        assigned.insert(vec![pair[0], pair[1]], x);
        assigned.insert(vec![pair[1], pair[0]], d);
    }
    let map = TraceMap::from_fn(k, space, |x| {
        assigned.remove(x).expect("every ordered pair assigned")
    })?;
    AbstractTrace::new(map)
}

/// An `h`-ary hereditarily 2-rigid relation on `k` points, verified by the
/// decision procedure. Fails when `k(k-1)` exceeds the middle binomial.
pub fn construct_2rigid(k: usize, h: usize) -> Result<Relation> {
    verified(two_rigid_trace(k, h)?, 2)
}

/// The equivariant trace used by [`construct_ellrigid`].
///
/// `y` is the least surjective pattern and `Y` its orbit under the
/// symmetric group. For each `ell`-subset `S` (lexicographic order), the
/// increasing tuple `x_S` takes the next middle-layer set `X` of the
/// patterns outside `Y` whose orbit is free and unused; then
/// `T(x_S∘π) = π⁻¹(X) ∪ {π⁻¹∘y}` for every permutation `π`.
pub fn ell_rigid_trace(k: usize, ell: usize, h: usize) -> Result<AbstractTrace> {
    if ell < 3 {
        return Err(Error::InvalidArgument(format!(
            "this construction needs ell >= 3, got {ell}"
        )));
    }
    if ell >= h {
        return Err(Error::InvalidArgument(format!(
            "this construction needs ell < h, got ell = {ell}, h = {h}"
        )));
    }
    check_ell(k, ell)?;
    let capacity = ell_rigid_capacity(ell as u64, h as u64);
    let needed = falling_factorial(k as u64, ell as u64);
    if needed > capacity {
        return Err(Error::BoundViolated {
            inequality: "k^(ell) <= C(s(h,ell)-ell!, floor((s(h,ell)-ell!)/2))",
            lhs: needed.to_string(),
            rhs: capacity.to_string(),
        });
    }

    let space = Arc::new(PatternSpace::new(ell, h)?);
    let perms = permutations(ell);
    let inverse = |pi: &[usize]| {
        let mut inv = vec![0; pi.len()];
        for (i, &p) in pi.iter().enumerate() {
            inv[p] = i;
        }
        inv
    };
    // y is pattern 0, the lexicographically least surjection
    let y_orbit: Vec<usize> = {
        let mut o: Vec<usize> = perms.iter().map(|pi| space.permute_index(pi, 0)).collect();
        o.sort_unstable();
        o.dedup();
        o
    };
    debug_assert_eq!(y_orbit.len(), perms.len());

    let mut layer = middle_layer(space.len(), &y_orbit);
    let mut used: HashSet<Bits> = HashSet::new();
    let mut assigned: HashMap<Vec<usize>, Bits> = HashMap::new();
    let mut orbits_taken = 0usize;
    for subset in combinations(k, ell) {
        let images = loop {
            let x = layer.next().ok_or_else(|| Error::Capacity {
                what: format!("middle layer ran out of free orbits after {orbits_taken}"),
                limit: capacity.to_string(),
            })?;
            if used.contains(&x) {
                continue;
            }
            let images: Vec<Bits> = perms.iter().map(|pi| space.act(&inverse(pi), &x)).collect();
            let distinct: HashSet<&Bits> = images.iter().collect();
            // a nontrivial stabilizer would make T_1 non-injective on the orbit
            if distinct.len() == perms.len() && images.iter().all(|m| !used.contains(m)) {
                break images;
            }
        };
        orbits_taken += 1;
        for (pi, t1) in perms.iter().zip(images) {
            used.insert(t1.clone());
            let key: Vec<usize> = pi.iter().map(|&j| subset[j]).collect();
            let mut t = t1;
            t.insert(space.permute_index(&inverse(pi), 0));
            assigned.insert(key, t);
        }
    }
    let map = TraceMap::from_fn(k, space, |x| {
        assigned.remove(x).expect("every injective tuple assigned")
    })?;
    AbstractTrace::new(map)
}

/// An `h`-ary hereditarily `ell`-rigid relation on `k` points for
/// `3 <= ell < h`, verified by the decision procedure.
pub fn construct_ellrigid(k: usize, ell: usize, h: usize) -> Result<Relation> {
    verified(ell_rigid_trace(k, ell, h)?, ell)
}
