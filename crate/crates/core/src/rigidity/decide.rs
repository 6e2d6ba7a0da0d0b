use std::collections::HashSet;

use rayon::prelude::*;

use super::{check_ell, omega_member, FailingSide, RigidityReport};
use crate::error::{Error, Result};
use crate::kernel::tuple::{
    combinations, for_each_tuple, image, injective_tuples, kernel, power, rank_unchecked,
    set_partitions,
};
use crate::kernel::{PartialUnaryFn, Relation};
use crate::preserve::ppol1;

/// Largest `k` accepted by [`brute_force_rigidity`].
pub const BRUTE_FORCE_MAX_K: usize = 5;

fn nonempty(rho: &Relation) -> Result<()> {
    if rho.is_empty() {
        return Err(Error::EmptyRelation);
    }
    Ok(())
}

/// Checks `Ω_<ell(k) ⊆ pPol^(1)(rho)` one member tuple at a time.
///
/// For `u` in `rho` it suffices to try every map `g` from `img(u)` into
/// `{0..k-1}` with fewer than `ell` image points; `g∘u` depends only on the
/// kernel of `u` and on how `g` merges and labels its classes, so tuples
/// sharing a kernel are checked once. Subfunctions of the identity
/// preserve everything and need no check. For `ell = 2` this amounts to
/// the diagonal being contained in `rho`.
pub fn omega_contained(rho: &Relation, ell: usize) -> Result<RigidityReport> {
    nonempty(rho)?;
    let k = rho.k();
    check_ell(k, ell)?;
    if ell == 1 {
        return Ok(RigidityReport::holds(ell));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut labels_by_blocks: Vec<Vec<Vec<usize>>> = vec![Vec::new(); ell];
    for b in 1..ell {
        labels_by_blocks[b] = injective_tuples(k, b);
    }
    let mut w = vec![0usize; rho.arity()];
    for u in rho.tuples() {
        if !seen.insert(kernel(&u)) {
            continue;
        }
        let vals = image(&u);
        let pos: Vec<usize> = u.iter().map(|x| vals.binary_search(x).unwrap()).collect();
        for blocks in 1..ell.min(vals.len() + 1) {
            for part in set_partitions(vals.len(), blocks) {
                for labels in &labels_by_blocks[blocks] {
                    for (slot, &p) in w.iter_mut().zip(&pos) {
                        *slot = labels[part[p]];
                    }
                    if !rho.contains_rank(rank_unchecked(&w, k)) {
                        let pairs: Vec<(usize, usize)> = vals
                            .iter()
                            .enumerate()
                            .map(|(j, &x)| (x, labels[part[j]]))
                            .collect();
                        let g = PartialUnaryFn::from_pairs(k, &pairs)?;
                        return Ok(RigidityReport::fails(ell, FailingSide::OmegaContainment, g));
                    }
                }
            }
        }
    }
    Ok(RigidityReport::holds(ell))
}

/// The first member of `Ψ_ell(k)` preserving `rho`, scanning domains in
/// lexicographic order and, within a domain, values in lexicographic order.
fn first_preserving_psi(rho: &Relation, ell: usize) -> Option<PartialUnaryFn> {
    let (k, h) = (rho.k(), rho.arity());
    let values = injective_tuples(k, ell);
    let pattern_count = power(ell, h).expect("pattern space fits in memory");
    let weights: Vec<usize> = (0..h).map(|i| power(k, h - 1 - i).unwrap()).collect();

    combinations(k, ell).into_par_iter().find_map_first(|dom| {
        // members of rho inside dom^h, as index patterns over dom
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut pat = vec![0usize; h];
        for r in 0..pattern_count {
            crate::kernel::tuple::unrank_into(r, ell, &mut pat);
            let rank: usize = pat.iter().zip(&weights).map(|(&p, &w)| dom[p] * w).sum();
            if rho.contains_rank(rank) {
                members.push(pat.clone());
            }
        }
        values.iter().find_map(|v| {
            if *v == dom {
                return None;
            }
            let preserves = members.iter().all(|p| {
                let rank: usize = p.iter().zip(&weights).map(|(&i, &w)| v[i] * w).sum();
                rho.contains_rank(rank)
            });
            preserves.then(|| {
                let pairs: Vec<(usize, usize)> =
                    dom.iter().copied().zip(v.iter().copied()).collect();
                PartialUnaryFn::from_pairs(k, &pairs).expect("valid map")
            })
        })
    })
}

/// Checks that no member of `Ψ_ell(k)` preserves `rho`.
pub fn psi_excluded(rho: &Relation, ell: usize) -> Result<RigidityReport> {
    nonempty(rho)?;
    check_ell(rho.k(), ell)?;
    Ok(match first_preserving_psi(rho, ell) {
        Some(f) => RigidityReport::fails(ell, FailingSide::PsiExclusion, f),
        None => RigidityReport::holds(ell),
    })
}

/// Decides hereditary `ell`-rigidity: `Ω_<ell(k)` must preserve `rho` and
/// no member of `Ψ_ell(k)` may. The `Ω` condition is checked first.
///
/// For `ell = 1` the answer is always negative on `k >= 2`: a partial
/// constant with a one-point domain preserves every nonempty relation.
/// The report then names that function.
pub fn is_hereditarily_ell_rigid(rho: &Relation, ell: usize) -> Result<RigidityReport> {
    nonempty(rho)?;
    let k = rho.k();
    check_ell(k, ell)?;
    if ell == 1 {
        // a -> b with (a,...,a) outside rho if possible, else a = 0
        let a = (0..k)
            .find(|&a| !rho.contains(&vec![a; rho.arity()]))
            .unwrap_or(0);
        let b = if a == 0 { 1 } else { 0 };
        let f = PartialUnaryFn::from_pairs(k, &[(a, b)])?;
        return Ok(RigidityReport::fails(1, FailingSide::PsiExclusion, f));
    }
    let omega = omega_contained(rho, ell)?;
    if !omega.verdict {
        return Ok(omega);
    }
    psi_excluded(rho, ell)
}

/// `pPol^(1)(rho) = Ω_<ell(k)`, by enumerating every unary partial function.
pub fn brute_force_rigidity(rho: &Relation, ell: usize) -> Result<bool> {
    let k = rho.k();
    if k > BRUTE_FORCE_MAX_K {
        return Err(Error::Capacity {
            what: format!("brute-force rigidity on k = {k}"),
            limit: format!("k <= {BRUTE_FORCE_MAX_K}"),
        });
    }
    check_ell(k, ell)?;
    let preserving: HashSet<PartialUnaryFn> = ppol1(rho)?.into_iter().collect();
    Ok(PartialUnaryFn::all(k).all(|f| preserving.contains(&f) == omega_member(&f, ell)))
}

/// `rho ∪ Orb_<ell(rho)`: adds `x∘u` for every `u` in `rho` with fewer than
/// `ell` distinct entries and every map `x` defined on `img(u)`.
pub fn orbit_closure(rho: &Relation, ell: usize) -> Result<Relation> {
    nonempty(rho)?;
    let k = rho.k();
    let mut out = rho.clone();
    let all: Vec<usize> = (0..k).collect();
    let mut w = vec![0usize; rho.arity()];
    for u in rho.tuples() {
        let vals = image(&u);
        if vals.len() >= ell {
            continue;
        }
        let pos: Vec<usize> = u.iter().map(|x| vals.binary_search(x).unwrap()).collect();
        for_each_tuple(&all, vals.len(), |labels| {
            for (slot, &p) in w.iter_mut().zip(&pos) {
                *slot = labels[p];
            }
            out.insert(&w).expect("entries below k");
            true
        });
    }
    Ok(out)
}

/// Whether some `u` in `rho` has `img(u)` equal to `points`.
pub fn domain_realized(rho: &Relation, points: &[usize]) -> bool {
    let want = image(points);
    let mut found = false;
    for_each_tuple(&want, rho.arity(), |u| {
        if image(u).len() == want.len() && rho.contains(u) {
            found = true;
            return false;
        }
        true
    });
    found
}
