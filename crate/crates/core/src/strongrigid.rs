//! Strong rigidity on `{0,1}`.
//!
//! `Δ_t^h` is the full `h`-ary relation on `{0,1}` minus the single tuple
//! `v_t^h = (1,...,1,0,...,0)` with `t` ones. The family
//! `F^(h) = {Δ_1^h, ..., Δ_{h-1}^h}` is preserved by every partial
//! projection and every partial constant, and the polymorphism clones of
//! `F^(2), F^(3), ...` descend strictly. Any nontrivial partial function
//! escapes some `F^(h)`, and [`witness_nontrivial`] produces the matrix
//! proving it. No finite family suffices: [`phi`] builds a nontrivial
//! function preserving every relation of smaller arity.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::tuple::power;
use crate::kernel::{PartialFn, Relation};
use crate::preserve::{preserves, RelationIndex};

/// Largest arity for which [`phi_preserves_all`] enumerates every relation.
pub const PHI_SWEEP_MAX_ARITY: usize = 4;
/// Largest arity cap for the exhaustive sweeps over partial functions.
pub const SWEEP_MAX_ARITY: usize = 3;

/// `v_t^h`: `t` ones followed by `h - t` zeros.
pub fn v_tuple(t: usize, h: usize) -> Vec<usize> {
    (0..h).map(|i| usize::from(i < t)).collect()
}

fn check_delta_range(t: usize, h: usize) -> Result<()> {
    if h < 2 || t == 0 || t >= h {
        return Err(Error::InvalidArgument(format!(
            "delta needs 1 <= t < h and h >= 2, got t = {t}, h = {h}"
        )));
    }
    Ok(())
}

/// `Δ_t^h = {0,1}^h \ {v_t^h}`.
pub fn delta(t: usize, h: usize) -> Result<Relation> {
    check_delta_range(t, h)?;
    let mut r = Relation::full(2, h)?;
    r.remove(&v_tuple(t, h))?;
    Ok(r)
}

/// `F^(h) = [Δ_1^h, ..., Δ_{h-1}^h]`.
pub fn family_f(h: usize) -> Result<Vec<Relation>> {
    if h < 2 {
        return Err(Error::InvalidArgument(format!(
            "F^(h) needs h >= 2, got {h}"
        )));
    }
    (1..h).map(|t| delta(t, h)).collect()
}

/// The `n`-ary partial function with domain rows
/// `(0,1,1,...,1), (0,1,0,...,0), (0,0,1,0,...,0), ..., (0,...,0,1)`,
/// sending the first row to 1 and the others to 0.
///
/// It is neither a partial projection nor a partial constant, yet every
/// proper subfunction is a partial projection, so it preserves every
/// relation of arity below `n`.
pub fn phi(n: usize) -> Result<PartialFn> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "phi(n) needs n >= 3, got {n}"
        )));
    }
    let mut rows = Vec::with_capacity(n);
    let mut top = vec![1; n];
    top[0] = 0;
    rows.push((top, 1));
    for j in 1..n {
        let mut r = vec![0; n];
        r[j] = 1;
        rows.push((r, 0));
    }
    PartialFn::new(2, n, rows)
}

/// Checks `phi(n)` against every `h`-ary relation on `{0,1}` (all
/// `2^(2^h)` of them, the empty one included).
pub fn phi_preserves_all(n: usize, h: usize) -> Result<bool> {
    if h == 0 || h >= n {
        return Err(Error::InvalidArgument(format!(
            "need 1 <= h < n, got h = {h}, n = {n}"
        )));
    }
    if h > PHI_SWEEP_MAX_ARITY {
        return Err(Error::Capacity {
            what: format!("all relations of arity {h} on {{0,1}}"),
            limit: format!("arity <= {PHI_SWEEP_MAX_ARITY}"),
        });
    }
    let f = phi(n)?;
    let count: u64 = 1 << (1u32 << h);
    (0..count)
        .into_par_iter()
        .try_fold(
            || true,
            |acc, rank| -> Result<bool> {
                let rho = Relation::from_relation_rank(2, h, rank)?;
                Ok(acc && preserves(&f, &rho)?.preserved())
            },
        )
        .try_reduce(|| true, |a, b| Ok(a && b))
}

/// A matrix `N` whose rows are all of `dom(f)`, ordered so that
/// `f(N) = v_t^h`, with every column inside `Δ_t^h`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NontrivialityWitness {
    pub h: usize,
    pub t: usize,
    pub rows: Vec<Vec<usize>>,
}

impl NontrivialityWitness {
    /// `Δ_t^h`, the relation the witness violates.
    pub fn violated(&self) -> Result<Relation> {
        delta(self.t, self.h)
    }

    /// Replays the matrix against the preservation definition: every row in
    /// `dom(f)`, every column in `Δ_t^h`, and row images equal to `v_t^h`.
    pub fn replay(&self, f: &PartialFn) -> bool {
        let Ok(rel) = self.violated() else {
            return false;
        };
        if self.rows.len() != self.h || f.k() != 2 {
            return false;
        }
        let image: Option<Vec<usize>> = self.rows.iter().map(|r| f.eval(r)).collect();
        image.as_deref() == Some(&v_tuple(self.t, self.h)[..])
            && (0..f.arity()).all(|j| {
                let col: Vec<usize> = self.rows.iter().map(|r| r[j]).collect();
                rel.contains(&col)
            })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "h": self.h,
            "t": self.t,
            "rows": self.rows,
            "violated": format!("delta({},{})", self.t, self.h),
        })
    }
}

/// For a partial function on `{0,1}` that is neither a partial projection
/// nor a partial constant: lists the domain with the rows valued 1 first,
/// giving `h = |dom(f)|`, `t` = number of 1-values, and `f(N) = v_t^h`.
/// No column equals `v_t^h`, since otherwise `f` would be a projection.
pub fn witness_nontrivial(f: &PartialFn) -> Result<NontrivialityWitness> {
    if f.k() != 2 {
        return Err(Error::DomainMismatch {
            left: f.k(),
            right: 2,
        });
    }
    if f.is_trivial() {
        return Err(Error::NoWitness);
    }
    let ones = f
        .entries()
        .filter(|&(_, v)| v == 1)
        .map(|(a, _)| a.to_vec());
    let zeros = f
        .entries()
        .filter(|&(_, v)| v == 0)
        .map(|(a, _)| a.to_vec());
    let rows: Vec<Vec<usize>> = ones.chain(zeros).collect();
    let t = f.entries().filter(|&(_, v)| v == 1).count();
    let w = NontrivialityWitness {
        h: rows.len(),
        t,
        rows,
    };
    debug_assert!(w.replay(f));
    Ok(w)
}

/// `Δ_t^h = {(x_1..x_h) | (x_1..x_h, x_h) ∈ Δ_t^{h+1}}`.
pub fn delta_identifies_last_coordinates(t: usize, h: usize) -> Result<bool> {
    let small = delta(t, h)?;
    let big = delta(t, h + 1)?;
    let mut projected = Relation::empty(2, h)?;
    for x in Relation::full(2, h)?.tuples() {
        let mut y = x.clone();
        y.push(x[h - 1]);
        if big.contains(&y) {
            projected.insert(&x)?;
        }
    }
    Ok(projected == small)
}

/// Every partial function on `{0,1}` of arity `1..=arity_cap`.
pub fn partial_functions_up_to(arity_cap: usize) -> Result<Vec<PartialFn>> {
    check_arity_cap(arity_cap)?;
    let mut out = Vec::new();
    for n in 1..=arity_cap {
        out.extend(PartialFn::enumerate(2, n)?);
    }
    Ok(out)
}

fn check_arity_cap(arity_cap: usize) -> Result<()> {
    if arity_cap == 0 || arity_cap > SWEEP_MAX_ARITY {
        return Err(Error::Capacity {
            what: format!("sweep over partial functions of arity {arity_cap}"),
            limit: format!("1 <= arity_cap <= {SWEEP_MAX_ARITY}"),
        });
    }
    Ok(())
}

fn preserves_all(f: &PartialFn, family: &[RelationIndex<'_>]) -> Result<bool> {
    for idx in family {
        if !idx.preserves(f)?.preserved() {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainReport {
    pub h: usize,
    pub functions_checked: usize,
    /// Members of `pPol(F^(h+1))` seen in the sweep.
    pub upper_members: usize,
    /// Some member of `pPol(F^(h+1))` outside `pPol(F^(h))`.
    pub counterexample: Option<PartialFn>,
    /// `phi(h+1)` preserves `F^(h)` but not `F^(h+1)`.
    pub separator_ok: bool,
    pub holds: bool,
}

/// `pPol(F^(h+1)) ⊆ pPol(F^(h))` over all partial functions of arity at
/// most `arity_cap` with at most `dom_cap` domain rows, plus strictness
/// witnessed by `phi(h+1)`.
pub fn chain_inclusion(h: usize, arity_cap: usize, dom_cap: usize) -> Result<ChainReport> {
    check_arity_cap(arity_cap)?;
    if h < 2 {
        return Err(Error::InvalidArgument(format!(
            "chain needs h >= 2, got {h}"
        )));
    }
    let lower_rel = family_f(h)?;
    let upper_rel = family_f(h + 1)?;
    let lower: Vec<RelationIndex> = lower_rel.iter().map(RelationIndex::new).collect();
    let upper: Vec<RelationIndex> = upper_rel.iter().map(RelationIndex::new).collect();

    let fns: Vec<PartialFn> = partial_functions_up_to(arity_cap)?
        .into_iter()
        .filter(|f| f.domain_size() <= dom_cap)
        .collect();
    let outcomes: Vec<(bool, bool)> = fns
        .par_iter()
        .map(|f| Ok((preserves_all(f, &upper)?, preserves_all(f, &lower)?)))
        .collect::<Result<_>>()?;
    let upper_members = outcomes.iter().filter(|o| o.0).count();
    let counterexample = fns
        .iter()
        .zip(&outcomes)
        .find(|(_, &(up, low))| up && !low)
        .map(|(f, _)| f.clone());

    let sep = phi(h + 1)?;
    let separator_ok = preserves_all(&sep, &lower)? && !preserves_all(&sep, &upper)?;
    Ok(ChainReport {
        h,
        functions_checked: fns.len(),
        upper_members,
        holds: counterexample.is_none() && separator_ok,
        counterexample,
        separator_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LimitReport {
    pub arity_cap: usize,
    /// Largest `h` whose family `F^(h)` is tested, `2^arity_cap`.
    pub max_h: usize,
    pub functions_checked: usize,
    pub trivial: usize,
    /// Trivial iff preserving every `F^(h)` with `h <= max_h`.
    pub family_holds: bool,
    /// Trivial iff preserving every `Δ_n^{2n}` with `2n <= max_h`.
    pub subfamily_holds: bool,
    /// Every nontrivial function got a replayable witness with `h <= max_h`.
    pub witnesses_ok: bool,
    pub counterexample: Option<PartialFn>,
    pub holds: bool,
}

/// Over every partial function on `{0,1}` of arity at most `arity_cap`,
/// compares triviality with membership in `pPol(F^(h))` for all
/// `2 <= h <= 2^arity_cap`, and with membership in `pPol(Δ_n^{2n})` for all
/// `2n <= 2^arity_cap`.
///
/// Both sides are evaluated by direct preservation checks. Nontrivial
/// functions must in addition yield a witness that replays and whose arity
/// stays within the tested range.
pub fn limit_is_trivial_clone(arity_cap: usize) -> Result<LimitReport> {
    check_arity_cap(arity_cap)?;
    let max_h = power(2, 1 << arity_cap)
        .map(|_| 1usize << arity_cap)
        .unwrap();
    let family_rel: Vec<Relation> = (2..=max_h)
        .map(family_f)
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let sub_rel: Vec<Relation> = (1..=max_h / 2)
        .map(|n| delta(n, 2 * n))
        .collect::<Result<_>>()?;
    let family: Vec<RelationIndex> = family_rel.iter().map(RelationIndex::new).collect();
    let sub: Vec<RelationIndex> = sub_rel.iter().map(RelationIndex::new).collect();

    let fns = partial_functions_up_to(arity_cap)?;
    // (trivial, in family clone, in subfamily clone, witness ok)
    let rows: Vec<(bool, bool, bool, bool)> = fns
        .par_iter()
        .map(|f| {
            let trivial = f.is_trivial();
            let in_family = preserves_all(f, &family)?;
            let in_sub = preserves_all(f, &sub)?;
            let witness_ok =
                trivial || witness_nontrivial(f).is_ok_and(|w| w.h <= max_h && w.replay(f));
            Ok((trivial, in_family, in_sub, witness_ok))
        })
        .collect::<Result<_>>()?;

    let family_holds = rows.iter().all(|r| r.0 == r.1);
    let subfamily_holds = rows.iter().all(|r| r.0 == r.2);
    let witnesses_ok = rows.iter().all(|r| r.3);
    let counterexample = fns
        .iter()
        .zip(&rows)
        .find(|(_, r)| r.0 != r.1 || r.0 != r.2 || !r.3)
        .map(|(f, _)| f.clone());
    Ok(LimitReport {
        arity_cap,
        max_h,
        functions_checked: fns.len(),
        trivial: rows.iter().filter(|r| r.0).count(),
        family_holds,
        subfamily_holds,
        witnesses_ok,
        holds: family_holds && subfamily_holds && witnesses_ok,
        counterexample,
    })
}

/// For the finite family `F^(2) ∪ ... ∪ F^(h0)`: `phi(h0+1)` preserves all
/// of it, yet is nontrivial. Returns the witness certifying nontriviality,
/// or `None` if `phi(h0+1)` fails to preserve the family.
pub fn finite_family_escape(h0: usize) -> Result<Option<NontrivialityWitness>> {
    if h0 < 2 {
        return Err(Error::InvalidArgument(format!("need h0 >= 2, got {h0}")));
    }
    let f = phi(h0 + 1)?;
    for h in 2..=h0 {
        for rho in family_f(h)? {
            if !preserves(&f, &rho)?.preserved() {
                return Ok(None);
            }
        }
    }
    let w = witness_nontrivial(&f)?;
    Ok(w.replay(&f).then_some(w))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuples(r: &Relation) -> Vec<Vec<usize>> {
        r.tuples().collect()
    }

    #[test]
    fn delta_examples() {
        assert_eq!(
            tuples(&delta(1, 2).unwrap()),
            vec![vec![0, 0], vec![0, 1], vec![1, 1]]
        );
        let d = delta(2, 4).unwrap();
        assert_eq!(d.len(), 15);
        assert!(!d.contains(&[1, 1, 0, 0]));
        let f3 = family_f(3).unwrap();
        assert_eq!(f3.len(), 2);
        assert!(!f3[0].contains(&[1, 0, 0]) && f3[0].len() == 7);
        assert!(!f3[1].contains(&[1, 1, 0]) && f3[1].len() == 7);
        assert!(delta(0, 3).is_err() && delta(3, 3).is_err() && delta(1, 1).is_err());
    }

    #[test]
    fn delta_invariants() {
        for h in 2..=6 {
            for t in 1..h {
                let d = delta(t, h).unwrap();
                assert_eq!(d.len(), (1 << h) - 1);
                assert!(d.contains(&vec![0; h]) && d.contains(&vec![1; h]));
            }
        }
    }

    #[test]
    fn phi_three() {
        let f = phi(3).unwrap();
        let graph: Vec<(Vec<usize>, usize)> = f.entries().map(|(a, v)| (a.to_vec(), v)).collect();
        assert_eq!(
            graph,
            vec![(vec![0, 0, 1], 0), (vec![0, 1, 0], 0), (vec![0, 1, 1], 1)]
        );
        assert!(phi(2).is_err());
    }

    #[test]
    fn phi_nontrivial_but_proper_parts_are_projections() {
        for n in 3..=5 {
            let f = phi(n).unwrap();
            assert!(!f.is_trivial());
            let rows: Vec<Vec<usize>> = f.domain().map(|r| r.to_vec()).collect();
            for drop in &rows {
                let g = f.restrict(|a| a != drop.as_slice());
                assert!(g.is_partial_projection(), "n={n} dropping {drop:?}");
            }
        }
    }

    #[test]
    fn phi_breaks_delta_1_n() {
        for n in 3..=5 {
            assert!(!preserves(&phi(n).unwrap(), &delta(1, n).unwrap())
                .unwrap()
                .preserved());
        }
    }

    #[test]
    fn witness_examples() {
        let neg = PartialFn::new(2, 1, [(vec![0], 1), (vec![1], 0)]).unwrap();
        let w = witness_nontrivial(&neg).unwrap();
        assert_eq!((w.h, w.t), (2, 1));
        assert_eq!(w.rows, vec![vec![0], vec![1]]);
        assert!(w.replay(&neg));

        let xor = PartialFn::new(
            2,
            2,
            [
                (vec![0, 0], 0),
                (vec![0, 1], 1),
                (vec![1, 0], 1),
                (vec![1, 1], 0),
            ],
        )
        .unwrap();
        let w = witness_nontrivial(&xor).unwrap();
        assert_eq!((w.h, w.t), (4, 2));
        assert!(w.replay(&xor));
        let v = preserves(&xor, &delta(2, 4).unwrap()).unwrap();
        assert!(!v.preserved());

        let w = witness_nontrivial(&phi(3).unwrap()).unwrap();
        assert_eq!((w.h, w.t), (3, 1));
        assert_eq!(
            w.to_json(),
            serde_json::json!({"h": 3, "t": 1, "rows": [[0,1,1],[0,0,1],[0,1,0]], "violated": "delta(1,3)"})
        );

        let e = PartialFn::projection(2, 2, 1).unwrap();
        assert!(matches!(witness_nontrivial(&e), Err(Error::NoWitness)));
    }

    #[test]
    fn delta_last_coordinates_identified() {
        for h in 3..=5 {
            for t in 2..h {
                assert!(
                    delta_identifies_last_coordinates(t, h).unwrap(),
                    "t={t} h={h}"
                );
            }
        }
    }

    #[test]
    fn sweep_sizes() {
        assert_eq!(partial_functions_up_to(2).unwrap().len(), 90);
        assert_eq!(partial_functions_up_to(3).unwrap().len(), 6651);
        assert!(partial_functions_up_to(4).is_err());
    }

    #[test]
    fn chain_h2_small() {
        let r = chain_inclusion(2, 2, 4).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.functions_checked, 90);
    }

    #[test]
    fn limit_cap_two() {
        let r = limit_is_trivial_clone(2).unwrap();
        assert!(r.holds, "{r:?}");
        assert_eq!(r.functions_checked, 90);
    }

    #[test]
    fn escape_small() {
        let w = finite_family_escape(2).unwrap().unwrap();
        assert_eq!((w.h, w.t), (3, 1));
    }
}
