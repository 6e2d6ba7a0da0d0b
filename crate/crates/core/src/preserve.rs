//! Deciding whether a partial function preserves a relation.
//!
//! `f` preserves `rho` when every matrix whose columns lie in `rho` and
//! whose rows lie in `dom(f)` is sent, row by row, to a tuple of `rho`.
//! A failed check carries the offending matrix so that callers can replay
//! it against the definition.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::tuple::{for_each_tuple, power, rank_unchecked};
use crate::kernel::{Bits, PartialFn, PartialUnaryFn, Relation};

/// Largest `k` for which [`ppol1`] enumerates all `(k+1)^k` unary partial functions.
pub const PPOL1_MAX_K: usize = 7;

/// A matrix certifying that `f` does not preserve `rho`: all columns are in
/// `rho`, all rows are in `dom(f)`, and the row images are not in `rho`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// The `h` rows, each an `n`-tuple of `dom(f)`.
    pub rows: Vec<Vec<usize>>,
    /// `(f(rows[0]), ..., f(rows[h-1]))`, which is not in `rho`.
    pub image: Vec<usize>,
}

impl Violation {
    pub fn column(&self, j: usize) -> Vec<usize> {
        self.rows.iter().map(|r| r[j]).collect()
    }

    /// For unary functions the single column is the tuple `u` with
    /// `f(u)` outside the relation.
    pub fn tuple(&self) -> Vec<usize> {
        self.column(0)
    }

    /// Re-checks the certificate directly against the definition.
    pub fn replay(&self, f: &PartialFn, rho: &Relation) -> bool {
        if self.rows.len() != rho.arity() || f.k() != rho.k() {
            return false;
        }
        let image: Option<Vec<usize>> = self.rows.iter().map(|r| f.eval(r)).collect();
        let Some(image) = image else { return false };
        image == self.image
            && !rho.contains(&image)
            && (0..f.arity()).all(|j| rho.contains(&self.column(j)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationVerdict {
    /// `None` exactly when the relation is preserved.
    pub certificate: Option<Violation>,
}

impl PreservationVerdict {
    pub const PRESERVED: PreservationVerdict = PreservationVerdict { certificate: None };

    #[inline]
    pub fn preserved(&self) -> bool {
        self.certificate.is_none()
    }
}

fn same_domain(fk: usize, rho: &Relation) -> Result<()> {
    if fk != rho.k() {
        return Err(Error::DomainMismatch {
            left: fk,
            right: rho.k(),
        });
    }
    Ok(())
}

/// Unary preservation: every `u` in `rho` with entries in `dom(f)` must map
/// to a member of `rho`.
///
/// Only tuples over `dom(f)` are inspected, either by walking `dom(f)^h`
/// or the members of `rho`, whichever is smaller. The certificate is the
/// lexicographically least offending `u`.
pub fn unary_preserves(f: &PartialUnaryFn, rho: &Relation) -> Result<PreservationVerdict> {
    same_domain(f.k(), rho)?;
    let k = rho.k();
    let h = rho.arity();
    let dom = f.domain();
    let local = power(dom.len(), h).unwrap_or(usize::MAX);

    let mut offending: Option<Vec<usize>> = None;
    let mut check = |u: &[usize]| -> bool {
        let img_rank = u.iter().fold(0, |r, &x| r * k + f.apply(x).unwrap());
        if rho.contains_rank(img_rank) {
            true
        } else {
            offending = Some(u.to_vec());
            false
        }
    };
    if local <= rho.len() {
        for_each_tuple(&dom, h, |u| {
            !rho.contains_rank(rank_unchecked(u, k)) || check(u)
        });
    } else {
        for u in rho.tuples() {
            if u.iter().all(|&x| f.apply(x).is_some()) && !check(&u) {
                break;
            }
        }
    }
    Ok(match offending {
        None => PreservationVerdict::PRESERVED,
        Some(u) => {
            let image = f.apply_tuple(&u).unwrap();
            PreservationVerdict {
                certificate: Some(Violation {
                    rows: u.into_iter().map(|x| vec![x]).collect(),
                    image,
                }),
            }
        }
    })
}

/// Prefix tables for a relation and its complement, reusable across many
/// preservation checks against the same relation.
pub struct RelationIndex<'a> {
    rho: &'a Relation,
    // member_prefix[i] holds the rank of every length-i prefix of a member.
    member_prefix: Vec<Bits>,
    nonmember_prefix: Vec<Bits>,
}

impl<'a> RelationIndex<'a> {
    pub fn new(rho: &'a Relation) -> Self {
        let fold = |top: Bits| {
            let k = rho.k();
            let mut levels = vec![top];
            for _ in 0..rho.arity() {
                let above = levels.last().unwrap();
                let mut below = Bits::new(above.len() / k);
                for r in above.iter() {
                    below.insert(r / k);
                }
                levels.push(below);
            }
            levels.reverse();
            levels
        };
        RelationIndex {
            rho,
            member_prefix: fold(rho.mask().clone()),
            nonmember_prefix: fold(rho.mask().complement()),
        }
    }

    pub fn relation(&self) -> &Relation {
        self.rho
    }

    /// General preservation; see [`preserves`].
    pub fn preserves(&self, f: &PartialFn) -> Result<PreservationVerdict> {
        let rho = self.rho;
        same_domain(f.k(), rho)?;
        let (k, h, n) = (rho.k(), rho.arity(), f.arity());
        let rows: Vec<(&[usize], usize)> = f.entries().collect();
        if rows.is_empty() || rho.is_empty() || self.nonmember_prefix[0].is_empty() {
            return Ok(PreservationVerdict::PRESERVED);
        }

        // col[d * n + j]: rank of the length-d prefix of column j.
        let mut col = vec![0usize; (h + 1) * n];
        let mut img = vec![0usize; h + 1];
        let mut choice = vec![0usize; h];
        let mut depth = 0usize;
        loop {
            if choice[depth] == rows.len() {
                if depth == 0 {
                    return Ok(PreservationVerdict::PRESERVED);
                }
                choice[depth] = 0;
                depth -= 1;
                choice[depth] += 1;
                continue;
            }
            let (row, value) = rows[choice[depth]];
            let next_img = img[depth] * k + value;
            let ok = self.nonmember_prefix[depth + 1].contains(next_img)
                && (0..n).all(|j| {
                    let c = col[depth * n + j] * k + row[j];
                    col[(depth + 1) * n + j] = c;
                    self.member_prefix[depth + 1].contains(c)
                });
            if !ok {
                choice[depth] += 1;
                continue;
            }
            img[depth + 1] = next_img;
            if depth + 1 == h {
                let rows_out: Vec<Vec<usize>> =
                    choice.iter().map(|&c| rows[c].0.to_vec()).collect();
                let image = choice.iter().map(|&c| rows[c].1).collect();
                return Ok(PreservationVerdict {
                    certificate: Some(Violation {
                        rows: rows_out,
                        image,
                    }),
                });
            }
            depth += 1;
        }
    }
}

/// Decides `f ∈ pPol(rho)` for an `n`-ary partial function.
///
/// Rows are chosen from `dom(f)` depth first, pruning as soon as some
/// column prefix is not a prefix of a member of `rho` or the image prefix
/// is not a prefix of a non-member. The certificate is the
/// lexicographically least violating matrix read row by row.
pub fn preserves(f: &PartialFn, rho: &Relation) -> Result<PreservationVerdict> {
    RelationIndex::new(rho).preserves(f)
}

/// Reference check enumerating `n`-tuples of member columns in rank order,
/// keeping those whose rows all lie in `dom(f)`. Exponential in the arity
/// of `f`; meant for cross-checking [`preserves`] on small inputs.
pub fn preserves_by_columns(f: &PartialFn, rho: &Relation) -> Result<PreservationVerdict> {
    same_domain(f.k(), rho)?;
    let members: Vec<Vec<usize>> = rho.tuples().collect();
    let idx: Vec<usize> = (0..members.len()).collect();
    let h = rho.arity();
    let mut found = None;
    for_each_tuple(&idx, f.arity(), |cols| {
        let rows: Vec<Vec<usize>> = (0..h)
            .map(|i| cols.iter().map(|&c| members[c][i]).collect())
            .collect();
        let image: Option<Vec<usize>> = rows.iter().map(|r| f.eval(r)).collect();
        match image {
            Some(image) if !rho.contains(&image) => {
                found = Some(Violation { rows, image });
                false
            }
            _ => true,
        }
    });
    Ok(PreservationVerdict { certificate: found })
}

/// `pPol^(1)(rho)`: every unary partial function preserving `rho`, in the
/// order of [`PartialUnaryFn::all`].
pub fn ppol1(rho: &Relation) -> Result<Vec<PartialUnaryFn>> {
    if rho.k() > PPOL1_MAX_K {
        return Err(Error::Capacity {
            what: format!("enumerating unary partial functions on k = {}", rho.k()),
            limit: format!("k <= {PPOL1_MAX_K}"),
        });
    }
    let mut out = Vec::new();
    for f in PartialUnaryFn::all(rho.k()) {
        if unary_preserves(&f, rho)?.preserved() {
            out.push(f);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leq() -> Relation {
        Relation::from_tuples(2, 2, [[0, 0], [0, 1], [1, 1]]).unwrap()
    }

    fn neg() -> PartialUnaryFn {
        PartialUnaryFn::from_pairs(2, &[(0, 1), (1, 0)]).unwrap()
    }

    #[test]
    fn constant_preserves_leq() {
        let one = PartialUnaryFn::constant(2, 1).unwrap();
        assert!(unary_preserves(&one, &leq()).unwrap().preserved());
    }

    #[test]
    fn negation_breaks_leq() {
        let v = unary_preserves(&neg(), &leq()).unwrap();
        let cert = v.certificate.unwrap();
        assert_eq!(cert.tuple(), vec![0, 1]);
        assert_eq!(cert.image, vec![1, 0]);
        assert!(cert.replay(&neg().to_nary(), &leq()));
    }

    #[test]
    fn subidentities_preserve_everything() {
        for rank in 1..16 {
            let rho = Relation::from_relation_rank(2, 2, rank).unwrap();
            for f in PartialUnaryFn::all(2).filter(|f| f.is_below_identity()) {
                assert!(unary_preserves(&f, &rho).unwrap().preserved());
            }
        }
    }

    #[test]
    fn domain_mismatch() {
        let f = PartialUnaryFn::identity(3).unwrap();
        assert!(matches!(
            unary_preserves(&f, &leq()),
            Err(Error::DomainMismatch { .. })
        ));
        assert!(preserves(&f.to_nary(), &leq()).is_err());
    }

    #[test]
    fn projections_preserve_everything() {
        for rank in 0..256 {
            let rho = Relation::from_relation_rank(2, 3, rank).unwrap();
            for n in 1..=3 {
                for i in 0..n {
                    let e = PartialFn::projection(2, n, i).unwrap();
                    assert!(preserves(&e, &rho).unwrap().preserved());
                }
            }
        }
    }

    #[test]
    fn ppol1_examples() {
        assert_eq!(ppol1(&Relation::full(2, 2).unwrap()).unwrap().len(), 9);
        let p = ppol1(&leq()).unwrap();
        assert_eq!(p.len(), 8);
        assert!(!p.contains(&neg()));
        let diag = Relation::diagonal(2, 2).unwrap();
        assert!(ppol1(&diag).unwrap().contains(&neg()));
        assert!(matches!(
            ppol1(&Relation::full(8, 1).unwrap()),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn general_path_certificate_replays() {
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
        let v = preserves(&xor, &leq()).unwrap();
        let cert = v.certificate.expect("xor does not preserve <=");
        assert!(cert.replay(&xor, &leq()));
        // lexicographically least violating matrix, row-major
        assert_eq!(cert.rows, vec![vec![0, 1], vec![1, 1]]);
    }
}
