//! Trace maps: for each injective `ell`-tuple `x`, the set of surjective
//! index patterns `i` (h-tuples over `{0..ell-1}`) with `x∘i` in the relation.
//!
//! Index patterns are 0-based throughout.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kernel::tuple::{injective_tuples, is_injective, power, rank_unchecked, unrank_into};
use crate::kernel::{Bits, PartialUnaryFn, Relation};

/// Largest pattern space `ell^h` handled.
const MAX_PATTERN_SPACE: usize = 1 << 24;

/// The surjective `h`-tuples over `{0..ell-1}` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSpace {
    ell: usize,
    h: usize,
    patterns: Vec<Vec<usize>>,
    // rank in ell^h -> position in `patterns`
    position: Vec<u32>,
}

impl PatternSpace {
    pub fn new(ell: usize, h: usize) -> Result<Self> {
        if ell == 0 || h == 0 {
            return Err(Error::InvalidArgument(
                "pattern space needs ell, h >= 1".into(),
            ));
        }
        let size = power(ell, h)
            .filter(|&s| s <= MAX_PATTERN_SPACE)
            .ok_or_else(|| Error::Capacity {
                what: format!("pattern space {ell}^{h}"),
                limit: MAX_PATTERN_SPACE.to_string(),
            })?;
        let mut patterns = Vec::new();
        let mut position = vec![u32::MAX; size];
        let mut p = vec![0; h];
        let mut hit = vec![false; ell];
        for r in 0..size {
            unrank_into(r, ell, &mut p);
            hit.iter_mut().for_each(|x| *x = false);
            p.iter().for_each(|&i| hit[i] = true);
            if hit.iter().all(|&x| x) {
                position[r] = patterns.len() as u32;
                patterns.push(p.clone());
            }
        }
        Ok(PatternSpace {
            ell,
            h,
            patterns,
            position,
        })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn arity(&self) -> usize {
        self.h
    }

    /// `s(h, ell)`.
    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn pattern(&self, idx: usize) -> &[usize] {
        &self.patterns[idx]
    }

    pub fn patterns(&self) -> &[Vec<usize>] {
        &self.patterns
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        if p.len() != self.h || p.iter().any(|&i| i >= self.ell) {
            return None;
        }
        let pos = self.position[rank_unchecked(p, self.ell)];
        (pos != u32::MAX).then_some(pos as usize)
    }

    pub fn empty_set(&self) -> Bits {
        Bits::new(self.len())
    }

    /// Position of `π∘p` where `p` is the pattern at `idx`.
    pub fn permute_index(&self, pi: &[usize], idx: usize) -> usize {
        let moved: Vec<usize> = self.patterns[idx].iter().map(|&i| pi[i]).collect();
        self.index_of(&moved)
            .expect("permuted surjection stays surjective")
    }

    /// `π(X) = { π∘i | i ∈ X }`.
    pub fn act(&self, pi: &[usize], set: &Bits) -> Bits {
        Bits::from_indices(self.len(), set.iter().map(|i| self.permute_index(pi, i)))
    }
}

/// A map from `β_ell^ell(k)` to sets of patterns of a [`PatternSpace`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceMap {
    k: usize,
    space: Arc<PatternSpace>,
    keys: Vec<Vec<usize>>,
    key_position: HashMap<Vec<usize>, usize>,
    sets: Vec<Bits>,
}

impl TraceMap {
    /// Builds a trace map by evaluating `assign` on every injective
    /// `ell`-tuple over `{0..k-1}`, in lexicographic order.
    pub fn from_fn(
        k: usize,
        space: Arc<PatternSpace>,
        mut assign: impl FnMut(&[usize]) -> Bits,
    ) -> Result<Self> {
        let ell = space.ell();
        super::check_ell(k, ell)?;
        let keys = injective_tuples(k, ell);
        let sets = keys
            .iter()
            .map(|x| {
                let s = assign(x);
                assert_eq!(s.len(), space.len(), "pattern set over the wrong space");
                s
            })
            .collect();
        let key_position = keys
            .iter()
            .enumerate()
            .map(|(i, x)| (x.clone(), i))
            .collect();
        Ok(TraceMap {
            k,
            space,
            keys,
            key_position,
            sets,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn ell(&self) -> usize {
        self.space.ell()
    }

    pub fn arity(&self) -> usize {
        self.space.arity()
    }

    pub fn space(&self) -> &PatternSpace {
        &self.space
    }

    pub fn shared_space(&self) -> Arc<PatternSpace> {
        self.space.clone()
    }

    /// The injective tuples, in lexicographic order.
    pub fn keys(&self) -> &[Vec<usize>] {
        &self.keys
    }

    pub fn sets(&self) -> &[Bits] {
        &self.sets
    }

    pub fn get(&self, x: &[usize]) -> Option<&Bits> {
        self.key_position.get(x).map(|&i| &self.sets[i])
    }

    /// The patterns of `T(x)`, in lexicographic order.
    pub fn patterns_of(&self, x: &[usize]) -> Option<Vec<Vec<usize>>> {
        self.get(x)
            .map(|s| s.iter().map(|i| self.space.pattern(i).to_vec()).collect())
    }

    /// `i ∈ T(x∘π) ⇔ π∘i ∈ T(x)` for all `x`, `π` and patterns `i`.
    pub fn is_equivariant(&self) -> bool {
        self.first_equivariance_failure().is_none()
    }

    /// Some `x` at which equivariance breaks, if any.
    pub fn first_equivariance_failure(&self) -> Option<Vec<usize>> {
        let perms = crate::kernel::tuple::permutations(self.ell());
        self.keys.iter().enumerate().find_map(|(xi, x)| {
            let t_x = &self.sets[xi];
            perms.iter().find_map(|pi| {
                let x_pi: Vec<usize> = pi.iter().map(|&j| x[j]).collect();
                let expected = Bits::from_indices(
                    self.space.len(),
                    (0..self.space.len())
                        .filter(|&i| t_x.contains(self.space.permute_index(pi, i))),
                );
                (self.get(&x_pi) != Some(&expected)).then(|| x.clone())
            })
        })
    }

    /// `x ↦ T(x)` is injective.
    pub fn is_injective(&self) -> bool {
        let mut seen: Vec<&Bits> = self.sets.iter().collect();
        seen.sort();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

/// `T_rho^ell`: the trace map of `rho`.
pub fn trace(rho: &Relation, ell: usize) -> Result<TraceMap> {
    if rho.is_empty() {
        return Err(Error::EmptyRelation);
    }
    super::check_ell(rho.k(), ell)?;
    let space = Arc::new(PatternSpace::new(ell, rho.arity())?);
    let k = rho.k();
    let sp = space.clone();
    let mut w = vec![0usize; rho.arity()];
    TraceMap::from_fn(k, space, move |x| {
        let mut set = sp.empty_set();
        for (idx, p) in sp.patterns().iter().enumerate() {
            for (slot, &i) in w.iter_mut().zip(p) {
                *slot = x[i];
            }
            if rho.contains_rank(rank_unchecked(&w, k)) {
                set.insert(idx);
            }
        }
        set
    })
}

/// `F_{x→y} = y∘x⁻¹`: the partial map sending `x_j` to `y_j`.
pub fn f_arrow(k: usize, x: &[usize], y: &[usize]) -> Result<PartialUnaryFn> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument(format!(
            "tuples of different lengths: {x:?}, {y:?}"
        )));
    }
    for t in [x, y] {
        if !is_injective(t) {
            return Err(Error::NonInjective(t.to_vec()));
        }
    }
    let pairs: Vec<(usize, usize)> = x.iter().copied().zip(y.iter().copied()).collect();
    PartialUnaryFn::from_pairs(k, &pairs)
}

/// The first ordered pair of distinct keys `(x, y)` with `T(x) ⊆ T(y)`.
pub fn first_comparable_pair(t: &TraceMap) -> Option<(Vec<usize>, Vec<usize>)> {
    let sets = t.sets();
    (0..sets.len())
        .into_par_iter()
        .find_map_first(|a| {
            (0..sets.len())
                .find(|&b| a != b && sets[a].is_subset(&sets[b]))
                .map(|b| (a, b))
        })
        .map(|(a, b)| (t.keys()[a].clone(), t.keys()[b].clone()))
}

/// Strict pairwise incomparability of the traces: `T(x) ⊄ T(y)` for all
/// `x ≠ y`. Equal traces at distinct tuples count as comparable.
pub fn trace_incomparability(rho: &Relation, ell: usize) -> Result<bool> {
    Ok(first_comparable_pair(&trace(rho, ell)?).is_none())
}
