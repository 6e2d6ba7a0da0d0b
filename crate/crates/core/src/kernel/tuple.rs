//! Tuples over `{0..k-1}` and their base-`k` ranks.
//!
//! A tuple of arity `n` is a plain slice of elements. Its rank is the
//! base-`k` number whose most significant digit is entry 0, so rank order
//! coincides with lexicographic order.

use crate::error::{Error, Result};

/// The base set `{0..k-1}`, `k >= 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain(usize);

impl Domain {
    pub fn new(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::DomainTooSmall(k));
        }
        Ok(Domain(k))
    }

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }
}

/// `k^n`, or `None` on overflow.
pub fn power(k: usize, n: usize) -> Option<usize> {
    let mut acc: usize = 1;
    for _ in 0..n {
        acc = acc.checked_mul(k)?;
    }
    Some(acc)
}

pub fn tuple_rank(t: &[usize], k: usize) -> Result<usize> {
    let mut r: usize = 0;
    for (i, &x) in t.iter().enumerate() {
        if x >= k {
            return Err(Error::Encoding(format!(
                "entry {x} at position {i} is not below k = {k}"
            )));
        }
        r = r
            .checked_mul(k)
            .and_then(|r| r.checked_add(x))
            .ok_or_else(|| Error::Encoding(format!("rank of {t:?} overflows")))?;
    }
    Ok(r)
}

/// Rank without range checks. Entries must be below `k`.
#[inline]
pub(crate) fn rank_unchecked(t: &[usize], k: usize) -> usize {
    t.iter().fold(0, |r, &x| r * k + x)
}

pub fn tuple_unrank(r: usize, arity: usize, k: usize) -> Result<Vec<usize>> {
    let bound = power(k, arity).ok_or_else(|| Error::Encoding(format!("{k}^{arity} overflows")))?;
    if r >= bound {
        return Err(Error::Encoding(format!(
            "rank {r} is not below {k}^{arity} = {bound}"
        )));
    }
    let mut t = vec![0; arity];
    unrank_into(r, k, &mut t);
    Ok(t)
}

#[inline]
pub(crate) fn unrank_into(mut r: usize, k: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = r % k;
        r /= k;
    }
}

/// Number of distinct entries.
pub fn image_size(t: &[usize]) -> usize {
    let mut seen: Vec<usize> = t.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

pub fn is_injective(t: &[usize]) -> bool {
    image_size(t) == t.len()
}

/// Sorted distinct entries.
pub fn image(t: &[usize]) -> Vec<usize> {
    let mut seen: Vec<usize> = t.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen
}

/// The kernel of a tuple: entry `i` is the index of the first occurrence
/// of `t[i]`. Two tuples have the same kernel iff they differ by an
/// injective renaming.
pub fn kernel(t: &[usize]) -> Vec<usize> {
    t.iter()
        .map(|x| t.iter().position(|y| y == x).unwrap())
        .collect()
}

/// Calls `visit` on every `n`-tuple over `elements` in lexicographic order
/// of positions. Stops early when `visit` returns `false`; the return value
/// reports whether the walk completed.
pub fn for_each_tuple(
    elements: &[usize],
    n: usize,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> bool {
    if n == 0 {
        return visit(&[]);
    }
    if elements.is_empty() {
        return true;
    }
    let m = elements.len();
    let mut idx = vec![0usize; n];
    let mut t: Vec<usize> = vec![elements[0]; n];
    loop {
        if !visit(&t) {
            return false;
        }
        let mut pos = n;
        loop {
            if pos == 0 {
                return true;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < m {
                t[pos] = elements[idx[pos]];
                break;
            }
            idx[pos] = 0;
            t[pos] = elements[0];
        }
    }
}

/// `β_m^n(X)`: the `n`-tuples over `elements` with exactly `m` distinct
/// entries, in lexicographic order (with `elements` sorted).
pub fn beta(m: usize, n: usize, elements: &[usize]) -> Vec<Vec<usize>> {
    let mut xs = elements.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let mut out = Vec::new();
    if m > n || m > xs.len() {
        return out;
    }
    for_each_tuple(&xs, n, |t| {
        if image_size(t) == m {
            out.push(t.to_vec());
        }
        true
    });
    out
}

/// `β_{<m}^n(X)`: tuples with fewer than `m` distinct entries.
pub fn beta_below(m: usize, n: usize, elements: &[usize]) -> Vec<Vec<usize>> {
    let mut xs = elements.to_vec();
    xs.sort_unstable();
    xs.dedup();
    let mut out = Vec::new();
    for_each_tuple(&xs, n, |t| {
        if image_size(t) < m {
            out.push(t.to_vec());
        }
        true
    });
    out
}

/// Injective `len`-tuples over `{0..k-1}` (that is `β_len^len(k)`) in
/// lexicographic order.
pub fn injective_tuples(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(len);
    let mut used = vec![false; k];
    fn go(
        k: usize,
        len: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                cur.push(x);
                go(k, len, cur, used, out);
                cur.pop();
                used[x] = false;
            }
        }
    }
    go(k, len, &mut cur, &mut used, &mut out);
    out
}

/// All permutations of `{0..n-1}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    injective_tuples(n.max(1), n)
}

/// `r`-subsets of `{0..n-1}` as increasing sequences, in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut c: Vec<usize> = (0..r).collect();
    loop {
        out.push(c.clone());
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if c[i] < n - r + i {
                c[i] += 1;
                for j in i + 1..r {
                    c[j] = c[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Restricted growth strings of length `m` with exactly `blocks` blocks, in
/// lexicographic order. Entry `j` names the block of element `j`.
pub fn set_partitions(m: usize, blocks: usize) -> Vec<Vec<usize>> {
    fn go(m: usize, blocks: usize, cur: &mut Vec<usize>, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            if used == blocks {
                out.push(cur.clone());
            }
            return;
        }
        // not enough elements left to open the missing blocks
        if blocks - used > m - cur.len() {
            return;
        }
        for b in 0..=used.min(blocks - 1) {
            cur.push(b);
            go(m, blocks, cur, used.max(b + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if blocks == 0 || blocks > m {
        return out;
    }
    go(m, blocks, &mut Vec::with_capacity(m), 0, &mut out);
    out
}
