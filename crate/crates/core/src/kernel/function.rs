use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::tuple::{power, tuple_unrank, Domain};
use crate::error::{Error, Result};

/// A unary partial function on `{0..k-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "UnaryJson", into = "UnaryJson")]
pub struct PartialUnaryFn {
    table: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct UnaryJson {
    k: usize,
    table: Vec<Option<usize>>,
}

impl TryFrom<UnaryJson> for PartialUnaryFn {
    type Error = Error;

    fn try_from(j: UnaryJson) -> Result<Self> {
        if j.table.len() != j.k {
            return Err(Error::Format(format!(
                "table has {} entries, expected k = {}",
                j.table.len(),
                j.k
            )));
        }
        PartialUnaryFn::new(j.table)
    }
}

impl From<PartialUnaryFn> for UnaryJson {
    fn from(f: PartialUnaryFn) -> Self {
        UnaryJson {
            k: f.k(),
            table: f.table,
        }
    }
}

impl PartialUnaryFn {
    /// `table[x]` is `f(x)`, or `None` where `f` is undefined.
    pub fn new(table: Vec<Option<usize>>) -> Result<Self> {
        let k = Domain::new(table.len())?.size();
        if let Some(v) = table.iter().flatten().find(|&&v| v >= k) {
            return Err(Error::Encoding(format!("value {v} is not below k = {k}")));
        }
        Ok(PartialUnaryFn { table })
    }

    pub fn nowhere_defined(k: usize) -> Result<Self> {
        PartialUnaryFn::new(vec![None; k])
    }

    pub fn identity(k: usize) -> Result<Self> {
        PartialUnaryFn::new((0..k).map(Some).collect())
    }

    pub fn constant(k: usize, c: usize) -> Result<Self> {
        PartialUnaryFn::new(vec![Some(c); k])
    }

    pub fn from_pairs(k: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let mut table = vec![None; k];
        for &(x, y) in pairs {
            let slot = table
                .get_mut(x)
                .ok_or_else(|| Error::Encoding(format!("point {x} is not below k = {k}")))?;
            if slot.is_some_and(|v| v != y) {
                return Err(Error::InvalidArgument(format!("point {x} mapped twice")));
            }
            *slot = Some(y);
        }
        PartialUnaryFn::new(table)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> Option<usize> {
        self.table.get(x).copied().flatten()
    }

    pub fn table(&self) -> &[Option<usize>] {
        &self.table
    }

    /// Sorted domain.
    pub fn domain(&self) -> Vec<usize> {
        (0..self.k()).filter(|&x| self.table[x].is_some()).collect()
    }

    /// Sorted image.
    pub fn image(&self) -> Vec<usize> {
        let mut img: Vec<usize> = self.table.iter().flatten().copied().collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn domain_size(&self) -> usize {
        self.table.iter().filter(|v| v.is_some()).count()
    }

    pub fn image_size(&self) -> usize {
        self.image().len()
    }

    /// `f <= id`.
    pub fn is_below_identity(&self) -> bool {
        self.table
            .iter()
            .enumerate()
            .all(|(x, v)| v.map_or(true, |y| y == x))
    }

    pub fn is_injective(&self) -> bool {
        self.image_size() == self.domain_size()
    }

    pub fn restrict(&self, points: &[usize]) -> PartialUnaryFn {
        let mut table = vec![None; self.k()];
        for &x in points {
            if x < self.k() {
                table[x] = self.table[x];
            }
        }
        PartialUnaryFn { table }
    }

    pub fn subfunction_of(&self, g: &PartialUnaryFn) -> Result<bool> {
        if self.k() != g.k() {
            return Err(Error::DomainMismatch {
                left: self.k(),
                right: g.k(),
            });
        }
        Ok(self
            .table
            .iter()
            .zip(&g.table)
            .all(|(a, b)| a.is_none() || a == b))
    }

    /// Applies `f` entrywise; `None` when some entry lies outside `dom(f)`.
    pub fn apply_tuple(&self, t: &[usize]) -> Option<Vec<usize>> {
        t.iter().map(|&x| self.apply(x)).collect()
    }

    /// All `(k+1)^k` unary partial functions on `{0..k-1}`.
    ///
    /// Order: the table read as a base-`(k+1)` numeral, most significant
    /// digit first, with digit 0 for "undefined" and `v + 1` for value `v`.
    pub fn all(k: usize) -> impl Iterator<Item = PartialUnaryFn> {
        let count = power(k + 1, k).expect("k too large to enumerate");
        (0..count).map(move |r| {
            let digits = tuple_unrank(r, k, k + 1).expect("rank in range");
            PartialUnaryFn {
                table: digits.into_iter().map(|d| d.checked_sub(1)).collect(),
            }
        })
    }

    pub fn to_nary(&self) -> PartialFn {
        PartialFn {
            k: self.k(),
            n: 1,
            graph: self
                .table
                .iter()
                .enumerate()
                .filter_map(|(x, v)| v.map(|y| (vec![x], y)))
                .collect(),
        }
    }
}

impl fmt::Debug for PartialUnaryFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        let mut first = true;
        for (x, v) in self.table.iter().enumerate() {
            if let Some(y) = v {
                if !first {
                    write!(f, ", ")?;
                }
                write!(f, "{x}->{y}")?;
                first = false;
            }
        }
        write!(f, "}}/{}", self.k())
    }
}

/// An `n`-ary partial function on `{0..k-1}`, held as its graph.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "NaryJson", into = "NaryJson")]
pub struct PartialFn {
    k: usize,
    n: usize,
    graph: BTreeMap<Vec<usize>, usize>,
}

#[derive(Serialize, Deserialize)]
struct NaryJson {
    k: usize,
    n: usize,
    graph: Vec<GraphEntry>,
}

#[derive(Serialize, Deserialize)]
struct GraphEntry {
    args: Vec<usize>,
    value: usize,
}

impl TryFrom<NaryJson> for PartialFn {
    type Error = Error;

    fn try_from(j: NaryJson) -> Result<Self> {
        PartialFn::new(j.k, j.n, j.graph.into_iter().map(|e| (e.args, e.value)))
    }
}

impl From<PartialFn> for NaryJson {
    fn from(f: PartialFn) -> Self {
        NaryJson {
            k: f.k,
            n: f.n,
            graph: f
                .graph
                .into_iter()
                .map(|(args, value)| GraphEntry { args, value })
                .collect(),
        }
    }
}

impl PartialFn {
    pub fn new(
        k: usize,
        n: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, usize)>,
    ) -> Result<Self> {
        Domain::new(k)?;
        if n == 0 {
            return Err(Error::InvalidArgument("arity must be at least 1".into()));
        }
        let mut graph = BTreeMap::new();
        for (args, value) in entries {
            if args.len() != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: args.len(),
                });
            }
            if let Some(x) = args.iter().chain([&value]).find(|&&x| x >= k) {
                return Err(Error::Encoding(format!("entry {x} is not below k = {k}")));
            }
            if graph.insert(args.clone(), value).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "domain tuple {args:?} appears twice"
                )));
            }
        }
        Ok(PartialFn { k, n, graph })
    }

    /// The total projection `e_i^n` (0-based `i`).
    pub fn projection(k: usize, n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::InvalidArgument(format!(
                "projection index {i} >= arity {n}"
            )));
        }
        let size = power(k, n).ok_or_else(|| Error::Capacity {
            what: format!("{k}^{n} domain tuples"),
            limit: usize::MAX.to_string(),
        })?;
        PartialFn::new(
            k,
            n,
            (0..size).map(|r| {
                let t = tuple_unrank(r, n, k).unwrap();
                let v = t[i];
                (t, v)
            }),
        )
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.n
    }

    pub fn eval(&self, args: &[usize]) -> Option<usize> {
        self.graph.get(args).copied()
    }

    /// Graph entries in lexicographic order of the argument tuples.
    pub fn entries(&self) -> impl Iterator<Item = (&[usize], usize)> {
        self.graph.iter().map(|(a, &v)| (a.as_slice(), v))
    }

    pub fn domain(&self) -> impl Iterator<Item = &[usize]> {
        self.graph.keys().map(|a| a.as_slice())
    }

    pub fn domain_size(&self) -> usize {
        self.graph.len()
    }

    /// Sorted distinct values.
    pub fn values(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.graph.values().copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn restrict(&self, keep: impl Fn(&[usize]) -> bool) -> PartialFn {
        PartialFn {
            k: self.k,
            n: self.n,
            graph: self
                .graph
                .iter()
                .filter(|(a, _)| keep(a))
                .map(|(a, &v)| (a.clone(), v))
                .collect(),
        }
    }

    /// `self <= g`: `dom(self)` is contained in `dom(g)` and they agree there.
    pub fn subfunction_of(&self, g: &PartialFn) -> Result<bool> {
        if self.k != g.k {
            return Err(Error::DomainMismatch {
                left: self.k,
                right: g.k,
            });
        }
        if self.n != g.n {
            return Err(Error::ArityMismatch {
                expected: g.n,
                found: self.n,
            });
        }
        Ok(self.graph.iter().all(|(a, v)| g.graph.get(a) == Some(v)))
    }

    /// First (0-based) `i` with `f(t) = t_i` on the whole domain.
    pub fn projection_index(&self) -> Option<usize> {
        (0..self.n).find(|&i| self.graph.iter().all(|(a, &v)| a[i] == v))
    }

    pub fn is_partial_projection(&self) -> bool {
        self.graph.is_empty() || self.projection_index().is_some()
    }

    pub fn is_partial_constant(&self) -> bool {
        self.values().len() <= 1
    }

    /// Partial projection or partial constant.
    pub fn is_trivial(&self) -> bool {
        self.is_partial_constant() || self.is_partial_projection()
    }

    /// `f(g_1, ..., g_m)` defined wherever every `g_i` is defined and the
    /// tuple of their values lies in `dom(f)`.
    pub fn compose(&self, inner: &[PartialFn]) -> Result<PartialFn> {
        if inner.len() != self.n {
            return Err(Error::ArityMismatch {
                expected: self.n,
                found: inner.len(),
            });
        }
        let m = inner[0].n;
        for g in inner {
            if g.k != self.k {
                return Err(Error::DomainMismatch {
                    left: self.k,
                    right: g.k,
                });
            }
            if g.n != m {
                return Err(Error::ArityMismatch {
                    expected: m,
                    found: g.n,
                });
            }
        }
        let graph = inner[0]
            .graph
            .keys()
            .filter_map(|x| {
                let ys: Option<Vec<usize>> = inner.iter().map(|g| g.eval(x)).collect();
                let v = self.eval(&ys?)?;
                Some((x.clone(), v))
            })
            .collect();
        Ok(PartialFn {
            k: self.k,
            n: m,
            graph,
        })
    }

    /// Every `n`-ary partial function on `{0..k-1}`, `(k+1)^(k^n)` in all,
    /// ordered like [`PartialUnaryFn::all`] with domain tuples in rank order.
    pub fn enumerate(k: usize, n: usize) -> Result<impl Iterator<Item = PartialFn>> {
        let cells = power(k, n)
            .filter(|&c| c <= 16)
            .ok_or_else(|| Error::Capacity {
                what: format!("enumerating partial functions over {k}^{n} tuples"),
                limit: "16 domain tuples".into(),
            })?;
        let count = power(k + 1, cells).ok_or_else(|| Error::Capacity {
            what: format!("{}^{cells} partial functions", k + 1),
            limit: usize::MAX.to_string(),
        })?;
        let rows: Vec<Vec<usize>> = (0..cells).map(|r| tuple_unrank(r, n, k).unwrap()).collect();
        Ok((0..count).map(move |r| {
            let digits = tuple_unrank(r, cells, k + 1).unwrap();
            PartialFn {
                k,
                n,
                graph: rows
                    .iter()
                    .zip(digits)
                    .filter_map(|(row, d)| d.checked_sub(1).map(|v| (row.clone(), v)))
                    .collect(),
            }
        }))
    }

    pub fn from_json_str(s: &str) -> Result<PartialFn> {
        Ok(serde_json::from_str(s)?)
    }
}

impl From<&PartialUnaryFn> for PartialFn {
    fn from(f: &PartialUnaryFn) -> Self {
        f.to_nary()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi3_like() -> PartialFn {
        PartialFn::new(
            2,
            3,
            [(vec![0, 1, 1], 1), (vec![0, 1, 0], 0), (vec![0, 0, 1], 0)],
        )
        .unwrap()
    }

    #[test]
    fn unary_basics() {
        let neg = PartialUnaryFn::from_pairs(2, &[(0, 1), (1, 0)]).unwrap();
        assert!(!neg.is_below_identity());
        assert!(neg.is_injective());
        assert_eq!(neg.domain(), vec![0, 1]);
        let sub = neg.restrict(&[1]);
        assert_eq!(sub.domain(), vec![1]);
        assert!(sub.subfunction_of(&neg).unwrap());
        assert!(!neg.subfunction_of(&sub).unwrap());
        assert!(PartialUnaryFn::new(vec![Some(2), None]).is_err());
        assert!(PartialUnaryFn::new(vec![None]).is_err());
    }

    #[test]
    fn unary_enumeration_count() {
        assert_eq!(PartialUnaryFn::all(2).count(), 9);
        assert_eq!(PartialUnaryFn::all(3).count(), 64);
        let first = PartialUnaryFn::all(2).next().unwrap();
        assert_eq!(first.domain_size(), 0);
    }

    #[test]
    fn triviality_examples() {
        let id = PartialUnaryFn::identity(2).unwrap().to_nary();
        assert!(id.is_partial_projection());
        let c = PartialFn::new(2, 2, [(vec![0, 1], 0), (vec![1, 0], 0)]).unwrap();
        assert!(c.is_partial_constant());
        let empty = PartialFn::new(2, 3, []).unwrap();
        assert!(empty.is_trivial());
        assert!(!phi3_like().is_trivial());
    }

    #[test]
    fn subfunction_examples() {
        let f = phi3_like();
        let empty = PartialFn::new(2, 3, []).unwrap();
        assert!(empty.subfunction_of(&f).unwrap());
        assert!(f.subfunction_of(&f).unwrap());
        let two_rows = f.restrict(|a| a != [0, 0, 1]);
        assert!(two_rows.subfunction_of(&f).unwrap());
        let other_arity = PartialFn::new(2, 2, []).unwrap();
        assert!(matches!(
            other_arity.subfunction_of(&f),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert!(PartialFn::new(2, 2, [(vec![0, 1], 0), (vec![0, 1], 1)]).is_err());
        assert!(PartialFn::new(2, 2, [(vec![0, 1, 1], 0)]).is_err());
        assert!(PartialFn::new(2, 2, [(vec![0, 1], 2)]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(PartialFn::enumerate(2, 1).unwrap().count(), 9);
        assert_eq!(PartialFn::enumerate(2, 2).unwrap().count(), 81);
        assert!(PartialFn::enumerate(2, 5).is_err());
    }

    #[test]
    fn compose_projection_picks_argument() {
        let e0 = PartialFn::projection(2, 2, 0).unwrap();
        let f = phi3_like();
        let g = PartialFn::new(2, 3, [(vec![0, 1, 1], 1)]).unwrap();
        let h = e0.compose(&[g.clone(), f.clone()]).unwrap();
        assert_eq!(h, g);
    }

    #[test]
    fn json_round_trip() {
        let f = phi3_like();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(PartialFn::from_json_str(&s).unwrap(), f);
        let u = PartialUnaryFn::from_pairs(3, &[(0, 2)]).unwrap();
        let s = serde_json::to_string(&u).unwrap();
        assert_eq!(s, r#"{"k":3,"table":[2,null,null]}"#);
        assert_eq!(serde_json::from_str::<PartialUnaryFn>(&s).unwrap(), u);
    }
}
