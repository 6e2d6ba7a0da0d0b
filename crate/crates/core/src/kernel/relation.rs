use serde::{Deserialize, Serialize};

use super::bits::Bits;
use super::tuple::{power, rank_unchecked, tuple_rank, unrank_into, Domain};
use crate::error::{Error, Result};

/// Largest tuple space `k^h` a relation may span.
pub const MAX_TUPLE_SPACE: usize = 1 << 32;

/// An `h`-ary relation on `{0..k-1}`, stored as a membership mask over all
/// `k^h` tuple ranks.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Relation {
    k: usize,
    h: usize,
    members: Bits,
}

impl Relation {
    pub fn empty(k: usize, h: usize) -> Result<Self> {
        Domain::new(k)?;
        if h == 0 {
            return Err(Error::InvalidArgument(
                "relations must have arity >= 1".into(),
            ));
        }
        let size = power(k, h)
            .filter(|&s| s <= MAX_TUPLE_SPACE)
            .ok_or_else(|| Error::Capacity {
                what: format!("tuple space {k}^{h}"),
                limit: MAX_TUPLE_SPACE.to_string(),
            })?;
        Ok(Relation {
            k,
            h,
            members: Bits::new(size),
        })
    }

    pub fn full(k: usize, h: usize) -> Result<Self> {
        let mut r = Relation::empty(k, h)?;
        r.members = Bits::full(r.members.len());
        Ok(r)
    }

    /// `{(x,...,x) | x < k}`.
    pub fn diagonal(k: usize, h: usize) -> Result<Self> {
        let mut r = Relation::empty(k, h)?;
        for x in 0..k {
            let t = vec![x; h];
            r.members.insert(rank_unchecked(&t, k));
        }
        Ok(r)
    }

    pub fn from_tuples<T: AsRef<[usize]>>(
        k: usize,
        h: usize,
        tuples: impl IntoIterator<Item = T>,
    ) -> Result<Self> {
        let mut r = Relation::empty(k, h)?;
        for t in tuples {
            r.insert(t.as_ref())?;
        }
        Ok(r)
    }

    pub fn from_mask(k: usize, h: usize, members: Bits) -> Result<Self> {
        let r = Relation::empty(k, h)?;
        if members.len() != r.members.len() {
            return Err(Error::Encoding(format!(
                "mask length {} does not equal {k}^{h} = {}",
                members.len(),
                r.members.len()
            )));
        }
        Ok(Relation { members, ..r })
    }

    /// Relation whose member ranks are the set bits of `relation_rank`.
    /// Only for tuple spaces of at most 64 tuples.
    pub fn from_relation_rank(k: usize, h: usize, relation_rank: u64) -> Result<Self> {
        let mut r = Relation::empty(k, h)?;
        let size = r.tuple_space();
        if size > 64 {
            return Err(Error::Capacity {
                what: format!("relation rank over {size} tuples"),
                limit: "64".into(),
            });
        }
        if size < 64 && relation_rank >> size != 0 {
            return Err(Error::Encoding(format!(
                "relation rank {relation_rank} is not below 2^{size}"
            )));
        }
        for i in 0..size {
            if (relation_rank >> i) & 1 == 1 {
                r.members.insert(i);
            }
        }
        Ok(r)
    }

    /// Inverse of [`Relation::from_relation_rank`].
    pub fn relation_rank(&self) -> Option<u64> {
        (self.tuple_space() <= 64).then(|| self.members.words().first().copied().unwrap_or(0))
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn arity(&self) -> usize {
        self.h
    }

    #[inline]
    pub fn tuple_space(&self) -> usize {
        self.members.len()
    }

    pub fn mask(&self) -> &Bits {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.count()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn check_tuple(&self, t: &[usize]) -> Result<usize> {
        if t.len() != self.h {
            return Err(Error::ArityMismatch {
                expected: self.h,
                found: t.len(),
            });
        }
        tuple_rank(t, self.k)
    }

    pub fn insert(&mut self, t: &[usize]) -> Result<()> {
        let r = self.check_tuple(t)?;
        self.members.insert(r);
        Ok(())
    }

    pub fn remove(&mut self, t: &[usize]) -> Result<()> {
        let r = self.check_tuple(t)?;
        self.members.remove(r);
        Ok(())
    }

    /// Membership; tuples of the wrong arity or with out-of-range entries
    /// are simply not members.
    pub fn contains(&self, t: &[usize]) -> bool {
        t.len() == self.h
            && t.iter().all(|&x| x < self.k)
            && self.members.contains(rank_unchecked(t, self.k))
    }

    #[inline]
    pub fn contains_rank(&self, r: usize) -> bool {
        self.members.contains(r)
    }

    /// Member ranks in increasing (= lexicographic) order.
    pub fn ranks(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter()
    }

    /// Member tuples in lexicographic order.
    pub fn tuples(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.members.iter().map(move |r| {
            let mut t = vec![0; self.h];
            unrank_into(r, self.k, &mut t);
            t
        })
    }

    /// Image of the relation under a permutation `sigma` of the base set.
    pub fn rename(&self, sigma: &[usize]) -> Result<Relation> {
        if sigma.len() != self.k
            || !super::tuple::is_injective(sigma)
            || sigma.iter().any(|&x| x >= self.k)
        {
            return Err(Error::InvalidArgument(format!(
                "{sigma:?} is not a permutation of 0..{}",
                self.k
            )));
        }
        let mut out = Relation::empty(self.k, self.h)?;
        for t in self.tuples() {
            let img: Vec<usize> = t.iter().map(|&x| sigma[x]).collect();
            out.members.insert(rank_unchecked(&img, self.k));
        }
        Ok(out)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.k == other.k && self.h == other.h && self.members.is_subset(&other.members)
    }

    pub fn to_json_tuples(&self) -> RelationJson {
        RelationJson::Tuples {
            k: self.k,
            h: self.h,
            tuples: self.tuples().collect(),
        }
    }

    pub fn to_json_compact(&self) -> RelationJson {
        let hex = self
            .members
            .to_le_bytes()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect();
        RelationJson::Compact {
            k: self.k,
            h: self.h,
            mask_hex: hex,
        }
    }

    pub fn from_json(json: &RelationJson) -> Result<Relation> {
        match json {
            RelationJson::Tuples { k, h, tuples } => Relation::from_tuples(*k, *h, tuples),
            RelationJson::Compact { k, h, mask_hex } => {
                let size = Relation::empty(*k, *h)?.tuple_space();
                if mask_hex.len() % 2 != 0 {
                    return Err(Error::Encoding("mask_hex has odd length".into()));
                }
                let bytes = (0..mask_hex.len())
                    .step_by(2)
                    .map(|i| {
                        let pair = &mask_hex[i..i + 2];
                        if pair.bytes().any(|c| c.is_ascii_uppercase()) {
                            return Err(Error::Encoding("mask_hex must be lowercase".into()));
                        }
                        u8::from_str_radix(pair, 16)
                            .map_err(|_| Error::Encoding(format!("bad hex byte {pair:?}")))
                    })
                    .collect::<Result<Vec<u8>>>()?;
                let mask = Bits::from_le_bytes(size, &bytes).ok_or_else(|| {
                    Error::Encoding(format!(
                        "mask_hex must be exactly {} bytes with no bits past {size}",
                        size.div_ceil(8)
                    ))
                })?;
                Relation::from_mask(*k, *h, mask)
            }
        }
    }

    pub fn from_json_str(s: &str) -> Result<Relation> {
        let json: RelationJson = serde_json::from_str(s)?;
        Relation::from_json(&json)
    }
}

/// On-disk relation formats. Deserialization accepts either shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RelationJson {
    Tuples {
        k: usize,
        h: usize,
        tuples: Vec<Vec<usize>>,
    },
    Compact {
        k: usize,
        h: usize,
        mask_hex: String,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leq() -> Relation {
        Relation::from_tuples(2, 2, [[0, 0], [0, 1], [1, 1]]).unwrap()
    }

    #[test]
    fn membership() {
        let r = leq();
        assert!(r.contains(&[0, 1]));
        assert!(!r.contains(&[1, 0]));
        assert!(!r.contains(&[0, 2]));
        assert!(!r.contains(&[0]));
        assert_eq!(r.len(), 3);
        assert_eq!(
            r.tuples().collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1], vec![1, 1]]
        );
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(
            Relation::empty(1, 2),
            Err(Error::DomainTooSmall(1))
        ));
        assert!(Relation::empty(2, 0).is_err());
        assert!(matches!(
            Relation::empty(60, 10),
            Err(Error::Capacity { .. })
        ));
        assert!(matches!(
            Relation::from_tuples(2, 2, [[0, 0, 0]]),
            Err(Error::ArityMismatch { .. })
        ));
        assert!(Relation::from_tuples(2, 2, [[0, 2]]).is_err());
    }

    #[test]
    fn compact_hex_layout() {
        // ranks 0, 1, 3 -> byte 0b1011
        let json = leq().to_json_compact();
        assert_eq!(
            serde_json::to_string(&json).unwrap(),
            r#"{"k":2,"h":2,"mask_hex":"0b"}"#
        );
        let back = Relation::from_json(&json).unwrap();
        assert_eq!(back, leq());
    }

    #[test]
    fn json_forms_parse() {
        let a = Relation::from_json_str(r#"{"k":2,"h":2,"tuples":[[0,0],[0,1],[1,1]]}"#).unwrap();
        let b = Relation::from_json_str(r#"{"k":2,"h":2,"mask_hex":"0b"}"#).unwrap();
        assert_eq!(a, b);
        assert!(Relation::from_json_str(r#"{"k":2,"h":2,"mask_hex":"1b"}"#).is_err());
        assert!(Relation::from_json_str(r#"{"k":2,"h":2,"mask_hex":"0B"}"#).is_err());
        assert!(Relation::from_json_str(r#"{"k":2,"h":2,"mask_hex":"0b00"}"#).is_err());
        assert!(Relation::from_json_str(r#"{"k":2,"h":2}"#).is_err());
    }

    #[test]
    fn relation_rank_round_trip() {
        for rank in 0..16u64 {
            let r = Relation::from_relation_rank(2, 2, rank).unwrap();
            assert_eq!(r.relation_rank(), Some(rank));
        }
        assert!(Relation::from_relation_rank(2, 2, 16).is_err());
        assert_eq!(leq().relation_rank(), Some(0b1011));
    }

    #[test]
    fn rename_swaps() {
        let r = leq().rename(&[1, 0]).unwrap();
        assert_eq!(
            r,
            Relation::from_tuples(2, 2, [[0, 0], [1, 0], [1, 1]]).unwrap()
        );
        assert!(leq().rename(&[0, 0]).is_err());
    }
}
