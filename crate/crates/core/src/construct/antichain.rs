//! Middle layers of a power set, enumerated lazily in colex order.

use std::sync::Arc;

use num_bigint::BigUint;

use super::counting::binomial;
use crate::kernel::Bits;
use crate::rigidity::PatternSpace;

/// The `floor(m/2)`-subsets of the `m` ground positions outside
/// `forbidden`, as masks over the whole ground set.
///
/// Members come in colex order, i.e. in increasing order of the mask read
/// as a binary number. An empty remainder yields no members.
#[derive(Clone, Debug)]
pub struct MiddleLayer {
    ground_len: usize,
    free: Vec<usize>,
    current: Option<Vec<usize>>,
}

pub fn middle_layer(ground_len: usize, forbidden: &[usize]) -> MiddleLayer {
    let free: Vec<usize> = (0..ground_len).filter(|i| !forbidden.contains(i)).collect();
    let r = free.len() / 2;
    MiddleLayer {
        ground_len,
        current: (!free.is_empty()).then(|| (0..r).collect()),
        free,
    }
}

impl MiddleLayer {
    /// Number of members, `C(m, floor(m/2))`.
    pub fn size(&self) -> BigUint {
        if self.free.is_empty() {
            return BigUint::default();
        }
        let m = self.free.len() as u64;
        binomial(m, m / 2)
    }

    pub fn ground_len(&self) -> usize {
        self.ground_len
    }

    fn advance(c: &mut [usize], m: usize) -> bool {
        let r = c.len();
        for j in 0..r {
            let limit = if j + 1 < r { c[j + 1] } else { m };
            if c[j] + 1 < limit {
                c[j] += 1;
                for (i, slot) in c.iter_mut().enumerate().take(j) {
                    *slot = i;
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for MiddleLayer {
    type Item = Bits;

    fn next(&mut self) -> Option<Bits> {
        let c = self.current.as_mut()?;
        let out = Bits::from_indices(self.ground_len, c.iter().map(|&i| self.free[i]));
        if !Self::advance(c, self.free.len()) {
            self.current = None;
        }
        Some(out)
    }
}

/// A family of pattern sets, pairwise incomparable under inclusion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexAntichain {
    space: Arc<PatternSpace>,
    members: Vec<Bits>,
}

impl IndexAntichain {
    /// Collects a whole middle layer over `space` minus `forbidden`.
    pub fn middle_layer(space: Arc<PatternSpace>, forbidden: &[usize]) -> Self {
        let members = middle_layer(space.len(), forbidden).collect();
        IndexAntichain { space, members }
    }

    pub fn space(&self) -> &PatternSpace {
        &self.space
    }

    pub fn members(&self) -> &[Bits] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_antichain(&self) -> bool {
        is_antichain(&self.members)
    }
}

/// No member is contained in another.
pub fn is_antichain(members: &[Bits]) -> bool {
    members.iter().enumerate().all(|(i, a)| {
        members
            .iter()
            .enumerate()
            .all(|(j, b)| i == j || !a.is_subset(b))
    })
}

/// `X^d`: swaps the two symbols in every pattern of `X`. `space` must have
/// `ell = 2`.
pub fn dual_2(space: &PatternSpace, x: &Bits) -> Bits {
    assert_eq!(space.ell(), 2, "dual is defined for two-symbol patterns");
    space.act(&[1, 0], x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colex_order() {
        let members: Vec<Vec<usize>> = middle_layer(4, &[]).map(|b| b.iter().collect()).collect();
        assert_eq!(
            members,
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![1, 2],
                vec![0, 3],
                vec![1, 3],
                vec![2, 3]
            ]
        );
    }

    #[test]
    fn sizes() {
        assert_eq!(middle_layer(6, &[]).count(), 20);
        assert_eq!(middle_layer(6, &[]).size(), BigUint::from(20u32));
        assert_eq!(middle_layer(7, &[]).count(), 35);
        assert_eq!(middle_layer(3, &[0, 1, 2]).count(), 0);
        let skip: Vec<Bits> = middle_layer(5, &[1]).collect();
        assert_eq!(skip.len(), 6);
        assert!(skip.iter().all(|b| !b.contains(1) && b.count() == 2));
    }

    #[test]
    fn two_element_ground() {
        let space = Arc::new(PatternSpace::new(2, 2).unwrap());
        let layer = IndexAntichain::middle_layer(space.clone(), &[]);
        let sets: Vec<Vec<Vec<usize>>> = layer
            .members()
            .iter()
            .map(|b| b.iter().map(|i| space.pattern(i).to_vec()).collect())
            .collect();
        assert_eq!(sets, vec![vec![vec![0, 1]], vec![vec![1, 0]]]);
        assert!(layer.is_antichain());
    }

    #[test]
    fn dual_is_a_fixed_point_free_involution_on_odd_layers() {
        for h in 2..=4 {
            let space = PatternSpace::new(2, h).unwrap();
            for x in middle_layer(space.len(), &[]) {
                let d = dual_2(&space, &x);
                assert_eq!(dual_2(&space, &d), x);
                assert_ne!(d, x);
                assert_eq!(d.count(), x.count());
            }
        }
    }

    #[test]
    fn dual_of_single_pattern() {
        let space = PatternSpace::new(2, 2).unwrap();
        let x = Bits::from_indices(2, [space.index_of(&[0, 1]).unwrap()]);
        let d = dual_2(&space, &x);
        assert_eq!(
            d.iter()
                .map(|i| space.pattern(i).to_vec())
                .collect::<Vec<_>>(),
            vec![vec![1, 0]]
        );
    }
}
