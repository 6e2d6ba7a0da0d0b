//! Exact counts and the existence bounds built from them.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `C(n, r)`; zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `k (k-1) ... (k-ell+1)`; zero when `ell > k`.
pub fn falling_factorial(k: u64, ell: u64) -> BigUint {
    if ell > k {
        return BigUint::zero();
    }
    (0..ell).fold(BigUint::one(), |acc, i| acc * (k - i))
}

pub fn factorial(n: u64) -> BigUint {
    falling_factorial(n, n)
}

/// Surjections from an `n`-set onto an `ell`-set, by inclusion-exclusion:
/// `sum_{j=1}^{ell} (-1)^(ell-j) C(ell, j) j^n`.
pub fn surjection_count(n: u64, ell: u64) -> BigUint {
    let mut acc = BigInt::zero();
    for j in 1..=ell {
        let term = BigInt::from(binomial(ell, j)) * BigInt::from(j).pow(n as u32);
        if (ell - j) % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    debug_assert!(!acc.is_negative());
    acc.to_biguint().unwrap_or_default()
}

/// `C(n, floor(n/2))`, the size of a largest antichain in the subsets of
/// an `n`-set.
pub fn middle_binomial(n: &BigUint) -> BigUint {
    let n = n.to_u64().expect("ground set too large");
    binomial(n, n / 2)
}

/// `k^(ell) <= C(s, floor(s/2))` with `s = s(h, ell)`: the necessary
/// condition for an `h`-ary hereditarily `ell`-rigid relation on `k` points.
pub fn sperner_bound_holds(k: u64, ell: u64, h: u64) -> bool {
    falling_factorial(k, ell) <= middle_binomial(&surjection_count(h, ell))
}

/// Right-hand side shared by [`exists_2rigid`] and [`max_k_2rigid`]:
/// `C(2^h - 2, 2^(h-1) - 1)`.
pub fn two_rigid_capacity(h: u32) -> BigUint {
    let s = (BigUint::one() << h as usize) - 2u32;
    middle_binomial(&s)
}

/// An `h`-ary hereditarily 2-rigid relation on `k` points exists iff
/// `k (k-1) <= C(2^h - 2, 2^(h-1) - 1)`.
pub fn exists_2rigid(k: u64, h: u32) -> bool {
    falling_factorial(k, 2) <= two_rigid_capacity(h)
}

/// Largest `k >= 2` passing [`exists_2rigid`], or 0 if none does.
pub fn max_k_2rigid(h: u32) -> BigUint {
    let cap = two_rigid_capacity(h);
    // k(k-1) <= cap  <=>  k <= (1 + sqrt(1 + 4 cap)) / 2
    let mut k = (BigUint::one() + (BigUint::one() + &cap * 4u32).sqrt()) / 2u32;
    while &k * (&k - 1u32) > cap {
        k -= 1u32;
    }
    while (&k + 1u32) * &k <= cap {
        k += 1u32;
    }
    if k < BigUint::from(2u32) {
        BigUint::zero()
    } else {
        k
    }
}

/// `C(s - ell!, floor((s - ell!)/2))` with `s = s(h, ell)`: the size of the
/// antichain available to the construction for `ell >= 3`.
pub fn ell_rigid_capacity(ell: u64, h: u64) -> BigUint {
    let s = surjection_count(h, ell);
    let f = factorial(ell);
    if s < f {
        return BigUint::zero();
    }
    middle_binomial(&(s - f))
}

/// `k^(ell) <= C(s - ell!, floor((s - ell!)/2))`.
pub fn ell_rigid_bound_holds(k: u64, ell: u64, h: u64) -> bool {
    falling_factorial(k, ell) <= ell_rigid_capacity(ell, h)
}

/// Lower and upper bounds on `r(ell, h)`:
/// `(C(s - ell!, floor((s - ell!)/2)), C(s, floor(s/2)))`.
pub fn r_bounds(ell: u64, h: u64) -> (BigUint, BigUint) {
    (
        ell_rigid_capacity(ell, h),
        middle_binomial(&surjection_count(h, ell)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn small_values() {
        assert_eq!(falling_factorial(5, 2), big(20));
        assert_eq!(binomial(14, 7), big(3432));
        assert_eq!(binomial(30, 15), big(155_117_520));
        assert_eq!(binomial(3, 5), big(0));
        assert_eq!(factorial(0), big(1));
    }

    #[test]
    fn surjections() {
        for h in 2..=6u32 {
            assert_eq!(surjection_count(h as u64, 2), big((1 << h) - 2));
        }
        assert_eq!(surjection_count(3, 3), big(6));
        assert_eq!(surjection_count(4, 3), big(36));
        assert_eq!(surjection_count(2, 3), big(0));
    }

    #[test]
    fn sperner_examples() {
        assert!(sperner_bound_holds(5, 2, 3));
        assert!(!sperner_bound_holds(6, 2, 3));
        assert!(sperner_bound_holds(2, 2, 2));
    }

    #[test]
    fn two_rigid_examples() {
        assert!(exists_2rigid(59, 4));
        assert!(!exists_2rigid(60, 4));
        assert!(exists_2rigid(2, 2));
        assert!(!exists_2rigid(3, 2));
        let max: Vec<BigUint> = (1..=5).map(max_k_2rigid).collect();
        assert_eq!(max, vec![big(0), big(2), big(5), big(59), big(12455)]);
    }

    #[test]
    fn r_bound_examples() {
        assert_eq!(r_bounds(3, 4), (binomial(30, 15), binomial(36, 18)));
        assert_eq!(r_bounds(2, 3).1, big(20));
        for ell in 2..=4 {
            for h in ell + 1..=7 {
                let (lo, hi) = r_bounds(ell, h);
                assert!(lo <= hi);
            }
        }
    }
}
