//! Colexicographic ranking of k-subsets.
//!
//! A sorted subset `c_0 < c_1 < ... < c_{k-1}` has rank `sum_i C(c_i, i + 1)`.
//! This is a bijection between the k-subsets of `0..n` and `0..C(n, k)` that
//! does not depend on `n`, so prefixes of a coloring file stay valid when the
//! vertex set grows. Subsets whose largest element is `m` occupy the contiguous
//! rank block `C(m, k)..C(m + 1, k)`.
//!
//! Test vectors (k = 2): `{0,1} -> 0`, `{0,2} -> 1`, `{1,2} -> 2`, `{0,3} -> 3`.
//! Test vectors (k = 3): `{0,1,2} -> 0`, `{0,1,3} -> 1`, `{1,2,3} -> 3`, `{0,1,4} -> 4`.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` in 64 bits, or `None` on overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// `C(n, k)` as an arbitrary-precision integer.
pub fn binomial_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Colex rank of a strictly increasing subset.
pub fn rank(subset: &[usize]) -> u64 {
    subset
        .iter()
        .enumerate()
        .map(|(i, &c)| binomial(c as u64, i as u64 + 1).expect("colex rank overflows u64"))
        .sum()
}

/// Inverse of [`rank`] for subsets of size `k`.
pub fn unrank(mut r: u64, k: usize) -> Vec<usize> {
    let mut out = vec![0usize; k];
    for i in (0..k).rev() {
        let size = i as u64 + 1;
        // largest c with C(c, size) <= r
        let mut c = size - 1;
        let mut step = 1u64;
        while binomial(c + step, size).is_some_and(|b| b <= r) {
            c += step;
            step *= 2;
        }
        while step > 0 {
            if binomial(c + step, size).is_some_and(|b| b <= r) {
                c += step;
            }
            step /= 2;
        }
        r -= binomial(c, size).unwrap();
        out[i] = c as usize;
    }
    out
}

/// Advances `subset` to its colex successor in place. The caller bounds the
/// largest element; this never fails.
pub fn advance(subset: &mut [usize]) {
    let k = subset.len();
    for i in 0..k {
        let limit_reached = i + 1 < k && subset[i] + 1 == subset[i + 1];
        if !limit_reached {
            subset[i] += 1;
            for (j, s) in subset.iter_mut().enumerate().take(i) {
                *s = j;
            }
            return;
        }
    }
}

/// Iterator over all k-subsets of `0..n` in colex order.
pub fn subsets(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = binomial(n as u64, k as u64).expect("subset count overflows u64");
    let mut cur: Vec<usize> = (0..k).collect();
    (0..total).map(move |idx| {
        if idx > 0 {
            advance(&mut cur);
        }
        cur.clone()
    })
}
