//! Ranking and unranking of combinations and multiset permutations.
//!
//! Both codebooks used by the index-modulation mapping are addressed
//! lexicographically, which keeps the lookup tables implicit: a pattern
//! index is converted to the pattern (and back) with pure integer
//! arithmetic. Counts are exact `u128` values; nothing here touches floats.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result * (n - i) as u128 / (i + 1) as u128;
    }
    result
}

/// Number of distinct arrangements of `k` symbols, each repeated `reps`
/// times, over `k * reps` positions: `(k*reps)! / (reps!)^k`.
pub fn multiset_perm_count(k: usize, reps: usize) -> u128 {
    let mut remaining = k * reps;
    let mut count: u128 = 1;
    for _ in 0..k {
        count *= binomial(remaining, reps);
        remaining -= reps;
    }
    count
}

/// The `rank`-th k-combination of `{0, .., n-1}` in lexicographic order.
pub fn unrank_combination(rank: u128, n: usize, k: usize) -> Result<Vec<usize>> {
    if rank >= binomial(n, k) {
        return Err(Error::IndexOutOfRange);
    }
    let mut rank = rank;
    let mut combo = Vec::with_capacity(k);
    let mut next = 0usize;
    for slot in 0..k {
        let mut candidate = next;
        loop {
            let below = binomial(n - candidate - 1, k - slot - 1);
            if below <= rank {
                rank -= below;
                candidate += 1;
            } else {
                combo.push(candidate);
                next = candidate + 1;
                break;
            }
        }
    }
    Ok(combo)
}

/// Lexicographic rank of a strictly increasing k-combination of `{0, .., n-1}`.
pub fn rank_combination(combo: &[usize], n: usize) -> Result<u128> {
    let k = combo.len();
    if combo.iter().any(|&c| c >= n) || combo.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidState("not a strictly increasing combination"));
    }
    let mut rank: u128 = 0;
    for (slot, &c) in combo.iter().enumerate() {
        let start = if slot == 0 { 0 } else { combo[slot - 1] + 1 };
        for skipped in start..c {
            rank += binomial(n - skipped - 1, k - slot - 1);
        }
    }
    Ok(rank)
}

/// The `rank`-th arrangement (lexicographic) of the multiset
/// `{0 x reps, 1 x reps, .., k-1 x reps}` over `k * reps` positions.
pub fn unrank_multiset_perm(rank: u128, k: usize, reps: usize) -> Result<Vec<usize>> {
    if rank >= multiset_perm_count(k, reps) {
        return Err(Error::IndexOutOfRange);
    }
    let mut rank = rank;
    let len = k * reps;
    let mut counts = vec![reps; k];
    let mut out = Vec::with_capacity(len);
    for pos in 0..len {
        let remaining = len - pos - 1;
        for sym in 0..k {
            if counts[sym] == 0 {
                continue;
            }
            counts[sym] -= 1;
            let below = arrangements(remaining, &counts);
            if below <= rank {
                rank -= below;
                counts[sym] += 1;
            } else {
                out.push(sym);
                break;
            }
        }
    }
    Ok(out)
}

/// Lexicographic rank of a multiset arrangement produced by
/// [`unrank_multiset_perm`]; rejects arrangements with wrong multiplicities.
pub fn rank_multiset_perm(perm: &[usize], k: usize, reps: usize) -> Result<u128> {
    if perm.len() != k * reps {
        return Err(Error::InvalidState("arrangement has wrong length"));
    }
    let mut counts = vec![0usize; k];
    for &sym in perm {
        if sym >= k {
            return Err(Error::InvalidState("symbol out of range"));
        }
        counts[sym] += 1;
    }
    if counts.iter().any(|&c| c != reps) {
        return Err(Error::InvalidState("arrangement has wrong multiplicities"));
    }
    let mut counts = vec![reps; k];
    let mut rank: u128 = 0;
    for (pos, &sym) in perm.iter().enumerate() {
        let remaining = perm.len() - pos - 1;
        for smaller in 0..sym {
            if counts[smaller] == 0 {
                continue;
            }
            counts[smaller] -= 1;
            rank += arrangements(remaining, &counts);
            counts[smaller] += 1;
        }
        counts[sym] -= 1;
    }
    Ok(rank)
}

/// Arrangements of the leftover multiset described by `counts` over
/// `positions` slots (the counts are assumed to sum to `positions`).
fn arrangements(positions: usize, counts: &[usize]) -> u128 {
    let mut remaining = positions;
    let mut total: u128 = 1;
    for &c in counts {
        total *= binomial(remaining, c);
        remaining -= c;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
    }

    #[test]
    fn multiset_counts() {
        assert_eq!(multiset_perm_count(2, 2), 6); // 4!/(2!2!)
        assert_eq!(multiset_perm_count(2, 1), 2);
        assert_eq!(multiset_perm_count(3, 2), 90); // 6!/(2!)^3
        assert_eq!(multiset_perm_count(1, 4), 1);
    }

    #[test]
    fn combinations_lexicographic() {
        let all: Vec<Vec<usize>> = (0..6)
            .map(|r| unrank_combination(r, 4, 2).unwrap())
            .collect();
        assert_eq!(
            all,
            [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
        );
        assert!(unrank_combination(6, 4, 2).is_err());
    }

    #[test]
    fn multiset_perms_lexicographic() {
        let all: Vec<Vec<usize>> = (0..6)
            .map(|r| unrank_multiset_perm(r, 2, 2).unwrap())
            .collect();
        assert_eq!(
            all,
            [
                [0, 0, 1, 1],
                [0, 1, 0, 1],
                [0, 1, 1, 0],
                [1, 0, 0, 1],
                [1, 0, 1, 0],
                [1, 1, 0, 0]
            ]
        );
        assert!(unrank_multiset_perm(6, 2, 2).is_err());
    }

    #[test]
    fn rank_rejects_bad_multiplicities() {
        assert!(rank_multiset_perm(&[0, 0, 0, 1], 2, 2).is_err());
        assert!(rank_multiset_perm(&[0, 2, 1, 1], 2, 2).is_err());
    }

    proptest! {
        #[test]
        fn combination_roundtrip(n in 1usize..10, k_seed in 0usize..10, r_seed in 0u64..10_000) {
            let k = k_seed % (n + 1);
            let total = binomial(n, k);
            let rank = r_seed as u128 % total;
            let combo = unrank_combination(rank, n, k).unwrap();
            prop_assert_eq!(combo.len(), k);
            prop_assert_eq!(rank_combination(&combo, n).unwrap(), rank);
        }

        #[test]
        fn multiset_roundtrip(k in 1usize..5, reps in 1usize..4, r_seed in 0u64..100_000) {
            let total = multiset_perm_count(k, reps);
            let rank = r_seed as u128 % total;
            let perm = unrank_multiset_perm(rank, k, reps).unwrap();
            for sym in 0..k {
                prop_assert_eq!(perm.iter().filter(|&&s| s == sym).count(), reps);
            }
            prop_assert_eq!(rank_multiset_perm(&perm, k, reps).unwrap(), rank);
        }
    }
}
