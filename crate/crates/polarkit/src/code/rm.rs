//! Reed-Muller information sets.

use crate::{Error, Result};

/// Information set of the Reed-Muller code `RM(m, r)` of length `2^m`,
/// as 1-based positions: `{ i : weight(binary(i - 1)) >= m - r }`.
///
/// The set size is `sum_{w <= r} C(m, w)`.
pub fn rm_info_set(m: u32, r: u32) -> Result<Vec<usize>> {
    if m == 0 || m > 20 {
        return Err(Error::InvalidParameter(format!("m = {m} outside 1..=20")));
    }
    if r > m {
        return Err(Error::InvalidParameter(format!("r = {r} exceeds m = {m}")));
    }
    let n = 1usize << m;
    Ok((1..=n)
        .filter(|i| (i - 1).count_ones() >= m - r)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let mut acc = 1u64;
        for i in 0..k.min(n - k) {
            acc = acc * (n - i) / (i + 1);
        }
        acc
    }

    #[test]
    fn small_example() {
        assert_eq!(rm_info_set(3, 1).unwrap(), vec![4, 6, 7, 8]);
    }

    #[test]
    fn rate_one() {
        assert_eq!(rm_info_set(3, 3).unwrap(), (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn sizes_match_binomial_sums() {
        for m in 1..=8u32 {
            for r in 0..=m {
                let expected: u64 = (0..=r).map(|w| binomial(m as u64, w as u64)).sum();
                assert_eq!(rm_info_set(m, r).unwrap().len() as u64, expected, "RM({m},{r})");
            }
        }
        // The dimensions used throughout the experiments.
        assert_eq!(rm_info_set(5, 3).unwrap().len(), 26); // (32, 26)
        assert_eq!(rm_info_set(6, 3).unwrap().len(), 42); // (64, 42)
        assert_eq!(rm_info_set(7, 3).unwrap().len(), 64); // (128, 64)
    }

    #[test]
    fn invalid_ranges() {
        assert!(rm_info_set(0, 0).is_err());
        assert!(rm_info_set(3, 4).is_err());
    }
}
