//! 5G polar information sets from the universal reliability sequence.

mod table {
    include!("nr5g_table.rs");
}

use crate::{Error, Result};

/// Information set of an `(N, K)` 5G polar code as sorted 1-based positions:
/// the `K` most reliable input positions below `N` in the embedded universal
/// length-1024 sequence, order preserved under restriction.
///
/// No rate matching, puncturing or interleaving is applied.
pub fn nr5g_info_set(block_len: usize, dimension: usize) -> Result<Vec<usize>> {
    if !block_len.is_power_of_two() || !(2..=1024).contains(&block_len) {
        return Err(Error::InvalidParameter(format!(
            "block length {block_len} must be a power of two in 2..=1024"
        )));
    }
    if dimension == 0 || dimension > block_len {
        return Err(Error::InvalidParameter(format!(
            "dimension {dimension} outside 1..={block_len}"
        )));
    }
    let restricted: Vec<usize> = table::RELIABILITY_1024
        .iter()
        .map(|&q| q as usize)
        .filter(|&q| q < block_len)
        .collect();
    debug_assert_eq!(restricted.len(), block_len);
    let mut info: Vec<usize> = restricted[block_len - dimension..]
        .iter()
        .map(|&q| q + 1)
        .collect();
    info.sort_unstable();
    Ok(info)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_is_a_permutation() {
        let mut seen = [false; 1024];
        for &q in table::RELIABILITY_1024.iter() {
            assert!(!seen[q as usize]);
            seen[q as usize] = true;
        }
        // Spot checks against the published table.
        assert_eq!(&table::RELIABILITY_1024[..8], &[0, 1, 2, 4, 8, 16, 32, 3]);
        assert_eq!(table::RELIABILITY_1024[1023], 1023);
    }

    #[test]
    fn full_rate_is_everything() {
        assert_eq!(nr5g_info_set(8, 8).unwrap(), (1..=8).collect::<Vec<_>>());
    }

    #[test]
    fn single_bit_uses_last_position() {
        assert_eq!(nr5g_info_set(32, 1).unwrap(), vec![32]);
    }

    #[test]
    fn sizes_and_ranges() {
        let info = nr5g_info_set(128, 64).unwrap();
        assert_eq!(info.len(), 64);
        assert!(info.windows(2).all(|w| w[0] < w[1]));
        assert!(info.iter().all(|&i| (1..=128).contains(&i)));
    }

    #[test]
    fn invalid_lengths() {
        assert!(nr5g_info_set(48, 10).is_err());
        assert!(nr5g_info_set(2048, 10).is_err());
        assert!(nr5g_info_set(64, 0).is_err());
        assert!(nr5g_info_set(64, 65).is_err());
    }
}
