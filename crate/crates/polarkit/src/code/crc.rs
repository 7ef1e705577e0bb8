//! CRC outer codes in Koopman notation.

use crate::{Error, Result};

/// A CRC generator polynomial given as a Koopman word: the `r`-bit binary
/// expansion carries the coefficients of `x^r .. x^1` and the `x^0`
/// coefficient is implicitly 1, so the degree is the word's bit length.
///
/// The register convention is fixed: zero initial state, no reflection, no
/// final XOR.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrcPoly {
    koopman_word: u64,
    degree: u32,
}

impl CrcPoly {
    /// Builds a polynomial from a Koopman word, e.g. `0x30` for
    /// `x^6 + x^5 + 1` or `0x710` for `x^11 + x^10 + x^9 + x^5 + 1`.
    pub fn new(koopman_word: u64) -> Result<Self> {
        if koopman_word == 0 {
            return Err(Error::InvalidParameter("Koopman word must be nonzero".into()));
        }
        let degree = 64 - koopman_word.leading_zeros();
        Ok(Self { koopman_word, degree })
    }

    /// Parses a Koopman word from hex, with or without a `0x` prefix.
    pub fn from_hex(text: &str) -> Result<Self> {
        let digits = text.trim().trim_start_matches("0x").trim_start_matches("0X");
        let word = u64::from_str_radix(digits, 16)
            .map_err(|e| Error::InvalidParameter(format!("bad CRC polynomial {text:?}: {e}")))?;
        Self::new(word)
    }

    /// Number of check bits `r`.
    pub fn degree(&self) -> usize {
        self.degree as usize
    }

    pub fn koopman_word(&self) -> u64 {
        self.koopman_word
    }

    /// Coefficients of the expanded generator from `x^r` down to `x^0`,
    /// as bits.
    pub fn expanded(&self) -> Vec<u8> {
        let full = (self.koopman_word << 1) | 1;
        (0..=self.degree).rev().map(|b| ((full >> b) & 1) as u8).collect()
    }

    /// Remainder of `data(x) * x^r` divided by the generator, MSB first:
    /// the `r` check bits to append after the data.
    pub fn compute(&self, data: &[u8]) -> Vec<u8> {
        let r = self.degree;
        let mask = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        // Feedback taps: generator coefficients x^{r-1} .. x^1 plus x^0.
        let taps = ((self.koopman_word << 1) | 1) & mask;
        let mut reg = 0u64;
        for &bit in data {
            let feedback = ((reg >> (r - 1)) ^ u64::from(bit & 1)) & 1;
            reg = (reg << 1) & mask;
            if feedback == 1 {
                reg ^= taps;
            }
        }
        (0..r).rev().map(|b| ((reg >> b) & 1) as u8).collect()
    }

    /// Verifies `payload = data || crc`: recomputes the check bits over the
    /// data part and compares. Returns false if the payload is shorter than
    /// the CRC itself.
    pub fn check(&self, payload: &[u8]) -> bool {
        let r = self.degree();
        if payload.len() < r {
            return false;
        }
        let (data, crc) = payload.split_at(payload.len() - r);
        self.compute(data) == crc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koopman_expansion() {
        // 0x30 = 110000 -> x^6 + x^5 + 1.
        let p6 = CrcPoly::new(0x30).unwrap();
        assert_eq!(p6.degree(), 6);
        assert_eq!(p6.expanded(), vec![1, 1, 0, 0, 0, 0, 1]);
        // 0x710 = 11100010000 -> x^11 + x^10 + x^9 + x^5 + 1.
        let p11 = CrcPoly::from_hex("0x710").unwrap();
        assert_eq!(p11.degree(), 11);
        assert_eq!(p11.expanded(), vec![1, 1, 1, 0, 0, 0, 1, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn zero_data_zero_crc() {
        let p = CrcPoly::new(0x30).unwrap();
        assert_eq!(p.compute(&[0; 17]), vec![0; 6]);
        assert!(p.check(&[0; 23]));
    }

    #[test]
    fn round_trip_and_single_bit_detection() {
        let p = CrcPoly::new(0x710).unwrap();
        let mut state = 1u64;
        let mut next = || {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            (state >> 40) as u8 & 1
        };
        for len in [1usize, 5, 42, 100] {
            let data: Vec<u8> = (0..len).map(|_| next()).collect();
            let mut payload = data.clone();
            payload.extend(p.compute(&data));
            assert!(p.check(&payload));
            for flip in 0..payload.len() {
                let mut corrupted = payload.clone();
                corrupted[flip] ^= 1;
                assert!(!p.check(&corrupted), "missed single flip at {flip}");
            }
        }
    }

    #[test]
    fn long_division_reference() {
        // Koopman 0x5 = 101b: degree 3, coefficients x^3, x^1, plus the
        // implicit 1 => g = x^3 + x + 1, the classic textbook polynomial.
        let p = CrcPoly::new(0x5).unwrap();
        assert_eq!(p.expanded(), vec![1, 0, 1, 1]);
        // 1101 * x^3 mod (1011): 1101000 / 1011 -> remainder 001.
        assert_eq!(p.compute(&[1, 1, 0, 1]), vec![0, 0, 1]);
    }

    #[test]
    fn rejects_zero_word() {
        assert!(CrcPoly::new(0).is_err());
        assert!(CrcPoly::from_hex("zz").is_err());
    }
}
