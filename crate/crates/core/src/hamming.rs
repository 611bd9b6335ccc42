//! Hamming building blocks: parity, distance limits, check-bit sizing,
//! extended-Hamming error classes, and a fixed Ham(7,4) / ExHam(8,4) codec.
//!
//! The small codec is written directly from its XOR equations and is kept
//! independent of the address-driven overlap codec so the two can be checked
//! against each other.

use crate::bits::BitVec;
use crate::error::{invalid, Result};

/// Even parity of a bit vector (XOR of every bit).
pub fn parity_bit(data: &BitVec) -> bool {
    data.count_ones() % 2 == 1
}

/// Error correction and detection limits implied by a minimum distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceLimits {
    pub distance: u32,
    pub max_correct: u32,
    pub max_detect: u32,
}

/// Limits for minimum distance `d`.
///
/// In detect-only mode a code detects `d - 1` errors. When correction and
/// detection run simultaneously, detection drops to `d - EC - 1`.
pub fn distance_limits(d: u32, simultaneous: bool) -> Result<DistanceLimits> {
    if d < 1 {
        return invalid("minimum distance must be at least 1");
    }
    let max_correct = (d - 1) / 2;
    let max_detect = if simultaneous {
        d - max_correct - 1
    } else {
        d - 1
    };
    Ok(DistanceLimits {
        distance: d,
        max_correct,
        max_detect,
    })
}

/// Smallest `k` with `2^k >= k + m + 1`.
pub fn min_check_bits(m: usize) -> u32 {
    let mut k = 1u32;
    while (1u128 << k) < (k as u128 + m as u128 + 1) {
        k += 1;
    }
    k
}

/// Extended-Hamming error class from the Hamming syndrome summary `s`
/// (OR of all syndrome bits) and the parity syndrome `delta`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorClass {
    NoError,
    SingleParityError,
    DoubleError,
    SingleError,
}

pub fn classify_syndrome(s: bool, delta: bool) -> ErrorClass {
    match (s, delta) {
        (false, false) => ErrorClass::NoError,
        (false, true) => ErrorClass::SingleParityError,
        (true, false) => ErrorClass::DoubleError,
        (true, true) => ErrorClass::SingleError,
    }
}

/// Ham(7,4) with codeword layout `[d0 d1 d2 d3 c0 c1 c2]`.
///
/// Data bits sit at Hamming addresses 3, 5, 6, 7 and check bits c0, c1, c2
/// at addresses 4, 2, 1, so the syndrome `[s0 s1 s2]` read as a binary
/// numeral is the address of the flipped bit.
pub mod ham74 {
    use super::*;

    /// Hamming address of each codeword position.
    pub const ADDRESS_OF_POSITION: [u8; 7] = [3, 5, 6, 7, 4, 2, 1];

    fn check_bits(d: [bool; 4]) -> [bool; 3] {
        let [d0, d1, d2, d3] = d;
        [d1 ^ d2 ^ d3, d0 ^ d2 ^ d3, d0 ^ d1 ^ d3]
    }

    fn data_of(word: &BitVec) -> [bool; 4] {
        [word.get(0), word.get(1), word.get(2), word.get(3)]
    }

    pub fn encode(data: &BitVec) -> Result<BitVec> {
        if data.len() != 4 {
            return invalid(format!("Ham(7,4) expects 4 data bits, got {}", data.len()));
        }
        let c = check_bits(data_of(data));
        BitVec::from_bits(data.iter().chain(c))
    }

    /// Syndrome `[s0 s1 s2]` of a received 7-bit codeword.
    pub fn syndrome(received: &BitVec) -> Result<BitVec> {
        if received.len() != 7 {
            return invalid(format!("Ham(7,4) expects 7 bits, got {}", received.len()));
        }
        let c = check_bits(data_of(received));
        BitVec::from_bits((0..3).map(|j| c[j] ^ received.get(4 + j)))
    }

    /// `4*s0 + 2*s1 + s2`; zero means no error.
    pub fn error_address(syndrome: &BitVec) -> Result<u8> {
        if syndrome.len() != 3 {
            return invalid(format!("syndrome must have 3 bits, got {}", syndrome.len()));
        }
        Ok(syndrome.iter().fold(0u8, |acc, s| acc << 1 | s as u8))
    }

    /// Codeword position holding `address`, `None` for address 0.
    pub fn position_of_address(address: u8) -> Option<usize> {
        ADDRESS_OF_POSITION.iter().position(|&a| a == address)
    }

    /// Corrects up to one error; returns the repaired codeword and the
    /// position that was flipped.
    pub fn correct(received: &BitVec) -> Result<(BitVec, Option<usize>)> {
        let address = error_address(&syndrome(received)?)?;
        let mut out = *received;
        let pos = position_of_address(address);
        if let Some(p) = pos {
            out.flip(p);
        }
        Ok((out, pos))
    }
}

/// ExHam(8,4): Ham(7,4) followed by an overall parity bit.
pub mod exham84 {
    use super::*;

    pub fn encode(data: &BitVec) -> Result<BitVec> {
        let word = ham74::encode(data)?;
        let p = parity_bit(&word);
        BitVec::from_bits(word.iter().chain([p]))
    }

    /// Classifies a received 8-bit codeword.
    pub fn classify(received: &BitVec) -> Result<ErrorClass> {
        if received.len() != 8 {
            return invalid(format!("ExHam(8,4) expects 8 bits, got {}", received.len()));
        }
        let body = BitVec::from_bits(received.iter().take(7))?;
        let s = ham74::syndrome(&body)?.count_ones() > 0;
        let delta = parity_bit(&body) ^ received.get(7);
        Ok(classify_syndrome(s, delta))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bv(s: &str) -> BitVec {
        s.parse().unwrap()
    }

    #[test]
    fn parity_examples() {
        assert!(!parity_bit(&bv("00000000")));
        assert!(!parity_bit(&bv("10000001")));
        assert!(parity_bit(&bv("11100000")));
    }

    #[test]
    fn distance_examples() {
        let l = distance_limits(3, false).unwrap();
        assert_eq!((l.max_correct, l.max_detect), (1, 2));
        let l = distance_limits(1, false).unwrap();
        assert_eq!((l.max_correct, l.max_detect), (0, 0));
        let l = distance_limits(8, true).unwrap();
        assert_eq!((l.max_correct, l.max_detect), (3, 4));
        assert!(distance_limits(0, false).is_err());
    }

    #[test]
    fn check_bit_examples() {
        assert_eq!(min_check_bits(4), 3);
        assert_eq!(min_check_bits(9), 4);
        assert_eq!(min_check_bits(11), 4);
        assert_eq!(min_check_bits(16), 5);
        assert_eq!(min_check_bits(26), 5);
        assert_eq!(min_check_bits(1024), 11);
    }

    #[test]
    fn check_bits_minimal_and_monotone() {
        let mut prev = 0;
        for m in 1..5000usize {
            let k = min_check_bits(m);
            assert!(k >= prev);
            assert!((1u64 << k) > k as u64 + m as u64);
            assert!((1u64 << (k - 1)) < (k - 1) as u64 + m as u64 + 1);
            prev = k;
        }
    }

    #[test]
    fn classification_is_a_bijection() {
        use std::collections::HashSet;
        let classes: HashSet<_> = [(false, false), (false, true), (true, false), (true, true)]
            .into_iter()
            .map(|(s, d)| classify_syndrome(s, d))
            .collect();
        assert_eq!(classes.len(), 4);
        assert_eq!(classify_syndrome(false, false), ErrorClass::NoError);
        assert_eq!(classify_syndrome(true, false), ErrorClass::DoubleError);
        assert_eq!(classify_syndrome(true, true), ErrorClass::SingleError);
    }

    #[test]
    fn ham74_examples() {
        assert_eq!(ham74::encode(&bv("1000")).unwrap(), bv("1000011"));
        assert_eq!(ham74::encode(&bv("0000")).unwrap(), bv("0000000"));
        assert_eq!(ham74::encode(&bv("0001")).unwrap(), bv("0001111"));
        assert!(ham74::encode(&bv("100")).is_err());

        assert_eq!(ham74::error_address(&bv("101")).unwrap(), 5);
        assert_eq!(ham74::error_address(&bv("000")).unwrap(), 0);
        assert_eq!(ham74::error_address(&bv("111")).unwrap(), 7);
        assert_eq!(ham74::position_of_address(5), Some(1));
        assert_eq!(ham74::position_of_address(7), Some(3));
    }

    #[test]
    fn ham74_worked_example() {
        let mut n = ham74::encode(&bv("1000")).unwrap();
        n.flip(1);
        assert_eq!(n, bv("1100011"));
        let s = ham74::syndrome(&n).unwrap();
        assert_eq!(s, bv("101"));
        assert_eq!(ham74::error_address(&s).unwrap(), 5);
    }

    #[test]
    fn ham74_single_errors_exhaustive() {
        for d in 0..16u128 {
            let data = BitVec::from_word(d, 4).unwrap();
            let word = ham74::encode(&data).unwrap();
            for pos in 0..7 {
                let mut bad = word;
                bad.flip(pos);
                let addr = ham74::error_address(&ham74::syndrome(&bad).unwrap()).unwrap();
                assert_eq!(addr, ham74::ADDRESS_OF_POSITION[pos]);
                assert_eq!(ham74::correct(&bad).unwrap(), (word, Some(pos)));
            }
        }
    }

    #[test]
    fn exham84_classes() {
        let word = exham84::encode(&bv("1000")).unwrap();
        assert_eq!(word, bv("10000111"));
        assert_eq!(exham84::classify(&word).unwrap(), ErrorClass::NoError);
        let mut one = word;
        one.flip(2);
        assert_eq!(exham84::classify(&one).unwrap(), ErrorClass::SingleError);
        let mut p = word;
        p.flip(7);
        assert_eq!(
            exham84::classify(&p).unwrap(),
            ErrorClass::SingleParityError
        );
        let two = bv("01000111");
        assert_eq!(exham84::classify(&two).unwrap(), ErrorClass::DoubleError);
    }

    proptest! {
        #[test]
        fn parity_matches_popcount(word in any::<u64>(), len in 1usize..=64) {
            let w = if len == 64 { word } else { word & ((1u64 << len) - 1) };
            let v = BitVec::from_word(w as u128, len).unwrap();
            let folded = v.iter().fold(false, |acc, b| acc ^ b);
            prop_assert_eq!(parity_bit(&v), folded);
            prop_assert_eq!(parity_bit(&v), w.count_ones() % 2 == 1);
        }
    }
}
