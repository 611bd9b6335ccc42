//! Fixed-length bit vectors.
//!
//! Every sequence handled by this crate (data words, check vectors,
//! syndromes, serialized codestructs) fits in 128 bits, so [`BitVec`] is a
//! `Copy` value backed by a single `u128`. Position `0` is the first bit when
//! the vector is printed.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};

/// Largest number of bits a [`BitVec`] can hold.
pub const MAX_BITS: usize = 128;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    word: u128,
}

impl BitVec {
    pub fn zeros(len: usize) -> Result<Self> {
        if len > MAX_BITS {
            return invalid(format!("bit vector of {len} bits exceeds {MAX_BITS}"));
        }
        Ok(BitVec { len, word: 0 })
    }

    /// Builds a vector from the low `len` bits of `word`; bit `i` of the
    /// word becomes position `i`.
    pub fn from_word(word: u128, len: usize) -> Result<Self> {
        if len > MAX_BITS {
            return invalid(format!("bit vector of {len} bits exceeds {MAX_BITS}"));
        }
        if len < MAX_BITS && word >> len != 0 {
            return invalid(format!("word has bits set beyond length {len}"));
        }
        Ok(BitVec { len, word })
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Result<Self> {
        let mut v = BitVec::default();
        for b in bits {
            if v.len == MAX_BITS {
                return invalid(format!("bit vector exceeds {MAX_BITS} bits"));
            }
            if b {
                v.word |= 1 << v.len;
            }
            v.len += 1;
        }
        Ok(v)
    }

    pub(crate) fn from_word_unchecked(word: u128, len: usize) -> Self {
        debug_assert!(len <= MAX_BITS);
        BitVec { len, word }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Raw storage, position `i` at bit `i`.
    pub fn word(&self) -> u128 {
        self.word
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(
            pos < self.len,
            "bit {pos} out of range for length {}",
            self.len
        );
        self.word >> pos & 1 == 1
    }

    pub fn set(&mut self, pos: usize, value: bool) {
        assert!(
            pos < self.len,
            "bit {pos} out of range for length {}",
            self.len
        );
        if value {
            self.word |= 1 << pos;
        } else {
            self.word &= !(1 << pos);
        }
    }

    pub fn flip(&mut self, pos: usize) {
        assert!(
            pos < self.len,
            "bit {pos} out of range for length {}",
            self.len
        );
        self.word ^= 1 << pos;
    }

    pub fn count_ones(&self) -> u32 {
        self.word.count_ones()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.word >> i & 1 == 1)
    }

    /// Interprets the vector as a big-endian integer: position 0 is the most
    /// significant bit.
    pub fn to_msb_first(&self) -> u128 {
        (0..self.len).fold(0u128, |acc, i| acc << 1 | (self.word >> i & 1))
    }

    /// Inverse of [`BitVec::to_msb_first`].
    pub fn from_msb_first(value: u128, len: usize) -> Result<Self> {
        if len > MAX_BITS {
            return invalid(format!("bit vector of {len} bits exceeds {MAX_BITS}"));
        }
        if len < MAX_BITS && value >> len != 0 {
            return invalid(format!("value does not fit in {len} bits"));
        }
        let word = (0..len).fold(0u128, |acc, i| acc | (value >> (len - 1 - i) & 1) << i);
        Ok(BitVec { len, word })
    }

    /// Lowercase hex with position 0 as the most significant bit; the top
    /// digit is zero-padded when the length is not a multiple of four.
    pub fn to_hex(&self) -> String {
        let digits = self.len.div_ceil(4).max(1);
        format!("{:0width$x}", self.to_msb_first(), width = digits)
    }

    pub fn from_hex(s: &str, len: usize) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_prefix("0x").unwrap_or(s);
        if s.is_empty() || s.len() > len.div_ceil(4).max(1) {
            return invalid(format!("hex '{s}' does not encode {len} bits"));
        }
        let value = u128::from_str_radix(s, 16)
            .map_err(|e| Error::InvalidArgument(format!("bad hex '{s}': {e}")))?;
        BitVec::from_msb_first(value, len)
    }
}

impl FromStr for BitVec {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; `_` and whitespace are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' => {}
                c if c.is_whitespace() => {}
                c => return invalid(format!("unexpected character {c:?} in bit string")),
            }
        }
        BitVec::from_bits(bits)
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_display() {
        let v: BitVec = "1000011".parse().unwrap();
        assert_eq!(v.len(), 7);
        assert!(v.get(0));
        assert!(!v.get(1));
        assert!(v.get(6));
        assert_eq!(v.to_string(), "1000011");
        assert!("10x1".parse::<BitVec>().is_err());
    }

    #[test]
    fn hex_puts_position_zero_first() {
        let mut v = BitVec::zeros(19).unwrap();
        v.set(0, true);
        // 19 bits pad to 20, so position 0 is bit 18 of the value.
        assert_eq!(v.to_hex(), "40000");
        assert_eq!(BitVec::zeros(19).unwrap().to_hex(), "00000");
        assert!(BitVec::from_hex("80000", 19).is_err());
        assert!(BitVec::from_hex("zz", 19).is_err());
    }

    #[test]
    fn rejects_oversize() {
        assert!(BitVec::zeros(129).is_err());
        assert!(BitVec::from_word(0b100, 2).is_err());
    }

    proptest! {
        #[test]
        fn hex_round_trip(len in 1usize..=128, raw in any::<u128>()) {
            let word = if len == 128 { raw } else { raw & ((1u128 << len) - 1) };
            let v = BitVec::from_word(word, len).unwrap();
            prop_assert_eq!(BitVec::from_hex(&v.to_hex(), len).unwrap(), v);
            prop_assert_eq!(v.to_string().parse::<BitVec>().unwrap(), v);
        }
    }
}
