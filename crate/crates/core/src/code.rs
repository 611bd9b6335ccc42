//! The overlapping code: two extended Hamming layers ("outer" and "inner")
//! that protect the same data region under different logical address
//! assignments.
//!
//! Everything the encoder and decoder need derives from an
//! [`OverlapConfig`]: check-bit equations come from the address bits, and the
//! double-error table comes from XOR-ing the addresses of every data pair.
//!
//! Serialized layout of a codestruct with `m` data bits and `k` check bits
//! per layer (`n = m + 2k + 2`):
//!
//! | positions               | content                    |
//! |-------------------------|----------------------------|
//! | `0 .. m`                | data, row-major            |
//! | `m .. m+k`              | outer check bits `co`      |
//! | `m+k`                   | outer parity `po`          |
//! | `m+k+1 .. m+2k+1`       | inner check bits `ci`      |
//! | `m+2k+1`                | inner parity `pi`          |

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::{BitVec, MAX_BITS};
use crate::error::{invalid, Error, Result};
use crate::hamming::min_check_bits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    Outer,
    Inner,
}

/// Mapping between physical data positions and logical Hamming addresses
/// for one layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AddressAssignment {
    k: u32,
    logical_of_physical: Vec<u32>,
    physical_of_logical: Vec<Option<usize>>,
}

impl AddressAssignment {
    /// `logical_of_physical[p]` is the logical address of data position `p`.
    pub fn new(k: u32, logical_of_physical: Vec<u32>) -> Result<Self> {
        if !(2..=16).contains(&k) {
            return invalid(format!("check-bit count {k} outside 2..=16"));
        }
        let size = 1usize << k;
        let mut inverse = vec![None; size];
        for (pos, &addr) in logical_of_physical.iter().enumerate() {
            if addr < 3 || addr as usize >= size || addr.is_power_of_two() {
                return invalid(format!(
                    "address {addr} of position {pos} is not a data address for k={k}"
                ));
            }
            if let Some(prev) = inverse[addr as usize] {
                return invalid(format!(
                    "address {addr} assigned to positions {prev} and {pos}"
                ));
            }
            inverse[addr as usize] = Some(pos);
        }
        Ok(AddressAssignment {
            k,
            logical_of_physical,
            physical_of_logical: inverse,
        })
    }

    /// Builds an assignment from an inverse table in which `-1` marks
    /// unassigned addresses.
    pub fn from_inverse_table(k: u32, table: &[i64]) -> Result<Self> {
        if table.len() != 1usize << k {
            return invalid(format!(
                "inverse table for k={k} needs {} entries",
                1usize << k
            ));
        }
        let m = table.iter().filter(|&&p| p >= 0).count();
        let mut forward = vec![u32::MAX; m];
        for (addr, &pos) in table.iter().enumerate() {
            if pos < 0 {
                continue;
            }
            let pos = pos as usize;
            if pos >= m || forward[pos] != u32::MAX {
                return invalid(format!(
                    "inverse table entry {pos} is duplicated or out of range"
                ));
            }
            forward[pos] = addr as u32;
        }
        AddressAssignment::new(k, forward)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Number of data positions covered.
    pub fn m(&self) -> usize {
        self.logical_of_physical.len()
    }

    pub fn logical(&self, pos: usize) -> u32 {
        self.logical_of_physical[pos]
    }

    pub fn physical(&self, addr: u32) -> Option<usize> {
        self.physical_of_logical
            .get(addr as usize)
            .copied()
            .flatten()
    }

    pub fn logical_of_physical(&self) -> &[u32] {
        &self.logical_of_physical
    }

    /// Inverse table with `-1` for check-bit, zero and unused addresses.
    pub fn inverse_table(&self) -> Vec<i64> {
        self.physical_of_logical
            .iter()
            .map(|p| p.map_or(-1, |p| p as i64))
            .collect()
    }

    /// Logical addresses available to this layer but not assigned.
    pub fn spare_addresses(&self) -> Vec<u32> {
        crate::search::available_addresses(self.k)
            .into_iter()
            .filter(|&a| self.physical(a).is_none())
            .collect()
    }
}

/// Composite double-error address `(EArO, EArI)` to the pair of data
/// positions that produces it.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DoubleErrorTable {
    entries: BTreeMap<(u32, u32), (usize, usize)>,
}

impl DoubleErrorTable {
    pub fn get(&self, ear_o: u32, ear_i: u32) -> Option<(usize, usize)> {
        self.entries.get(&(ear_o, ear_i)).copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), (usize, usize))> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }
}

/// Inserts every unordered data pair under its composite address; fails on
/// the first repeated key.
pub fn build_double_error_table(
    outer: &AddressAssignment,
    inner: &AddressAssignment,
) -> Result<DoubleErrorTable> {
    if outer.m() != inner.m() || outer.k() != inner.k() {
        return invalid("outer and inner assignments differ in size");
    }
    let m = outer.m();
    let mut entries = BTreeMap::new();
    for a in 0..m {
        for b in a + 1..m {
            let key = (
                outer.logical(a) ^ outer.logical(b),
                inner.logical(a) ^ inner.logical(b),
            );
            if let Some(&(pa, pb)) = entries.get(&key) {
                return Err(Error::InvalidConfig(format!(
                    "pairs ({pa},{pb}) and ({a},{b}) share composite address {key:?}"
                )));
            }
            entries.insert(key, (a, b));
        }
    }
    Ok(DoubleErrorTable { entries })
}

/// Geometry and address assignments of an overlapped code, together with
/// the tables derived from them. Immutable once built.
#[derive(Debug, Clone)]
pub struct OverlapConfig {
    name: String,
    rows: usize,
    cols: usize,
    k: u32,
    outer: AddressAssignment,
    inner: AddressAssignment,
    double: DoubleErrorTable,
}

impl OverlapConfig {
    pub fn new(
        name: impl Into<String>,
        rows: usize,
        cols: usize,
        outer: AddressAssignment,
        inner: AddressAssignment,
    ) -> Result<Self> {
        let m = rows * cols;
        if m == 0 {
            return invalid("data matrix must have at least one bit");
        }
        let k = outer.k();
        if inner.k() != k {
            return invalid(format!("layers use different k ({} vs {})", k, inner.k()));
        }
        if k < min_check_bits(m) {
            return invalid(format!("k={k} cannot protect {m} data bits"));
        }
        if outer.m() != m || inner.m() != m {
            return invalid(format!(
                "assignments cover {} and {} positions, expected {m}",
                outer.m(),
                inner.m()
            ));
        }
        if m + 2 * k as usize + 2 > MAX_BITS {
            return invalid(format!(
                "codestruct of {} bits is too large",
                m + 2 * k as usize + 2
            ));
        }
        let double = build_double_error_table(&outer, &inner)?;
        Ok(OverlapConfig {
            name: name.into(),
            rows,
            cols,
            k,
            outer,
            inner,
            double,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Data bits.
    pub fn m(&self) -> usize {
        self.rows * self.cols
    }

    /// Check bits per layer.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Total codestruct length.
    pub fn n(&self) -> usize {
        self.m() + 2 * self.k as usize + 2
    }

    pub fn outer(&self) -> &AddressAssignment {
        &self.outer
    }

    pub fn inner(&self) -> &AddressAssignment {
        &self.inner
    }

    pub fn assignment(&self, layer: Layer) -> &AddressAssignment {
        match layer {
            Layer::Outer => &self.outer,
            Layer::Inner => &self.inner,
        }
    }

    pub fn double_error_table(&self) -> &DoubleErrorTable {
        &self.double
    }

    pub(crate) fn layout(&self) -> Layout {
        Layout::new(self.m(), self.k)
    }

    /// Data positions covered by each check bit of `layer`. Check bit `j`
    /// (j = 0 most significant) covers every position whose logical address
    /// has bit `2^(k-1-j)` set.
    pub fn check_equations(&self, layer: Layer) -> Vec<Vec<usize>> {
        let a = self.assignment(layer);
        (0..self.k)
            .map(|j| {
                let bit = 1u32 << (self.k - 1 - j);
                (0..self.m()).filter(|&p| a.logical(p) & bit != 0).collect()
            })
            .collect()
    }

    /// Encodes `data` (row-major, length `m`) into a codestruct.
    pub fn encode(&self, data: &BitVec) -> Result<Codestruct> {
        if data.len() != self.m() {
            return invalid(format!(
                "code {} expects {} data bits, got {}",
                self.name,
                self.m(),
                data.len()
            ));
        }
        Ok(Codestruct {
            layout: self.layout(),
            word: self.encode_word(data.word()),
        })
    }

    pub(crate) fn encode_word(&self, data: u128) -> u128 {
        let l = self.layout();
        let co = self.address_sum(&self.outer, data);
        let ci = self.address_sum(&self.inner, data);
        let co_bits = l.place_checks(co);
        let ci_bits = l.place_checks(ci);
        let data_par = data.count_ones() & 1;
        let po = (data_par ^ co.count_ones() & 1) as u128;
        let pi = (data_par ^ ci.count_ones() & 1) as u128;
        data | co_bits << l.co | po << l.po | ci_bits << l.ci | pi << l.pi
    }

    /// XOR of the logical addresses of all set data bits, which equals the
    /// check vector read as a binary number (co0 most significant).
    fn address_sum(&self, layer: &AddressAssignment, data: u128) -> u32 {
        let mut rest = data;
        let mut acc = 0;
        while rest != 0 {
            let p = rest.trailing_zeros() as usize;
            acc ^= layer.logical(p);
            rest &= rest - 1;
        }
        acc
    }

    /// Recomputes check and parity bits from the stored data and derives
    /// every syndrome quantity.
    pub fn syndromes(&self, cs: &Codestruct) -> Result<SyndromeSet> {
        self.check_layout(cs)?;
        let raw = self.raw_syndromes(cs.word);
        let k = self.k as usize;
        let addr_bits = |ear: u32| {
            BitVec::from_bits((0..k).map(|j| ear >> (k - 1 - j) & 1 == 1))
                .expect("k fits in a bit vector")
        };
        let s_coq = raw.ear_o != 0;
        let s_ciq = raw.ear_i != 0;
        Ok(SyndromeSet {
            s_co: addr_bits(raw.ear_o),
            s_ci: addr_bits(raw.ear_i),
            s_po: raw.s_po,
            s_pi: raw.s_pi,
            s_coq,
            s_ciq,
            ear_o: raw.ear_o,
            ear_i: raw.ear_i,
            se_o: s_coq && raw.s_po,
            se_i: s_ciq && raw.s_pi,
            de_o: s_coq && !raw.s_po,
            de_i: s_ciq && !raw.s_pi,
        })
    }

    fn raw_syndromes(&self, word: u128) -> RawSyndromes {
        let l = self.layout();
        let data = word & l.data_mask;
        let stored_co = l.read_checks(word >> l.co);
        let stored_ci = l.read_checks(word >> l.ci);
        RawSyndromes {
            ear_o: self.address_sum(&self.outer, data) ^ stored_co,
            ear_i: self.address_sum(&self.inner, data) ^ stored_ci,
            // Recomputed parity uses the stored check bits, so the parity
            // syndrome is the parity of the whole layer block.
            s_po: (word & l.outer_block).count_ones() & 1 == 1,
            s_pi: (word & l.inner_block).count_ones() & 1 == 1,
        }
    }

    /// Decodes a codestruct, correcting up to two data errors.
    pub fn decode(&self, cs: &Codestruct) -> Result<DecodeOutcome> {
        self.check_layout(cs)?;
        let (data, detected, action) = self.decode_word(cs.word);
        Ok(DecodeOutcome {
            data: BitVec::from_word_unchecked(data, self.m()),
            detected,
            action,
        })
    }

    /// Table-driven decoder on a packed codestruct. Returns the (possibly
    /// corrected) data word, the detection flag and the applied action.
    ///
    /// Branch order: either layer address zero, then single outer, single
    /// inner, and finally the double-error table when both layers report a
    /// double error. Check bits are never repaired.
    pub(crate) fn decode_word(&self, word: u128) -> (u128, bool, Action) {
        let l = self.layout();
        let data = word & l.data_mask;
        let s = self.raw_syndromes(word);
        let detected = s.s_po || s.s_pi || s.ear_o != 0 || s.ear_i != 0;
        let fallback = if detected {
            Action::DetectedOnly
        } else {
            Action::None
        };

        if s.ear_o == 0 || s.ear_i == 0 {
            return (data, detected, fallback);
        }
        if s.s_po {
            return match self.outer.physical(s.ear_o) {
                Some(p) => (data ^ 1 << p, detected, Action::SingleOuter(p)),
                None => (data, detected, fallback),
            };
        }
        if s.s_pi {
            return match self.inner.physical(s.ear_i) {
                Some(p) => (data ^ 1 << p, detected, Action::SingleInner(p)),
                None => (data, detected, fallback),
            };
        }
        match self.double.get(s.ear_o, s.ear_i) {
            Some((a, b)) => (data ^ 1 << a ^ 1 << b, detected, Action::DoublePair(a, b)),
            None => (data, detected, fallback),
        }
    }

    fn check_layout(&self, cs: &Codestruct) -> Result<()> {
        if cs.layout != self.layout() {
            return invalid(format!(
                "codestruct has m={}, k={} but code {} needs m={}, k={}",
                cs.layout.m,
                cs.layout.k,
                self.name,
                self.m(),
                self.k
            ));
        }
        Ok(())
    }

    /// Parses a codestruct from its hex text form.
    pub fn codestruct_from_hex(&self, hex: &str) -> Result<Codestruct> {
        let bits = BitVec::from_hex(hex, self.n())?;
        Codestruct::from_bits(self.m(), self.k, &bits)
    }
}

struct RawSyndromes {
    ear_o: u32,
    ear_i: u32,
    s_po: bool,
    s_pi: bool,
}

/// Bit offsets of each field inside a packed codestruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Layout {
    pub m: usize,
    pub k: u32,
    pub co: usize,
    pub po: usize,
    pub ci: usize,
    pub pi: usize,
    pub n: usize,
    pub data_mask: u128,
    outer_block: u128,
    inner_block: u128,
}

impl Layout {
    pub fn new(m: usize, k: u32) -> Self {
        let k_us = k as usize;
        let co = m;
        let po = m + k_us;
        let ci = po + 1;
        let pi = ci + k_us;
        let n = pi + 1;
        let ones = |len: usize| {
            if len == 128 {
                u128::MAX
            } else {
                (1u128 << len) - 1
            }
        };
        let data_mask = ones(m);
        let check_mask = ones(k_us);
        Layout {
            m,
            k,
            co,
            po,
            ci,
            pi,
            n,
            data_mask,
            outer_block: data_mask | check_mask << co | 1 << po,
            inner_block: data_mask | check_mask << ci | 1 << pi,
        }
    }

    /// Spreads a check vector value (bit `k-1` = check 0) onto serialized
    /// bit order (check 0 first).
    fn place_checks(&self, value: u32) -> u128 {
        let k = self.k;
        (0..k).fold(0u128, |acc, j| {
            acc | (((value >> (k - 1 - j)) & 1) as u128) << j
        })
    }

    /// Inverse of `place_checks` for the `k` bits at the bottom of `bits`.
    fn read_checks(&self, bits: u128) -> u32 {
        let k = self.k;
        (0..k).fold(0u32, |acc, j| {
            acc | (((bits >> j) & 1) as u32) << (k - 1 - j)
        })
    }
}

/// Data bits plus both layers' check and parity bits.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Codestruct {
    layout: Layout,
    word: u128,
}

impl std::hash::Hash for Layout {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.m.hash(state);
        self.k.hash(state);
    }
}

impl Codestruct {
    /// Reassembles a codestruct from its serialized bits.
    pub fn from_bits(m: usize, k: u32, bits: &BitVec) -> Result<Self> {
        let layout = Layout::new(m, k);
        if bits.len() != layout.n {
            return invalid(format!("expected {} bits, got {}", layout.n, bits.len()));
        }
        Ok(Codestruct {
            layout,
            word: bits.word(),
        })
    }

    pub fn from_parts(data: &BitVec, co: &BitVec, po: bool, ci: &BitVec, pi: bool) -> Result<Self> {
        if co.len() != ci.len() {
            return invalid("outer and inner check vectors differ in length");
        }
        let k = co.len() as u32;
        let m = data.len();
        if m + 2 * k as usize + 2 > MAX_BITS {
            return invalid("codestruct too large");
        }
        let l = Layout::new(m, k);
        let word = data.word()
            | co.word() << l.co
            | (po as u128) << l.po
            | ci.word() << l.ci
            | (pi as u128) << l.pi;
        Ok(Codestruct { layout: l, word })
    }

    pub(crate) fn from_word(layout: Layout, word: u128) -> Self {
        Codestruct { layout, word }
    }

    pub(crate) fn word(&self) -> u128 {
        self.word
    }

    pub fn m(&self) -> usize {
        self.layout.m
    }

    pub fn k(&self) -> u32 {
        self.layout.k
    }

    pub fn len(&self) -> usize {
        self.layout.n
    }

    pub fn is_empty(&self) -> bool {
        self.layout.n == 0
    }

    pub fn data(&self) -> BitVec {
        BitVec::from_word_unchecked(self.word & self.layout.data_mask, self.layout.m)
    }

    fn slice(&self, start: usize, len: usize) -> BitVec {
        let mask = if len == 128 {
            u128::MAX
        } else {
            (1u128 << len) - 1
        };
        BitVec::from_word_unchecked(self.word >> start & mask, len)
    }

    pub fn co(&self) -> BitVec {
        self.slice(self.layout.co, self.layout.k as usize)
    }

    pub fn po(&self) -> bool {
        self.word >> self.layout.po & 1 == 1
    }

    pub fn ci(&self) -> BitVec {
        self.slice(self.layout.ci, self.layout.k as usize)
    }

    pub fn pi(&self) -> bool {
        self.word >> self.layout.pi & 1 == 1
    }

    pub fn get(&self, pos: usize) -> bool {
        assert!(pos < self.layout.n, "position {pos} out of range");
        self.word >> pos & 1 == 1
    }

    pub fn flip(&mut self, pos: usize) {
        assert!(pos < self.layout.n, "position {pos} out of range");
        self.word ^= 1 << pos;
    }

    /// Serialized bits in layout order.
    pub fn to_bits(&self) -> BitVec {
        BitVec::from_word_unchecked(self.word, self.layout.n)
    }

    pub fn to_hex(&self) -> String {
        self.to_bits().to_hex()
    }

    pub fn to_json(&self) -> CodestructJson {
        let bit = |b: bool| if b { "1" } else { "0" }.to_string();
        CodestructJson {
            data: self.data().to_string(),
            co: self.co().to_string(),
            po: bit(self.po()),
            ci: self.ci().to_string(),
            pi: bit(self.pi()),
        }
    }

    pub fn from_json(json: &CodestructJson) -> Result<Self> {
        let one = |s: &str| -> Result<bool> {
            match s.trim() {
                "0" => Ok(false),
                "1" => Ok(true),
                other => invalid(format!("parity field must be 0 or 1, got {other:?}")),
            }
        };
        Codestruct::from_parts(
            &json.data.parse()?,
            &json.co.parse()?,
            one(&json.po)?,
            &json.ci.parse()?,
            one(&json.pi)?,
        )
    }
}

impl fmt::Debug for Codestruct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Codestruct {{ data: {}, co: {}, po: {}, ci: {}, pi: {} }}",
            self.data(),
            self.co(),
            self.po() as u8,
            self.ci(),
            self.pi() as u8
        )
    }
}

/// JSON text form with every field as a bit string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodestructJson {
    pub data: String,
    pub co: String,
    pub po: String,
    pub ci: String,
    pub pi: String,
}

/// Every syndrome quantity the decoder looks at.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeSet {
    pub s_co: BitVec,
    pub s_ci: BitVec,
    pub s_po: bool,
    pub s_pi: bool,
    /// OR of `s_co`.
    pub s_coq: bool,
    pub s_ciq: bool,
    /// `s_co` read as a binary number, `s_co[0]` most significant.
    pub ear_o: u32,
    pub ear_i: u32,
    pub se_o: bool,
    pub se_i: bool,
    pub de_o: bool,
    pub de_i: bool,
}

/// What the decoder did to the data region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    None,
    SingleOuter(usize),
    SingleInner(usize),
    DoublePair(usize, usize),
    DetectedOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub data: BitVec,
    pub detected: bool,
    pub action: Action,
}
