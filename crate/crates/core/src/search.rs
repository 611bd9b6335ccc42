//! Address-assignment search and validation.
//!
//! A pair of assignments is valid when every unordered pair of data
//! positions `{a, b}` maps to a distinct composite address
//! `(lo(a) ^ lo(b), li(a) ^ li(b))`. Only data-data pairs are checked: with
//! exactly two flips, a check or parity error leaves at least one layer
//! seeing a single flip (or nothing), and the decoder resolves those through
//! the zero-address exit or the single-error branches before it ever
//! consults the double-error table.

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::code::AddressAssignment;
use crate::error::{invalid, Error, Result};
use crate::hamming::min_check_bits;

/// Data addresses for `k` check bits: `3..2^k` without the powers of two.
pub fn available_addresses(k: u32) -> Vec<u32> {
    (3..1u32 << k).filter(|a| !a.is_power_of_two()).collect()
}

/// Two data pairs that share a composite address.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Collision {
    pub key: (u32, u32),
    pub first: (usize, usize),
    pub second: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    /// Number of distinct composite addresses seen.
    pub unique_keys: usize,
    pub collisions: Vec<Collision>,
}

pub fn validate_assignment(
    outer: &AddressAssignment,
    inner: &AddressAssignment,
    m: usize,
) -> Result<ValidationReport> {
    if outer.m() != m || inner.m() != m {
        return invalid(format!(
            "assignments cover {} and {} positions, expected {m}",
            outer.m(),
            inner.m()
        ));
    }
    if outer.k() != inner.k() {
        return invalid("outer and inner assignments use different k");
    }
    let mut seen: HashMap<(u32, u32), (usize, usize)> = HashMap::new();
    let mut collisions = Vec::new();
    for a in 0..m {
        for b in a + 1..m {
            let key = (
                outer.logical(a) ^ outer.logical(b),
                inner.logical(a) ^ inner.logical(b),
            );
            match seen.get(&key) {
                Some(&first) => collisions.push(Collision {
                    key,
                    first,
                    second: (a, b),
                }),
                None => {
                    seen.insert(key, (a, b));
                }
            }
        }
    }
    Ok(ValidationReport {
        ok: collisions.is_empty(),
        unique_keys: seen.len(),
        collisions,
    })
}

/// Result of a successful search.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub outer: AddressAssignment,
    pub inner: AddressAssignment,
    /// Backtracking nodes visited.
    pub explored: u64,
}

/// Default cap on visited nodes.
pub const DEFAULT_STATE_LIMIT: u64 = 50_000_000;

/// Knobs for [`search_assignment_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOptions {
    pub seed: u64,
    /// Addresses the outer layer takes its first `m` entries from, in this
    /// order. Defaults to every data address in ascending order.
    pub outer_pool: Option<Vec<u32>>,
    /// Candidate addresses for the inner layer. Defaults to every data
    /// address.
    pub inner_pool: Option<Vec<u32>>,
    pub max_states: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            seed: 0,
            outer_pool: None,
            inner_pool: None,
            max_states: DEFAULT_STATE_LIMIT,
        }
    }
}

/// Finds a valid (outer, inner) pair for `m` data bits and `k` check bits.
///
/// The outer layer takes the first `m` available addresses in ascending
/// order. The inner layer is filled position by position with backtracking;
/// a candidate is rejected as soon as one of its pairs with an earlier
/// position repeats a composite address. Seed `0` tries candidates in
/// ascending order; any other seed shuffles the candidate order at each
/// depth with a ChaCha generator, which helps for large `m`.
pub fn search_assignment(m: usize, k: u32, seed: u64) -> Result<SearchResult> {
    search_assignment_with(
        m,
        k,
        &SearchOptions {
            seed,
            ..SearchOptions::default()
        },
    )
}

pub fn search_assignment_with_limit(
    m: usize,
    k: u32,
    seed: u64,
    max_states: u64,
) -> Result<SearchResult> {
    search_assignment_with(
        m,
        k,
        &SearchOptions {
            seed,
            max_states,
            ..SearchOptions::default()
        },
    )
}

pub fn search_assignment_with(m: usize, k: u32, opts: &SearchOptions) -> Result<SearchResult> {
    if m == 0 {
        return invalid("need at least one data bit");
    }
    if !(2..=12).contains(&k) {
        return invalid(format!("check-bit count {k} outside 2..=12"));
    }
    if k < min_check_bits(m) {
        return invalid(format!("k={k} cannot protect {m} data bits"));
    }
    let addresses = available_addresses(k);
    let check_pool = |pool: &[u32]| -> Result<()> {
        if let Some(a) = pool.iter().find(|a| !addresses.contains(a)) {
            return invalid(format!("{a} is not a data address for k={k}"));
        }
        if pool.len() < m {
            return invalid(format!(
                "pool of {} addresses cannot cover {m} positions",
                pool.len()
            ));
        }
        Ok(())
    };
    let outer_pool = opts.outer_pool.clone().unwrap_or_else(|| addresses.clone());
    let inner_pool = opts.inner_pool.clone().unwrap_or_else(|| addresses.clone());
    check_pool(&outer_pool)?;
    check_pool(&inner_pool)?;
    let outer_addrs = outer_pool[..m].to_vec();

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let orders: Vec<Vec<u32>> = (0..m)
        .map(|_| {
            let mut order = inner_pool.clone();
            if opts.seed != 0 {
                order.shuffle(&mut rng);
            }
            order
        })
        .collect();

    let mut state = Backtrack {
        k,
        outer: &outer_addrs,
        orders: &orders,
        inner: Vec::with_capacity(m),
        used_addr: vec![false; 1 << k],
        used_key: vec![false; 1 << (2 * k)],
        explored: 0,
        max_states: opts.max_states,
    };
    match state.fill(0) {
        Some(true) => {
            let inner_addrs = state.inner.clone();
            let explored = state.explored;
            Ok(SearchResult {
                outer: AddressAssignment::new(k, outer_addrs)?,
                inner: AddressAssignment::new(k, inner_addrs)?,
                explored,
            })
        }
        _ => Err(Error::NotFound {
            explored: state.explored,
        }),
    }
}

struct Backtrack<'a> {
    k: u32,
    outer: &'a [u32],
    orders: &'a [Vec<u32>],
    inner: Vec<u32>,
    used_addr: Vec<bool>,
    used_key: Vec<bool>,
    explored: u64,
    max_states: u64,
}

impl Backtrack<'_> {
    fn key(&self, o: u32, i: u32) -> usize {
        ((o as usize) << self.k) | i as usize
    }

    /// `Some(true)` on success, `Some(false)` when the subtree is exhausted,
    /// `None` when the state budget ran out.
    fn fill(&mut self, pos: usize) -> Option<bool> {
        if pos == self.outer.len() {
            return Some(true);
        }
        for idx in 0..self.orders[pos].len() {
            let cand = self.orders[pos][idx];
            if self.used_addr[cand as usize] {
                continue;
            }
            self.explored += 1;
            if self.explored > self.max_states {
                return None;
            }
            let keys: Vec<usize> = (0..pos)
                .map(|q| self.key(self.outer[pos] ^ self.outer[q], cand ^ self.inner[q]))
                .collect();
            if keys.iter().any(|&key| self.used_key[key]) {
                continue;
            }
            for &key in &keys {
                self.used_key[key] = true;
            }
            self.used_addr[cand as usize] = true;
            self.inner.push(cand);
            match self.fill(pos + 1) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            self.inner.pop();
            self.used_addr[cand as usize] = false;
            for &key in &keys {
                self.used_key[key] = false;
            }
        }
        Some(false)
    }
}

/// JSON assignment file: `{ "m": .., "k": .., "outer": [..], "inner": [..] }`
/// with one logical address per physical data position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub m: usize,
    pub k: u32,
    pub outer: Vec<u32>,
    pub inner: Vec<u32>,
}

pub const ASSIGNMENT_SCHEMA: &str = "overlap-ecc/assignment/v1";

impl AssignmentFile {
    pub fn new(outer: &AddressAssignment, inner: &AddressAssignment) -> Self {
        AssignmentFile {
            schema: Some(ASSIGNMENT_SCHEMA.to_string()),
            m: outer.m(),
            k: outer.k(),
            outer: outer.logical_of_physical().to_vec(),
            inner: inner.logical_of_physical().to_vec(),
        }
    }

    pub fn assignments(&self) -> Result<(AddressAssignment, AddressAssignment)> {
        if self.outer.len() != self.m || self.inner.len() != self.m {
            return invalid(format!(
                "file declares m={} but lists {} outer and {} inner addresses",
                self.m,
                self.outer.len(),
                self.inner.len()
            ));
        }
        Ok((
            AddressAssignment::new(self.k, self.outer.clone())?,
            AddressAssignment::new(self.k, self.inner.clone())?,
        ))
    }
}
