//! Exhaustive fault injection.
//!
//! Error patterns are the `e`-subsets of a region's positions, generated in
//! lexicographic order and never materialized. A sweep encodes one payload,
//! applies every pattern, decodes, and tallies how many decodes raised the
//! detection flag and how many restored the data region.

use std::fmt;
use std::ops::{Range, RangeInclusive};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bits::BitVec;
use crate::code::{Codestruct, Layout, OverlapConfig};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Data,
    CheckBits,
    Codestruct,
}

impl Region {
    pub const ALL: [Region; 3] = [Region::Data, Region::CheckBits, Region::Codestruct];

    /// Half-open serialized position interval for a code with `m` data bits
    /// and `n` total bits.
    pub fn interval(self, m: usize, n: usize) -> Range<usize> {
        match self {
            Region::Data => 0..m,
            Region::CheckBits => m..n,
            Region::Codestruct => 0..n,
        }
    }

    pub fn size(self, m: usize, n: usize) -> usize {
        self.interval(m, n).len()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Region::Data => "data",
            Region::CheckBits => "check",
            Region::Codestruct => "codestruct",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Region {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "data" => Ok(Region::Data),
            "check" | "checkbits" | "check-bits" => Ok(Region::CheckBits),
            "all" | "codestruct" => Ok(Region::Codestruct),
            other => invalid(format!("unknown region {other:?} (data, check, all)")),
        }
    }
}

/// How an error at an inner check-bit position is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InjectionMode {
    /// Every listed position is inverted.
    Flip,
    /// An error at inner check bit `j` stores the complement of outer check
    /// bit `j` (as it currently reads) instead of inverting `ci[j]`. All
    /// other positions are inverted. Patterns are applied in ascending
    /// position order, so an outer error at `j` is visible to the inner
    /// write. This is the injector behind the tabulated rates in
    /// [`crate::reference`]; with an all-zero payload it differs from
    /// [`InjectionMode::Flip`] only when `co[j]` and `ci[j]` are both hit.
    #[default]
    OuterComplement,
}

impl FromStr for InjectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "flip" => Ok(InjectionMode::Flip),
            "outer-complement" => Ok(InjectionMode::OuterComplement),
            other => invalid(format!(
                "unknown injection mode {other:?} (flip, outer-complement)"
            )),
        }
    }
}

impl fmt::Display for InjectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InjectionMode::Flip => "flip",
            InjectionMode::OuterComplement => "outer-complement",
        })
    }
}

/// `C(n, k)`; saturates at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Lexicographic stream of strictly increasing `e`-tuples over `0..size`.
#[derive(Debug, Clone)]
pub struct Patterns {
    size: usize,
    current: Vec<usize>,
    remaining: u64,
    started: bool,
}

impl Patterns {
    pub fn new(size: usize, e: usize) -> Result<Self> {
        Patterns::starting_at(size, e, 0)
    }

    /// Stream that begins at lexicographic `rank`.
    pub fn starting_at(size: usize, e: usize, rank: u64) -> Result<Self> {
        if e > size {
            return invalid(format!("cannot choose {e} positions out of {size}"));
        }
        let total = binomial(size as u64, e as u64);
        if rank > total {
            return invalid(format!("rank {rank} beyond {total} patterns"));
        }
        let current = if rank < total {
            unrank(size, e, rank)
        } else {
            Vec::new()
        };
        Ok(Patterns {
            size,
            current,
            remaining: total - rank,
            started: false,
        })
    }

    pub fn remaining(&self) -> u64 {
        self.remaining
    }

    /// Returns the next tuple; `None` once exhausted.
    pub fn next_pattern(&mut self) -> Option<&[usize]> {
        if self.remaining == 0 {
            return None;
        }
        if self.started {
            advance(&mut self.current, self.size);
        }
        self.started = true;
        self.remaining -= 1;
        Some(&self.current)
    }
}

impl Iterator for Patterns {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        self.next_pattern().map(<[usize]>::to_vec)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let r = usize::try_from(self.remaining).unwrap_or(usize::MAX);
        (r, Some(r))
    }
}

fn unrank(size: usize, e: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(e);
    let mut next = 0;
    for i in 0..e {
        let mut c = next;
        loop {
            let block = binomial((size - c - 1) as u64, (e - i - 1) as u64);
            if rank < block {
                break;
            }
            rank -= block;
            c += 1;
        }
        out.push(c);
        next = c + 1;
    }
    out
}

fn advance(cur: &mut [usize], size: usize) {
    let e = cur.len();
    let mut i = e;
    while i > 0 {
        i -= 1;
        if cur[i] < size - (e - i) {
            cur[i] += 1;
            for j in i + 1..e {
                cur[j] = cur[j - 1] + 1;
            }
            return;
        }
    }
}

/// All `e`-subsets of `0..region_size` in lexicographic order.
pub fn enumerate_patterns(region_size: usize, e: usize) -> Result<Patterns> {
    Patterns::new(region_size, e)
}

/// Flips the listed positions, given relative to `region`, on a copy of
/// `cs`.
pub fn apply_pattern(cs: &Codestruct, pattern: &[usize], region: Region) -> Result<Codestruct> {
    apply_pattern_with(cs, pattern, region, InjectionMode::Flip)
}

pub fn apply_pattern_with(
    cs: &Codestruct,
    pattern: &[usize],
    region: Region,
    mode: InjectionMode,
) -> Result<Codestruct> {
    let range = region.interval(cs.m(), cs.len());
    let mut abs = Vec::with_capacity(pattern.len());
    for &p in pattern {
        if p >= range.len() {
            return invalid(format!(
                "position {p} outside {region} region of {} bits",
                range.len()
            ));
        }
        abs.push(range.start + p);
    }
    abs.sort_unstable();
    let layout = Layout::new(cs.m(), cs.k());
    Ok(Codestruct::from_word(
        layout,
        inject(&layout, cs.word(), &abs, mode),
    ))
}

fn inject(l: &Layout, mut word: u128, abs: &[usize], mode: InjectionMode) -> u128 {
    for &p in abs {
        match mode {
            InjectionMode::OuterComplement if p >= l.ci && p < l.pi => {
                let j = p - l.ci;
                let co = word >> (l.co + j) & 1;
                word = word & !(1 << p) | (co ^ 1) << p;
            }
            _ => word ^= 1 << p,
        }
    }
    word
}

/// Counters for one `(code, region, e)` cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub code: String,
    pub region: Region,
    pub errors: usize,
    pub decodings: u64,
    pub corrected: u64,
    pub detected: u64,
    pub correction_rate: f64,
    pub detection_rate: f64,
}

impl SweepReport {
    fn new(code: &str, region: Region, errors: usize, counts: Counts) -> Self {
        let rate = |x: u64| {
            if counts.decodings == 0 {
                0.0
            } else {
                100.0 * x as f64 / counts.decodings as f64
            }
        };
        SweepReport {
            code: code.to_string(),
            region,
            errors,
            decodings: counts.decodings,
            corrected: counts.corrected,
            detected: counts.detected,
            correction_rate: rate(counts.corrected),
            detection_rate: rate(counts.detected),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts {
    decodings: u64,
    corrected: u64,
    detected: u64,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.decodings += o.decodings;
        self.corrected += o.corrected;
        self.detected += o.detected;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepOptions {
    pub mode: InjectionMode,
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            mode: InjectionMode::default(),
            workers: 1,
        }
    }
}

/// Runs one `(region, e)` cell.
pub fn sweep_cell(
    cfg: &OverlapConfig,
    region: Region,
    errors: usize,
    payload: &BitVec,
    opts: SweepOptions,
) -> Result<SweepReport> {
    let layout = cfg.layout();
    let range = region.interval(cfg.m(), cfg.n());
    if errors > range.len() {
        return invalid(format!(
            "{errors} errors exceed the {} bits of the {region} region of {}",
            range.len(),
            cfg.name()
        ));
    }
    let clean = cfg.encode(payload)?.word();
    let expected = payload.word();
    let total = binomial(range.len() as u64, errors as u64);
    let workers = opts.workers.max(1) as u64;
    let chunk = total.div_ceil(workers);

    let run = |start: u64, count: u64| -> Counts {
        let mut c = Counts::default();
        let mut patterns = Patterns::starting_at(range.len(), errors, start)
            .expect("start rank within pattern count");
        let mut abs = vec![0usize; errors];
        for _ in 0..count {
            let rel = patterns.next_pattern().expect("pattern stream ends early");
            for (a, &r) in abs.iter_mut().zip(rel) {
                *a = range.start + r;
            }
            let word = inject(&layout, clean, &abs, opts.mode);
            let (data, detected, _) = cfg.decode_word(word);
            c.decodings += 1;
            c.detected += detected as u64;
            c.corrected += (data == expected) as u64;
        }
        c
    };

    let mut counts = Counts::default();
    if workers == 1 || total < 2 {
        counts = run(0, total);
    } else {
        std::thread::scope(|s| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    let start = (w * chunk).min(total);
                    let end = ((w + 1) * chunk).min(total);
                    let run = &run;
                    s.spawn(move || run(start, end - start))
                })
                .collect();
            for h in handles {
                counts += h.join().expect("sweep worker panicked");
            }
        });
    }
    Ok(SweepReport::new(cfg.name(), region, errors, counts))
}

/// Runs every error count in `errors` for one region.
pub fn sweep(
    cfg: &OverlapConfig,
    region: Region,
    errors: RangeInclusive<usize>,
    payload: &BitVec,
    opts: SweepOptions,
) -> Result<Vec<SweepReport>> {
    errors
        .map(|e| sweep_cell(cfg, region, e, payload, opts))
        .collect()
}
