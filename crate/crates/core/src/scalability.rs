//! Redundancy cost of overlapped codes on `rows x cols` data matrices, and
//! stored baseline costs of three other two-dimensional codes.
//!
//! Redundancy cost is `rc = #cb / #cs`: check bits over total codestruct
//! bits.

use serde::{Deserialize, Serialize};

use crate::hamming::min_check_bits;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostRow {
    pub label: String,
    pub data_bits: usize,
    pub check_bits: usize,
    pub total_bits: usize,
}

impl CostRow {
    pub fn redundancy_cost(&self) -> f64 {
        self.check_bits as f64 / self.total_bits as f64
    }

    /// `rc` rounded to two decimals, as displayed.
    pub fn rc_display(&self) -> String {
        format!("{:.2}", self.redundancy_cost())
    }
}

/// Two extended Hamming layers over `rows * cols` data bits.
pub fn overlapped_cost(rows: usize, cols: usize) -> CostRow {
    let n = rows * cols;
    let k = min_check_bits(n.max(1)) as usize;
    let check_bits = 2 * (k + 1);
    CostRow {
        label: "Overlapped".to_string(),
        data_bits: n,
        check_bits,
        total_bits: n + check_bits,
    }
}

/// Baseline codes with stored costs.
pub const BASELINE_CODES: [&str; 3] = ["Matrix", "PBD", "CLC"];

/// `(side, #cb)` per baseline for square matrices 2x2..7x7. Stored values;
/// their construction rules are not modelled here.
const BASELINE_CHECK_BITS: [(&str, [usize; 6]); 3] = [
    ("Matrix", [8, 12, 16, 25, 30, 35]),
    ("PBD", [5, 12, 20, 32, 45, 62]),
    ("CLC", [14, 19, 24, 35, 41, 47]),
];

pub const BASELINE_MIN_SIDE: usize = 2;
pub const BASELINE_MAX_SIDE: usize = 7;

/// Stored cost of `code` on a `side x side` matrix, if available.
pub fn baseline_cost(code: &str, side: usize) -> Option<CostRow> {
    if !(BASELINE_MIN_SIDE..=BASELINE_MAX_SIDE).contains(&side) {
        return None;
    }
    let (label, cbs) = BASELINE_CHECK_BITS.iter().find(|(c, _)| *c == code)?;
    let n = side * side;
    let check_bits = cbs[side - BASELINE_MIN_SIDE];
    Some(CostRow {
        label: label.to_string(),
        data_bits: n,
        check_bits,
        total_bits: n + check_bits,
    })
}

/// All 18 stored baseline rows, grouped by code then size.
pub fn baseline_costs() -> Vec<(usize, CostRow)> {
    BASELINE_CODES
        .iter()
        .flat_map(|code| {
            (BASELINE_MIN_SIDE..=BASELINE_MAX_SIDE)
                .map(move |side| (side, baseline_cost(code, side).expect("side in range")))
        })
        .collect()
}

/// One size in the comparison table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub side: usize,
    pub overlapped: CostRow,
    /// One entry per [`BASELINE_CODES`] member; `None` beyond stored sizes.
    pub baselines: Vec<Option<CostRow>>,
    /// Labels of the codes with the smallest displayed `rc`.
    pub best: Vec<String>,
}

/// Side-by-side costs for square matrices `2..=max_side`.
pub fn compare(max_side: usize) -> Vec<ComparisonRow> {
    (2..=max_side)
        .map(|side| {
            let overlapped = overlapped_cost(side, side);
            let baselines: Vec<Option<CostRow>> = BASELINE_CODES
                .iter()
                .map(|code| baseline_cost(code, side))
                .collect();
            let candidates: Vec<&CostRow> = std::iter::once(&overlapped)
                .chain(baselines.iter().flatten())
                .collect();
            let min = candidates
                .iter()
                .map(|r| r.rc_display())
                .min()
                .expect("at least the overlapped row");
            let best = candidates
                .iter()
                .filter(|r| r.rc_display() == min)
                .map(|r| r.label.clone())
                .collect();
            ComparisonRow {
                side,
                overlapped,
                baselines,
                best,
            }
        })
        .collect()
}
