//! Tabulated reference figures for the three built-in codes.
//!
//! These are stored values, not computations. Rates are percentages with two
//! decimals for error counts 1 through 8; `None` marks cells that cannot be
//! collected (more errors than the region has bits).

use crate::inject::Region;

/// Built-in code names in table order.
pub const CODES: [&str; 3] = ["2x2", "3x3", "4x4"];

fn code_index(code: &str) -> Option<usize> {
    CODES.iter().position(|&c| c == code)
}

fn region_index(region: Region) -> usize {
    match region {
        Region::Data => 0,
        Region::CheckBits => 1,
        Region::Codestruct => 2,
    }
}

/// Pattern counts, indexed `[region][code][e - 1]`.
pub const COMBINATIONS: [[[u64; 8]; 3]; 3] = [
    [
        [4, 6, 4, 1, 0, 0, 0, 0],
        [9, 36, 84, 126, 126, 84, 36, 9],
        [16, 120, 560, 1820, 4368, 8008, 11440, 12870],
    ],
    [
        [8, 28, 56, 70, 56, 28, 8, 1],
        [10, 45, 120, 210, 252, 210, 120, 45],
        [12, 66, 220, 495, 792, 924, 792, 495],
    ],
    [
        [12, 66, 220, 495, 792, 924, 792, 495],
        [19, 171, 969, 3876, 11628, 27132, 50388, 75582],
        [28, 378, 3276, 20475, 98280, 376740, 1184040, 3108105],
    ],
];

const NA: Option<f64> = None;

const fn s(v: f64) -> Option<f64> {
    Some(v)
}

/// Correction rates, indexed `[region][code][e - 1]`.
pub const CORRECTION_RATES: [[[Option<f64>; 8]; 3]; 3] = [
    [
        [s(100.0), s(100.0), s(0.0), s(0.0), NA, NA, NA, NA],
        [
            s(100.0),
            s(100.0),
            s(0.0),
            s(0.0),
            s(0.0),
            s(0.0),
            s(0.0),
            s(0.0),
        ],
        [
            s(100.0),
            s(100.0),
            s(0.0),
            s(0.0),
            s(0.0),
            s(0.0),
            s(0.0),
            s(0.0),
        ],
    ],
    [
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(91.43),
            s(71.43),
            s(53.57),
            s(62.50),
            s(100.0),
        ],
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(90.00),
            s(69.84),
            s(56.67),
            s(61.67),
            s(75.56),
        ],
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(90.30),
            s(73.11),
            s(64.94),
            s(67.30),
            s(69.49),
        ],
    ],
    [
        [
            s(100.0),
            s(100.0),
            s(40.45),
            s(17.78),
            s(8.84),
            s(3.57),
            s(1.01),
            s(0.20),
        ],
        [
            s(100.0),
            s(100.0),
            s(24.87),
            s(9.11),
            s(3.56),
            s(1.04),
            s(0.28),
            s(0.11),
        ],
        [
            s(100.0),
            s(100.0),
            s(19.57),
            s(5.09),
            s(1.99),
            s(0.87),
            s(0.19),
            s(0.03),
        ],
    ],
];

/// Detection rates, indexed `[region][code][e - 1]`.
pub const DETECTION_RATES: [[[Option<f64>; 8]; 3]; 3] = [
    [
        [s(100.0), s(100.0), s(100.0), s(100.0), NA, NA, NA, NA],
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
        ],
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(99.90),
            s(100.0),
            s(99.88),
        ],
    ],
    [[s(100.0); 8], [s(100.0); 8], [s(100.0); 8]],
    [
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(99.49),
            s(99.35),
            s(99.49),
            s(99.80),
        ],
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(99.92),
            s(99.90),
            s(99.91),
            s(99.91),
        ],
        [
            s(100.0),
            s(100.0),
            s(100.0),
            s(100.0),
            s(99.98),
            s(99.97),
            s(99.98),
            s(99.98),
        ],
    ],
];

fn lookup<T: Copy>(table: &[[[T; 8]; 3]; 3], code: &str, region: Region, e: usize) -> Option<T> {
    let c = code_index(code)?;
    if !(1..=8).contains(&e) {
        return None;
    }
    Some(table[region_index(region)][c][e - 1])
}

pub fn combinations(code: &str, region: Region, e: usize) -> Option<u64> {
    lookup(&COMBINATIONS, code, region, e)
}

pub fn correction_rate(code: &str, region: Region, e: usize) -> Option<f64> {
    lookup(&CORRECTION_RATES, code, region, e).flatten()
}

pub fn detection_rate(code: &str, region: Region, e: usize) -> Option<f64> {
    lookup(&DETECTION_RATES, code, region, e).flatten()
}

/// Codestruct-region correction rates for `e = 1..=8` as fractions in
/// `[0, 1]`, the default masking profile for the reliability model.
pub fn codestruct_correction_fractions(code: &str) -> Option<Vec<f64>> {
    (1..=8)
        .map(|e| correction_rate(code, Region::Codestruct, e).map(|r| r / 100.0))
        .collect()
}
