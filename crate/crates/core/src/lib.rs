//! Overlapping error-correction codes on two-dimensional data regions.
//!
//! Two extended Hamming codes protect exactly the same data bits, each under
//! its own logical address assignment. Because a pair of data errors yields a
//! distinct composite address in the two layers, the decoder can locate and
//! correct any two errors anywhere in the codestruct and detect up to four.
//!
//! ```
//! use overlap_ecc::{builtin_config, BitVec};
//!
//! let code = builtin_config("3x3").unwrap();
//! let data: BitVec = "101100010".parse().unwrap();
//! let mut cs = code.encode(&data).unwrap();
//! cs.flip(0);
//! cs.flip(15);
//! let out = code.decode(&cs).unwrap();
//! assert_eq!(out.data, data);
//! assert!(out.detected);
//! ```

pub mod bits;
pub mod builtin;
pub mod code;
pub mod error;
pub mod hamming;
pub mod inject;
pub mod reference;
pub mod reliability;
pub mod scalability;
pub mod search;

pub use bits::BitVec;
pub use builtin::builtin_config;
pub use code::{
    build_double_error_table, Action, AddressAssignment, Codestruct, DecodeOutcome,
    DoubleErrorTable, Layer, OverlapConfig, SyndromeSet,
};
pub use error::{Error, Result};
pub use inject::{
    apply_pattern, enumerate_patterns, sweep, sweep_cell, InjectionMode, Region, SweepOptions,
    SweepReport,
};
pub use search::{
    available_addresses, search_assignment, search_assignment_with, validate_assignment,
    SearchOptions, ValidationReport,
};

/// Code listings from the guide in `book/` and the README, compiled and run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/hamming.md")]
    mod hamming {}
    #[doc = include_str!("../../../book/src/overlapping.md")]
    mod overlapping {}
    #[doc = include_str!("../../../book/src/addresses.md")]
    mod addresses {}
    #[doc = include_str!("../../../book/src/fault-injection.md")]
    mod fault_injection {}
    #[doc = include_str!("../../../book/src/reliability.md")]
    mod reliability {}
    #[doc = include_str!("../../../book/src/scalability.md")]
    mod scalability {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
