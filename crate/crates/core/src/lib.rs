//! Exact pseudo-Boolean function algebra, approximate-counting classifiers
//! for Boolean #CSP, and a perfect-matching based FPRAS pipeline for
//! ferromagnetic two-spin systems with nonnegative Fourier spectrum.

pub mod caps;
pub mod cli;
pub mod error;
pub mod funcs;

pub use caps::Caps;
pub use error::{Error, Result};
pub use funcs::{PBFunction, SignedTable, SupportRelation, Q};

pub mod classify;
pub mod gadgets;
pub mod instances;
pub mod matching;
