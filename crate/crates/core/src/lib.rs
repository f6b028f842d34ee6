//! Exact filtered chain complexes, barcodes and chord DGAs.

// Error variants carry exact rationals and windows for reporting.
#![allow(clippy::result_large_err)]

pub mod barcode;
pub mod coefficients;
pub mod complex;
pub mod dga;
pub mod displacement;
pub mod fixtures;
pub mod linalg;
pub mod pwc;
pub mod schema;
