//! Library surface of the command-line driver, exposed so integration
//! tests can exercise config parsing and run orchestration directly.

// `!(x > 0.0)` deliberately rejects NaN alongside out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canon;
pub mod config;
pub mod error;
pub mod run;
