// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod grid;
pub mod interferometer;
pub mod montecarlo;
pub mod slit;
pub mod special;
pub mod stats;

pub use error::{Error, Result};
