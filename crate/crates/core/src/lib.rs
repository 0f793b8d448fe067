// `!(x > 0.0)` guards deliberately reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod embedding;
pub mod error;
pub mod greens;
pub mod medium;
pub mod polarizability;
pub mod qo_models;
pub mod quadrature;
pub mod roots;
pub mod scenario;
pub mod units;

pub use error::{Error, Result};
