#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beta;
pub mod cumulant;
pub mod dd;
pub mod error;
pub mod exact;
pub mod gaussian;
pub mod graph;
pub mod linalg;
pub mod numeric;

pub use error::{Error, Result};
pub mod assumptions;
pub mod cli;
pub mod estimate;
pub mod regular;
pub mod selftest;
