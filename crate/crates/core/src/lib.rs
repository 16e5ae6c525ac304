//! Numerical laboratory for product sets of random subsets of `{1, ..., N}`.
//!
//! Arithmetic tables ([`sieve`], [`tau`]) feed exact expectations and Monte
//! Carlo experiments ([`model`], [`threshold`]); [`analytic`] evaluates the
//! auxiliary inequalities on the same tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod budget;
pub mod container;
pub mod error;
pub mod fmt;
pub mod model;
pub mod report;
pub mod seed;
pub mod sieve;
pub mod stats;
pub mod tau;
pub mod threshold;

pub use budget::MemoryBudget;
pub use error::{LabError, Result};
pub use sieve::{PrimeCount, SieveTables};
pub use tau::TauNTable;
