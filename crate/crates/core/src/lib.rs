//! Robust coreset construction from weighted k-clustering.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod baselines;
pub mod clustering;
pub mod coreset;
pub mod data;
pub mod distributed;
pub mod error;
pub mod eval;
pub mod problems;
pub mod rcc;
pub mod seed;

pub use error::{CoresetError, Result};
