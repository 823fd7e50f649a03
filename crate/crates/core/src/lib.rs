// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod complexes;
pub mod datasets;
pub mod error;
pub mod index;
pub mod io;
pub mod localization;
pub mod meb;
pub mod optim;
pub mod persistence;
pub mod phi;
pub mod sample_spaces;
pub mod strat_persistence;
pub mod union_find;

pub use error::{Error, Result};
