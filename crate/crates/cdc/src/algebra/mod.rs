//! Exact arithmetic over GF(q) and GF(q^m), and dense matrices over GF(q).

mod ext;
mod field;
mod matrix;
pub mod poly;

pub use ext::{ExtElem, ExtField};
pub use field::{Elem, Field, MAX_ORDER};
pub use matrix::Matrix;
pub(crate) use matrix::{join_row, parse_numbers, rank_in_place, reduce_in_place};
