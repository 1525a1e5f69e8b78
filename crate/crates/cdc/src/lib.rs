//! Constructions, lower bounds and exhaustive verification for
//! constant-dimension subspace codes over finite fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`algebra`]: GF(q), GF(q^m) and dense matrices with RREF, rank and kernels.
//! * [`counting`]: exact q-combinatorics (Gaussian binomials, MRD sizes, rank
//!   distributions).
//! * [`rankcodes`]: Gabidulin codes, coset families and Ferrers-diagram unions.
//! * [`subspaces`]: canonical subspaces, lifting, code containers and the
//!   parallel distance verifier.
//! * [`constructions`]: linkage and inserting constructions producing explicit
//!   codes and component counts.
//! * [`bounds`]: closed-form lower bounds, the base-value registry and the
//!   published table manifests.
//! * [`cli`]: the `cdcw` command-line front end.

pub mod algebra;
pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod counting;
mod error;
pub mod limits;
pub mod rankcodes;
pub mod subspaces;

pub use error::{Error, Result};
