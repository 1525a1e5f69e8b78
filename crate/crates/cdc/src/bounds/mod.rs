//! Closed-form lower bounds on A_q(n,d,k), the registry of base values they
//! consume, the published table manifests and a parameter grid search.

mod formulas;
mod poly;
mod registry;
mod search;
mod tables;

pub(crate) use formulas::is_prime_power;
pub use formulas::{
    bound_cor41, bound_cor42, bound_cor43, bound_cor44, bound_linkage, evaluate, grid, BoundPlan, BoundResult, Component, Family,
    Target, Term,
};
pub use poly::{cor45_poly, POLY_TARGETS};
pub use registry::{Dependency, Registry, RegistryEntry, RegistryKey};
pub use search::optimize_parameters;
pub use tables::{reproduce_table, Manifest, ManifestRow, TableRow, Tag, TABLE_TITLES};

use num_bigint::BigUint;

pub(crate) fn ser_big<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}
