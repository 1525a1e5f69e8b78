use rayon::prelude::*;

use super::formulas::{evaluate, grid, BoundResult, Family, Target};
use super::registry::Registry;
use crate::error::{Error, Result};

/// Evaluates every admissible plan and returns the largest bound; ties go to
/// the lexicographically smallest parameter tuple. When no plan evaluates,
/// the first registry miss is reported, otherwise [`Error::EmptyGrid`].
pub fn optimize_parameters(reg: &Registry, target: Target, family: Family) -> Result<BoundResult> {
    let plans = grid(family, &target);
    let results: Vec<Result<BoundResult>> = plans.par_iter().map(|p| evaluate(reg, target, p)).collect();
    let mut best: Option<BoundResult> = None;
    let mut miss = None;
    for r in results {
        match r {
            Ok(r) => {
                if best.as_ref().is_none_or(|b| r.total > b.total) {
                    best = Some(r);
                }
            }
            Err(e @ Error::RegistryMiss { .. }) => {
                miss.get_or_insert(e);
            }
            Err(_) => {}
        }
    }
    match (best, miss) {
        (Some(b), _) => Ok(b),
        (None, Some(e)) => Err(e),
        (None, None) => Err(Error::EmptyGrid),
    }
}
