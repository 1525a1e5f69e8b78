use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::Cdc;
use crate::algebra::{rank_in_place, Elem, Field};
use crate::error::{Error, Result};
use crate::limits;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerifyMode {
    Exhaustive,
    Sample { count: u64, seed: u64 },
}

impl VerifyMode {
    /// "exhaustive" or "sample:N:SEED".
    pub fn parse(s: &str) -> Result<VerifyMode> {
        if s == "exhaustive" {
            return Ok(VerifyMode::Exhaustive);
        }
        let parts: Vec<_> = s.split(':').collect();
        match parts[..] {
            ["sample", n, seed] => {
                let bad = |e: std::num::ParseIntError| Error::parse(1, format!("{s:?}: {e}"));
                Ok(VerifyMode::Sample { count: n.parse().map_err(bad)?, seed: seed.parse().map_err(bad)? })
            }
            _ => Err(Error::parse(1, format!("mode {s:?} is neither \"exhaustive\" nor \"sample:N:SEED\""))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub mode: String,
    pub codewords: usize,
    pub claimed_distance: usize,
    /// Smallest distance seen; `None` when no pair was checked.
    pub min_found: Option<usize>,
    /// Indices (into the sorted codeword list) of a pair attaining `min_found`.
    pub witness: Option<(usize, usize)>,
    pub pairs_checked: u64,
    pub seed: Option<u64>,
    pub passed: bool,
}

/// Per-codeword data laid out for fast pairwise rank computation.
enum Packed {
    /// GF(2), n ≤ 64: one word per row, column j at bit 63 - j so the pivot
    /// of an RREF row is its highest set bit.
    Binary(Vec<Vec<u64>>),
    General(Field, Vec<Vec<Elem>>),
}

impl Packed {
    fn new(code: &Cdc) -> Packed {
        let n = code.ambient();
        if code.field().order() == 2 && n <= 64 {
            Packed::Binary(
                code.codewords()
                    .iter()
                    .map(|c| {
                        (0..c.dim())
                            .map(|r| c.rref().row(r).iter().enumerate().fold(0u64, |w, (j, &e)| w | ((e as u64) << (63 - j))))
                            .collect()
                    })
                    .collect(),
            )
        } else {
            Packed::General(code.field().clone(), code.codewords().iter().map(|c| c.rref().entries().to_vec()).collect())
        }
    }

    /// dim(U_i + U_j).
    fn sum_dim(&self, i: usize, j: usize, k: usize, n: usize, scratch: &mut Vec<Elem>) -> usize {
        match self {
            Packed::Binary(rows) => {
                // rows[i] is RREF with distinct leading bits, sorted descending.
                let mut basis: Vec<u64> = rows[i].clone();
                for &v in &rows[j] {
                    let x = basis.iter().fold(v, |x, &b| x.min(x ^ b));
                    if x != 0 {
                        let pos = basis.iter().position(|&b| b < x).unwrap_or(basis.len());
                        basis.insert(pos, x);
                    }
                }
                basis.len()
            }
            Packed::General(field, data) => {
                scratch.clear();
                scratch.extend_from_slice(&data[i]);
                scratch.extend_from_slice(&data[j]);
                rank_in_place(field, scratch, 2 * k, n)
            }
        }
    }
}

fn better(a: (usize, usize, usize), b: (usize, usize, usize)) -> (usize, usize, usize) {
    a.min(b)
}

/// Minimum pairwise subspace distance of `code`, exhaustively or over a
/// seeded random sample of pairs. Exhaustive mode splits the outer index
/// range across rayon workers and reduces worker minima, so the result and
/// the witness (smallest distance, then smallest index pair) do not depend on
/// the number of threads.
pub fn verify_min_distance(code: &Cdc, mode: VerifyMode) -> Result<VerifyReport> {
    let n_words = code.len();
    let (k, n) = (code.dim(), code.ambient());
    let packed = Packed::new(code);
    let dist = |i: usize, j: usize, scratch: &mut Vec<Elem>| 2 * packed.sum_dim(i, j, k, n, scratch) - 2 * k;
    let (best, pairs, mode_name, seed) = match mode {
        VerifyMode::Exhaustive => {
            let pairs = (n_words as u64) * (n_words.saturating_sub(1) as u64) / 2;
            let limit = limits::pair_limit();
            if pairs > limit {
                return Err(Error::PairLimitExceeded { pairs, limit });
            }
            let best = (0..n_words)
                .into_par_iter()
                .map_init(Vec::new, |scratch, i| {
                    let mut row_best: Option<(usize, usize, usize)> = None;
                    for j in i + 1..n_words {
                        let d = dist(i, j, scratch);
                        if row_best.is_none_or(|b| d < b.0) {
                            row_best = Some((d, i, j));
                            if d == 0 {
                                break;
                            }
                        }
                    }
                    row_best
                })
                .reduce(
                    || None,
                    |a, b| match (a, b) {
                        (Some(x), Some(y)) => Some(better(x, y)),
                        (x, None) => x,
                        (None, y) => y,
                    },
                );
            (best, pairs, "exhaustive".to_string(), None)
        }
        VerifyMode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sample: Vec<(usize, usize)> = if n_words < 2 {
                Vec::new()
            } else {
                (0..count)
                    .map(|_| {
                        let i = rng.gen_range(0..n_words);
                        let mut j = rng.gen_range(0..n_words - 1);
                        if j >= i {
                            j += 1;
                        }
                        (i.min(j), i.max(j))
                    })
                    .collect()
            };
            let best = sample.par_iter().map_init(Vec::new, |scratch, &(i, j)| (dist(i, j, scratch), i, j)).reduce_with(better);
            (best, sample.len() as u64, format!("sample:{count}:{seed}"), Some(seed))
        }
    };
    let min_found = best.map(|b| b.0);
    Ok(VerifyReport {
        mode: mode_name,
        codewords: n_words,
        claimed_distance: code.claimed_distance(),
        min_found,
        witness: best.map(|b| (b.1, b.2)),
        pairs_checked: pairs,
        seed,
        passed: min_found.is_none_or(|m| m >= code.claimed_distance()),
    })
}
