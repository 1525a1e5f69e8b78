//! Exact q-combinatorics over arbitrary-precision integers.
//!
//! Notation follows the usual rank-metric conventions: for a×b matrices over
//! GF(q) with minimum rank distance d,
//!
//! * `mrd_size(q,a,b,d)` is the size q^(max(a,b)(min(a,b)-d+1)) of a linear
//!   MRD code,
//! * `delsarte_rank_count(q,a,b,d,u)` is the number of its codewords of rank
//!   exactly u,
//! * `bounded_rank_size(q,a,b,d,u)` counts codewords of rank at most u
//!   (including zero).

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub type BigCount = BigUint;

fn pow(q: u64, e: u64) -> BigUint {
    BigUint::from(q).pow(e as u32)
}

/// Gaussian binomial [n choose k]_q; zero when k > n.
pub fn gauss_binomial(n: u64, k: u64, q: u64) -> BigCount {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for i in 0..k {
        num *= pow(q, n - i) - 1u32;
        den *= pow(q, i + 1) - 1u32;
    }
    num / den
}

/// Size of a linear MRD code of a×b matrices with minimum rank distance d.
pub fn mrd_size(q: u64, a: u64, b: u64, d: u64) -> Result<BigCount> {
    let (lo, hi) = (a.min(b), a.max(b));
    if d < 1 || d > lo {
        return Err(Error::InvalidDistance(format!("d = {d} must lie in [1, {lo}] for {a}x{b} matrices")));
    }
    Ok(pow(q, hi * (lo - d + 1)))
}

/// Number of rank-u codewords in a linear MRD code (Delsarte's formula).
pub fn delsarte_rank_count(q: u64, a: u64, b: u64, d: u64, u: u64) -> Result<BigCount> {
    let (lo, hi) = (a.min(b), a.max(b));
    if d < 1 || d > lo {
        return Err(Error::InvalidDistance(format!("d = {d} must lie in [1, {lo}]")));
    }
    if u < d || u > lo {
        return Err(Error::OutOfRange(format!("rank {u} outside [{d}, {lo}]")));
    }
    let mut sum = BigInt::zero();
    for s in 0..=(u - d) {
        let term = BigInt::from(pow(q, s * s.saturating_sub(1) / 2) * gauss_binomial(u, s, q))
            * (BigInt::from(pow(q, hi * (u - s - d + 1))) - 1);
        if s % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    let total = BigInt::from(gauss_binomial(lo, u, q)) * sum;
    match total.to_biguint() {
        Some(v) => Ok(v),
        None => {
            debug_assert_eq!(total.sign(), Sign::Minus);
            Err(Error::OutOfRange("negative rank count".into()))
        }
    }
}

/// Codewords of rank at most u in a linear MRD code, counting zero.
/// Equals 1 when u < d.
pub fn bounded_rank_size(q: u64, a: u64, b: u64, d: u64, u: u64) -> Result<BigCount> {
    let lo = a.min(b);
    if u > lo {
        return Err(Error::OutOfRange(format!("rank cap {u} exceeds min(a,b) = {lo}")));
    }
    let mut total = BigUint::one();
    for i in d.max(1)..=u {
        total += delsarte_rank_count(q, a, b, d, i)?;
    }
    Ok(total)
}
