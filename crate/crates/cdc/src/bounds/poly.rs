use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use super::registry::{Dependency, Registry};
use crate::error::{Error, Result};

/// Targets (n, d, k) with a closed polynomial bound in q.
pub const POLY_TARGETS: [(u64, u64, u64); 7] =
    [(12, 4, 6), (14, 6, 7), (15, 4, 5), (16, 6, 8), (18, 4, 6), (18, 6, 6), (18, 6, 9)];

type Poly = &'static [(u32, i64)];

const P_12_4_6: Poly = &[
    (30, 1),
    (26, 1),
    (25, 1),
    (24, 2),
    (23, 1),
    (22, 1),
    (21, -1),
    (20, -2),
    (19, -3),
    (18, -1),
    (17, -1),
    (15, 3),
    (14, 3),
    (13, 4),
    (12, 4),
    (11, 1),
    (10, -1),
    (9, -3),
    (8, -3),
    (7, -2),
    (6, -1),
];
const P_14_6_7: Poly = &[
    (35, 1),
    (26, 1),
    (25, 1),
    (24, 2),
    (23, 3),
    (22, 3),
    (21, 2),
    (20, 1),
    (19, -2),
    (18, -5),
    (17, -8),
    (16, -11),
    (15, -11),
    (14, -10),
    (13, -7),
    (12, -3),
    (11, 2),
    (10, 5),
    (9, 8),
    (8, 8),
    (7, 9),
    (6, 6),
    (5, 5),
    (4, 3),
    (3, 1),
];
const P_16_6_8: Poly = &[
    (48, 1),
    (39, 1),
    (38, 1),
    (37, 2),
    (36, 3),
    (35, 3),
    (34, 3),
    (33, 2),
    (31, -4),
    (30, -6),
    (29, -10),
    (28, -10),
    (27, -11),
    (26, -7),
    (25, -3),
    (24, 6),
    (23, 12),
    (22, 19),
    (21, 23),
    (20, 25),
    (19, 22),
    (18, 16),
    (17, 9),
    (15, -7),
    (14, -13),
    (13, -15),
    (12, -17),
    (11, -13),
    (10, -11),
    (9, -8),
    (8, -5),
    (7, -4),
    (6, -2),
    (4, 1),
    (3, 1),
];
const P_18_6_9: Poly = &[
    (63, 1),
    (54, 1),
    (53, 1),
    (52, 2),
    (51, 3),
    (50, 3),
    (49, 3),
    (48, 3),
    (47, 1),
    (46, -2),
    (45, -5),
    (44, -9),
    (43, -11),
    (42, -13),
    (41, -12),
    (40, -10),
    (39, -3),
    (38, 3),
    (37, 12),
    (36, 18),
    (35, 24),
    (34, 24),
    (33, 23),
    (32, 15),
    (31, 6),
    (30, -7),
    (29, -19),
    (28, -29),
    (27, -37),
    (26, -39),
    (25, -39),
    (24, -31),
    (23, -22),
    (22, -8),
    (21, 2),
    (20, 14),
    (19, 20),
    (18, 27),
    (17, 24),
    (16, 23),
    (15, 17),
    (14, 14),
    (13, 8),
    (12, 5),
    (11, 2),
    (10, 1),
];
const P_15_4_5_A10: Poly =
    &[(16, 1), (15, 1), (14, 2), (13, 1), (11, -2), (10, -3), (9, -4), (8, -2), (6, 1), (5, 3), (4, 2), (3, 1)];
const P_18_4_6_A12: Poly = &[
    (26, 1),
    (25, 1),
    (24, 2),
    (23, 1),
    (22, 1),
    (21, -1),
    (20, -3),
    (19, -4),
    (18, -3),
    (17, -2),
    (15, 4),
    (14, 5),
    (13, 5),
    (12, 3),
    (11, 1),
    (10, -1),
    (9, -3),
    (8, -3),
    (7, -2),
    (6, -1),
];
const P_18_4_6_A8: Poly = &[(28, 1), (27, 1), (26, 2), (25, 1), (23, -1), (22, -2), (21, -1)];
const P_18_6_6_REST: Poly = &[
    (21, 1),
    (20, 1),
    (19, 2),
    (18, 3),
    (17, 3),
    (16, 3),
    (15, 3),
    (14, 2),
    (13, 1),
    (12, 1),
    (9, -1),
    (8, -1),
    (7, -2),
    (6, -3),
    (5, -3),
    (4, -3),
    (3, -3),
    (2, -2),
    (1, -1),
];

fn eval(p: &[(u32, i64)], q: u64) -> BigInt {
    p.iter().map(|&(e, c)| BigInt::from(c) * BigInt::from(q).pow(e)).sum()
}

/// A registry factor (n,k), if any, and the polynomial it scales.
type Part = (Option<(u64, u64)>, Vec<(u32, i64)>);

/// The polynomial bound for target (n,d,k) evaluated at q: a sum of
/// polynomials, some scaled by registry values A_q(·,d,·).
pub fn cor45_poly(reg: &Registry, target: (u64, u64, u64), q: u64) -> Result<(BigUint, Vec<Dependency>)> {
    let parts: Vec<Part> = match target {
        (12, 4, 6) => vec![(None, P_12_4_6.to_vec())],
        (14, 6, 7) => vec![(None, P_14_6_7.to_vec())],
        (16, 6, 8) => vec![(None, P_16_6_8.to_vec())],
        (18, 6, 9) => vec![(None, P_18_6_9.to_vec())],
        (15, 4, 5) => vec![(None, vec![(40, 1)]), (Some((10, 5)), P_15_4_5_A10.to_vec()), (Some((7, 3)), vec![(12, 1)])],
        (18, 4, 6) => vec![(None, vec![(60, 1)]), (Some((12, 6)), P_18_4_6_A12.to_vec()), (Some((8, 4)), P_18_4_6_A8.to_vec())],
        (18, 6, 6) => vec![(Some((12, 6)), vec![(24, 1)]), (Some((6, 3)), vec![(15, 1)]), (None, P_18_6_6_REST.to_vec())],
        (n, d, k) => {
            return Err(Error::InvalidParameters(format!("no polynomial bound for ({n},{d},{k})")));
        }
    };
    let d = target.1;
    let mut total = BigInt::zero();
    let mut deps = Vec::new();
    for (factor, p) in parts {
        let mut v = eval(&p, q);
        if let Some((n, k)) = factor {
            let dep = reg.lookup(q, n, d, k)?;
            v *= BigInt::from(dep.value.clone());
            deps.push(dep);
        }
        total += v;
    }
    let total = total.to_biguint().ok_or_else(|| Error::OutOfRange(format!("polynomial bound is negative at q = {q}")))?;
    Ok((total, deps))
}
