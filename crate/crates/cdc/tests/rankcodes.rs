use std::collections::HashSet;

use cdc_workbench::algebra::{Field, Matrix};
use cdc_workbench::counting::{bounded_rank_size, mrd_size};
use cdc_workbench::rankcodes::{
    fdrm_subcode_union, fdrm_union, gabidulin, gabidulin_mrd, subcode_cosets, FdrmCase, FdrmCode, FerrersShape,
};
use cdc_workbench::subspaces::lift_special_form;
use cdc_workbench::Error;
use num_bigint::BigUint;

fn min_pairwise_rank(ms: &[Matrix]) -> Option<usize> {
    let mut best = None;
    for i in 0..ms.len() {
        for j in i + 1..ms.len() {
            let r = ms[i].sub(&ms[j]).unwrap().rank();
            best = Some(best.map_or(r, |b: usize| b.min(r)));
        }
    }
    best
}

#[test]
fn gabidulin_min_rank_equals_declared_distance() {
    for q in [2u32, 3] {
        for a in 1..=4usize {
            for b in 1..=4usize {
                for d in 1..=a.min(b) {
                    let size = mrd_size(q as u64, a as u64, b as u64, d as u64).unwrap();
                    if size > BigUint::from(1u32 << 14) {
                        continue;
                    }
                    let code = gabidulin_mrd(q, a, b, d).unwrap();
                    assert_eq!(code.cardinality(), size);
                    assert_eq!(code.min_rank_by_enumeration().unwrap(), Some(d), "q={q} {a}x{b} d={d}");
                }
            }
        }
    }
}

#[test]
fn gabidulin_small_cases() {
    let all: HashSet<Matrix> = gabidulin_mrd(2, 2, 2, 1).unwrap().enumerate(None).unwrap().collect();
    assert_eq!(all.len(), 16);
    let full = gabidulin_mrd(3, 2, 3, 2).unwrap();
    assert_eq!(full.cardinality(), BigUint::from(27u32));
    assert!(full.enumerate(None).unwrap().all(|m| m.is_zero() || m.rank() == 2));
    assert_eq!(gabidulin_mrd(2, 3, 3, 2).unwrap().enumerate(Some(2)).unwrap().count(), 50);
    assert_eq!(gabidulin_mrd(2, 4, 4, 2).unwrap().enumerate(Some(3)).unwrap().count(), 2776);
    assert!(matches!(gabidulin_mrd(2, 3, 3, 4), Err(Error::InvalidDistance(_))));
}

#[test]
fn gabidulin_codes_are_nested() {
    let f = Field::new(2).unwrap();
    for (a, b) in [(3, 3), (2, 4), (4, 3)] {
        for d in 1..a.min(b) {
            let big: HashSet<Matrix> = gabidulin(&f, a, b, d).unwrap().enumerate(None).unwrap().collect();
            let small = gabidulin(&f, a, b, d + 1).unwrap();
            assert!(small.enumerate(None).unwrap().all(|m| big.contains(&m)), "{a}x{b} d={d}");
        }
    }
}

#[test]
fn coset_partition_and_distances() {
    for (q, a, b, dm, ds) in [(2u32, 2, 2, 1, 2), (2, 3, 3, 1, 2), (2, 3, 3, 2, 3), (2, 2, 4, 1, 2), (3, 2, 2, 1, 2)] {
        let f = Field::new(q).unwrap();
        let fam = subcode_cosets(&f, a, b, dm, ds).unwrap();
        let ratio = mrd_size(q as u64, a as u64, b as u64, dm as u64).unwrap()
            / mrd_size(q as u64, a as u64, b as u64, ds as u64).unwrap();
        assert_eq!(fam.count(), ratio);
        let leaders = fam.leaders().unwrap();
        let mut seen = HashSet::new();
        let mut cosets = Vec::new();
        for l in &leaders {
            let members: Vec<Matrix> = fam.coset(l).unwrap().collect();
            assert_eq!(members.iter().min(), Some(l), "leader is the smallest member");
            assert!(min_pairwise_rank(&members).is_none_or(|r| r >= ds));
            for m in &members {
                assert!(seen.insert(m.clone()), "cosets overlap");
            }
            cosets.push(members);
        }
        let ambient: HashSet<Matrix> = fam.ambient().enumerate(None).unwrap().collect();
        assert_eq!(seen, ambient, "cosets cover the ambient code");
        for i in 0..cosets.len() {
            for j in i + 1..cosets.len() {
                for x in &cosets[i] {
                    for y in &cosets[j] {
                        assert!(x.sub(y).unwrap().rank() >= dm);
                    }
                }
            }
        }
    }
}

#[test]
fn coset_counts() {
    for q in [2u32, 3] {
        let f = Field::new(q).unwrap();
        let fam = subcode_cosets(&f, 4, 2, 1, 2).unwrap();
        assert_eq!(fam.count(), BigUint::from(q).pow(4));
    }
    let f = Field::new(2).unwrap();
    assert!(matches!(subcode_cosets(&f, 2, 2, 2, 2), Err(Error::InvalidDistances(_))));
}

fn check_fdrm(code: &FdrmCode, cap: Option<usize>, pairwise: bool) -> Vec<Matrix> {
    let s = code.shape();
    let members: Vec<Matrix> = code.iter().collect();
    assert_eq!(BigUint::from(members.len()), code.len());
    for m in &members {
        for i in 0..s.k() {
            for j in 0..s.width() {
                assert!(s.contains(i, j) || m.get(i, j) == 0, "entry ({i},{j}) outside the diagram");
            }
        }
        let corner = m.block(0, s.left_width(), s.u1, s.right_width());
        assert!(cap.is_none_or(|c| corner.rank() <= c));
    }
    let distinct: HashSet<&Matrix> = members.iter().collect();
    assert_eq!(distinct.len(), members.len());
    if pairwise {
        assert!(min_pairwise_rank(&members).is_none_or(|r| r >= s.d_f));
    }
    members
}

#[test]
fn fdrm_left_zero_case() {
    let f = Field::new(2).unwrap();
    // delta1 - shift - u1 = 0: two stacked codes.
    let shape = FerrersShape::new(4, 4, 2, 2, 2, 2).unwrap();
    let code = fdrm_union(&f, &shape, 1, 1, Some(0), Some(FdrmCase::LeftZero)).unwrap();
    let expected = mrd_size(2, 2, 2, 2).unwrap() * bounded_rank_size(2, 2, 2, 2, 0).unwrap();
    assert_eq!(code.len(), expected);
    check_fdrm(&code, Some(0), true);
}

#[test]
fn fdrm_paired_case() {
    let f = Field::new(2).unwrap();
    // left width 2 lies in [b1, d_f) = [2, 3).
    let shape = FerrersShape::new(5, 7, 3, 4, 0, 3).unwrap();
    let code = fdrm_union(&f, &shape, 2, 1, Some(0), Some(FdrmCase::Paired)).unwrap();
    let pairs = mrd_size(2, 3, 2, 2).unwrap().min(mrd_size(2, 4, 3, 1).unwrap());
    assert_eq!(code.len(), pairs * bounded_rank_size(2, 3, 3, 3, 0).unwrap());
    check_fdrm(&code, Some(0), true);
    // The same shape with an unrestricted corner.
    let code = fdrm_union(&f, &shape, 2, 1, None, Some(FdrmCase::Paired)).unwrap();
    check_fdrm(&code, None, true);
}

#[test]
fn fdrm_product_case_subsample() {
    let f = Field::new(2).unwrap();
    let shape = FerrersShape::new(6, 6, 4, 2, 0, 2).unwrap();
    let code = fdrm_union(&f, &shape, 1, 1, Some(2), Some(FdrmCase::Product)).unwrap();
    let expected = mrd_size(2, 4, 2, 2).unwrap() * mrd_size(2, 2, 4, 2).unwrap() * bounded_rank_size(2, 4, 4, 2, 2).unwrap();
    assert_eq!(code.len(), expected);
    let members = check_fdrm(&code, Some(2), false);
    let step = (members.len() / 600).max(1);
    let sample: Vec<Matrix> = members.iter().step_by(step).cloned().collect();
    assert!(min_pairwise_rank(&sample).unwrap() >= 2);
}

#[test]
fn fdrm_case_mismatch_rejected() {
    let f = Field::new(2).unwrap();
    let shape = FerrersShape::new(6, 6, 4, 2, 0, 2).unwrap();
    assert!(matches!(fdrm_union(&f, &shape, 1, 1, None, Some(FdrmCase::Paired)), Err(Error::CaseMismatch(_))));
    assert!(FerrersShape::new(6, 3, 4, 2, 0, 2).is_err());
}

#[test]
fn subcode_union_counts() {
    let f = Field::new(2).unwrap();
    // The first multilevel vector at (12,4,6): s = q^4 with c1 = c2 = 1.
    let shape = FerrersShape::new(6, 6, 4, 2, 0, 2).unwrap();
    let code = fdrm_subcode_union(&f, &shape, 1, 1, Some(2)).unwrap();
    assert_eq!(code.pieces().len(), 16);
    assert_eq!(code.len(), BigUint::from(2154496u32));
    // c1 = c2 = d_f leaves one coset: the plain product.
    let single = fdrm_subcode_union(&f, &shape, 2, 2, Some(2)).unwrap();
    assert_eq!(single.pieces().len(), 1);
    assert_eq!(single.len() * BigUint::from(16u32), code.len());
}

#[test]
fn subcode_union_distance_small() {
    let f = Field::new(2).unwrap();
    let shape = FerrersShape::new(4, 4, 2, 2, 0, 2).unwrap();
    let code = fdrm_subcode_union(&f, &shape, 1, 1, Some(0)).unwrap();
    assert_eq!(code.len(), BigUint::from(64u32));
    check_fdrm(&code, Some(0), true);
}

#[test]
fn lifted_fdrm_is_isometric() {
    let f = Field::new(2).unwrap();
    let shape = FerrersShape::new(5, 7, 3, 4, 0, 3).unwrap();
    let code = fdrm_union(&f, &shape, 2, 1, Some(shape.u1 - shape.d_f), None).unwrap();
    let members: Vec<Matrix> = code.iter().collect();
    let lifts: Vec<_> = members.iter().map(|m| lift_special_form(&shape, m).unwrap()).collect();
    for i in 0..members.len() {
        for j in 0..members.len() {
            let rank = members[i].sub(&members[j]).unwrap().rank();
            assert_eq!(lifts[i].distance(&lifts[j]).unwrap(), 2 * rank);
        }
    }
}
