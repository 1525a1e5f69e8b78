use cdc_workbench::algebra::{poly, ExtField, Field, Matrix};
use cdc_workbench::Error;
use proptest::prelude::*;

const ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

#[test]
fn field_axioms_exhaustive() {
    for q in ORDERS {
        let f = Field::new(q).unwrap();
        let els: Vec<_> = f.elements().collect();
        assert_eq!(els.len(), q as usize);
        for &a in &els {
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            assert_eq!(f.sub(a, a), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                assert_eq!(f.pow(a, q as u64 - 1), 1);
            }
            for &b in &els {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for &c in &els {
                    assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        assert!(matches!(f.inv(0), Err(Error::InversionOfZero)));
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for q in ORDERS {
        let f = Field::new(q).unwrap();
        let has_generator = f.elements().filter(|&a| a != 0).any(|g| {
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..q - 1 {
                x = f.mul(x, g);
                seen.insert(x);
            }
            seen.len() == q as usize - 1
        });
        assert!(has_generator, "GF({q})");
    }
}

#[test]
fn unsupported_orders_rejected() {
    for q in [0, 1, 6, 10, 12, 15] {
        assert!(matches!(Field::new(q), Err(Error::InvalidFieldOrder(_))), "q = {q}");
    }
}

#[test]
fn frobenius_periodicity() {
    for (q, m) in [(2, 3), (2, 4), (2, 6), (3, 3), (4, 2), (5, 2), (9, 2)] {
        let f = Field::new(q).unwrap();
        let ext = ExtField::new(&f, m).unwrap();
        let size = (q as u64).pow(m as u32);
        let mut fixed = vec![0u64; m + 1];
        for code in 0..size {
            let a = ext.from_code(code);
            assert_eq!(ext.code(&a), code);
            assert_eq!(ext.frobenius_pow(&a, m), a, "GF({q}^{m}) element {code}");
            for (j, count) in fixed.iter_mut().enumerate().skip(1) {
                if m % j == 0 && ext.frobenius_pow(&a, j) == a {
                    *count += 1;
                }
            }
            if code != 0 {
                assert_eq!(ext.pow(&a, size - 1), ext.one());
            }
        }
        // The elements fixed by the j-th power form the subfield GF(q^j).
        for j in (1..=m).filter(|j| m % j == 0) {
            assert_eq!(fixed[j], (q as u64).pow(j as u32), "GF({q}^{m}), j = {j}");
        }
    }
}

#[test]
fn frobenius_is_additive_and_multiplicative() {
    let f = Field::new(3).unwrap();
    let ext = ExtField::new(&f, 3).unwrap();
    for x in 0..27 {
        for y in 0..27 {
            let (a, b) = (ext.from_code(x), ext.from_code(y));
            assert_eq!(ext.frobenius(&ext.add(&a, &b)), ext.add(&ext.frobenius(&a), &ext.frobenius(&b)));
            assert_eq!(ext.frobenius(&ext.mul(&a, &b)), ext.mul(&ext.frobenius(&a), &ext.frobenius(&b)));
        }
    }
}

#[test]
fn default_moduli_are_irreducible() {
    for q in ORDERS {
        let f = Field::new(q).unwrap();
        for m in 1..=12 {
            if (q as u64).pow(m as u32) > 1 << 40 {
                break;
            }
            let ext = ExtField::new(&f, m).unwrap();
            assert!(poly::is_irreducible(&f, ext.modulus()), "GF({q}^{m})");
        }
    }
}

fn matrix_strategy(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (u32, usize, usize, Vec<u16>)> {
    (prop_oneof![Just(2u32), Just(3u32)], 1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(q, r, c)| (Just(q), Just(r), Just(c), prop::collection::vec(0..q as u16, r * c)))
}

fn mat(q: u32, r: usize, c: usize, data: Vec<u16>) -> Matrix {
    Matrix::from_vec(&Field::new(q).unwrap(), r, c, data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn rref_is_idempotent((q, r, c, data) in matrix_strategy(5, 8)) {
        let a = mat(q, r, c, data);
        let (once, pivots) = a.rref();
        let (twice, pivots2) = once.rref();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(&pivots, &pivots2);
        prop_assert_eq!(pivots.len(), a.rank());
        prop_assert_eq!(a.rank(), a.transpose().rank());
    }

    #[test]
    fn left_kernel_annihilates((q, r, c, data) in matrix_strategy(6, 5)) {
        let a = mat(q, r, c, data);
        let k = a.left_kernel();
        prop_assert_eq!(k.rows(), r - a.rank());
        prop_assert!(k.mul(&a).unwrap().is_zero());
    }
}
