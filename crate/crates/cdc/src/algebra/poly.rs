//! Dense polynomials over a [`Field`], coefficients listed from the constant
//! term upward. Only what modulus selection and extension arithmetic need.

use crate::algebra::field::{Elem, Field};

pub fn trim(mut a: Vec<Elem>) -> Vec<Elem> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn degree(a: &[Elem]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn mul(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

pub fn sub(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, slot) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *slot = f.sub(x, y);
    }
    trim(out)
}

/// Remainder of `a` modulo the nonzero polynomial `m`.
pub fn rem(f: &Field, a: &[Elem], m: &[Elem]) -> Vec<Elem> {
    let dm = degree(m).expect("division by the zero polynomial");
    let lead_inv = f.recip(m[dm]);
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < dm {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - dm;
        for (i, &mi) in m[..=dm].iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, mi));
        }
        r = trim(r);
    }
    r
}

pub fn mulmod(f: &Field, a: &[Elem], b: &[Elem], m: &[Elem]) -> Vec<Elem> {
    rem(f, &mul(f, a, b), m)
}

pub fn powmod(f: &Field, a: &[Elem], mut e: u64, m: &[Elem]) -> Vec<Elem> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[1], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub fn gcd(f: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let inv = f.recip(a[d]);
        a.iter_mut().for_each(|c| *c = f.mul(*c, inv));
    }
    a
}

/// Ben-Or test: `m` of degree e is irreducible iff gcd(x^(q^i) - x, m) = 1
/// for every i ≤ e/2.
pub fn is_irreducible(f: &Field, m: &[Elem]) -> bool {
    let Some(e) = degree(m) else { return false };
    if e == 0 {
        return false;
    }
    let x = [0, 1];
    let mut power = rem(f, &x, m);
    for _ in 0..e / 2 {
        power = powmod(f, &power, f.order() as u64, m);
        let g = gcd(f, &sub(f, &power, &x), m);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// The monic irreducible polynomial of the given degree whose lower
/// coefficients, read as a base-q number, are smallest.
pub fn first_irreducible(f: &Field, deg: usize) -> Vec<Elem> {
    let q = f.order() as u64;
    (0..q.pow(deg as u32))
        .map(|mut code| {
            let mut m: Vec<Elem> = (0..deg)
                .map(|_| {
                    let c = (code % q) as Elem;
                    code /= q;
                    c
                })
                .collect();
            m.push(1);
            m
        })
        .find(|m| is_irreducible(f, m))
        .expect("irreducible polynomials exist in every degree")
}
