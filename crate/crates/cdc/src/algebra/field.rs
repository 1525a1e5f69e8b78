use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use crate::algebra::poly;
use crate::error::{Error, Result};

/// A field element, stored as its integer code in `[0, q)`.
///
/// For prime fields the code is the residue itself. For GF(p^e) the code is
/// the residue polynomial read as a base-p number, so in GF(4) with modulus
/// x^2+x+1 the code 2 is `x` and 3 is `x+1`.
pub type Elem = u16;

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

/// Orders up to this size get full addition and multiplication tables.
const TABLE_LIMIT: u32 = 256;

/// Conway polynomials for the small non-prime orders, low degree first.
const CONWAY: &[(u32, u32, &[Elem])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

/// GF(q) for q = p^e ≤ 2^16. Cheap to clone; all clones share the tables.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

struct Inner {
    p: u32,
    degree: u32,
    q: u32,
    modulus: Vec<Elem>,
    exp: Vec<Elem>,
    log: Vec<u32>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
    add_tab: Vec<Elem>,
    mul_tab: Vec<Elem>,
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let (mut rest, mut e) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|i| i * i <= p).all(|i| !p.is_multiple_of(i))
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= n {
        if n.is_multiple_of(f) {
            out.push(f);
            while n.is_multiple_of(f) {
                n /= f;
            }
        }
        f += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Field {
    /// GF(q) with the default modulus: Conway polynomial when tabulated,
    /// otherwise the first monic irreducible polynomial in code order.
    pub fn new(q: u32) -> Result<Field> {
        let (p, e) = prime_power(q).filter(|_| q <= MAX_ORDER).ok_or(Error::InvalidFieldOrder(q as u64))?;
        if e == 1 {
            return Ok(Field::prime(p));
        }
        let modulus = match CONWAY.iter().find(|c| c.0 == p && c.1 == e) {
            Some(c) => c.2.to_vec(),
            None => poly::first_irreducible(&Field::prime(p), e as usize),
        };
        Field::with_modulus(p, modulus)
    }

    /// GF(p^e) for an explicit monic modulus of degree e over GF(p).
    pub fn with_modulus(p: u32, modulus: Vec<Elem>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidFieldOrder(p as u64));
        }
        let prime = Field::prime(p);
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 || modulus.iter().any(|&c| c as u32 >= p) {
            return Err(Error::ReducibleModulus);
        }
        let degree = (modulus.len() - 1) as u32;
        if degree == 1 {
            return Ok(prime);
        }
        let q = (p as u64).pow(degree);
        if q > MAX_ORDER as u64 {
            return Err(Error::InvalidFieldOrder(q));
        }
        if !poly::is_irreducible(&prime, &modulus) {
            return Err(Error::ReducibleModulus);
        }
        Ok(Field(Arc::new(Inner::extension(&prime, modulus, q as u32))))
    }

    fn prime(p: u32) -> Field {
        let q = p;
        let neg = (0..q).map(|a| ((q - a) % q) as Elem).collect();
        let mut inv = vec![0 as Elem; q as usize];
        for a in 1..q {
            inv[a as usize] = pow_mod(a as u64, (q - 2) as u64, q as u64) as Elem;
        }
        let mut inner = Inner {
            p,
            degree: 1,
            q,
            modulus: Vec::new(),
            exp: Vec::new(),
            log: Vec::new(),
            neg,
            inv,
            add_tab: Vec::new(),
            mul_tab: Vec::new(),
        };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            inner.add_tab = (0..n * n).map(|i| ((i / n + i % n) % n) as Elem).collect();
            inner.mul_tab = (0..n * n).map(|i| ((i / n) * (i % n) % n) as Elem).collect();
        }
        Field(Arc::new(inner))
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.degree
    }

    /// Monic modulus, low degree first; empty for prime fields.
    pub fn modulus(&self) -> &[Elem] {
        &self.0.modulus
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(|a| a as Elem)
    }

    pub fn check(&self, code: u64) -> Result<Elem> {
        if code < self.0.q as u64 {
            Ok(code as Elem)
        } else {
            Err(Error::ElementOutOfRange { elem: code, q: self.0.q })
        }
    }

    pub fn same(&self, other: &Field) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::MixedFields(self.0.q, other.0.q))
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if !f.add_tab.is_empty() {
            f.add_tab[a as usize * f.q as usize + b as usize]
        } else if f.degree == 1 {
            ((a as u32 + b as u32) % f.p) as Elem
        } else if f.p == 2 {
            a ^ b
        } else {
            digit_add(a as u32, b as u32, f.p) as Elem
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.0.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let f = &*self.0;
        if !f.mul_tab.is_empty() {
            f.mul_tab[a as usize * f.q as usize + b as usize]
        } else if a == 0 || b == 0 {
            0
        } else if f.degree == 1 {
            ((a as u64 * b as u64) % f.p as u64) as Elem
        } else {
            let s = f.log[a as usize] + f.log[b as usize];
            f.exp[(s % (f.q - 1)) as usize]
        }
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a == 0 {
            Err(Error::InversionOfZero)
        } else {
            Ok(self.0.inv[a as usize])
        }
    }

    /// Inverse of a value the caller knows to be nonzero (pivots).
    #[inline]
    pub(crate) fn recip(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.0.inv[a as usize]
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let (mut base, mut acc) = (a, 1 as Elem);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

fn digit_add(mut a: u32, mut b: u32, p: u32) -> u32 {
    let (mut out, mut place) = (0, 1);
    while a > 0 || b > 0 {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn digits(mut a: u32, p: u32, len: usize) -> Vec<Elem> {
    (0..len)
        .map(|_| {
            let d = a % p;
            a /= p;
            d as Elem
        })
        .collect()
}

fn undigits(d: &[Elem], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c as u32)
}

impl Inner {
    fn extension(prime: &Field, modulus: Vec<Elem>, q: u32) -> Inner {
        let p = prime.order();
        let e = modulus.len() - 1;
        let slow_mul = |a: u32, b: u32| -> u32 {
            let prod = poly::mul(prime, &digits(a, p, e), &digits(b, p, e));
            let r = poly::rem(prime, &prod, &modulus);
            let mut r = r;
            r.resize(e, 0);
            undigits(&r, p)
        };
        let slow_pow = |a: u32, mut k: u32| -> u32 {
            let (mut base, mut acc) = (a, 1);
            while k > 0 {
                if k & 1 == 1 {
                    acc = slow_mul(acc, base);
                }
                base = slow_mul(base, base);
                k >>= 1;
            }
            acc
        };
        let factors = prime_factors(q - 1);
        let gen =
            (2..q).find(|&g| factors.iter().all(|&r| slow_pow(g, (q - 1) / r) != 1)).expect("multiplicative group is cyclic");
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![0u32; q as usize];
        let mut cur = 1;
        for i in 0..q - 1 {
            exp.push(cur as Elem);
            log[cur as usize] = i;
            cur = slow_mul(cur, gen);
        }
        let neg = (0..q)
            .map(|a| {
                let d: Vec<Elem> = digits(a, p, e).iter().map(|&c| prime.neg(c)).collect();
                undigits(&d, p) as Elem
            })
            .collect();
        let mut inv = vec![0 as Elem; q as usize];
        for a in 1..q {
            inv[a as usize] = exp[((q - 1 - log[a as usize]) % (q - 1)) as usize];
        }
        let mut inner = Inner { p, degree: e as u32, q, modulus, exp, log, neg, inv, add_tab: Vec::new(), mul_tab: Vec::new() };
        if q <= TABLE_LIMIT {
            let n = q as usize;
            let mut add_tab = vec![0; n * n];
            let mut mul_tab = vec![0; n * n];
            for a in 0..n {
                for b in 0..n {
                    add_tab[a * n + b] = digit_add(a as u32, b as u32, p) as Elem;
                    mul_tab[a * n + b] = if a == 0 || b == 0 {
                        0
                    } else {
                        let s = inner.log[a] + inner.log[b];
                        inner.exp[(s % (q - 1)) as usize]
                    };
                }
            }
            inner.add_tab = add_tab;
            inner.mul_tab = mul_tab;
        }
        inner
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Field) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.0.q == other.0.q && self.0.modulus == other.0.modulus)
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.q.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.degree == 1 {
            write!(f, "GF({})", self.0.q)
        } else {
            write!(f, "GF({}; modulus {:?})", self.0.q, self.0.modulus)
        }
    }
}
