use crate::algebra::field::{Elem, Field};
use crate::algebra::matrix::Matrix;
use crate::algebra::poly;
use crate::error::{Error, Result};

/// An element of GF(q^m): coordinates in the polynomial basis 1, x, …, x^(m-1).
pub type ExtElem = Vec<Elem>;

/// GF(q^m) as GF(q)[x] modulo a monic irreducible polynomial of degree m.
#[derive(Clone, Debug)]
pub struct ExtField {
    base: Field,
    degree: usize,
    modulus: Vec<Elem>,
    basis: Vec<ExtElem>,
    /// Maps polynomial-basis coordinates to `basis` coordinates.
    to_basis: Option<Matrix>,
}

impl ExtField {
    /// Extension of degree m using the first irreducible modulus in code order
    /// and the polynomial basis.
    pub fn new(base: &Field, degree: usize) -> Result<ExtField> {
        if degree == 0 {
            return Err(Error::InvalidParameters("extension degree must be positive".into()));
        }
        let modulus = poly::first_irreducible(base, degree);
        ExtField::with_modulus(base, modulus)
    }

    pub fn with_modulus(base: &Field, modulus: Vec<Elem>) -> Result<ExtField> {
        if modulus.last() != Some(&1) || !poly::is_irreducible(base, &modulus) {
            return Err(Error::ReducibleModulus);
        }
        let degree = modulus.len() - 1;
        let basis = (0..degree)
            .map(|i| {
                let mut e = vec![0; degree];
                e[i] = 1;
                e
            })
            .collect();
        Ok(ExtField { base: base.clone(), degree, modulus, basis, to_basis: None })
    }

    /// Replaces the coordinate basis used by [`ExtField::expand`].
    pub fn with_basis(mut self, basis: Vec<ExtElem>) -> Result<ExtField> {
        let m = self.degree;
        if basis.len() != m || basis.iter().any(|b| b.len() != m) {
            return Err(Error::DimensionMismatch(format!("basis must have {m} elements of length {m}")));
        }
        let rows: Vec<Vec<u64>> = basis.iter().map(|b| b.iter().map(|&c| c as u64).collect()).collect();
        let b = Matrix::from_rows(&self.base, &rows)?;
        let aug = Matrix::hstack(&[&b, &Matrix::identity(&self.base, m)])?;
        let (r, pivots) = aug.rref();
        if pivots.len() < m || pivots[m - 1] >= m {
            return Err(Error::InvalidParameters("basis is not linearly independent".into()));
        }
        self.to_basis = Some(r.block(0, m, m, m));
        self.basis = basis;
        Ok(self)
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    pub fn basis(&self) -> &[ExtElem] {
        &self.basis
    }

    pub fn zero(&self) -> ExtElem {
        vec![0; self.degree]
    }

    pub fn one(&self) -> ExtElem {
        let mut e = self.zero();
        e[0] = 1;
        e
    }

    /// x^i reduced modulo the defining polynomial.
    pub fn monomial(&self, i: u64) -> ExtElem {
        self.pow(&self.generator(), i)
    }

    fn generator(&self) -> ExtElem {
        if self.degree == 1 {
            // x ≡ -c0 when the modulus is x + c0.
            vec![self.base.neg(self.modulus[0])]
        } else {
            let mut e = self.zero();
            e[1] = 1;
            e
        }
    }

    fn pad(&self, mut v: Vec<Elem>) -> ExtElem {
        v.resize(self.degree, 0);
        v
    }

    pub fn add(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        a.iter().zip(b).map(|(&x, &y)| self.base.add(x, y)).collect()
    }

    pub fn scale(&self, c: Elem, a: &ExtElem) -> ExtElem {
        a.iter().map(|&x| self.base.mul(c, x)).collect()
    }

    pub fn mul(&self, a: &ExtElem, b: &ExtElem) -> ExtElem {
        self.pad(poly::mulmod(&self.base, a, b, &self.modulus))
    }

    pub fn pow(&self, a: &ExtElem, e: u64) -> ExtElem {
        self.pad(poly::powmod(&self.base, a, e, &self.modulus))
    }

    /// x ↦ x^q.
    pub fn frobenius(&self, a: &ExtElem) -> ExtElem {
        self.pow(a, self.base.order() as u64)
    }

    /// Applies the Frobenius map `times` times, i.e. x ↦ x^(q^times).
    pub fn frobenius_pow(&self, a: &ExtElem, times: usize) -> ExtElem {
        (0..times).fold(a.clone(), |acc, _| self.frobenius(&acc))
    }

    /// Coordinates over GF(q) with respect to the configured basis.
    pub fn expand(&self, a: &ExtElem) -> Vec<Elem> {
        match &self.to_basis {
            None => a.clone(),
            Some(t) => {
                let row = Matrix::from_raw(&self.base, 1, self.degree, a.clone());
                row.mul(t).expect("shapes agree").entries().to_vec()
            }
        }
    }

    /// Base-q code of an element (constant coefficient least significant).
    pub fn code(&self, a: &ExtElem) -> u64 {
        let q = self.base.order() as u64;
        a.iter().rev().fold(0, |acc, &c| acc * q + c as u64)
    }

    pub fn from_code(&self, mut code: u64) -> ExtElem {
        let q = self.base.order() as u64;
        (0..self.degree)
            .map(|_| {
                let c = (code % q) as Elem;
                code /= q;
                c
            })
            .collect()
    }

    /// Number of elements, when it fits in u64.
    pub fn order(&self) -> Option<u64> {
        (self.base.order() as u64).checked_pow(self.degree as u32)
    }
}
