//! Canonical subspaces of GF(q)^n, identifying vectors and Ferrers tableaux,
//! lifting of matrices, constant-dimension code containers and the pairwise
//! distance verifier.

mod cdc;
mod verify;

pub use cdc::Cdc;
pub use verify::{verify_min_distance, VerifyMode, VerifyReport};

use std::fmt;

use crate::algebra::{Elem, Field, Matrix};
use crate::error::{Error, Result};
use crate::rankcodes::FerrersShape;

/// A subspace stored by its reduced row echelon generator. Two values are
/// equal exactly when the subspaces are.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    rref: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    /// Row space of `m`; dependent rows are dropped.
    pub fn from_rows(m: &Matrix) -> Subspace {
        let (r, pivots) = m.rref();
        let rref = r.block(0, 0, pivots.len(), m.cols());
        Subspace { rref, pivots }
    }

    pub(crate) fn from_rref_unchecked(rref: Matrix, pivots: Vec<usize>) -> Subspace {
        debug_assert_eq!(rref.rref().0, rref);
        Subspace { rref, pivots }
    }

    pub fn field(&self) -> &Field {
        self.rref.field()
    }

    /// Ambient dimension n.
    pub fn ambient(&self) -> usize {
        self.rref.cols()
    }

    pub fn dim(&self) -> usize {
        self.rref.rows()
    }

    pub fn rref(&self) -> &Matrix {
        &self.rref
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// dim(U + V).
    pub fn sum_dim(&self, other: &Subspace) -> Result<usize> {
        if self.ambient() != other.ambient() {
            return Err(Error::AmbientMismatch(self.ambient(), other.ambient()));
        }
        Ok(Matrix::vstack(&[&self.rref, &other.rref])?.rank())
    }

    pub fn intersection_dim(&self, other: &Subspace) -> Result<usize> {
        Ok(self.dim() + other.dim() - self.sum_dim(other)?)
    }

    /// dim U + dim V - 2 dim(U ∩ V) = 2 dim(U + V) - dim U - dim V.
    pub fn distance(&self, other: &Subspace) -> Result<usize> {
        Ok(2 * self.sum_dim(other)? - self.dim() - other.dim())
    }

    pub fn identifying_vector(&self) -> IdentifyingVector {
        let mut bits = vec![false; self.ambient()];
        for &p in &self.pivots {
            bits[p] = true;
        }
        IdentifyingVector { bits }
    }

    /// Ferrers tableau: in each row drop the entries left of the pivot and
    /// all pivot columns, then right-align what remains.
    pub fn ferrers(&self) -> FerrersTableau {
        let n = self.ambient();
        let is_pivot = self.identifying_vector().bits;
        let rows = self
            .pivots
            .iter()
            .enumerate()
            .map(|(i, &p)| (p + 1..n).filter(|&j| !is_pivot[j]).map(|j| self.rref.get(i, j)).collect())
            .collect();
        FerrersTableau { width: n - self.dim(), rows }
    }
}

/// Binary vector marking the pivot columns of a subspace.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct IdentifyingVector {
    bits: Vec<bool>,
}

impl IdentifyingVector {
    pub fn new(bits: Vec<bool>) -> Self {
        IdentifyingVector { bits }
    }

    /// Parses a string of 0/1 characters; whitespace is ignored.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::parse(1, format!("bad bit {c:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(IdentifyingVector::new)
    }

    /// u1 ones at offset `shift` within the first delta1 coordinates and u2
    /// leading ones in the last delta2.
    pub fn special_form(shape: &FerrersShape) -> Self {
        let mut bits = vec![false; shape.n()];
        bits[shape.shift..shape.shift + shape.u1].iter_mut().for_each(|b| *b = true);
        bits[shape.delta1..shape.delta1 + shape.u2].iter_mut().for_each(|b| *b = true);
        IdentifyingVector { bits }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn hamming(&self, other: &IdentifyingVector) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
    }
}

impl fmt::Display for IdentifyingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Entries of the Ferrers tableau, one right-aligned row per pivot.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FerrersTableau {
    pub width: usize,
    pub rows: Vec<Vec<Elem>>,
}

impl FerrersTableau {
    pub fn row_lengths(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Dot pattern, '*' for a dot and '.' for an empty cell.
    pub fn pattern(&self) -> String {
        self.rows
            .iter()
            .map(|r| format!("{}{}", ".".repeat(self.width - r.len()), "*".repeat(r.len())))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Row space of (I_a | A).
pub fn lift_matrix(a: &Matrix) -> Subspace {
    let k = a.rows();
    let gen = Matrix::hstack(&[&Matrix::identity(a.field(), k), a]).expect("same field and row count");
    Subspace::from_rref_unchecked(gen, (0..k).collect())
}

/// Lifts a matrix on the Ferrers diagram of a special-form vector:
/// ```text
///   [ 0 | I_u1 | M1 | 0    | M3 ]
///   [ 0 | 0    | 0  | I_u2 | M2 ]
/// ```
/// The corner block M3 must have rank at most u1 - d_f.
pub fn lift_special_form(shape: &FerrersShape, m: &Matrix) -> Result<Subspace> {
    let (k, w) = (shape.k(), shape.width());
    if m.rows() != k || m.cols() != w {
        return Err(Error::DimensionMismatch(format!("expected {k}x{w}, got {}x{}", m.rows(), m.cols())));
    }
    for i in 0..k {
        for j in 0..w {
            if m.get(i, j) != 0 && !shape.contains(i, j) {
                return Err(Error::InvalidParameters(format!("entry ({i},{j}) lies outside the Ferrers diagram")));
            }
        }
    }
    let corner = m.block(0, shape.left_width(), shape.u1, shape.right_width());
    let cap = shape.u1 - shape.d_f;
    let rank = corner.rank();
    if rank > cap {
        return Err(Error::RankCapViolated { rank, cap });
    }
    let f = m.field();
    let mut g = Matrix::zeros(f, k, shape.n());
    g.paste(0, shape.shift, &Matrix::identity(f, shape.u1));
    g.paste(0, shape.shift + shape.u1, &m.block(0, 0, shape.u1, shape.left_width()));
    g.paste(shape.u1, shape.delta1, &Matrix::identity(f, shape.u2));
    g.paste(0, shape.delta1 + shape.u2, &m.block(0, shape.left_width(), k, shape.right_width()));
    Ok(Subspace::from_rows(&g))
}

/// True iff dim(U ∩ S1) ≥ d/2 and dim(U ∩ S2) ≥ d/2, where S1 is spanned by
/// the last n2 unit vectors and S2 by the first n1.
pub fn insertion_predicate(u: &Subspace, n1: usize, n2: usize, d: usize) -> Result<bool> {
    if n1 + n2 != u.ambient() {
        return Err(Error::AmbientMismatch(n1 + n2, u.ambient()));
    }
    let k = u.dim();
    let g = u.rref();
    // U ∩ S1 is the part of U vanishing on the first n1 coordinates.
    let in_s1 = k - g.block(0, 0, k, n1).rank();
    let in_s2 = k - g.block(0, n1, k, n2).rank();
    Ok(2 * in_s1 >= d && 2 * in_s2 >= d)
}

/// dis(U, V) ≥ d_h(i(U), i(V)); holds for every pair of equal-dimension
/// subspaces, so a `false` return signals a bug.
pub fn hamming_lb_check(u: &Subspace, v: &Subspace) -> Result<bool> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch(format!("dimensions {} and {}", u.dim(), v.dim())));
    }
    Ok(u.distance(v)? >= u.identifying_vector().hamming(&v.identifying_vector()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_tableau() {
        let f = Field::new(2).unwrap();
        let m = Matrix::from_rows(&f, &[[1, 1, 0, 0, 1, 1, 1], [0, 0, 1, 0, 1, 0, 1], [0, 0, 0, 1, 1, 1, 1]]).unwrap();
        let u = Subspace::from_rows(&m);
        assert_eq!(u.rref(), &m);
        assert_eq!(u.pivots(), &[0, 2, 3]);
        assert_eq!(u.identifying_vector().to_string(), "1011000");
        let t = u.ferrers();
        assert_eq!(t.row_lengths(), vec![4, 3, 3]);
        assert_eq!(t.rows, vec![vec![1, 1, 1, 1], vec![1, 0, 1], vec![1, 1, 1]]);
        assert_eq!(t.pattern(), "****\n.***\n.***");
    }

    #[test]
    fn coordinate_subspaces() {
        let f = Field::new(2).unwrap();
        let u = lift_matrix(&Matrix::zeros(&f, 3, 3));
        let v = Subspace::from_rows(&Matrix::hstack(&[&Matrix::zeros(&f, 3, 3), &Matrix::identity(&f, 3)]).unwrap());
        assert_eq!(u.distance(&v).unwrap(), 6);
        assert_eq!(u.distance(&u).unwrap(), 0);
        assert_eq!(u.identifying_vector().to_string(), "111000");
        assert_eq!(v.ferrers().row_lengths(), vec![0, 0, 0]);
        assert_eq!(u.ferrers().row_lengths(), vec![3, 3, 3]);
        assert!(!insertion_predicate(&u, 3, 3, 2).unwrap());
    }

    #[test]
    fn special_form_vectors() {
        let s = FerrersShape::new(6, 6, 4, 2, 0, 2).unwrap();
        assert_eq!(IdentifyingVector::special_form(&s).to_string(), "111100110000");
        let s = FerrersShape::new(7, 7, 3, 4, 3, 3).unwrap();
        assert_eq!(IdentifyingVector::special_form(&s).to_string(), "00011101111000");
    }

    #[test]
    fn rank_cap_enforced() {
        let f = Field::new(2).unwrap();
        let shape = FerrersShape::new(6, 6, 4, 2, 0, 2).unwrap();
        let mut m = Matrix::zeros(&f, 6, 6);
        assert_eq!(lift_special_form(&shape, &m).unwrap().identifying_vector(), IdentifyingVector::special_form(&shape));
        for i in 0..3 {
            m.set(i, 2 + i, 1);
        }
        assert!(matches!(lift_special_form(&shape, &m), Err(Error::RankCapViolated { rank: 3, cap: 2 })));
        let mut outside = Matrix::zeros(&f, 6, 6);
        outside.set(5, 0, 1);
        assert!(lift_special_form(&shape, &outside).is_err());
    }
}
