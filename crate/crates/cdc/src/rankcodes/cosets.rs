use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{gabidulin, LinearRankCode};
use crate::algebra::{reduce_in_place, Field, Matrix};
use crate::counting::mrd_size;
use crate::error::{Error, Result};
use crate::limits;

/// The cosets of the distance-`d_s` Gabidulin code inside the nested
/// distance-`d_m` one. Inside a coset members differ by rank ≥ d_s; members
/// of different cosets differ by rank ≥ d_m.
#[derive(Clone, Debug)]
pub struct CosetFamily {
    ambient: LinearRankCode,
    subcode: LinearRankCode,
    /// Ambient generators outside the subcode; their span meets every coset once.
    complement: Vec<Matrix>,
    /// RREF of the subcode basis, flattened row-major, for leader reduction.
    sub_rref: Vec<Vec<crate::algebra::Elem>>,
    sub_pivots: Vec<usize>,
}

/// Coset family for d_m < d_s ≤ min(a,b).
pub fn subcode_cosets(field: &Field, a: usize, b: usize, d_m: usize, d_s: usize) -> Result<CosetFamily> {
    if d_m >= d_s {
        return Err(Error::InvalidDistances(format!("ambient distance {d_m} must be below subcode distance {d_s}")));
    }
    CosetFamily::new(field, a, b, d_m, d_s)
}

impl CosetFamily {
    /// Like [`subcode_cosets`] but also accepts d_m = d_s (a single coset).
    pub(crate) fn new(field: &Field, a: usize, b: usize, d_m: usize, d_s: usize) -> Result<CosetFamily> {
        if d_m > d_s {
            return Err(Error::InvalidDistances(format!("ambient distance {d_m} exceeds subcode distance {d_s}")));
        }
        let ambient = gabidulin(field, a, b, d_m)?;
        if d_s > a.min(b) {
            return Err(Error::InvalidDistance(format!("subcode distance {d_s} exceeds min({a},{b})")));
        }
        let sub_dim = a.max(b) * (a.min(b) + 1 - d_s);
        let subcode = LinearRankCode::from_generators(field, a, b, d_s, ambient.generators()[..sub_dim].to_vec())?;
        let complement = ambient.generators()[sub_dim..].to_vec();
        let width = a * b;
        let mut flat: Vec<_> = subcode.generators().iter().flat_map(|g| g.entries().to_vec()).collect();
        let pivots = reduce_in_place(field, &mut flat, sub_dim, width, width);
        let sub_rref = flat.chunks(width.max(1)).take(pivots.len()).map(|r| r.to_vec()).collect();
        let fam = CosetFamily { ambient, subcode, complement, sub_rref, sub_pivots: pivots };
        let ratio = mrd_size(field.order() as u64, a as u64, b as u64, d_m as u64)?
            / mrd_size(field.order() as u64, a as u64, b as u64, d_s as u64)?;
        debug_assert_eq!(ratio, fam.count());
        Ok(fam)
    }

    pub fn ambient(&self) -> &LinearRankCode {
        &self.ambient
    }

    pub fn subcode(&self) -> &LinearRankCode {
        &self.subcode
    }

    /// Number of cosets, m(q,a,b,d_m) / m(q,a,b,d_s).
    pub fn count(&self) -> BigUint {
        BigUint::from(self.ambient.field().order()).pow(self.complement.len() as u32)
    }

    /// The lexicographically smallest member of the coset containing `m`.
    pub fn leader_of(&self, m: &Matrix) -> Matrix {
        let f = self.ambient.field();
        let mut v = m.entries().to_vec();
        for (row, &p) in self.sub_rref.iter().zip(&self.sub_pivots) {
            let c = v[p];
            if c == 0 {
                continue;
            }
            let neg = f.neg(c);
            for (x, &y) in v.iter_mut().zip(row) {
                if y != 0 {
                    *x = f.add(*x, f.mul(neg, y));
                }
            }
        }
        Matrix::from_vec(f, m.rows(), m.cols(), v).expect("same shape")
    }

    /// All coset leaders, sorted lexicographically. Coset j below means the
    /// coset of the j-th leader in this order.
    pub fn leaders(&self) -> Result<Vec<Matrix>> {
        let limit = limits::enum_limit();
        let n = self
            .count()
            .to_u64()
            .filter(|&n| n <= limit)
            .ok_or_else(|| Error::EnumerationLimitExceeded { size: self.count().to_string(), limit })?;
        let span = LinearRankCode::from_generators(
            self.ambient.field(),
            self.ambient.rows(),
            self.ambient.cols(),
            self.ambient.min_distance(),
            self.complement.clone(),
        )?;
        let mut out: Vec<Matrix> = (0..n).map(|i| self.leader_of(&span.codeword_at(i))).collect();
        out.sort();
        Ok(out)
    }

    /// Members of the coset with the given leader.
    pub fn coset<'a>(&'a self, leader: &'a Matrix) -> Result<impl Iterator<Item = Matrix> + 'a> {
        Ok(self.subcode.enumerate(None)?.map(move |m| m.add(leader).expect("same shape")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leaders_are_coset_minima() {
        let f = Field::new(2).unwrap();
        let fam = subcode_cosets(&f, 2, 3, 1, 2).unwrap();
        for leader in fam.leaders().unwrap() {
            let min = fam.coset(&leader).unwrap().min().unwrap();
            assert_eq!(min, leader);
        }
    }

    #[test]
    fn rejects_equal_distances() {
        let f = Field::new(3).unwrap();
        assert!(matches!(subcode_cosets(&f, 3, 3, 2, 2), Err(Error::InvalidDistances(_))));
    }
}
