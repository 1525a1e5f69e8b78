//! Rank-metric codes: Gabidulin MRD codes, coset families of nested
//! Gabidulin codes, and the block-structured unions supported on the Ferrers
//! diagrams of special-form identifying vectors.

mod cosets;
mod fdrm;

pub use cosets::{subcode_cosets, CosetFamily};
pub use fdrm::{fdrm_subcode_union, fdrm_union, FdrmCase, FdrmCode, FerrersShape};

use num_bigint::BigUint;

use crate::algebra::{parse_numbers, Elem, ExtField, Field, Matrix};
use crate::error::{Error, Result};
use crate::limits;

/// A GF(q)-linear set of a×b matrices given by a basis.
#[derive(Clone, Debug)]
pub struct LinearRankCode {
    field: Field,
    rows: usize,
    cols: usize,
    min_distance: usize,
    generators: Vec<Matrix>,
}

impl LinearRankCode {
    /// Wraps a basis. The declared minimum distance is trusted; see
    /// [`LinearRankCode::min_rank_by_enumeration`] for a check.
    pub fn from_generators(
        field: &Field,
        rows: usize,
        cols: usize,
        min_distance: usize,
        generators: Vec<Matrix>,
    ) -> Result<Self> {
        for g in &generators {
            field.same(g.field())?;
            if g.rows() != rows || g.cols() != cols {
                return Err(Error::DimensionMismatch(format!("generator is {}x{}, code is {rows}x{cols}", g.rows(), g.cols())));
            }
        }
        Ok(LinearRankCode { field: field.clone(), rows, cols, min_distance, generators })
    }

    /// The code containing only the zero matrix.
    pub fn zero(field: &Field, rows: usize, cols: usize) -> Self {
        LinearRankCode { field: field.clone(), rows, cols, min_distance: rows.min(cols) + 1, generators: Vec::new() }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn min_distance(&self) -> usize {
        self.min_distance
    }

    pub fn generators(&self) -> &[Matrix] {
        &self.generators
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    pub fn cardinality(&self) -> BigUint {
        BigUint::from(self.field.order()).pow(self.generators.len() as u32)
    }

    /// Cardinality when it fits in u64.
    pub fn len_u64(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.generators.len() as u32)
    }

    /// Σ coeffs[i] · generators[i].
    pub fn combine(&self, coeffs: &[Elem]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.rows, self.cols);
        for (c, g) in coeffs.iter().zip(&self.generators) {
            m.add_scaled(*c, g).expect("generators share the code shape");
        }
        m
    }

    /// The codeword whose coefficient vector is the base-q expansion of
    /// `index`, first generator least significant.
    pub fn codeword_at(&self, mut index: u64) -> Matrix {
        let q = self.field.order() as u64;
        let coeffs: Vec<Elem> = (0..self.generators.len())
            .map(|_| {
                let c = (index % q) as Elem;
                index /= q;
                c
            })
            .collect();
        self.combine(&coeffs)
    }

    /// Every codeword once, optionally only those of rank ≤ `rank_cap`.
    /// Fails when the code is larger than the enumeration limit.
    pub fn enumerate(&self, rank_cap: Option<usize>) -> Result<impl Iterator<Item = Matrix> + '_> {
        let limit = limits::enum_limit();
        let size = self
            .len_u64()
            .filter(|&n| n <= limit)
            .ok_or_else(|| Error::EnumerationLimitExceeded { size: self.cardinality().to_string(), limit })?;
        Ok((0..size).map(move |i| self.codeword_at(i)).filter(move |m| rank_cap.is_none_or(|cap| m.rank() <= cap)))
    }

    /// Smallest rank of a nonzero codeword, by enumeration; `None` for the
    /// zero code.
    pub fn min_rank_by_enumeration(&self) -> Result<Option<usize>> {
        Ok(self.enumerate(None)?.map(|m| m.rank()).filter(|&r| r > 0).min())
    }

    /// Rank-metric code file: "RMC q a b d card" then one block of `a` rows
    /// per generator, blocks separated by blank lines.
    pub fn to_text(&self) -> String {
        let mut s =
            format!("RMC {} {} {} {} {}\n", self.field.order(), self.rows, self.cols, self.min_distance, self.cardinality());
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            for r in 0..g.rows() {
                s.push_str(&crate::algebra::join_row(g.row(r)));
                s.push('\n');
            }
        }
        s
    }

    pub fn from_text(field: &Field, text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty code file"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("RMC") {
            return Err(Error::parse(1, "expected \"RMC q a b d card\""));
        }
        let nums: Vec<String> = parts.map(String::from).collect();
        if nums.len() != 5 {
            return Err(Error::parse(1, "expected \"RMC q a b d card\""));
        }
        let small = parse_numbers(1, &nums[..4].join(" "))?;
        let (q, a, b, d) = (small[0], small[1] as usize, small[2] as usize, small[3] as usize);
        if q != field.order() as u64 {
            return Err(Error::MixedFields(q as u32, field.order()));
        }
        let mut rows: Vec<Vec<u64>> = Vec::new();
        let mut generators = Vec::new();
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            let row = parse_numbers(ln + 1, line)?;
            if row.len() != b {
                return Err(Error::parse(ln + 1, format!("expected {b} entries")));
            }
            rows.push(row);
            if rows.len() == a {
                generators.push(Matrix::from_rows(field, &rows)?);
                rows.clear();
            }
        }
        if !rows.is_empty() {
            return Err(Error::parse(0, "truncated generator block"));
        }
        let code = LinearRankCode::from_generators(field, a, b, d, generators)?;
        if code.cardinality().to_string() != nums[4] {
            return Err(Error::parse(1, "cardinality does not match the generator count"));
        }
        Ok(code)
    }
}

/// Gabidulin code over an explicit field. With s = min(a,b), t = max(a,b):
/// the q-polynomials Σ_{j ≤ s-d} β_j x^(q^j) over GF(q^t), evaluated at
/// 1, x, …, x^(s-1), expanded over the polynomial basis into t×s matrices,
/// transposed when a ≤ b.
///
/// Generators are ordered by q-degree j, then by the basis element β = x^i,
/// so the code of distance d' > d is spanned by a prefix of this basis.
pub fn gabidulin(field: &Field, a: usize, b: usize, d: usize) -> Result<LinearRankCode> {
    let (s, t) = (a.min(b), a.max(b));
    if d < 1 || d > s {
        return Err(Error::InvalidDistance(format!("d = {d} must lie in [1, {s}] for {a}x{b} matrices")));
    }
    let ext = ExtField::new(field, t)?;
    let mut powers: Vec<_> = (0..s as u64).map(|l| ext.monomial(l)).collect();
    let betas: Vec<_> = (0..t as u64).map(|i| ext.monomial(i)).collect();
    let mut generators = Vec::with_capacity(t * (s - d + 1));
    for _j in 0..=(s - d) {
        for beta in &betas {
            let mut m = Matrix::zeros(field, t, s);
            for (l, p) in powers.iter().enumerate() {
                let coords = ext.expand(&ext.mul(beta, p));
                for (r, &c) in coords.iter().enumerate() {
                    m.set(r, l, c);
                }
            }
            generators.push(if a <= b { m.transpose() } else { m });
        }
        powers = powers.iter().map(|p| ext.frobenius(p)).collect();
    }
    LinearRankCode::from_generators(field, a, b, d, generators)
}

/// [`gabidulin`] over GF(q) with the default modulus.
pub fn gabidulin_mrd(q: u32, a: usize, b: usize, d: usize) -> Result<LinearRankCode> {
    gabidulin(&Field::new(q)?, a, b, d)
}
