use std::path::Path;

use super::Subspace;
use crate::algebra::{join_row, parse_numbers, Field, Matrix};
use crate::error::{Error, Result};

/// A constant-dimension code: k-dimensional subspaces of GF(q)^n with a
/// claimed minimum subspace distance. Codewords are kept sorted by their
/// serialized RREF; duplicates are kept so verification can report them.
#[derive(Clone, Debug)]
pub struct Cdc {
    field: Field,
    n: usize,
    k: usize,
    d: usize,
    codewords: Vec<Subspace>,
    provenance: String,
}

impl Cdc {
    pub fn new(
        field: &Field,
        n: usize,
        k: usize,
        d: usize,
        mut codewords: Vec<Subspace>,
        provenance: impl Into<String>,
    ) -> Result<Cdc> {
        for c in &codewords {
            field.same(c.field())?;
            if c.ambient() != n {
                return Err(Error::AmbientMismatch(n, c.ambient()));
            }
            if c.dim() != k {
                return Err(Error::DimensionMismatch(format!("codeword of dimension {} in a code of dimension {k}", c.dim())));
            }
        }
        codewords.sort();
        Ok(Cdc { field: field.clone(), n, k, d, codewords, provenance: provenance.into() })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn claimed_distance(&self) -> usize {
        self.d
    }

    pub fn codewords(&self) -> &[Subspace] {
        &self.codewords
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    pub fn contains(&self, u: &Subspace) -> bool {
        self.codewords.binary_search(u).is_ok()
    }

    pub fn has_duplicates(&self) -> bool {
        self.codewords.windows(2).any(|w| w[0] == w[1])
    }

    /// Union with another code over the same parameters; the claimed
    /// distance is the smaller of the two.
    pub fn union(&self, other: &Cdc, provenance: impl Into<String>) -> Result<Cdc> {
        self.field.same(&other.field)?;
        let mut all = self.codewords.clone();
        all.extend(other.codewords.iter().cloned());
        Cdc::new(&self.field, self.n, self.k, self.d.min(other.d), all, provenance)
    }

    /// "CDC q n k d count", then each codeword as k rows of n codes with a
    /// blank line between codewords.
    pub fn to_text(&self) -> String {
        let mut s = format!("CDC {} {} {} {} {}\n", self.field.order(), self.n, self.k, self.d, self.codewords.len());
        for (i, c) in self.codewords.iter().enumerate() {
            if i > 0 {
                s.push('\n');
            }
            for r in 0..self.k {
                s.push_str(&join_row(c.rref().row(r)));
                s.push('\n');
            }
        }
        s
    }

    /// Parses the CDC file format. Each record is re-canonicalized, so a
    /// record that is not in RREF or not of full rank is rejected.
    pub fn from_text(text: &str) -> Result<Cdc> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty CDC file"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("CDC") {
            return Err(Error::parse(1, "expected \"CDC q n k d count\""));
        }
        let nums = parse_numbers(1, &parts.collect::<Vec<_>>().join(" "))?;
        let [q, n, k, d, count] = nums[..] else {
            return Err(Error::parse(1, "expected \"CDC q n k d count\""));
        };
        let field = Field::new(q as u32)?;
        let (n, k) = (n as usize, k as usize);
        let mut codewords = Vec::with_capacity(count as usize);
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(k);
        let mut start = 0;
        for (ln, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if rows.is_empty() {
                start = ln + 1;
            }
            let row = parse_numbers(ln + 1, line)?;
            if row.len() != n {
                return Err(Error::parse(ln + 1, format!("expected {n} entries")));
            }
            rows.push(row);
            if rows.len() == k {
                let m = Matrix::from_rows(&field, &rows)?;
                let u = Subspace::from_rows(&m);
                if u.dim() != k || u.rref() != &m {
                    return Err(Error::parse(start, "codeword is not a full-rank RREF matrix"));
                }
                codewords.push(u);
                rows.clear();
            }
        }
        if !rows.is_empty() {
            return Err(Error::parse(start, "truncated codeword"));
        }
        if k == 0 && count > 0 {
            codewords = vec![Subspace::from_rows(&Matrix::zeros(&field, 0, n)); count as usize];
        }
        if codewords.len() as u64 != count {
            return Err(Error::parse(1, format!("header announces {count} codewords, found {}", codewords.len())));
        }
        Cdc::new(&field, n, k, d as usize, codewords, "file")
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn read(path: &Path) -> Result<Cdc> {
        Cdc::from_text(&std::fs::read_to_string(path)?)
    }
}
