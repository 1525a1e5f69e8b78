use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use crate::algebra::field::{Elem, Field};
use crate::error::{Error, Result};

/// Dense row-major matrix over GF(q).
#[derive(Clone)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

/// Gauss-Jordan elimination in place, pivoting only in the first `limit`
/// columns. Returns the pivot columns; rows past the pivot count are zero on
/// those columns afterwards.
pub(crate) fn reduce_in_place(f: &Field, data: &mut [Elem], rows: usize, cols: usize, limit: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else { continue };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.recip(data[r * cols + c]);
        if inv != 1 {
            for j in c..cols {
                data[r * cols + j] = f.mul(data[r * cols + j], inv);
            }
        }
        for i in 0..rows {
            let factor = data[i * cols + c];
            if i == r || factor == 0 {
                continue;
            }
            let neg = f.neg(factor);
            for j in c..cols {
                let v = data[r * cols + j];
                if v != 0 {
                    data[i * cols + j] = f.add(data[i * cols + j], f.mul(neg, v));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by forward elimination only; destroys `data`.
pub(crate) fn rank_in_place(f: &Field, data: &mut [Elem], rows: usize, cols: usize) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| data[i * cols + c] != 0) else { continue };
        if pr != r {
            for j in c..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.recip(data[r * cols + c]);
        for i in r + 1..rows {
            let factor = data[i * cols + c];
            if factor == 0 {
                continue;
            }
            let m = f.neg(f.mul(factor, inv));
            for j in c..cols {
                let v = data[r * cols + j];
                if v != 0 {
                    data[i * cols + j] = f.add(data[i * cols + j], f.mul(m, v));
                }
            }
        }
        r += 1;
    }
    r
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(&bad) = data.iter().find(|&&e| e as u32 >= field.order()) {
            return Err(Error::ElementOutOfRange { elem: bad as u64, q: field.order() });
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    /// Builds from nested rows of codes; all rows must share one length.
    pub fn from_rows<R: AsRef<[u64]>>(field: &Field, rows: &[R]) -> Result<Matrix> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch("ragged rows".into()));
            }
            for &c in r {
                data.push(field.check(c)?);
            }
        }
        Ok(Matrix { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub(crate) fn from_raw(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Matrix {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix { field: field.clone(), rows, cols, data }
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

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        assert!((v as u32) < self.field.order(), "element out of range");
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        Matrix::from_raw(&self.field, self.cols, self.rows, data)
    }

    /// Sub-block with top-left corner (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols, "block out of bounds");
        let mut data = Vec::with_capacity(rows * cols);
        for i in r0..r0 + rows {
            data.extend_from_slice(&self.data[i * self.cols + c0..i * self.cols + c0 + cols]);
        }
        Matrix::from_raw(&self.field, rows, cols, data)
    }

    /// Copies `src` into this matrix with its top-left corner at (r0, c0).
    pub fn paste(&mut self, r0: usize, c0: usize, src: &Matrix) {
        assert!(r0 + src.rows <= self.rows && c0 + src.cols <= self.cols, "paste out of bounds");
        for i in 0..src.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + src.cols].copy_from_slice(src.row(i));
        }
    }

    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts.first().ok_or_else(|| Error::DimensionMismatch("empty stack".into()))?;
        let rows = first.rows;
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(&first.field, rows, cols);
        let mut c0 = 0;
        for m in parts {
            first.field.same(&m.field)?;
            if m.rows != rows {
                return Err(Error::DimensionMismatch(format!("hstack of {} and {} rows", rows, m.rows)));
            }
            out.paste(0, c0, m);
            c0 += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts.first().ok_or_else(|| Error::DimensionMismatch("empty stack".into()))?;
        let cols = first.cols;
        let mut data = Vec::new();
        for m in parts {
            first.field.same(&m.field)?;
            if m.cols != cols {
                return Err(Error::DimensionMismatch(format!("vstack of {} and {} columns", cols, m.cols)));
            }
            data.extend_from_slice(&m.data);
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        Ok(Matrix::from_raw(&first.field, rows, cols, data))
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        self.field.same(&other.field)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix::from_raw(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        let f = &self.field;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix::from_raw(f, self.rows, self.cols, data))
    }

    pub fn scale(&self, c: Elem) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&a| f.mul(a, c)).collect();
        Matrix::from_raw(f, self.rows, self.cols, data)
    }

    /// Adds `c * other` into `self`.
    pub fn add_scaled(&mut self, c: Elem, other: &Matrix) -> Result<()> {
        self.same_shape(other)?;
        if c == 0 {
            return Ok(());
        }
        let f = &self.field;
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            if b != 0 {
                *a = f.add(*a, f.mul(c, b));
            }
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.field.same(&other.field)?;
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(l, j)));
                }
            }
        }
        Ok(out)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut data = self.data.clone();
        let pivots = reduce_in_place(&self.field, &mut data, self.rows, self.cols, self.cols);
        (Matrix::from_raw(&self.field, self.rows, self.cols, data), pivots)
    }

    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        rank_in_place(&self.field, &mut data, self.rows, self.cols)
    }

    /// Basis of the left null space {v : v·M = 0}, one vector per row.
    pub fn left_kernel(&self) -> Matrix {
        let (r, c) = (self.rows, self.cols);
        let w = c + r;
        let mut data = vec![0; r * w];
        for i in 0..r {
            data[i * w..i * w + c].copy_from_slice(self.row(i));
            data[i * w + c + i] = 1;
        }
        let rank = reduce_in_place(&self.field, &mut data, r, w, c).len();
        let mut out = Vec::with_capacity((r - rank) * r);
        for i in rank..r {
            out.extend_from_slice(&data[i * w + c..(i + 1) * w]);
        }
        Matrix::from_raw(&self.field, r - rank, r, out)
    }

    /// Text form: "q rows cols" then one line per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.field.order(), self.rows, self.cols);
        for i in 0..self.rows {
            s.push_str(&join_row(self.row(i)));
            s.push('\n');
        }
        s
    }

    /// Parses [`Matrix::to_text`] output. `field` must have the stated order.
    pub fn from_text(field: &Field, text: &str) -> Result<Matrix> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (ln, header) = lines.next().ok_or_else(|| Error::parse(1, "empty matrix text"))?;
        let nums = parse_numbers(ln + 1, header)?;
        let [q, rows, cols] = nums[..] else {
            return Err(Error::parse(ln + 1, "expected \"q rows cols\""));
        };
        if q != field.order() as u64 {
            return Err(Error::MixedFields(q as u32, field.order()));
        }
        let mut out = Vec::with_capacity((rows * cols) as usize);
        for _ in 0..rows {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln + 1, "missing matrix row"))?;
            let row = parse_numbers(ln + 1, line)?;
            if row.len() != cols as usize {
                return Err(Error::parse(ln + 1, format!("expected {cols} entries")));
            }
            for c in row {
                out.push(field.check(c)?);
            }
        }
        Ok(Matrix::from_raw(field, rows as usize, cols as usize, out))
    }
}

pub(crate) fn join_row(row: &[Elem]) -> String {
    row.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

pub(crate) fn parse_numbers(line: usize, s: &str) -> Result<Vec<u64>> {
    s.split_whitespace().map(|t| t.parse::<u64>().map_err(|e| Error::parse(line, format!("{t:?}: {e}")))).collect()
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Matrix) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data && self.field == other.field
    }
}

impl Eq for Matrix {}

impl Hash for Matrix {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
        self.cols.hash(state);
        self.data.hash(state);
    }
}

/// Shape first, then the serialized entries lexicographically.
impl Ord for Matrix {
    fn cmp(&self, other: &Matrix) -> Ordering {
        (self.rows, self.cols, &self.data).cmp(&(other.rows, other.cols, &other.data))
    }
}

impl PartialOrd for Matrix {
    fn partial_cmp(&self, other: &Matrix) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{:?} {}x{}]", self.field, self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, " [{}]", join_row(self.row(i)))?;
        }
        Ok(())
    }
}
