use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::{gabidulin, CosetFamily};
use crate::algebra::{Field, Matrix};
use crate::error::{Error, Result};

/// Block geometry of the Ferrers diagram attached to a special-form
/// identifying vector: `u1` ones at offset `shift` inside the first `delta1`
/// coordinates and `u2` leading ones in the last `delta2`.
///
/// Matrices on this shape are k × (left + right) with k = u1 + u2:
/// ```text
///   [ M1 (u1 × left) | M3 (u1 × right) ]
///   [ 0  (u2 × left) | M2 (u2 × right) ]
/// ```
/// where left = delta1 - shift - u1 and right = delta2 - u2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FerrersShape {
    pub delta1: usize,
    pub delta2: usize,
    pub u1: usize,
    pub u2: usize,
    pub shift: usize,
    pub d_f: usize,
}

impl FerrersShape {
    pub fn new(delta1: usize, delta2: usize, u1: usize, u2: usize, shift: usize, d_f: usize) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidParameters(msg));
        if d_f == 0 {
            return bad("d_f must be positive".into());
        }
        if delta1 < shift + u1 {
            return bad(format!("delta1 = {delta1} < shift + u1 = {}", shift + u1));
        }
        if delta2 < u2 + d_f {
            return bad(format!("delta2 = {delta2} < u2 + d_f = {}", u2 + d_f));
        }
        if u1 < d_f || u2 < d_f {
            return bad(format!("u1 = {u1}, u2 = {u2} must both be at least d_f = {d_f}"));
        }
        Ok(FerrersShape { delta1, delta2, u1, u2, shift, d_f })
    }

    pub fn k(&self) -> usize {
        self.u1 + self.u2
    }

    pub fn n(&self) -> usize {
        self.delta1 + self.delta2
    }

    pub fn left_width(&self) -> usize {
        self.delta1 - self.shift - self.u1
    }

    pub fn right_width(&self) -> usize {
        self.delta2 - self.u2
    }

    pub fn width(&self) -> usize {
        self.left_width() + self.right_width()
    }

    /// Whether (i, j) of the k × width matrix is a dot of the diagram.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        i < self.k() && j < self.width() && (i < self.u1 || j >= self.left_width())
    }

    /// Which construction applies for a given upper-left distance b1.
    pub fn case_for(&self, b1: usize) -> FdrmCase {
        let w = self.left_width();
        if w < b1 {
            FdrmCase::LeftZero
        } else if w < self.d_f {
            FdrmCase::Paired
        } else {
            FdrmCase::Product
        }
    }
}

/// The three regimes for the width of the upper-left block.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FdrmCase {
    /// left width < b1: the upper-left block is zero, lower-right has distance d_f.
    LeftZero,
    /// b1 ≤ left width < d_f: diagonal blocks paired one-to-one.
    Paired,
    /// left width ≥ d_f: independent diagonal blocks of distance d_f.
    Product,
}

/// A union of block codes on a [`FerrersShape`]: for every piece (X, Y) and
/// every corner matrix, all [[x, corner], [0, y]] with x ∈ X, y ∈ Y.
#[derive(Clone, Debug)]
pub struct FdrmCode {
    field: Field,
    shape: FerrersShape,
    case: FdrmCase,
    pieces: Vec<(Vec<Matrix>, Vec<Matrix>)>,
    corner: Vec<Matrix>,
}

impl FdrmCode {
    pub fn shape(&self) -> &FerrersShape {
        &self.shape
    }

    pub fn case(&self) -> FdrmCase {
        self.case
    }

    pub fn pieces(&self) -> &[(Vec<Matrix>, Vec<Matrix>)] {
        &self.pieces
    }

    pub fn corner(&self) -> &[Matrix] {
        &self.corner
    }

    pub fn len(&self) -> BigUint {
        let diag: u64 = self.pieces.iter().map(|(x, y)| (x.len() * y.len()) as u64).sum();
        BigUint::from(diag) * BigUint::from(self.corner.len())
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty() || self.corner.is_empty()
    }

    pub fn assemble(&self, upper_left: &Matrix, corner: &Matrix, lower_right: &Matrix) -> Matrix {
        let s = &self.shape;
        let mut m = Matrix::zeros(&self.field, s.k(), s.width());
        m.paste(0, 0, upper_left);
        m.paste(0, s.left_width(), corner);
        m.paste(s.u1, s.left_width(), lower_right);
        m
    }

    pub fn iter(&self) -> impl Iterator<Item = Matrix> + '_ {
        self.pieces.iter().flat_map(move |(xs, ys)| {
            xs.iter().flat_map(move |x| ys.iter().flat_map(move |y| self.corner.iter().map(move |c| self.assemble(x, c, y))))
        })
    }
}

fn check_distances(first: usize, second: usize, d_f: usize, what: &str) -> Result<()> {
    if first < 1 || second < 1 || first > d_f || second > d_f || first + second < d_f {
        return Err(Error::InvalidParameters(format!(
            "{what} = ({first}, {second}) must lie in [1, {d_f}] with sum at least {d_f}"
        )));
    }
    Ok(())
}

fn corner_set(field: &Field, shape: &FerrersShape, cap: Option<usize>) -> Result<Vec<Matrix>> {
    let code = gabidulin(field, shape.u1, shape.right_width(), shape.d_f)?;
    let all: Vec<Matrix> = code.enumerate(cap)?.collect();
    Ok(all)
}

fn sorted(field: &Field, rows: usize, cols: usize, d: usize) -> Result<Vec<Matrix>> {
    if cols == 0 {
        return Ok(vec![Matrix::zeros(field, rows, 0)]);
    }
    let mut v: Vec<Matrix> = gabidulin(field, rows, cols, d)?.enumerate(None)?.collect();
    v.sort();
    Ok(v)
}

/// Three-case union on `shape` with diagonal distances (b1, b2). In the
/// zero-left case b2 is raised to d_f; in the product case both are.
/// `corner_cap` restricts the corner block to rank ≤ cap (lifting needs
/// u1 - d_f). `expect` rejects shapes that fall into a different case.
pub fn fdrm_union(
    field: &Field,
    shape: &FerrersShape,
    b1: usize,
    b2: usize,
    corner_cap: Option<usize>,
    expect: Option<FdrmCase>,
) -> Result<FdrmCode> {
    check_distances(b1, b2, shape.d_f, "(b1, b2)")?;
    let case = shape.case_for(b1);
    if let Some(want) = expect.filter(|&w| w != case) {
        return Err(Error::CaseMismatch(format!(
            "left width {} with b1 = {b1}, d_f = {} selects {case:?}, not {want:?}",
            shape.left_width(),
            shape.d_f
        )));
    }
    let (u1, u2, w1, w2, d_f) = (shape.u1, shape.u2, shape.left_width(), shape.right_width(), shape.d_f);
    let pieces = match case {
        FdrmCase::LeftZero => vec![(vec![Matrix::zeros(field, u1, w1)], sorted(field, u2, w2, d_f)?)],
        FdrmCase::Paired => {
            let xs = sorted(field, u1, w1, b1)?;
            let ys = sorted(field, u2, w2, b2)?;
            xs.into_iter().zip(ys).map(|(x, y)| (vec![x], vec![y])).collect()
        }
        FdrmCase::Product => vec![(sorted(field, u1, w1, d_f)?, sorted(field, u2, w2, d_f)?)],
    };
    Ok(FdrmCode { field: field.clone(), shape: *shape, case, pieces, corner: corner_set(field, shape, corner_cap)? })
}

/// Coset-paired union: the j-th coset of the distance-d_f code inside the
/// distance-c1 code on the upper-left block is combined with the j-th coset
/// on the lower-right block (distance c2), for j < s = min of the coset counts.
pub fn fdrm_subcode_union(
    field: &Field,
    shape: &FerrersShape,
    c1: usize,
    c2: usize,
    corner_cap: Option<usize>,
) -> Result<FdrmCode> {
    check_distances(c1, c2, shape.d_f, "(c1, c2)")?;
    if shape.left_width() < shape.d_f {
        return Err(Error::InvalidParameters(format!("left width {} must be at least d_f = {}", shape.left_width(), shape.d_f)));
    }
    let top = CosetFamily::new(field, shape.u1, shape.left_width(), c1, shape.d_f)?;
    let bottom = CosetFamily::new(field, shape.u2, shape.right_width(), c2, shape.d_f)?;
    let s = top.count().min(bottom.count()).to_usize().expect("coset count fits in usize");
    let (tl, bl) = (top.leaders()?, bottom.leaders()?);
    let mut pieces = Vec::with_capacity(s);
    for j in 0..s {
        let xs: Vec<Matrix> = top.coset(&tl[j])?.collect();
        let ys: Vec<Matrix> = bottom.coset(&bl[j])?.collect();
        pieces.push((xs, ys));
    }
    Ok(FdrmCode {
        field: field.clone(),
        shape: *shape,
        case: FdrmCase::Product,
        pieces,
        corner: corner_set(field, shape, corner_cap)?,
    })
}
