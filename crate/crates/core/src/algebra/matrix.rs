//! Dense matrices over a [`Scalar`].

use std::ops::Range;

use super::scalar::Scalar;
use super::Var;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

fn mismatch(op: &str, a: (usize, usize), b: (usize, usize)) -> Error {
    Error::DimensionMismatch(format!(
        "{op}: {}x{} and {}x{}",
        a.0, a.1, b.0, b.1
    ))
}

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        if rows.iter().any(|v| v.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { S::one() } else { S::zero() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(mismatch("mul", self.shape(), other.shape()));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].add(&a.mul(b));
                }
            }
        }
        Ok(out)
    }

    fn zip(&self, other: &Self, op: &str, f: impl Fn(&S, &S) -> S) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(mismatch(op, self.shape(), other.shape()));
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, "add", |a, b| a.add(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, "sub", |a, b| a.sub(b))
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.neg())
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|a| a.mul(k))
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<T: Scalar>(&self, f: impl Fn(usize, usize, &S) -> Result<T>) -> Result<Matrix<T>> {
        let mut data = Vec::with_capacity(self.data.len());
        for i in 0..self.rows {
            for j in 0..self.cols {
                data.push(f(i, j, self.get(i, j))?);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Entrywise partial derivative.
    pub fn derivative(&self, v: Var) -> Result<Self> {
        self.try_map(|_, _, a| a.derivative(v))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        assert!(rows.end <= self.rows && cols.end <= self.cols, "submatrix out of range");
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows.start + i, cols.start + j).clone()
        })
    }

    pub fn delete_rows(&self, range: Range<usize>) -> Self {
        assert!(range.end <= self.rows, "row range out of bounds");
        let keep: Vec<usize> = (0..self.rows).filter(|i| !range.contains(i)).collect();
        Self::from_fn(keep.len(), self.cols, |i, j| self.get(keep[i], j).clone())
    }

    pub fn delete_row(&self, i: usize) -> Self {
        self.delete_rows(i..i + 1)
    }

    pub fn insert_zero_column(&self, at: usize) -> Self {
        assert!(at <= self.cols);
        Self::from_fn(self.rows, self.cols + 1, |i, j| match j.cmp(&at) {
            std::cmp::Ordering::Less => self.get(i, j).clone(),
            std::cmp::Ordering::Equal => S::zero(),
            std::cmp::Ordering::Greater => self.get(i, j - 1).clone(),
        })
    }

    pub fn append_zero_rows(&self, n: usize) -> Self {
        let mut data = self.data.clone();
        data.extend(std::iter::repeat_n(S::zero(), n * self.cols));
        Matrix {
            rows: self.rows + n,
            cols: self.cols,
            data,
        }
    }

    pub fn column(&self, j: usize) -> Self {
        self.submatrix(0..self.rows, j..j + 1)
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        if !self.is_square() {
            return Err(mismatch("pow", self.shape(), self.shape()));
        }
        let mut out = Self::identity(self.rows);
        for _ in 0..n {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Index of the first unit entry in column `col` at or below `from`;
    /// when only non-unit nonzero entries exist, the scalar's own
    /// inversion error is returned.
    fn find_pivot(&self, col: usize, from: usize) -> Result<Option<usize>> {
        let mut fallback = None;
        for r in from..self.rows {
            let v = self.get(r, col);
            if v.is_unit() {
                return Ok(Some(r));
            }
            if fallback.is_none() && !v.is_zero() {
                fallback = Some(r);
            }
        }
        if let Some(r) = fallback {
            self.get(r, col).inv()?;
        }
        Ok(None)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// `row[target] -= factor * row[source]` from column `from` on.
    fn eliminate(&mut self, target: usize, source: usize, factor: &S, from: usize) {
        for j in from..self.cols {
            let s = &self.data[source * self.cols + j];
            if s.is_zero() {
                continue;
            }
            let t = self.data[target * self.cols + j].sub(&factor.mul(s));
            self.data[target * self.cols + j] = t;
        }
    }

    /// Gauss-Jordan inverse pivoting on the first unit entry of each column.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(mismatch("inverse", self.shape(), self.shape()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                S::one()
            } else {
                S::zero()
            }
        });
        for col in 0..n {
            let Some(piv) = aug.find_pivot(col, col)? else {
                return Err(Error::SingularMatrix);
            };
            aug.swap_rows(col, piv);
            let pv = aug.get(col, col).clone();
            if !pv.is_one() {
                let inv = pv.inv()?;
                for j in col..2 * n {
                    let v = aug.get(col, j).mul(&inv);
                    aug.set(col, j, v);
                }
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = aug.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                aug.eliminate(r, col, &f, col);
            }
        }
        Ok(aug.submatrix(0..n, n..2 * n))
    }

    /// Row echelon reduction; returns the reduced matrix, the pivot count
    /// and the parity of row swaps.
    fn echelon(&self) -> Result<(Self, usize, bool)> {
        let mut m = self.clone();
        let mut rank = 0;
        let mut odd = false;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = m.find_pivot(col, rank)? else {
                continue;
            };
            if piv != rank {
                m.swap_rows(rank, piv);
                odd = !odd;
            }
            let inv = m.get(rank, col).inv()?;
            for r in rank + 1..m.rows {
                let v = m.get(r, col).clone();
                if v.is_zero() {
                    continue;
                }
                let f = v.mul(&inv);
                m.eliminate(r, rank, &f, col);
            }
            rank += 1;
        }
        Ok((m, rank, odd))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.echelon()?.1)
    }

    pub fn determinant(&self) -> Result<S> {
        if !self.is_square() {
            return Err(mismatch("determinant", self.shape(), self.shape()));
        }
        let (m, rank, odd) = self.echelon()?;
        if rank < self.rows {
            return Ok(S::zero());
        }
        let mut det = S::one();
        for i in 0..self.rows {
            det = det.mul(m.get(i, i));
        }
        Ok(if odd { det.neg() } else { det })
    }

    /// Solves `self * X = rhs` for unit upper triangular `self` by back
    /// substitution.
    pub fn solve_unit_upper(&self, rhs: &Self) -> Result<Self> {
        if !self.is_unit_upper_triangular() {
            return Err(Error::DimensionMismatch("matrix is not unit upper triangular".into()));
        }
        if rhs.rows != self.rows {
            return Err(mismatch("solve_unit_upper", self.shape(), rhs.shape()));
        }
        let mut x = rhs.clone();
        for i in (0..self.rows).rev() {
            for k in i + 1..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..x.cols {
                    let b = x.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = x.get(i, j).sub(&a.mul(b));
                    x.set(i, j, v);
                }
            }
        }
        Ok(x)
    }

    /// `[self | other]`.
    pub fn hcat(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(mismatch("hcat", self.shape(), other.shape()));
        }
        Ok(Self::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Unit diagonal with zeros strictly below it.
    pub fn is_unit_upper_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                self.get(i, i).is_one() && (0..i).all(|j| self.get(i, j).is_zero())
            })
    }

    /// Unit diagonal with zeros strictly above it.
    pub fn is_unit_lower_triangular(&self) -> bool {
        self.transpose().is_unit_upper_triangular()
    }
}
