//! Prolongations of the seed equation: derivative tensors `E` and `G`,
//! the Cramer system `P u = Q s`, and the trivializing sections.

use crate::algebra::{Matrix, Scalar, Var};
use crate::error::{Error, Result};

/// `I_0 = [Id; 0]`, `(d-1) x (d-2)`.
pub fn i_lower<S: Scalar>(d: usize) -> Matrix<S> {
    Matrix::from_fn(d - 1, d - 2, |i, j| unit(i == j))
}

/// `I^0 = [0; Id]`, `(d-1) x (d-2)`.
pub fn i_upper<S: Scalar>(d: usize) -> Matrix<S> {
    Matrix::from_fn(d - 1, d - 2, |i, j| unit(i == j + 1))
}

/// `J_0 = [Id | 0]`, `(d-2) x (d-1)`.
pub fn j_left<S: Scalar>(d: usize) -> Matrix<S> {
    Matrix::from_fn(d - 2, d - 1, |i, j| unit(i == j))
}

/// `(_0 J) = [0 | Id]`, `(d-2) x (d-1)`.
pub fn j_right<S: Scalar>(d: usize) -> Matrix<S> {
    Matrix::from_fn(d - 2, d - 1, |i, j| unit(j == i + 1))
}

/// `K = (_0 J) I_0`: `(K w)_i = w_(i+1)`.
pub fn shift_matrix<S: Scalar>(d: usize) -> Matrix<S> {
    j_right(d).mul(&i_lower(d)).expect("compatible shapes")
}

fn unit<S: Scalar>(b: bool) -> S {
    if b {
        S::one()
    } else {
        S::zero()
    }
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

/// `∂x^a ∂y^b M`, entrywise.
pub fn m_derivative<S: Scalar>(m: &Matrix<S>, a: usize, b: usize) -> Result<Matrix<S>> {
    let mut out = m.clone();
    for _ in 0..a {
        out = out.derivative(Var::X)?;
    }
    for _ in 0..b {
        out = out.derivative(Var::Y)?;
    }
    Ok(out)
}

/// All `∂x^a ∂y^b M` with `a + b <= order`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivativeTable<S> {
    order: usize,
    table: Vec<Vec<Matrix<S>>>,
}

impl<S: Scalar> DerivativeTable<S> {
    pub fn new(m: &Matrix<S>, order: usize) -> Result<Self> {
        let mut table: Vec<Vec<Matrix<S>>> = Vec::with_capacity(order + 1);
        for a in 0..=order {
            let mut row = Vec::with_capacity(order + 1 - a);
            for b in 0..=order - a {
                let entry = match (a, b) {
                    (0, 0) => m.clone(),
                    (_, 0) => table[a - 1][0].derivative(Var::X)?,
                    _ => {
                        let prev: &Matrix<S> = &row[b - 1];
                        prev.derivative(Var::Y)?
                    }
                };
                row.push(entry);
            }
            table.push(row);
        }
        Ok(DerivativeTable { order, table })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, a: usize, b: usize) -> &Matrix<S> {
        &self.table[a][b]
    }
}

/// Tensor indexed by `(h, a, b)`, zero where `h > a + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorTable<S> {
    size: usize,
    zero: Matrix<S>,
    data: Vec<Option<Matrix<S>>>,
}

impl<S: Scalar> TensorTable<S> {
    fn new(size: usize, rows: usize, cols: usize) -> Self {
        TensorTable {
            size,
            zero: Matrix::zeros(rows, cols),
            data: vec![None; size * size * size],
        }
    }

    fn slot(&self, h: usize, a: usize, b: usize) -> usize {
        assert!(h < self.size && a < self.size && b < self.size, "tensor index out of range");
        (h * self.size + a) * self.size + b
    }

    pub fn get(&self, h: usize, a: usize, b: usize) -> &Matrix<S> {
        self.data[self.slot(h, a, b)].as_ref().unwrap_or(&self.zero)
    }

    fn set(&mut self, h: usize, a: usize, b: usize, m: Matrix<S>) {
        let s = self.slot(h, a, b);
        self.data[s] = if m.is_zero() { None } else { Some(m) };
    }

    fn is_zero_at(&self, h: usize, a: usize, b: usize) -> bool {
        self.data[self.slot(h, a, b)].is_none()
    }
}

/// `u_(a,b) = Σ_h E[h][a][b] u_(0,h)`, for `a + b <= d - 2`.
pub fn e_tensor_table<S: Scalar>(dm: &DerivativeTable<S>, d: usize) -> Result<TensorTable<S>> {
    let mut e = TensorTable::new(d - 1, d - 2, d - 2);
    for h in 0..=d - 2 {
        e.set(h, 0, h, Matrix::identity(d - 2));
    }
    let j0 = j_left::<S>(d);
    let shift = j0.mul(&i_upper(d))?;
    let j0_dm = |a: usize, b: usize| j0.mul(dm.get(a, b));
    for k in 0..=d - 3 {
        for a in 0..=k {
            for h in 0..=k + 1 {
                let mut acc = shift.mul(e.get(h, a, k - a + 1))?.neg();
                for c in 0..=a {
                    for f in 0..=k - a {
                        if e.is_zero_at(h, c, f) {
                            continue;
                        }
                        let coef = S::from_i64(binomial(a, c) * binomial(k - a, f));
                        let term = j0_dm(a - c, k - a - f)?.mul(e.get(h, c, f))?.scale(&coef);
                        acc = acc.add(&term)?;
                    }
                }
                e.set(h, a + 1, k - a, acc);
            }
        }
    }
    Ok(e)
}

/// `<M, u>_(a,b) = Σ_h G[h][a][b] u_(0,h)`, for `a + b <= d - 3`.
pub fn g_tensor_table<S: Scalar>(
    dm: &DerivativeTable<S>,
    e: &TensorTable<S>,
    d: usize,
) -> Result<TensorTable<S>> {
    let mut g = TensorTable::new(d - 1, d - 1, d - 2);
    for k in 0..=d - 3 {
        for a in 0..=k {
            let b = k - a;
            for h in 0..=k {
                let mut acc = Matrix::zeros(d - 1, d - 2);
                for c in 0..=a {
                    for f in 0..=b {
                        if e.is_zero_at(h, c, f) {
                            continue;
                        }
                        let coef = S::from_i64(binomial(a, c) * binomial(b, f));
                        let term = dm.get(a - c, b - f).mul(e.get(h, c, f))?.scale(&coef);
                        acc = acc.add(&term)?;
                    }
                }
                g.set(h, a, b, acc);
            }
        }
    }
    Ok(g)
}

/// `P u = Q v` for the top-order unknowns `u`: column block `h` of `U`
/// holds `u_(d-2-h, h)`, column block `h` of `Q` multiplies `u_(0,h)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CramerSystem<S> {
    pub p: Matrix<S>,
    pub p_inv: Matrix<S>,
    pub q: Matrix<S>,
    pub u: Matrix<S>,
}

pub fn cramer_p<S: Scalar>(d: usize) -> Matrix<S> {
    let (r, c) = (d - 1, d - 2);
    let lower = i_lower::<S>(d);
    let upper = i_upper::<S>(d);
    Matrix::from_fn(r * c, r * c, |i, j| {
        let (bi, ii) = (i / r, i % r);
        let (bj, jj) = (j / c, j % c);
        if bj == bi {
            lower.get(ii, jj).clone()
        } else if bj == bi + 1 {
            upper.get(ii, jj).clone()
        } else {
            S::zero()
        }
    })
}

pub fn assemble_cramer<S: Scalar>(g: &TensorTable<S>, d: usize) -> Result<CramerSystem<S>> {
    let (r, c) = (d - 1, d - 2);
    let p = cramer_p::<S>(d);
    let p_inv = p.inverse()?;
    let q = Matrix::from_fn(r * c, c * c, |i, j| {
        let (b, ii) = (i / r, i % r);
        let (h, jj) = (j / c, j % c);
        g.get(h, d - 3 - b, b).get(ii, jj).clone()
    });
    let u = p_inv.mul(&q)?;
    Ok(CramerSystem { p, p_inv, q, u })
}

/// Numbering of free slots `(h, j)`, `j <= d-3-h`, and of all slots
/// `(h, j)`, `j <= d-3`. Indices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMaps {
    pub d: usize,
    free: Vec<(usize, usize)>,
    full: Vec<(usize, usize)>,
}

impl IndexMaps {
    pub fn new(d: usize) -> Self {
        let mut free = Vec::new();
        for h in 0..=d - 3 {
            for j in 0..=d - 3 - h {
                free.push((h, j));
            }
        }
        let mut full = Vec::new();
        for h in 0..=d - 3 {
            for j in 0..=d - 3 {
                full.push((h, j));
            }
        }
        IndexMaps { d, free, full }
    }

    pub fn free_count(&self) -> usize {
        self.free.len()
    }

    pub fn full_count(&self) -> usize {
        self.full.len()
    }

    /// `a = h(2d-3-h)/2 + j + 1`.
    pub fn free_index(&self, h: usize, j: usize) -> usize {
        h * (2 * self.d - 3 - h) / 2 + j + 1
    }

    /// `(hh(a), jj(a))`.
    pub fn free_slot(&self, a: usize) -> (usize, usize) {
        self.free[a - 1]
    }

    /// `a' = h(d-2) + j + 1`.
    pub fn full_index(&self, h: usize, j: usize) -> usize {
        h * (self.d - 2) + j + 1
    }

    /// `(hhh(a'), jjj(a'))`.
    pub fn full_slot(&self, a: usize) -> (usize, usize) {
        self.full[a - 1]
    }
}

/// Components `s[a][h][j] = (u_(0,h))_j` of the sections `σ_(a+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SectionTable<S> {
    pub d: usize,
    pub s: Vec<Vec<Vec<S>>>,
}

impl<S: Scalar> SectionTable<S> {
    /// `WW[a][h]` as a column (`a` 1-based).
    pub fn ww(&self, a: usize, h: usize) -> Matrix<S> {
        let v = &self.s[a - 1][h];
        Matrix::from_fn(v.len(), 1, |i, _| v[i].clone())
    }

    /// `WWW[a]`: all `WW[a][h]` stacked, `h = 0..=d-3`.
    pub fn www(&self, a: usize) -> Matrix<S> {
        let flat: Vec<S> = self.s[a - 1].iter().flatten().cloned().collect();
        Matrix::from_fn(flat.len(), 1, |i, _| flat[i].clone())
    }

    pub fn get(&self, a: usize, h: usize, j: usize) -> &S {
        &self.s[a - 1][h][j]
    }
}

/// `Z[h][n] = Σ_(k<h) (-1)^k K^k (_0 J) G[n][k][h-1-k]`, so that the bound
/// part of `u_(0,h)` is `Σ_(n<h) Z[h][n] u_(0,n)`.
pub fn bound_maps<S: Scalar>(g: &TensorTable<S>, d: usize) -> Result<Vec<Vec<Matrix<S>>>> {
    let oj = j_right::<S>(d);
    let kmat = shift_matrix::<S>(d);
    let mut kpow = vec![Matrix::identity(d - 2)];
    for k in 1..d - 2 {
        let next = kpow[k - 1].mul(&kmat)?;
        kpow.push(next);
    }
    let mut z = vec![Vec::new()];
    for h in 1..=d - 3 {
        let mut row = Vec::with_capacity(h);
        for n in 0..h {
            let mut acc = Matrix::zeros(d - 2, d - 2);
            for k in 0..h {
                let term = kpow[k].mul(&oj)?.mul(g.get(n, k, h - 1 - k))?;
                acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
            }
            row.push(acc);
        }
        z.push(row);
    }
    Ok(z)
}

pub fn build_sections<S: Scalar>(
    g: &TensorTable<S>,
    maps: &IndexMaps,
    d: usize,
) -> Result<SectionTable<S>> {
    if maps.d != d {
        return Err(Error::DimensionMismatch(format!("index maps for d = {}, web has d = {d}", maps.d)));
    }
    let z = bound_maps(g, d)?;
    let m = maps.free_count();
    let mut s = vec![vec![vec![S::zero(); d - 2]; d - 2]; m];
    for (a, sec) in s.iter_mut().enumerate() {
        let (h, j) = maps.free_slot(a + 1);
        sec[h][j] = S::one();
    }
    for sec in s.iter_mut() {
        for h in 1..=d - 3 {
            for j in d - 2 - h..=d - 3 {
                let mut acc = S::zero();
                for n in 0..h {
                    for r in 0..d - 2 {
                        let c = z[h][n].get(j, r);
                        if c.is_zero() || sec[n][r].is_zero() {
                            continue;
                        }
                        acc = acc.add(&c.mul(&sec[n][r]));
                    }
                }
                sec[h][j] = acc;
            }
        }
    }
    Ok(SectionTable { d, s })
}
