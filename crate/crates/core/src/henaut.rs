//! Structural quantities of `F` and the elimination producing the seed
//! matrix `M` of `I_0 r_x + I^0 r_y = M r`.

use crate::algebra::{Matrix, Scalar, SlopePolynomial, Var};
use crate::error::{Error, Result};

/// `K = F_x + p F_y`, `H = K F_pp - K_p F_p`, `L = K F_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructuralQuantities<S> {
    pub d: usize,
    /// Width `d + 1`.
    pub f: SlopePolynomial<S>,
    /// Width `d`.
    pub f_p: SlopePolynomial<S>,
    pub f_x: SlopePolynomial<S>,
    pub f_y: SlopePolynomial<S>,
    /// Width `d + 1`.
    pub k: SlopePolynomial<S>,
    /// Width `2d - 1`.
    pub h: SlopePolynomial<S>,
    /// Width `2d`.
    pub l: SlopePolynomial<S>,
}

pub fn structural_quantities<S: Scalar>(f: &SlopePolynomial<S>) -> Result<StructuralQuantities<S>> {
    let d = f.width() - 1;
    if d < 3 {
        return Err(Error::Degree(d));
    }
    let f_p = f.derivative_p();
    let f_pp = f_p.derivative_p();
    let f_x = f.derivative(Var::X)?;
    let f_y = f.derivative(Var::Y)?;
    let k = f_x.add(&SlopePolynomial::p().mul(&f_y)).with_width(d + 1);
    let h = k.mul(&f_pp).sub(&k.derivative_p().mul(&f_p)).with_width(2 * d - 1);
    let l = k.mul(&f_p).with_width(2 * d);
    Ok(StructuralQuantities { d, f: f.clone(), f_p, f_x, f_y, k, h, l })
}

/// Matrices of the elimination of `c` from `(F_p)^2 (r_x + p r_y) + H r -
/// L r_p = c F`.
#[derive(Clone, Debug, PartialEq)]
pub struct EliminationData<S> {
    /// `(3d-3) x (2d-3)`.
    pub mf: Matrix<S>,
    /// `(3d-3) x (d-1)`.
    pub mf2p: Matrix<S>,
    /// `(3d-3) x (d-2)`.
    pub ml: Matrix<S>,
    /// `(3d-3) x (d-2)`, last row zero.
    pub mh: Matrix<S>,
    /// `(d-2) x (d-2)`, `p`-derivative on coefficient vectors.
    pub n: Matrix<S>,
    /// `d x (d-1)`.
    pub b: Matrix<S>,
    /// `d x (d-2)`.
    pub emat: Matrix<S>,
}

impl<S: Scalar> EliminationData<S> {
    pub fn d(&self) -> usize {
        self.b.rows()
    }

    /// Lower block of `M(F)`: rows `d .. 3d-3`.
    pub fn f_lower(&self) -> Matrix<S> {
        let d = self.d();
        self.mf.submatrix(d..3 * d - 3, 0..2 * d - 3)
    }
}

/// Derivative-in-`p` matrix: `N[i][i+1] = i + 1`.
pub fn p_derivative_matrix<S: Scalar>(size: usize) -> Matrix<S> {
    Matrix::from_fn(size, size, |i, j| {
        if j == i + 1 {
            S::from_i64(j as i64)
        } else {
            S::zero()
        }
    })
}

pub fn elimination_matrices<S: Scalar>(q: &StructuralQuantities<S>) -> Result<EliminationData<S>> {
    let d = q.d;
    let rows = 3 * d - 3;
    let mf = q.f.convolution_matrix(2 * d - 4);
    let mf2p = q.f_p.mul(&q.f_p).convolution_matrix(d - 2);
    let ml = q.l.convolution_matrix(d - 3);
    let mh = q.h.convolution_matrix(d - 3).append_zero_rows(1);
    debug_assert_eq!((mf.rows(), mf2p.rows(), ml.rows(), mh.rows()), (rows, rows, rows, rows));
    let n = p_derivative_matrix(d - 2);
    let mhl = mh.sub(&ml.mul(&n)?)?;

    // Lower block of M(F) is unit upper triangular because F is monic.
    let f_sup = mf.submatrix(0..d, 0..2 * d - 3);
    let f_inf = mf.submatrix(d..rows, 0..2 * d - 3);
    let both = mf2p.hcat(&mhl)?;
    let c = f_inf.solve_unit_upper(&both.submatrix(d..rows, 0..both.cols()))?;
    let reduced = both.submatrix(0..d, 0..both.cols()).sub(&f_sup.mul(&c)?)?;
    let b = reduced.submatrix(0..d, 0..d - 1);
    let emat = reduced.submatrix(0..d, d - 1..2 * d - 3);
    Ok(EliminationData { mf, mf2p, ml, mh, n, b, emat })
}

/// Order in which rows of `B` are tried for deletion (1-based): `d - 2`
/// first, then `1..=d`.
pub fn pivot_order(d: usize) -> Vec<usize> {
    std::iter::once(d - 2)
        .chain((1..=d).filter(|&i| i != d - 2))
        .collect()
}

/// Deletes row `i0` (1-based) of `B`, inverts, and reinserts a zero
/// column so that `T B = Id`.
pub fn left_inverse_at<S: Scalar>(b: &Matrix<S>, i0: usize) -> Result<Matrix<S>> {
    if i0 == 0 || i0 > b.rows() {
        return Err(Error::DimensionMismatch(format!("pivot row {i0} outside 1..={}", b.rows())));
    }
    Ok(b.delete_row(i0 - 1).inverse()?.insert_zero_column(i0 - 1))
}

/// First row of [`pivot_order`] whose deletion leaves `B` invertible.
pub fn pivot_and_left_inverse<S: Scalar>(b: &Matrix<S>) -> Result<(usize, Matrix<S>)> {
    let mut last_err = None;
    for i0 in pivot_order(b.rows()) {
        match left_inverse_at(b, i0) {
            Ok(t) => return Ok((i0, t)),
            Err(e @ (Error::SingularMatrix | Error::JetDivisionByZero)) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(match last_err {
        Some(Error::JetDivisionByZero) => Error::JetDivisionByZero,
        _ => Error::NoValidPivotRow,
    })
}

/// `M = -T E`.
pub fn seed_matrix<S: Scalar>(t: &Matrix<S>, emat: &Matrix<S>) -> Result<Matrix<S>> {
    Ok(t.mul(emat)?.neg())
}
