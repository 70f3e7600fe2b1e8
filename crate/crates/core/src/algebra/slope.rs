//! Polynomials in the slope variable `p` with scalar coefficients.

use super::matrix::Matrix;
use super::scalar::Scalar;
use super::Var;
use crate::error::Result;

/// `Σ coeffs[j] p^j` stored with a fixed width; trailing zeros allowed.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopePolynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> SlopePolynomial<S> {
    /// Panics if `coeffs` is empty; width is at least one.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "slope polynomial needs width >= 1");
        SlopePolynomial { coeffs }
    }

    pub fn zeros(width: usize) -> Self {
        Self::new(vec![S::zero(); width.max(1)])
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// `p`, width 2.
    pub fn p() -> Self {
        Self::new(vec![S::zero(), S::one()])
    }

    pub fn width(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Coefficient of `p^j`, zero past the stored width.
    pub fn coeff(&self, j: usize) -> S {
        self.coeffs.get(j).cloned().unwrap_or_else(S::zero)
    }

    /// Actual degree, ignoring trailing zeros; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Re-stores with the given width, zero-filling or dropping zero
    /// coefficients. Panics if a nonzero coefficient would be dropped.
    pub fn with_width(&self, width: usize) -> Self {
        let mut c = self.coeffs.clone();
        if width < c.len() {
            assert!(c[width..].iter().all(|v| v.is_zero()), "truncating a nonzero coefficient");
        }
        c.resize(width.max(1), S::zero());
        Self::new(c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let w = self.width().max(other.width());
        Self::new((0..w).map(|j| self.coeff(j).add(&other.coeff(j))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let w = self.width().max(other.width());
        Self::new((0..w).map(|j| self.coeff(j).sub(&other.coeff(j))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.neg()).collect())
    }

    pub fn scale(&self, k: &S) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.mul(k)).collect())
    }

    /// Product of width `w1 + w2 - 1`.
    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![S::zero(); self.width() + other.width() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    /// `∂/∂p`, width reduced by one (kept at least one).
    pub fn derivative_p(&self) -> Self {
        if self.width() == 1 {
            return Self::zeros(1);
        }
        Self::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(j, c)| c.mul(&S::from_i64(j as i64 + 1)))
                .collect(),
        )
    }

    /// Coefficientwise partial derivative in `x` or `y`.
    pub fn derivative(&self, v: Var) -> Result<Self> {
        Ok(Self::new(
            self.coeffs
                .iter()
                .map(|c| c.derivative(v))
                .collect::<Result<_>>()?,
        ))
    }

    /// Horner evaluation at `p = t`.
    pub fn eval(&self, t: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc.mul(t).add(c))
    }

    /// Remainder modulo a monic polynomial (leading stored coefficient 1),
    /// returned with width `deg(divisor)`.
    pub fn rem_monic(&self, divisor: &Self) -> Self {
        let d = divisor.width() - 1;
        assert!(d >= 1 && divisor.coeffs[d].is_one(), "divisor must be monic of positive degree");
        let mut r = self.coeffs.clone();
        for top in (d..r.len()).rev() {
            let q = r[top].clone();
            if q.is_zero() {
                continue;
            }
            for j in 0..=d {
                let idx = top - d + j;
                r[idx] = r[idx].sub(&q.mul(&divisor.coeffs[j]));
            }
        }
        r.resize(d, S::zero());
        Self::new(r)
    }

    /// Matrix of `Q ↦ self·Q` from polynomials of width `h + 1` to width
    /// `h + width`: entry `(i, c)` is `coeff(i - c)`.
    pub fn convolution_matrix(&self, h: usize) -> Matrix<S> {
        let k = self.width() - 1;
        Matrix::from_fn(h + k + 1, h + 1, |i, c| {
            if i >= c && i - c <= k {
                self.coeffs[i - c].clone()
            } else {
                S::zero()
            }
        })
    }

    /// Column vector of coefficients.
    pub fn to_column(&self) -> Matrix<S> {
        Matrix::from_fn(self.width(), 1, |i, _| self.coeffs[i].clone())
    }

    /// Reads coefficients from a column vector.
    pub fn from_column(m: &Matrix<S>) -> Self {
        Self::new((0..m.rows()).map(|i| m.get(i, 0).clone()).collect())
    }
}
