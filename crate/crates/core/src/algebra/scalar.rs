use std::fmt::Debug;

use num_traits::{One, Zero};

use super::{Rational, RationalFunction, Var};
use crate::error::{Error, Result};

/// Field-like scalar the pipeline is written against.
///
/// Implemented by exact rational functions and by truncated Taylor jets at
/// a point. `is_unit` is the pivot test used by elimination: a rational
/// function is a unit iff it is nonzero, a jet iff its constant term is.
pub trait Scalar: Clone + Debug + PartialEq + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self>;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn derivative(&self, v: Var) -> Result<Self>;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

impl Scalar for RationalFunction {
    fn zero() -> Self {
        RationalFunction::zero()
    }

    fn one() -> Self {
        RationalFunction::one()
    }

    fn from_i64(v: i64) -> Self {
        RationalFunction::from_int(v)
    }

    fn add(&self, other: &Self) -> Self {
        self.add_ref(other)
    }

    fn sub(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }

    fn mul(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }

    fn neg(&self) -> Self {
        self.neg_ref()
    }

    fn inv(&self) -> Result<Self> {
        RationalFunction::inv(self)
    }

    fn is_zero(&self) -> bool {
        RationalFunction::is_zero(self)
    }

    fn is_unit(&self) -> bool {
        !RationalFunction::is_zero(self)
    }

    fn derivative(&self, v: Var) -> Result<Self> {
        Ok(RationalFunction::derivative(self, v))
    }

    fn is_one(&self) -> bool {
        RationalFunction::is_one(self)
    }
}

/// Plain numbers; every derivative is zero.
impl Scalar for Rational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v.into())
    }

    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn sub(&self, other: &Self) -> Self {
        self - other
    }

    fn mul(&self, other: &Self) -> Self {
        self * other
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::DivisionByZero);
        }
        Ok(self.recip())
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_unit(&self) -> bool {
        !Zero::is_zero(self)
    }

    fn derivative(&self, _v: Var) -> Result<Self> {
        Ok(Zero::zero())
    }
}
