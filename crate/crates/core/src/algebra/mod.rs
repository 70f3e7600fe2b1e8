//! Exact arithmetic: rationals, bivariate polynomials, rational functions,
//! polynomials in the slope variable `p`, and dense matrices.

pub mod gcd;
pub mod jet;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod ratfunc;
pub mod scalar;
pub mod slope;

pub use jet::Jet;
pub use matrix::Matrix;
pub use poly::{BiPoly, IntPoly, Monomial, Poly};
pub use ratfunc::RationalFunction;
pub use scalar::Scalar;
pub use slope::SlopePolynomial;

/// Arbitrary-precision rational, always stored in lowest terms with a
/// positive denominator.
pub type Rational = num_rational::BigRational;

/// Coordinate of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}
