//! Normalized rational functions in `x` and `y` over the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::gcd::gcd;
use super::poly::{BiPoly, IntPoly};
use super::{Rational, Var};
use crate::error::{Error, Result};

/// Quotient `num / den` of integer polynomials in canonical form:
/// `gcd(num, den) = 1` in `Z[x, y]` (integer content included) and the
/// grlex leading coefficient of `den` is positive. Zero is `0 / 1`.
///
/// Every value over `Q(x, y)` has exactly one such representative, so
/// structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: IntPoly,
    den: IntPoly,
}

impl RationalFunction {
    pub fn zero() -> Self {
        RationalFunction {
            num: IntPoly::zero(),
            den: IntPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(v: i64) -> Self {
        Self::from_poly(IntPoly::constant(BigInt::from(v)))
    }

    pub fn from_rational(r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RationalFunction {
            num: IntPoly::constant(r.numer().clone()),
            den: IntPoly::constant(r.denom().clone()),
        }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RationalFunction {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(IntPoly::var(v))
    }

    pub fn x() -> Self {
        Self::var(Var::X)
    }

    pub fn y() -> Self {
        Self::var(Var::Y)
    }

    /// Normalizes an arbitrary integer quotient.
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::reduce(num, den))
    }

    /// Normalizes a quotient of rational-coefficient polynomials.
    pub fn from_bipoly(num: &BiPoly, den: &BiPoly) -> Result<Self> {
        let (n, cn) = num.clear_denominators();
        let (d, cd) = den.clear_denominators();
        Self::new(n.scale(&cd), d.scale(&cn))
    }

    fn reduce(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let g = gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides numerator"),
                den.div_exact(&g).expect("gcd divides denominator"),
            )
        };
        if den.leading_sign() < 0 {
            num = num.neg();
            den = den.neg();
        }
        RationalFunction { num, den }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn numerator(&self) -> BiPoly {
        self.num.to_rational()
    }

    pub fn denominator(&self) -> BiPoly {
        self.den.to_rational()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Rational> {
        if self.num.is_constant() && self.den.is_constant() {
            Some(Rational::new(self.num.constant_term(), self.den.constant_term()))
        } else {
            None
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return if negate { other.neg_ref() } else { other.clone() };
        }
        let combine = |a: IntPoly, b: IntPoly| if negate { a.sub(&b) } else { a.add(&b) };
        if self.den == other.den {
            let num = combine(self.num.clone(), other.num.clone());
            return Self::reduce(num, self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            // Coprime denominators leave nothing to cancel.
            let num = combine(self.num.mul(&other.den), other.num.mul(&self.den));
            if num.is_zero() {
                return Self::zero();
            }
            return RationalFunction {
                num,
                den: self.den.mul(&other.den),
            };
        }
        let ad = self.den.div_exact(&g).expect("gcd divides");
        let bd = other.den.div_exact(&g).expect("gcd divides");
        let num = combine(self.num.mul(&bd), other.num.mul(&ad));
        if num.is_zero() {
            return Self::zero();
        }
        let t = gcd(&num, &g);
        let (num, g_rest) = if t.is_one() {
            (num, g)
        } else {
            (
                num.div_exact(&t).expect("gcd divides"),
                g.div_exact(&t).expect("gcd divides"),
            )
        };
        let mut num = num;
        let mut den = ad.mul(&bd).mul(&g_rest);
        if den.leading_sign() < 0 {
            num = num.neg();
            den = den.neg();
        }
        RationalFunction { num, den }
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        self.add_impl(other, false)
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_impl(other, true)
    }

    pub fn neg_ref(&self) -> Self {
        RationalFunction {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let div = |p: &IntPoly, g: &IntPoly| {
            if g.is_one() {
                p.clone()
            } else {
                p.div_exact(g).expect("gcd divides")
            }
        };
        let mut num = div(&self.num, &g1).mul(&div(&other.num, &g2));
        let mut den = div(&self.den, &g2).mul(&div(&other.den, &g1));
        if den.leading_sign() < 0 {
            num = num.neg();
            den = den.neg();
        }
        RationalFunction { num, den }
    }

    /// Multiplies by an integer without a full gcd.
    pub fn scale_int(&self, k: &BigInt) -> Self {
        if k.is_zero() || self.is_zero() {
            return Self::zero();
        }
        let dc = self.den.content();
        let g = num_integer::Integer::gcd(&dc, k);
        let num = self.num.scale(&(k / &g));
        let den = self.den.div_int_exact(&g);
        RationalFunction { num, den }
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut num, mut den) = (self.den.clone(), self.num.clone());
        if den.leading_sign() < 0 {
            num = num.neg();
            den = den.neg();
        }
        Ok(RationalFunction { num, den })
    }

    pub fn div_ref(&self, other: &Self) -> Result<Self> {
        Ok(self.mul_ref(&other.inv()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        if e == 0 {
            return Self::one();
        }
        RationalFunction {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Partial derivative by the quotient rule, normalized.
    pub fn derivative(&self, v: Var) -> Self {
        let dn = self.num.derivative(v);
        if self.den.is_constant() {
            return RationalFunction {
                num: dn,
                den: self.den.clone(),
            }
            .renormalize_constant_den();
        }
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Self::reduce(dn, self.den.clone());
        }
        // Strip gcd(den, den') first so the final gcd works on a smaller
        // denominator.
        let g = gcd(&self.den, &dd);
        let (den_part, dd_part) = if g.is_one() {
            (self.den.clone(), dd)
        } else {
            (
                self.den.div_exact(&g).expect("gcd divides"),
                dd.div_exact(&g).expect("gcd divides"),
            )
        };
        let num = dn.mul(&den_part).sub(&self.num.mul(&dd_part));
        let den = self.den.mul(&den_part);
        Self::reduce(num, den)
    }

    fn renormalize_constant_den(self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let c = num_integer::Integer::gcd(&self.num.content(), &self.den.content());
        if c.is_one() {
            return self;
        }
        RationalFunction {
            num: self.num.div_int_exact(&c),
            den: self.den.div_int_exact(&c),
        }
    }

    /// Exact value at a point; `None` at a pole.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        let d = self.den.eval_rational(x, y);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval_rational(x, y) / d)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.len() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if self.den.is_constant() {
            write!(f, "/{}", self.den)
        } else {
            write!(f, "/({})", self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl FromStr for RationalFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        super::parse::parse_ratfunc(s)
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for RationalFunction {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<IntPoly> for RationalFunction {
    fn from(p: IntPoly) -> Self {
        Self::from_poly(p)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl_fn:ident) => {
        impl $trait<&RationalFunction> for &RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: &RationalFunction) -> RationalFunction {
                self.$impl_fn(rhs)
            }
        }
        impl $trait for RationalFunction {
            type Output = RationalFunction;
            fn $method(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$impl_fn(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Div<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    /// Panics on division by zero; use [`RationalFunction::div_ref`] to
    /// handle it.
    fn div(self, rhs: &RationalFunction) -> RationalFunction {
        self.div_ref(rhs).expect("division by zero rational function")
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(s: &str) -> RationalFunction {
        s.parse().unwrap()
    }

    #[test]
    fn additive_inverse_cancels() {
        assert!((&rf("x/y") + &rf("-x/y")).is_zero());
    }

    #[test]
    fn gcd_cancellation_on_construction() {
        assert_eq!(rf("(x^2-y^2)/(x-y)"), rf("x+y"));
        assert!(rf("(x^2-y^2)/(x-y)").den().is_one());
    }

    #[test]
    fn multiplicative_cancellation() {
        assert_eq!(&rf("(2*x)/(x^2+1)") * &rf("(x^2+1)/2"), rf("x"));
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(rf("x").div_ref(&RationalFunction::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn canonical_denominator_sign_and_content() {
        let a = rf("(2*x)/(-4*y)");
        assert_eq!(a.to_string(), "-x/(2*y)");
        assert_eq!(a.den().leading_sign(), 1);
        assert_eq!(rf("(3*x+3)/6"), rf("(x+1)/2"));
    }

    #[test]
    fn partial_derivatives() {
        assert_eq!(rf("x*y").derivative(Var::X), rf("y"));
        assert_eq!(rf("1/y").derivative(Var::Y), rf("-1/y^2"));
        assert!(rf("7/3").derivative(Var::X).is_zero());
        assert_eq!(rf("1/(x-y)^3").derivative(Var::X), rf("-3/(x-y)^4"));
    }

    #[test]
    fn henrici_addition_matches_naive() {
        let a = rf("1/((x-1)^2*(y+1))");
        let b = rf("x/((x-1)*(y+1)^2)");
        let naive = RationalFunction::new(
            a.num().mul(b.den()).add(&b.num().mul(a.den())),
            a.den().mul(b.den()),
        )
        .unwrap();
        assert_eq!(&a + &b, naive);
        assert!((&(&a + &b) - &naive).is_zero());
    }

    #[test]
    fn evaluation_and_poles() {
        let a = rf("1/(x-1)");
        assert_eq!(a.eval(&Rational::from_integer(1.into()), &Rational::zero()), None);
        assert_eq!(
            rf("x*y").eval(&Rational::from_integer(2.into()), &Rational::from_integer(3.into())),
            Some(Rational::from_integer(6.into()))
        );
    }
}
