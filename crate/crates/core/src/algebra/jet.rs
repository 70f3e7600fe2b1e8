//! Truncated bivariate Taylor expansions at a fixed base point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{IntPoly, Rational, RationalFunction, Var};
use crate::error::{Error, Result};

const EXACT: u32 = u32::MAX;

/// Truncated Taylor series `Σ c[i][j] u^i v^j` in local coordinates
/// `u = x - x0`, `v = y - y0`.
///
/// Coefficients are valid up to total degree `prec`. Exact constants carry
/// `prec = EXACT` and a single coefficient; every other jet stores exactly
/// the coefficients of total degree `<= prec`. Products and sums are valid
/// to the smaller precision of their operands, each derivative costs one
/// order.
///
/// Coefficients share one positive denominator coprime to their content.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet {
    prec: u32,
    num: Vec<BigInt>,
    den: BigInt,
}

#[inline]
fn idx(i: u32, j: u32) -> usize {
    let n = (i + j) as usize;
    n * (n + 1) / 2 + j as usize
}

fn len_for(deg: u32) -> usize {
    let n = deg as usize + 1;
    n * (n + 1) / 2
}

impl Jet {
    fn normalized(prec: u32, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(c);
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else if !g.is_one() {
            for c in &mut num {
                *c = &*c / &g;
            }
            den /= &g;
        }
        Jet { prec, num, den }
    }

    fn from_rationals(prec: u32, coeffs: &[Rational]) -> Self {
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Self::normalized(prec, num, den)
    }

    pub fn constant(c: Rational) -> Self {
        let (num, den) = c.into_raw();
        Jet {
            prec: EXACT,
            num: vec![num],
            den,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.prec == EXACT
    }

    /// Valid total degree, `None` for exact constants.
    pub fn precision(&self) -> Option<u32> {
        (!self.is_exact()).then_some(self.prec)
    }

    /// Coefficient of `u^i v^j`; zero beyond the stored range of an exact
    /// constant.
    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        match self.num.get(idx(i, j)) {
            Some(c) => Rational::new(c.clone(), self.den.clone()),
            None => Rational::zero(),
        }
    }

    /// Value at the base point.
    pub fn value(&self) -> Rational {
        self.coeff(0, 0)
    }

    fn coeffs(&self) -> Vec<Rational> {
        self.num
            .iter()
            .map(|c| Rational::new(c.clone(), self.den.clone()))
            .collect()
    }

    /// Expansion of a polynomial at `(x0, y0)` to total degree `order`.
    pub fn from_poly(p: &IntPoly, x0: &Rational, y0: &Rational, order: u32) -> Self {
        if p.is_constant() {
            return Self::constant(Rational::from_integer(p.constant_term()));
        }
        let mut coeffs = vec![Rational::zero(); len_for(order)];
        let max_x = p.degree_in(Var::X).unwrap_or(0);
        let max_y = p.degree_in(Var::Y).unwrap_or(0);
        let x_pows = powers(x0, max_x);
        let y_pows = powers(y0, max_y);
        for (m, c) in p.terms() {
            let c = Rational::from_integer(c.clone());
            for i in 0..=m.x.min(order) {
                let cx = &c * Rational::from_integer(binomial(m.x, i)) * &x_pows[(m.x - i) as usize];
                for j in 0..=m.y.min(order - i) {
                    let t = &cx * Rational::from_integer(binomial(m.y, j)) * &y_pows[(m.y - j) as usize];
                    coeffs[idx(i, j)] += t;
                }
            }
        }
        Self::from_rationals(order, &coeffs)
    }

    /// Expansion of a rational function; `Error::DivisionByZero` if the
    /// denominator vanishes at the base point.
    pub fn from_ratfunc(f: &RationalFunction, x0: &Rational, y0: &Rational, order: u32) -> Result<Self> {
        if let Some(c) = f.as_constant() {
            return Ok(Self::constant(c));
        }
        let num = Self::from_poly(f.num(), x0, y0, order);
        let den = Self::from_poly(f.den(), x0, y0, order);
        if den.num[0].is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(num.mul_jet(&den.inv_jet()?))
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let prec = self.prec.min(other.prec);
        let n = if prec == EXACT { 1 } else { len_for(prec) };
        let den = self.den.lcm(&other.den);
        let ka = &den / &self.den;
        let kb = &den / &other.den;
        let zero = BigInt::zero();
        let num = (0..n)
            .map(|k| {
                let a = self.num.get(k).unwrap_or(&zero) * &ka;
                let b = other.num.get(k).unwrap_or(&zero) * &kb;
                if negate {
                    a - b
                } else {
                    a + b
                }
            })
            .collect();
        Self::normalized(prec, num, den)
    }

    fn mul_jet(&self, other: &Self) -> Self {
        if self.is_exact() {
            return other.scale(&self.num[0], &self.den);
        }
        if other.is_exact() {
            return self.scale(&other.num[0], &other.den);
        }
        let prec = self.prec.min(other.prec);
        let mut num = vec![BigInt::zero(); len_for(prec)];
        for n1 in 0..=prec {
            for j1 in 0..=n1 {
                let a = &self.num[idx(n1 - j1, j1)];
                if a.is_zero() {
                    continue;
                }
                for n2 in 0..=prec - n1 {
                    for j2 in 0..=n2 {
                        let b = &other.num[idx(n2 - j2, j2)];
                        if b.is_zero() {
                            continue;
                        }
                        num[idx(n1 - j1 + n2 - j2, j1 + j2)] += a * b;
                    }
                }
            }
        }
        Self::normalized(prec, num, &self.den * &other.den)
    }

    /// Multiplies by `kn / kd`.
    fn scale(&self, kn: &BigInt, kd: &BigInt) -> Self {
        if kn.is_zero() {
            return Self::constant(Rational::zero());
        }
        let num = self.num.iter().map(|c| c * kn).collect();
        Self::normalized(self.prec, num, &self.den * kd)
    }

    fn inv_jet(&self) -> Result<Self> {
        if self.num[0].is_zero() {
            return Err(Error::JetDivisionByZero);
        }
        let a = self.coeffs();
        let inv0 = a[0].recip();
        if self.is_exact() {
            return Ok(Self::constant(inv0));
        }
        let prec = self.prec;
        let mut b = vec![Rational::zero(); len_for(prec)];
        b[0] = inv0.clone();
        for n in 1..=prec {
            for j in 0..=n {
                let i = n - j;
                let mut acc = Rational::zero();
                for k in 0..=i {
                    for l in 0..=j {
                        if k == 0 && l == 0 {
                            continue;
                        }
                        let ak = &a[idx(k, l)];
                        if ak.is_zero() {
                            continue;
                        }
                        acc += ak * &b[idx(i - k, j - l)];
                    }
                }
                b[idx(i, j)] = -(acc * &inv0);
            }
        }
        Ok(Self::from_rationals(prec, &b))
    }
}

fn powers(base: &Rational, max: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(max as usize + 1);
    let mut cur = Rational::one();
    for _ in 0..=max {
        out.push(cur.clone());
        cur *= base;
    }
    out
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

impl super::Scalar for Jet {
    fn zero() -> Self {
        Self::constant(<Rational as Zero>::zero())
    }

    fn one() -> Self {
        Self::constant(<Rational as One>::one())
    }

    fn from_i64(v: i64) -> Self {
        Self::constant(Rational::from_integer(v.into()))
    }

    fn add(&self, other: &Self) -> Self {
        if super::Scalar::is_zero(self) {
            return other.clone();
        }
        if super::Scalar::is_zero(other) {
            return self.clone();
        }
        self.combine(other, false)
    }

    fn sub(&self, other: &Self) -> Self {
        if super::Scalar::is_zero(other) {
            return self.clone();
        }
        self.combine(other, true)
    }

    fn mul(&self, other: &Self) -> Self {
        self.mul_jet(other)
    }

    fn neg(&self) -> Self {
        Jet {
            prec: self.prec,
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    fn inv(&self) -> Result<Self> {
        self.inv_jet()
    }

    /// True only for the exact zero constant.
    fn is_zero(&self) -> bool {
        self.is_exact() && self.num[0].is_zero()
    }

    fn is_unit(&self) -> bool {
        !self.num[0].is_zero()
    }

    fn derivative(&self, v: Var) -> Result<Self> {
        if self.is_exact() {
            return Ok(Self::zero());
        }
        if self.prec == 0 {
            return Err(Error::JetPrecisionExhausted);
        }
        let prec = self.prec - 1;
        let mut num = vec![BigInt::zero(); len_for(prec)];
        for n in 0..=prec {
            for j in 0..=n {
                let i = n - j;
                let (src, k) = match v {
                    Var::X => (idx(i + 1, j), i + 1),
                    Var::Y => (idx(i, j + 1), j + 1),
                };
                num[idx(i, j)] = &self.num[src] * BigInt::from(k);
            }
        }
        Ok(Self::normalized(prec, num, self.den.clone()))
    }

    fn is_one(&self) -> bool {
        self.is_exact() && self.num[0].is_one() && self.den.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, Scalar};

    fn lift(s: &str, x0: Rational, y0: Rational, order: u32) -> Jet {
        Jet::from_ratfunc(&s.parse().unwrap(), &x0, &y0, order).unwrap()
    }

    #[test]
    fn taylor_coefficients_of_a_polynomial() {
        // x^2 y at (1, 2): u^2 v + 2 u^2 + 2 u v + 4 u + v + 2
        let j = lift("x^2*y", rational(1, 1), rational(2, 1), 3);
        assert_eq!(j.coeff(0, 0), rational(2, 1));
        assert_eq!(j.coeff(1, 0), rational(4, 1));
        assert_eq!(j.coeff(0, 1), rational(1, 1));
        assert_eq!(j.coeff(1, 1), rational(2, 1));
        assert_eq!(j.coeff(2, 0), rational(2, 1));
        assert_eq!(j.coeff(2, 1), rational(1, 1));
        assert_eq!(j.coeff(0, 2), rational(0, 1));
    }

    #[test]
    fn geometric_series() {
        let j = lift("1/(1-x)", rational(0, 1), rational(0, 1), 4);
        for i in 0..=4 {
            assert_eq!(j.coeff(i, 0), rational(1, 1));
        }
    }

    #[test]
    fn derivative_matches_symbolic() {
        let f: RationalFunction = "(x^2+y)/(x-3*y+5)".parse().unwrap();
        let (x0, y0) = (rational(1, 2), rational(-1, 3));
        let j = Jet::from_ratfunc(&f, &x0, &y0, 4).unwrap();
        let dj = j.derivative(Var::X).unwrap().derivative(Var::Y).unwrap();
        let df = f.derivative(Var::X).derivative(Var::Y);
        assert_eq!(dj.value(), df.eval(&x0, &y0).unwrap());
        assert_eq!(dj.precision(), Some(2));
    }

    #[test]
    fn precision_runs_out() {
        let j = lift("x*y", rational(0, 1), rational(0, 1), 1);
        let dj = j.derivative(Var::X).unwrap();
        assert_eq!(dj.derivative(Var::Y), Err(Error::JetPrecisionExhausted));
    }

    #[test]
    fn division_by_vanishing_jet() {
        let j = lift("x", rational(0, 1), rational(0, 1), 2);
        assert_eq!(j.inv(), Err(Error::JetDivisionByZero));
        assert!(!j.is_unit());
    }

    #[test]
    fn common_denominator_is_canonical() {
        let a = lift("x/3 + y/6", rational(1, 2), rational(0, 1), 2);
        let b = lift("y/6", rational(1, 2), rational(0, 1), 2);
        let c = lift("x/3", rational(1, 2), rational(0, 1), 2);
        assert_eq!(a.sub(&b), c);
        assert_eq!(c.coeff(1, 0), rational(1, 3));
        assert_eq!(c.value(), rational(1, 6));
    }

    #[test]
    fn inverse_times_jet_is_one() {
        let j = lift("x^2 + 3*y + 1", rational(2, 1), rational(1, 5), 3);
        let p = j.mul(&j.inv().unwrap());
        assert_eq!(p.coeff(0, 0), rational(1, 1));
        for n in 1..=3 {
            for i in 0..=n {
                assert!(Zero::is_zero(&p.coeff(i, n - i)));
            }
        }
    }
}
