//! Sparse bivariate polynomials.
//!
//! Terms are kept sorted by graded lexicographic order with `x > y`,
//! largest monomial first, and zero coefficients are never stored. The
//! zero polynomial is the empty term list.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{AddAssign, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{Rational, Var};

/// Exponent pair `x^x * y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(&self) -> u32 {
        self.x + self.y
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.x <= other.x && self.y <= other.y
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Coefficient ring of a [`Poly`].
pub trait Coeff:
    Clone
    + Signed
    + fmt::Display
    + fmt::Debug
    + Send
    + Sync
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    fn mul_ref(&self, other: &Self) -> Self;
    fn from_u32(v: u32) -> Self;
}

impl Coeff for BigInt {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_u32(v: u32) -> Self {
        BigInt::from(v)
    }
}

impl Coeff for Rational {
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn from_u32(v: u32) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly<C> {
    terms: Vec<(Monomial, C)>,
}

/// Polynomial with integer coefficients; the working type behind
/// rational functions.
pub type IntPoly = Poly<BigInt>;

/// Polynomial with rational coefficients.
pub type BiPoly = Poly<Rational>;

impl<C: Coeff> Poly<C> {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(Monomial::ONE, c)
    }

    pub fn monomial(m: Monomial, c: C) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::monomial(Monomial::new(1, 0), C::one()),
            Var::Y => Self::monomial(Monomial::new(0, 1), C::one()),
        }
    }

    /// Builds a polynomial from arbitrary terms, merging repeated
    /// monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, C)>>(terms: I) -> Self {
        let mut terms: Vec<(Monomial, C)> = terms.into_iter().collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        let mut out: Vec<(Monomial, C)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += &c,
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Poly { terms: out }
    }

    /// Wraps terms that are already sorted, merged and nonzero.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, C)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 > w[1].0));
        debug_assert!(terms.iter().all(|(_, c)| !c.is_zero()));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, C)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, C)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE)
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == Monomial::ONE && self.terms[0].1.is_one()
    }

    /// Constant term (zero if absent).
    pub fn constant_term(&self) -> C {
        match self.terms.last() {
            Some((m, c)) if *m == Monomial::ONE => c.clone(),
            _ => C::zero(),
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, C)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> Option<&C> {
        self.terms.first().map(|(_, c)| c)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.first().map(|(m, _)| m.degree())
    }

    pub fn degree_in(&self, v: Var) -> Option<u32> {
        self.terms
            .iter()
            .map(|(m, _)| match v {
                Var::X => m.x,
                Var::Y => m.y,
            })
            .max()
    }

    pub fn coeff(&self, m: Monomial) -> C {
        self.terms
            .binary_search_by(|(tm, _)| m.cmp(tm))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| C::zero())
    }

    pub fn neg(&self) -> Self {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &C) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.mul_ref(k))).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let c = if negate { -b[j].1.clone() } else { b[j].1.clone() };
                    out.push((b[j].0, c));
                    j += 1;
                }
                Ordering::Equal => {
                    let mut c = a[i].1.clone();
                    if negate {
                        c -= &b[j].1;
                    } else {
                        c += &b[j].1;
                    }
                    if !c.is_zero() {
                        out.push((a[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        out.extend(b[j..].iter().map(|(m, c)| {
            (*m, if negate { -c.clone() } else { c.clone() })
        }));
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.terms.len() == 1 {
            return other.mul_term(self.terms[0].0, &self.terms[0].1);
        }
        if other.terms.len() == 1 {
            return self.mul_term(other.terms[0].0, &other.terms[0].1);
        }
        let dx = self.degree_in(Var::X).unwrap() + other.degree_in(Var::X).unwrap();
        let dy = self.degree_in(Var::Y).unwrap() + other.degree_in(Var::Y).unwrap();
        let width = dy as usize + 1;
        let mut acc = vec![C::zero(); (dx as usize + 1) * width];
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let idx = (ma.x + mb.x) as usize * width + (ma.y + mb.y) as usize;
                acc[idx] += &ca.mul_ref(cb);
            }
        }
        Self::from_dense(dx, dy, acc)
    }

    pub fn mul_term(&self, m: Monomial, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (Monomial::new(tm.x + m.x, tm.y + m.y), tc.mul_ref(c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Collects a dense `(dx+1) x (dy+1)` coefficient grid (row = x
    /// exponent) into grlex-descending terms.
    pub(crate) fn from_dense(dx: u32, dy: u32, mut grid: Vec<C>) -> Self {
        let width = dy as usize + 1;
        let mut out = Vec::new();
        for t in (0..=dx + dy).rev() {
            let hi = t.min(dx);
            let lo = t.saturating_sub(dy);
            for ex in (lo..=hi).rev() {
                let ey = t - ex;
                let c = std::mem::replace(&mut grid[ex as usize * width + ey as usize], C::zero());
                if !c.is_zero() {
                    out.push((Monomial::new(ex, ey), c));
                }
            }
        }
        Poly { terms: out }
    }

    pub fn derivative(&self, v: Var) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(m, c)| match v {
                Var::X if m.x > 0 => Some((Monomial::new(m.x - 1, m.y), c.mul_ref(&C::from_u32(m.x)))),
                Var::Y if m.y > 0 => Some((Monomial::new(m.x, m.y - 1), c.mul_ref(&C::from_u32(m.y)))),
                _ => None,
            })
            .collect::<Vec<_>>();
        // Differentiation maps distinct monomials to distinct monomials
        // but can reorder them under grlex; re-sort.
        Self::from_terms(terms)
    }

    pub fn eval(&self, x: &C, y: &C) -> C {
        let (Some(dx), Some(dy)) = (self.degree_in(Var::X), self.degree_in(Var::Y)) else {
            return C::zero();
        };
        let xp = powers(x, dx);
        let yp = powers(y, dy);
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            acc += &c.mul_ref(&xp[m.x as usize]).mul_ref(&yp[m.y as usize]);
        }
        acc
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Poly<D> {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }
}

fn powers<C: Coeff>(base: &C, n: u32) -> Vec<C> {
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(C::one());
    for i in 0..n as usize {
        let next = out[i].mul_ref(base);
        out.push(next);
    }
    out
}

impl<C: Coeff> fmt::Display for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            let abs = c.abs();
            let mut wrote = false;
            if !abs.is_one() || *m == Monomial::ONE {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (name, e) in [("x", m.x), ("y", m.y)] {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                if e == 1 {
                    write!(f, "{name}")?;
                } else {
                    write!(f, "{name}^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

impl<C: Coeff> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl IntPoly {
    /// Nonnegative gcd of the integer coefficients.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_int_exact(&self, k: &BigInt) -> Self {
        if k.is_one() {
            return self.clone();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    debug_assert!((c % k).is_zero());
                    (*m, c / k)
                })
                .collect(),
        }
    }

    /// Sign of the grlex leading coefficient (`0` for the zero polynomial).
    pub fn leading_sign(&self) -> i32 {
        match self.leading_coeff() {
            None => 0,
            Some(c) if c.is_negative() => -1,
            Some(_) => 1,
        }
    }

    /// Exact division; `None` if `divisor` does not divide `self` in
    /// `Z[x, y]`.
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let (lm, lc) = divisor.leading()?.clone();
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (m, c) in &self.terms {
                if !lm.divides(m) {
                    return None;
                }
                let (q, r) = c.div_rem(&lc);
                if !r.is_zero() {
                    return None;
                }
                out.push((Monomial::new(m.x - lm.x, m.y - lm.y), q));
            }
            return Some(Poly { terms: out });
        }
        let ax = self.degree_in(Var::X).unwrap();
        let ay = self.degree_in(Var::Y).unwrap();
        let bx = divisor.degree_in(Var::X).unwrap();
        let by = divisor.degree_in(Var::Y).unwrap();
        if bx > ax || by > ay {
            return None;
        }
        let (qx_max, qy_max) = (ax - bx, ay - by);
        let width = ay as usize + 1;
        let mut rem = vec![BigInt::zero(); (ax as usize + 1) * width];
        for (m, c) in &self.terms {
            rem[m.x as usize * width + m.y as usize] = c.clone();
        }
        let mut quotient = Vec::new();
        for t in (0..=ax + ay).rev() {
            let hi = t.min(ax);
            let lo = t.saturating_sub(ay);
            for ex in (lo..=hi).rev() {
                let ey = t - ex;
                let idx = ex as usize * width + ey as usize;
                if rem[idx].is_zero() {
                    continue;
                }
                let cur = Monomial::new(ex, ey);
                if !lm.divides(&cur) {
                    return None;
                }
                let qm = Monomial::new(ex - lm.x, ey - lm.y);
                if qm.x > qx_max || qm.y > qy_max {
                    return None;
                }
                let (q, r) = rem[idx].div_rem(&lc);
                if !r.is_zero() {
                    return None;
                }
                for (bm, bc) in &divisor.terms {
                    let j = (bm.x + qm.x) as usize * width + (bm.y + qm.y) as usize;
                    rem[j] -= &(bc * &q);
                }
                debug_assert!(rem[idx].is_zero());
                quotient.push((qm, q));
            }
        }
        // Quotient monomials were produced in strictly decreasing order.
        Some(Poly { terms: quotient })
    }

    pub fn to_rational(&self) -> BiPoly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, Rational::from_integer(c.clone())))
                .collect(),
        }
    }

    pub fn eval_rational(&self, x: &Rational, y: &Rational) -> Rational {
        self.to_rational().eval(x, y)
    }

    /// Fits in `i64` coefficient-wise; used by fast paths and tests.
    pub fn small_coeffs(&self) -> Option<Vec<(Monomial, i64)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.to_i64().map(|v| (*m, v)))
            .collect()
    }
}

impl BiPoly {
    /// Writes `self = num / den` with `num` integral and `den` a positive
    /// integer (the lcm of coefficient denominators).
    pub fn clear_denominators(&self) -> (IntPoly, BigInt) {
        let mut den = BigInt::one();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
        }
        let num = Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c.numer() * (&den / c.denom())))
                .collect(),
        };
        (num, den)
    }
}
