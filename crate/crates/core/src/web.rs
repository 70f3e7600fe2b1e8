//! Web specifications: parsing, validation and the interpolation helper.

use serde::Deserialize;

use crate::algebra::parse::{parse_ratfunc, parse_rational};
use crate::algebra::{Matrix, Rational, RationalFunction, Scalar, SlopePolynomial};
use crate::error::{Error, Result};

/// How the web was entered.
#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Implicit,
    Explicit(Vec<RationalFunction>),
}

/// A planar `d`-web `F(x, y, p) = p^d + a_1 p^(d-1) + ... + a_d = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WebSpec {
    pub d: usize,
    /// `a_1 .. a_d`; `a_0 = 1` is implicit.
    pub coefficients: Vec<RationalFunction>,
    pub origin: Option<(Rational, Rational)>,
    pub source: Source,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WebDocument {
    d: i64,
    coefficients: Option<Vec<String>>,
    slopes: Option<Vec<String>>,
    origin: Option<Vec<String>>,
}

fn parse_list(items: &[String], field: &str) -> Result<Vec<RationalFunction>> {
    items
        .iter()
        .enumerate()
        .map(|(i, s)| {
            parse_ratfunc(s).map_err(|e| match e {
                Error::Parse { position, message } => Error::Parse {
                    position,
                    message: format!("{field}[{i}] \"{s}\": {message}"),
                },
                other => other,
            })
        })
        .collect()
}

fn check_degree(d: i64) -> Result<usize> {
    if d < 3 {
        return Err(Error::Degree(d.max(0) as usize));
    }
    Ok(d as usize)
}

impl WebSpec {
    pub fn from_coefficients(coefficients: Vec<RationalFunction>) -> Result<Self> {
        let d = check_degree(coefficients.len() as i64)?;
        Ok(WebSpec {
            d,
            coefficients,
            origin: None,
            source: Source::Implicit,
        })
    }

    pub fn from_slopes(slopes: Vec<RationalFunction>) -> Result<Self> {
        let d = check_degree(slopes.len() as i64)?;
        Ok(WebSpec {
            d,
            coefficients: slopes_to_coefficients(&slopes),
            origin: None,
            source: Source::Explicit(slopes),
        })
    }

    /// Parses coefficient strings `a_1 .. a_d`.
    pub fn parse_coefficients(items: &[&str]) -> Result<Self> {
        let owned: Vec<String> = items.iter().map(|s| s.to_string()).collect();
        Self::from_coefficients(parse_list(&owned, "coefficients")?)
    }

    /// Parses slope strings `p_1 .. p_d`.
    pub fn parse_slopes(items: &[&str]) -> Result<Self> {
        let owned: Vec<String> = items.iter().map(|s| s.to_string()).collect();
        Self::from_slopes(parse_list(&owned, "slopes")?)
    }

    pub fn with_origin(mut self, x: Rational, y: Rational) -> Self {
        self.origin = Some((x, y));
        self
    }

    /// Number of sections in the trivialization, `(d-1)(d-2)/2`.
    pub fn m(&self) -> usize {
        (self.d - 1) * (self.d - 2) / 2
    }

    /// `F` as a polynomial in `p` of width `d + 1`.
    pub fn slope_polynomial(&self) -> SlopePolynomial<RationalFunction> {
        coefficients_to_polynomial(&self.coefficients)
    }

    pub fn slopes(&self) -> Option<&[RationalFunction]> {
        match &self.source {
            Source::Explicit(s) => Some(s),
            Source::Implicit => None,
        }
    }
}

/// `F = p^d + Σ a_i p^(d-i)` for any scalar type.
pub fn coefficients_to_polynomial<S: Scalar>(coefficients: &[S]) -> SlopePolynomial<S> {
    let d = coefficients.len();
    let mut c = vec![S::zero(); d + 1];
    c[d] = S::one();
    for (i, a) in coefficients.iter().enumerate() {
        c[d - 1 - i] = a.clone();
    }
    SlopePolynomial::new(c)
}

/// Reads a web document:
///
/// ```json
/// {"d": 3, "slopes": ["0", "1", "-1"], "origin": ["0", "1/3"]}
/// ```
///
/// with exactly one of `coefficients` (`a_1 .. a_d`) or `slopes`.
pub fn parse_web_spec(document: &str) -> Result<WebSpec> {
    let doc: WebDocument =
        serde_json::from_str(document).map_err(|e| Error::Document(e.to_string()))?;
    let d = check_degree(doc.d)?;
    let mut spec = match (&doc.coefficients, &doc.slopes) {
        (Some(c), None) => {
            if c.len() != d {
                return Err(Error::CoefficientCount { expected: d, got: c.len() });
            }
            WebSpec::from_coefficients(parse_list(c, "coefficients")?)?
        }
        (None, Some(s)) => {
            if s.len() != d {
                return Err(Error::CoefficientCount { expected: d, got: s.len() });
            }
            WebSpec::from_slopes(parse_list(s, "slopes")?)?
        }
        _ => {
            return Err(Error::Document(
                "exactly one of `coefficients` or `slopes` is required".into(),
            ))
        }
    };
    if let Some(o) = doc.origin {
        if o.len() != 2 {
            return Err(Error::Document("`origin` needs two rationals".into()));
        }
        spec.origin = Some((parse_rational(&o[0])?, parse_rational(&o[1])?));
    }
    Ok(spec)
}

/// `a_i = (-1)^i e_i(slopes)`.
pub fn slopes_to_coefficients(slopes: &[RationalFunction]) -> Vec<RationalFunction> {
    // Expand Π (p - p_i), lowest degree first.
    let mut poly = vec![RationalFunction::one()];
    for s in slopes {
        let mut next = vec![RationalFunction::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] = next[j + 1].add_ref(c);
            next[j] = next[j].sub_ref(&c.mul_ref(s));
        }
        poly = next;
    }
    let d = slopes.len();
    (1..=d).map(|i| poly[d - i].clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    /// `Res_p(F, F_p)` is not identically zero.
    pub discriminant_nonzero: bool,
    /// Whether the resultant vanishes at `origin`; `None` without origin
    /// or when a coefficient has a pole there.
    pub discriminant_vanishes_at_origin: Option<bool>,
    pub messages: Vec<String>,
}

/// Sylvester matrix of `a` (degree `m`) and `b` (degree `n`) in `p`.
pub fn sylvester<S: Scalar>(a: &SlopePolynomial<S>, b: &SlopePolynomial<S>) -> Matrix<S> {
    let m = a.width() - 1;
    let n = b.width() - 1;
    let size = m + n;
    Matrix::from_fn(size, size, |i, j| {
        // Rows 0..n hold shifted copies of a, rows n..n+m copies of b,
        // highest degree first.
        if i < n {
            let k = j as isize - i as isize;
            if (0..=m as isize).contains(&k) {
                a.coeff(m - k as usize)
            } else {
                S::zero()
            }
        } else {
            let r = i - n;
            let k = j as isize - r as isize;
            if (0..=n as isize).contains(&k) {
                b.coeff(n - k as usize)
            } else {
                S::zero()
            }
        }
    })
}

/// `Res_p(F, F_p)` for any scalar type.
pub fn discriminant_resultant<S: Scalar>(f: &SlopePolynomial<S>) -> Result<S> {
    sylvester(f, &f.derivative_p()).determinant()
}

/// Sample points used to certify a nonzero resultant without symbolic
/// elimination.
fn probe_points() -> impl Iterator<Item = (Rational, Rational)> {
    let nums = [(3, 7), (-5, 11), (13, 17), (-2, 9), (19, 23), (7, 31), (-29, 37), (41, 43)];
    nums.into_iter().enumerate().map(move |(i, (a, b))| {
        let (c, e) = nums[(i + 3) % nums.len()];
        (
            Rational::new(a.into(), b.into()),
            Rational::new((c * 2 + 1).into(), (e + 4).into()),
        )
    })
}

fn specialize(spec: &WebSpec, x: &Rational, y: &Rational) -> Option<Vec<Rational>> {
    spec.coefficients.iter().map(|a| a.eval(x, y)).collect()
}

fn numeric_resultant(coeffs: &[Rational]) -> Result<Rational> {
    discriminant_resultant(&coefficients_to_polynomial(coeffs))
}

/// Checks that the leaves are pairwise transverse, generically and at the
/// origin when one is given.
pub fn validate_web(spec: &WebSpec) -> Result<ValidationReport> {
    let mut messages = Vec::new();
    if let Some(slopes) = spec.slopes() {
        for i in 0..slopes.len() {
            for j in i + 1..slopes.len() {
                if slopes[i] == slopes[j] {
                    messages.push(format!("slopes {} and {} coincide", i + 1, j + 1));
                }
            }
        }
    }
    // A single point where the resultant is nonzero proves it is not
    // identically zero; otherwise fall back to exact elimination.
    let mut nonzero = false;
    for (x, y) in probe_points() {
        if let Some(c) = specialize(spec, &x, &y) {
            if !Scalar::is_zero(&numeric_resultant(&c)?) {
                nonzero = true;
                break;
            }
        }
    }
    if !nonzero {
        nonzero = !discriminant_resultant(&spec.slope_polynomial())?.is_zero();
    }
    if !nonzero {
        messages.push("the discriminant Res_p(F, F_p) vanishes identically".into());
    }
    let at_origin = match &spec.origin {
        None => None,
        Some((x, y)) => match specialize(spec, x, y) {
            None => {
                messages.push(format!("a coefficient has a pole at the origin ({x}, {y})"));
                None
            }
            Some(c) => {
                let vanishes = Scalar::is_zero(&numeric_resultant(&c)?);
                if vanishes {
                    messages.push(format!("the discriminant vanishes at the origin ({x}, {y})"));
                }
                Some(vanishes)
            }
        },
    };
    Ok(ValidationReport {
        discriminant_nonzero: nonzero,
        discriminant_vanishes_at_origin: at_origin,
        messages,
    })
}

/// `r = Σ f_i Π_{j≠i} (p - p_j)`, stored with width `d`.
pub fn interpolation_r(
    slopes: &[RationalFunction],
    f: &[RationalFunction],
) -> Result<SlopePolynomial<RationalFunction>> {
    if slopes.len() != f.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} slopes and {} values",
            slopes.len(),
            f.len()
        )));
    }
    for i in 0..slopes.len() {
        for j in i + 1..slopes.len() {
            if slopes[i] == slopes[j] {
                return Err(Error::DuplicateSlopes { first: i + 1, second: j + 1 });
            }
        }
    }
    let d = slopes.len();
    let mut r = SlopePolynomial::zeros(d);
    for (i, fi) in f.iter().enumerate() {
        if fi.is_zero() {
            continue;
        }
        let mut li = SlopePolynomial::constant(RationalFunction::one());
        for (j, pj) in slopes.iter().enumerate() {
            if j != i {
                li = li.mul(&SlopePolynomial::new(vec![pj.neg_ref(), RationalFunction::one()]));
            }
        }
        r = r.add(&li.scale(fi));
    }
    Ok(r.with_width(d))
}
