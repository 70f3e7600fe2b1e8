//! Polynomial gcd over `Z[x, y]`.
//!
//! Multi-modular dense algorithm: the primitive parts (with respect to
//! `x`) are reduced modulo word-size primes, their gcd is computed by
//! evaluating `y` at random points, taking univariate gcds in `x` and
//! interpolating back, and the images are combined by Chinese
//! remaindering until a candidate divides both inputs. Contents in `Z[y]`
//! are handled with the univariate version of the same scheme.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::poly::{IntPoly, Monomial, Poly};
use super::Var;

/// Dense univariate polynomial, lowest degree first, no trailing zeros.
type UPoly = Vec<BigInt>;
/// Dense polynomial in `x` whose coefficients are dense polynomials in `y`.
type XMajor = Vec<UPoly>;

const MAX_PRIMES: usize = 4096;

fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(MAX_PRIMES);
        let mut n: u64 = (1 << 31) - 1;
        while out.len() < MAX_PRIMES {
            if is_prime(n) {
                out.push(n);
            }
            n -= 2;
        }
        out
    })
}

/// Deterministic Miller-Rabin for `n < 2^32`.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2, 3, 5, 7, 11, 13, 61] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2, 7, 61] {
        let mut x = powm(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulm(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
fn mulm(a: u64, b: u64, p: u64) -> u64 {
    a * b % p
}

#[inline]
fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulm(r, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    r
}

fn invm(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powm(a, p - 2, p)
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    let r = (c % p).to_i64().expect("residue fits");
    if r < 0 {
        (r + p as i64) as u64
    } else {
        r as u64
    }
}

fn trim_mod(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn trim_int(v: &mut UPoly) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn eval_mod(poly: &[u64], t: u64, p: u64) -> u64 {
    poly.iter().rev().fold(0, |acc, &c| addm(mulm(acc, t, p), c, p))
}

/// Monic gcd in `Z_p[t]`; empty for `gcd(0, 0)`.
fn gcd_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim_mod(&mut a);
    trim_mod(&mut b);
    while !b.is_empty() {
        // a <- a mod b
        let inv = invm(*b.last().unwrap(), p);
        let db = b.len() - 1;
        while a.len() > db && !a.is_empty() {
            let da = a.len() - 1;
            let q = mulm(*a.last().unwrap(), inv, p);
            let shift = da - db;
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = subm(a[i + shift], mulm(q, bc, p), p);
            }
            trim_mod(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&lc) = a.last() {
        let inv = invm(lc, p);
        for c in &mut a {
            *c = mulm(*c, inv, p);
        }
    }
    a
}

/// Incremental Chinese remaindering of coefficient vectors.
struct Crt {
    modulus: BigInt,
    values: Vec<BigInt>,
}

impl Crt {
    fn new(image: &[u64], p: u64) -> Self {
        Crt {
            modulus: BigInt::from(p),
            values: image.iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    /// Folds in a new image; returns `true` if the symmetric lift was
    /// already consistent with it.
    fn combine(&mut self, image: &[u64], p: u64) -> bool {
        debug_assert_eq!(image.len(), self.values.len());
        let m_inv = invm(reduce(&self.modulus, p), p);
        let half = &self.modulus >> 1u32;
        let mut stable = true;
        for (v, &r) in self.values.iter_mut().zip(image) {
            if *v > half {
                stable &= reduce(&(&*v - &self.modulus), p) == r;
            } else {
                stable &= reduce(v, p) == r;
            }
            let cur = reduce(v, p);
            let delta = mulm(subm(r, cur, p), m_inv, p);
            if delta != 0 {
                *v += &self.modulus * BigInt::from(delta);
            }
        }
        self.modulus *= BigInt::from(p);
        stable
    }

    fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1u32;
        self.values
            .iter()
            .map(|v| if *v > half { v - &self.modulus } else { v.clone() })
            .collect()
    }
}

fn int_content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn u_div_int(v: &[BigInt], k: &BigInt) -> UPoly {
    if k.is_one() {
        return v.to_vec();
    }
    v.iter().map(|c| c / k).collect()
}

/// Exact division in `Z[t]`.
fn u_div_exact(a: &[BigInt], b: &[BigInt]) -> Option<UPoly> {
    let mut r = a.to_vec();
    trim_int(&mut r);
    if r.is_empty() {
        return Some(Vec::new());
    }
    let db = b.len() - 1;
    if r.len() < b.len() {
        return None;
    }
    let lc = b.last().unwrap();
    let mut q = vec![BigInt::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let top = &r[i + db];
        if top.is_zero() {
            continue;
        }
        let (qi, rem) = top.div_rem(lc);
        if !rem.is_zero() {
            return None;
        }
        for (j, bc) in b.iter().enumerate() {
            r[i + j] -= &(bc * &qi);
        }
        q[i] = qi;
    }
    if r.iter().any(|c| !c.is_zero()) {
        return None;
    }
    trim_int(&mut q);
    Some(q)
}

fn u_normalize_sign(mut v: UPoly) -> UPoly {
    if v.last().is_some_and(|c| c.is_negative()) {
        for c in &mut v {
            *c = -&*c;
        }
    }
    v
}

/// gcd in `Z[t]` with positive leading coefficient. Both inputs nonzero.
fn u_gcd(a: &[BigInt], b: &[BigInt]) -> UPoly {
    debug_assert!(!a.is_empty() && !b.is_empty());
    let ca = int_content(a);
    let cb = int_content(b);
    let g_int = ca.gcd(&cb);
    if a.len() == 1 || b.len() == 1 {
        return vec![g_int];
    }
    if a == b {
        return u_normalize_sign(a.to_vec());
    }
    let a1 = u_div_int(a, &ca);
    let b1 = u_div_int(b, &cb);
    let gamma = a1.last().unwrap().gcd(b1.last().unwrap());
    let mut crt: Option<(usize, Crt)> = None;
    for &p in primes() {
        let la = reduce(a1.last().unwrap(), p);
        let lb = reduce(b1.last().unwrap(), p);
        if la == 0 || lb == 0 {
            continue;
        }
        let ap: Vec<u64> = a1.iter().map(|c| reduce(c, p)).collect();
        let bp: Vec<u64> = b1.iter().map(|c| reduce(c, p)).collect();
        let mut g = gcd_mod(&ap, &bp, p);
        let deg = g.len() - 1;
        if deg == 0 {
            return vec![g_int];
        }
        let gm = reduce(&gamma, p);
        for c in &mut g {
            *c = mulm(*c, gm, p);
        }
        let stable = match &mut crt {
            Some((d, state)) if *d == deg => state.combine(&g, p),
            Some((d, _)) if *d < deg => continue,
            _ => {
                crt = Some((deg, Crt::new(&g, p)));
                false
            }
        };
        if !stable {
            continue;
        }
        let state = &crt.as_ref().unwrap().1;
        let cand = state.symmetric();
        let cont = int_content(&cand);
        let cand = u_normalize_sign(u_div_int(&cand, &cont));
        if u_div_exact(&a1, &cand).is_some() && u_div_exact(&b1, &cand).is_some() {
            return cand.into_iter().map(|c| c * &g_int).collect();
        }
    }
    panic!("univariate gcd did not converge within {MAX_PRIMES} primes");
}

fn to_x_major(a: &IntPoly) -> XMajor {
    let dx = a.degree_in(Var::X).unwrap_or(0) as usize;
    let mut out: XMajor = vec![Vec::new(); dx + 1];
    for (m, c) in a.terms() {
        let row = &mut out[m.x as usize];
        if row.len() <= m.y as usize {
            row.resize(m.y as usize + 1, BigInt::zero());
        }
        row[m.y as usize] = c.clone();
    }
    out
}

fn from_x_major(a: &XMajor) -> IntPoly {
    Poly::from_terms(a.iter().enumerate().flat_map(|(ex, row)| {
        row.iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(ey, c)| (Monomial::new(ex as u32, ey as u32), c.clone()))
    }))
}

fn from_y_poly(a: &[BigInt]) -> IntPoly {
    Poly::from_terms(
        a.iter()
            .enumerate()
            .map(|(ey, c)| (Monomial::new(0, ey as u32), c.clone())),
    )
}

/// Content with respect to `x`: gcd in `Z[y]` of the coefficients.
fn x_content(a: &XMajor) -> UPoly {
    let mut rows: Vec<&UPoly> = a.iter().filter(|r| !r.is_empty()).collect();
    rows.sort_by_key(|r| r.len());
    let mut g: UPoly = rows[0].clone();
    for (i, r) in rows.iter().enumerate().skip(1) {
        if g.len() == 1 {
            let c = rows[i..].iter().fold(g[0].abs(), |c, r| c.gcd(&int_content(r)));
            return vec![c];
        }
        g = u_gcd(&g, r);
    }
    u_normalize_sign(g)
}

fn strip_content(v: &XMajor, c: &UPoly) -> XMajor {
    if c.len() == 1 {
        let k = &c[0];
        v.iter().map(|r| u_div_int(r, k)).collect()
    } else {
        v.iter()
            .map(|r| {
                if r.is_empty() {
                    Vec::new()
                } else {
                    u_div_exact(r, c).expect("content divides")
                }
            })
            .collect()
    }
}

fn next_point(state: &mut u64, p: u64) -> u64 {
    *state = state
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    1 + (*state >> 33) % (p - 1)
}

/// gcd image in `Z_p[x, y]` scaled so its leading coefficient in `x` is
/// `gamma`. Returns `None` if too many evaluation points were unusable.
fn image_mod(a: &[Vec<u64>], b: &[Vec<u64>], gamma: &[u64], need: usize, p: u64) -> Option<Vec<Vec<u64>>> {
    let lca = a.last().unwrap();
    let lcb = b.last().unwrap();
    let mut state = p ^ 0x9e37_79b9_7f4a_7c15;
    let mut points: Vec<u64> = Vec::with_capacity(need);
    let mut values: Vec<Vec<u64>> = Vec::with_capacity(need);
    let mut deg = usize::MAX;
    let mut attempts = 0;
    while points.len() < need {
        attempts += 1;
        if attempts > 4 * need + 64 {
            return None;
        }
        let t = next_point(&mut state, p);
        if points.contains(&t) || eval_mod(lca, t, p) == 0 || eval_mod(lcb, t, p) == 0 {
            continue;
        }
        let at: Vec<u64> = a.iter().map(|c| eval_mod(c, t, p)).collect();
        let bt: Vec<u64> = b.iter().map(|c| eval_mod(c, t, p)).collect();
        let mut g = gcd_mod(&at, &bt, p);
        let dg = g.len() - 1;
        if dg == 0 {
            return Some(vec![vec![1]]);
        }
        if dg > deg {
            continue;
        }
        if dg < deg {
            deg = dg;
            points.clear();
            values.clear();
        }
        let s = eval_mod(gamma, t, p);
        for c in &mut g {
            *c = mulm(*c, s, p);
        }
        points.push(t);
        values.push(g);
    }
    // Newton interpolation of each x-coefficient in y.
    let n = points.len();
    let mut out = Vec::with_capacity(deg + 1);
    for i in 0..=deg {
        let mut coef: Vec<u64> = values.iter().map(|v| v[i]).collect();
        for k in 1..n {
            for j in (k..n).rev() {
                let num = subm(coef[j], coef[j - 1], p);
                let den = subm(points[j], points[j - k], p);
                coef[j] = mulm(num, invm(den, p), p);
            }
        }
        // Expand Newton form into monomial basis.
        let mut poly: Vec<u64> = vec![coef[n - 1]];
        for j in (0..n - 1).rev() {
            // poly = poly * (y - points[j]) + coef[j]
            let mut next = vec![0u64; poly.len() + 1];
            for (e, &c) in poly.iter().enumerate() {
                next[e + 1] = addm(next[e + 1], c, p);
                next[e] = subm(next[e], mulm(c, points[j], p), p);
            }
            next[0] = addm(next[0], coef[j], p);
            poly = next;
        }
        trim_mod(&mut poly);
        out.push(poly);
    }
    Some(out)
}

/// gcd of polynomials that are primitive in `x` with positive `x`-degree.
fn brown(a: &XMajor, b: &XMajor) -> IntPoly {
    let gamma = u_gcd(a.last().unwrap(), b.last().unwrap());
    let ydeg = |v: &XMajor| v.iter().map(|r| r.len().saturating_sub(1)).max().unwrap_or(0);
    let need = ydeg(a).min(ydeg(b)) + gamma.len();
    let ap_big = from_x_major(a);
    let bp_big = from_x_major(b);
    let mut crt: Option<(usize, Vec<usize>, Crt)> = None;
    for &p in primes() {
        if reduce(a.last().unwrap().last().unwrap(), p) == 0
            || reduce(b.last().unwrap().last().unwrap(), p) == 0
            || reduce(gamma.last().unwrap(), p) == 0
        {
            continue;
        }
        let am: Vec<Vec<u64>> = a
            .iter()
            .map(|r| {
                let mut v: Vec<u64> = r.iter().map(|c| reduce(c, p)).collect();
                trim_mod(&mut v);
                v
            })
            .collect();
        let bm: Vec<Vec<u64>> = b
            .iter()
            .map(|r| {
                let mut v: Vec<u64> = r.iter().map(|c| reduce(c, p)).collect();
                trim_mod(&mut v);
                v
            })
            .collect();
        let gm: Vec<u64> = gamma.iter().map(|c| reduce(c, p)).collect();
        let Some(img) = image_mod(&am, &bm, &gm, need, p) else {
            continue;
        };
        let deg = img.len() - 1;
        if deg == 0 {
            return IntPoly::one();
        }
        // Flatten with a fixed layout: `need` slots per x-coefficient.
        let shape: Vec<usize> = vec![need; deg + 1];
        let mut flat = Vec::with_capacity(need * (deg + 1));
        for row in &img {
            flat.extend_from_slice(row);
            flat.extend(std::iter::repeat_n(0, need - row.len()));
        }
        let stable = match &mut crt {
            Some((d, _, state)) if *d == deg => state.combine(&flat, p),
            Some((d, _, _)) if *d < deg => continue,
            _ => {
                crt = Some((deg, shape, Crt::new(&flat, p)));
                false
            }
        };
        if !stable {
            continue;
        }
        let (_, shape, state) = crt.as_ref().unwrap();
        let sym = state.symmetric();
        let mut cand: XMajor = Vec::with_capacity(shape.len());
        let mut off = 0;
        for &len in shape {
            let mut row = sym[off..off + len].to_vec();
            trim_int(&mut row);
            cand.push(row);
            off += len;
        }
        let cont = x_content(&cand);
        let mut cand = from_x_major(&strip_content(&cand, &cont));
        if cand.leading_sign() < 0 {
            cand = cand.neg();
        }
        if ap_big.div_exact(&cand).is_some() && bp_big.div_exact(&cand).is_some() {
            return cand;
        }
    }
    panic!("bivariate gcd did not converge within {MAX_PRIMES} primes");
}

fn min_exponents(a: &IntPoly) -> Monomial {
    let mut mx = u32::MAX;
    let mut my = u32::MAX;
    for (m, _) in a.terms() {
        mx = mx.min(m.x);
        my = my.min(m.y);
    }
    Monomial::new(mx, my)
}

fn shift_down(a: &IntPoly, m: Monomial) -> IntPoly {
    if m == Monomial::ONE {
        return a.clone();
    }
    Poly::from_sorted_unchecked(
        a.terms()
            .iter()
            .map(|(t, c)| (Monomial::new(t.x - m.x, t.y - m.y), c.clone()))
            .collect(),
    )
}

/// Greatest common divisor in `Z[x, y]`, normalized to a positive grlex
/// leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return if b.leading_sign() < 0 { b.neg() } else { b.clone() };
    }
    if b.is_zero() {
        return if a.leading_sign() < 0 { a.neg() } else { a.clone() };
    }
    let g_int = a.content().gcd(&b.content());
    let ma = min_exponents(a);
    let mb = min_exponents(b);
    let mono = Monomial::new(ma.x.min(mb.x), ma.y.min(mb.y));
    let head = IntPoly::monomial(mono, g_int.clone());
    if a.is_constant() || b.is_constant() || a.len() == 1 || b.len() == 1 {
        return head;
    }
    let a1 = shift_down(a, ma);
    let b1 = shift_down(b, mb);
    let a1 = a1.div_int_exact(&a1.content());
    let b1 = b1.div_int_exact(&b1.content());
    if a1.is_constant() || b1.is_constant() {
        return head;
    }
    if a1 == b1 || a1 == b1.neg() {
        let g = if a1.leading_sign() < 0 { a1.neg() } else { a1 };
        return g.mul(&head);
    }
    let ax = to_x_major(&a1);
    let bx = to_x_major(&b1);
    let ca = x_content(&ax);
    let cb = x_content(&bx);
    let gy = if ca.len() == 1 || cb.len() == 1 {
        vec![BigInt::one()]
    } else {
        u_gcd(&ca, &cb)
    };
    let a2 = strip_content(&ax, &ca);
    let b2 = strip_content(&bx, &cb);
    let gx = if a2.len() == 1 || b2.len() == 1 {
        IntPoly::one()
    } else {
        brown(&a2, &b2)
    };
    let mut g = gx.mul(&from_y_poly(&gy)).mul(&head);
    if g.leading_sign() < 0 {
        g = g.neg();
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly_int as pp;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]);
        assert!(is_prime((1 << 31) - 1));
        assert!(is_prime(4_294_967_291));
        assert!(!is_prime(25_326_001));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn modular_gcd_mod_p() {
        let p = 101;
        // (t+1)(t+2) and (t+1)(t+3)
        let a = vec![2, 3, 1];
        let b = vec![3, 4, 1];
        assert_eq!(gcd_mod(&a, &b, p), vec![1, 1]);
    }

    #[test]
    fn univariate_integer_gcd() {
        let a: UPoly = [-2, 0, 2].iter().map(|&c| BigInt::from(c)).collect(); // 2(t^2-1)
        let b: UPoly = [4, 4].iter().map(|&c| BigInt::from(c)).collect(); // 4(t+1)
        assert_eq!(u_gcd(&a, &b), vec![BigInt::from(2), BigInt::from(2)]);
    }

    #[test]
    fn bivariate_gcd_finds_common_factor() {
        let a = pp("(x^2 + y^2 - 1)*(x - y)^2*(3*x*y + 2)");
        let b = pp("(x^2 + y^2 - 1)*(x - y)*(x + 5*y^3)");
        assert_eq!(gcd(&a, &b), pp("(x^2 + y^2 - 1)*(x - y)"));
    }

    #[test]
    fn gcd_with_contents_and_monomials() {
        let a = pp("6*x^2*y*(y + 1)*(x + y)");
        let b = pp("4*x*y^3*(y + 1)");
        assert_eq!(gcd(&a, &b), pp("2*x*y*(y + 1)"));
        assert_eq!(gcd(&a, &IntPoly::zero()), a);
        assert_eq!(gcd(&pp("x+1"), &pp("x-1")), IntPoly::one());
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let a = pp("x^3*y + 7*y^2 - 3*x + 11");
        let b = pp("x^2 - 5*x*y^4 + 2");
        assert_eq!(gcd(&a, &b), IntPoly::one());
    }

    #[test]
    fn gcd_with_large_coefficients() {
        let a = pp("(123456789123*x^3*y - 987654321987*y^2 + 5)*(x*y - 31415926535)");
        let b = pp("(x*y - 31415926535)*(271828182845*x + y^5)");
        assert_eq!(gcd(&a, &b), pp("x*y - 31415926535"));
    }

    #[test]
    fn gcd_with_non_constant_leading_coefficient() {
        let a = pp("(y^2 + 1)*x^2 + x*y + 3");
        let b = pp("(y + 2)*x - 1");
        let c = pp("(y^3 - y)*x + y + 7");
        assert_eq!(gcd(&a.mul(&c), &b.mul(&c)), c);
    }

    #[test]
    fn x_content_uses_every_row() {
        let a = pp("(x + 1)*(y + 2)");
        let b = pp("(x^2 + 2*x + 1)*(3*y + 6)");
        assert_eq!(gcd(&a, &b), pp("(x + 1)*(y + 2)"));
        let a = pp("2*x^2 + 2*x*y + 3");
        assert_eq!(x_content(&to_x_major(&a)), vec![BigInt::one()]);
    }
}
