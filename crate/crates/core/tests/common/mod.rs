#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use webcurv::algebra::{rational, Rational, RationalFunction};
use webcurv::pipeline::{compute, PipelineOptions};
use webcurv::web::{validate_web, WebSpec};

pub const BOL_SLOPES: [&str; 5] = ["-1", "1", "y/(x-1)", "y/(x+1)", "2*x*y/(x^2+y^2-1)"];

pub fn bol() -> WebSpec {
    WebSpec::parse_slopes(&BOL_SLOPES)
        .unwrap()
        .with_origin(rational(0, 1), rational(1, 3))
}

/// `p^d - p^(d-2) + ... ` with constant distinct real roots.
pub fn constant_web(d: usize) -> WebSpec {
    let slopes: Vec<String> = (0..d).map(|i| (i as i64 - 1).to_string()).collect();
    let items: Vec<&str> = slopes.iter().map(String::as_str).collect();
    WebSpec::parse_slopes(&items).unwrap()
}

pub fn coeffs(items: &[&str]) -> WebSpec {
    WebSpec::parse_coefficients(items).unwrap()
}

fn random_quadratic(rng: &mut ChaCha8Rng) -> String {
    let monomials = ["1", "x", "y", "x^2", "x*y", "y^2"];
    let mut terms = Vec::new();
    for m in monomials {
        if rng.gen_bool(0.5) {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                terms.push(format!("({c})*{m}"));
            }
        }
    }
    if terms.is_empty() {
        rng.gen_range(-3..=3i64).to_string()
    } else {
        terms.join("+")
    }
}

/// Web with polynomial coefficients of degree at most 2, generic enough
/// for the pipeline to run symbolically.
pub fn random_web(d: usize, seed: u64) -> WebSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((d as u64) << 32));
    loop {
        let items: Vec<String> = (0..d).map(|_| random_quadratic(&mut rng)).collect();
        let refs: Vec<&str> = items.iter().map(String::as_str).collect();
        let spec = WebSpec::parse_coefficients(&refs).unwrap();
        let nonconstant = spec.coefficients.iter().filter(|c| !c.is_constant()).count();
        if nonconstant < 2 || !validate_web(&spec).unwrap().discriminant_nonzero {
            continue;
        }
        return spec;
    }
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    let num: i64 = rng.gen_range(-9..=9);
    let den: i64 = rng.gen_range(1..=7);
    rational(num, den)
}

/// Points where every coefficient, every given function and the
/// discriminant are defined and nonzero as required.
pub fn random_points(
    spec: &WebSpec,
    guards: &[&RationalFunction],
    count: usize,
    seed: u64,
) -> Vec<(Rational, Rational)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let disc = webcurv::web::discriminant_resultant(&spec.slope_polynomial()).unwrap();
    let mut out = Vec::new();
    while out.len() < count {
        let p = (random_rational(&mut rng), random_rational(&mut rng));
        let defined = spec.coefficients.iter().chain(guards.iter().copied()).all(|f| f.eval(&p.0, &p.1).is_some());
        let regular = disc.eval(&p.0, &p.1).is_some_and(|v| v != rational(0, 1));
        if defined && regular && !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

pub fn symbolic(spec: &WebSpec) -> webcurv::pipeline::Computation<RationalFunction> {
    compute(spec, &PipelineOptions::default()).unwrap()
}

/// The named corpus used by structural and backend checks.
pub fn corpus() -> Vec<(String, WebSpec)> {
    let mut out = vec![("bol".to_string(), bol())];
    for d in 3..=6 {
        out.push((format!("constant d={d}"), constant_web(d)));
    }
    out.push(("p^3 - y".into(), coeffs(&["0", "0", "-y"])));
    out.push(("p^3 - p + x*y".into(), coeffs(&["0", "-1", "x*y"])));
    out.push(("p^3 + x*p + y".into(), coeffs(&["0", "x", "y"])));
    for seed in 0..3 {
        out.push((format!("random d=4 seed {seed}"), random_web(4, seed)));
    }
    out.push(("random d=5 seed 0".into(), random_web(5, 0)));
    out
}
