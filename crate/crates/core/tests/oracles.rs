mod common;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use webcurv::algebra::{rational, Matrix, Rational, RationalFunction};
use webcurv::checks::{remainder_oracle, star_zero_check, structural_report};
use webcurv::connection::evaluate_at;
use webcurv::henaut::{left_inverse_at, pivot_order};
use webcurv::pipeline::{compute, jet_curvature_at, Computation, PipelineOptions};
use webcurv::web::WebSpec;

use common::*;

type Comp = Computation<RationalFunction>;

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn at(m: &Matrix<RationalFunction>, p: &(Rational, Rational)) -> Matrix<Rational> {
    evaluate_at(m, &p.0, &p.1).unwrap()
}

/// Solves the prolonged seed equations at a point directly.
///
/// Unknowns are all `u_(a,b) = ∂x^a ∂y^b r (x0, y0)` with `a + b <= d - 2`;
/// equations are every derivative of `I_0 r_x + I^0 r_y = M r` up to order
/// `d - 3`, plus the free components of `u_(0,h)` set to `free`. The
/// system is square.
struct BruteForce {
    u: Vec<Vec<Vec<Rational>>>,
}

impl BruteForce {
    fn solve(c: &Comp, p: &(Rational, Rational), free: &[Rational]) -> Self {
        let d = c.d;
        let n = d - 2;
        let top = d - 2;
        let mut offset = vec![vec![0usize; top + 1]; top + 1];
        let mut count = 0;
        for level in 0..=top {
            for a in 0..=level {
                offset[a][level - a] = count;
                count += n;
            }
        }
        let dm: Vec<Vec<Matrix<Rational>>> = (0..=d - 3)
            .map(|a| (0..=d - 3 - a).map(|b| at(c.dm.get(a, b), p)).collect())
            .collect();
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut rhs: Vec<Rational> = Vec::new();
        for level in 0..=d - 3 {
            for a in 0..=level {
                let b = level - a;
                for i in 0..d - 1 {
                    let mut row = vec![Rational::zero(); count];
                    if i < n {
                        row[offset[a + 1][b] + i] += Rational::one();
                    }
                    if i >= 1 {
                        row[offset[a][b + 1] + i - 1] += Rational::one();
                    }
                    for g in 0..=a {
                        for e in 0..=b {
                            let k = Rational::from_integer((binomial(a, g) * binomial(b, e)).into());
                            let mm = &dm[a - g][b - e];
                            for j in 0..n {
                                row[offset[g][e] + j] -= &k * mm.get(i, j);
                            }
                        }
                    }
                    rows.push(row);
                    rhs.push(Rational::zero());
                }
            }
        }
        let maps = &c.maps;
        for h in 0..=d - 3 {
            for j in 0..=d - 3 - h {
                let mut row = vec![Rational::zero(); count];
                row[offset[0][h] + j] = Rational::one();
                rows.push(row);
                rhs.push(free[maps.free_index(h, j) - 1].clone());
            }
        }
        assert_eq!(rows.len(), count, "square system");
        let a = Matrix::from_rows(rows).unwrap();
        let b = Matrix::from_fn(count, 1, |i, _| rhs[i].clone());
        let z = a.inverse().expect("prolonged system is invertible").mul(&b).unwrap();
        let mut u = vec![vec![Vec::new(); top + 1]; top + 1];
        for level in 0..=top {
            for a in 0..=level {
                let o = offset[a][level - a];
                u[a][level - a] = (0..n).map(|i| z.get(o + i, 0).clone()).collect();
            }
        }
        BruteForce { u }
    }

    fn get(&self, a: usize, b: usize) -> Matrix<Rational> {
        let v = &self.u[a][b];
        Matrix::from_fn(v.len(), 1, |i, _| v[i].clone())
    }
}

fn random_free(m: usize, rng: &mut ChaCha8Rng) -> Vec<Rational> {
    (0..m).map(|_| random_rational(rng)).collect()
}

fn combine(p: &(Rational, Rational), f: &[Rational], pick: impl Fn(usize) -> Matrix<RationalFunction>) -> Matrix<Rational> {
    let mut acc: Option<Matrix<Rational>> = None;
    for (a, fa) in f.iter().enumerate() {
        let term = at(&pick(a + 1), p).scale(fa);
        acc = Some(match acc {
            None => term,
            Some(s) => s.add(&term).unwrap(),
        });
    }
    acc.unwrap()
}

fn brute_force_agrees(spec: &WebSpec, seed: u64) {
    let c = symbolic(spec);
    let d = c.d;
    let m = c.maps.free_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let guards: Vec<&RationalFunction> = c.m.entries().iter().chain(c.cramer.u.entries()).collect();
    for p in random_points(spec, &guards, 2, seed) {
        let f = random_free(m, &mut rng);
        let bf = BruteForce::solve(&c, &p, &f);

        // Sections: u_(0,h) = Σ f_a WW[a][h].
        for h in 0..=d - 3 {
            let expect = combine(&p, &f, |a| c.sections.ww(a, h));
            assert_eq!(bf.get(0, h), expect, "section level {h}");
        }
        // E tensors: u_(a,b) = Σ_h E[h][a][b] u_(0,h).
        for level in 0..=d - 2 {
            for a in 0..=level {
                let b = level - a;
                let mut acc = Matrix::zeros(d - 2, 1);
                for h in 0..=level {
                    acc = acc.add(&at(c.e.get(h, a, b), &p).mul(&bf.get(0, h)).unwrap()).unwrap();
                }
                assert_eq!(bf.get(a, b), acc, "E at ({a}, {b})");
            }
        }
        // Cramer system: top level from U.
        let top = combine(&p, &f, |a| c.cramer.u.mul(&c.sections.www(a)).unwrap());
        for h in 0..=d - 2 {
            let block = top.submatrix(h * (d - 2)..(h + 1) * (d - 2), 0..1);
            assert_eq!(bf.get(d - 2 - h, h), block, "U block {h}");
        }
        // Connection at free slots.
        let fv = Matrix::from_fn(m, 1, |i, _| f[i].clone());
        let ax = at(&c.connection.ax, &p).mul(&fv).unwrap();
        let ay = at(&c.connection.ay, &p).mul(&fv).unwrap();
        for b in 1..=m {
            let (h, j) = c.maps.free_slot(b);
            assert_eq!(ax.get(b - 1, 0), &-bf.u[1][h][j].clone(), "Ax slot {b}");
            assert_eq!(ay.get(b - 1, 0), &-bf.u[0][h + 1][j].clone(), "Ay slot {b}");
        }
    }
}

#[test]
fn brute_force_prolongation_d3() {
    brute_force_agrees(&coeffs(&["0", "-1", "x*y"]), 1);
    brute_force_agrees(&coeffs(&["x", "y", "x*y+1"]), 2);
}

#[test]
fn brute_force_prolongation_d4() {
    for seed in 0..3 {
        brute_force_agrees(&random_web(4, seed), 10 + seed);
    }
}

#[test]
fn brute_force_prolongation_d5() {
    brute_force_agrees(&random_web(5, 0), 20);
    brute_force_agrees(&bol(), 21);
}

#[test]
fn brute_force_prolongation_d6() {
    brute_force_agrees(&coeffs(&["x", "0", "y", "-1", "x*y", "2"]), 30);
}

#[test]
fn remainder_oracle_on_corpus() {
    for (name, spec) in corpus() {
        let c = symbolic(&spec);
        assert!(remainder_oracle(&c), "{name}");
        assert!(structural_report(&c).unwrap().ok(spec.d), "{name}");
    }
}

#[test]
fn augmented_elimination_has_rank_d_minus_1() {
    for (name, spec) in corpus() {
        let c = symbolic(&spec);
        let b = &c.elimination.b;
        let e = &c.elimination.emat;
        let aug = Matrix::from_fn(b.rows(), b.cols() + e.cols(), |i, j| {
            if j < b.cols() {
                b.get(i, j).clone()
            } else {
                e.get(i, j - b.cols()).clone()
            }
        });
        assert_eq!(aug.rank().unwrap(), spec.d - 1, "{name}");
    }
}

#[test]
fn curvature_does_not_depend_on_pivot_row() {
    let specs = [coeffs(&["0", "-1", "x*y"]), random_web(4, 0), random_web(4, 1), bol()];
    for spec in specs {
        let reference = symbolic(&spec);
        let mut tried = 0;
        for i0 in pivot_order(spec.d) {
            if left_inverse_at(&reference.elimination.b, i0).is_err() {
                continue;
            }
            tried += 1;
            let opts = PipelineOptions { i0_override: Some(i0), ..Default::default() };
            let c = compute(&spec, &opts).unwrap();
            assert_eq!(c.kk, reference.kk, "i0 = {i0}");
        }
        assert!(tried >= 2, "only {tried} admissible pivot rows");
    }
}

#[test]
fn star_zero_holds_for_random_jets() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for spec in [random_web(3, 3), random_web(3, 4), random_web(4, 5), random_web(4, 6)] {
        let c = symbolic(&spec);
        let guards: Vec<&RationalFunction> = c.m.entries().iter().collect();
        for p in random_points(&spec, &guards, 3, rng.gen()) {
            let seed: Vec<i64> = (0..6).map(|_| rng.gen_range(-20..=20)).collect();
            assert!(star_zero_check(&spec, &c, &p.0, &p.1, &seed).unwrap());
        }
    }
}

#[test]
fn star_zero_detects_a_perturbed_seed_matrix() {
    let spec = random_web(4, 5);
    let mut c = symbolic(&spec);
    let bump = c.m.get(0, 0).add_ref(&RationalFunction::one());
    c.m.set(0, 0, bump);
    let p = (rational(1, 2), rational(-1, 3));
    assert!(!star_zero_check(&spec, &c, &p.0, &p.1, &[1, 2, 3]).unwrap());
}

#[test]
fn jet_lift_matches_symbolic_derivatives() {
    let spec = random_web(4, 2);
    let c = symbolic(&spec);
    let guards: Vec<&RationalFunction> = c.m.entries().iter().collect();
    for p in random_points(&spec, &guards, 3, 99) {
        let jc = webcurv::pipeline::run_jet(&spec, &p.0, &p.1, &PipelineOptions::default()).unwrap();
        for a in 0..=1 {
            for b in 0..=1 - a {
                let sym = at(c.dm.get(a, b), &p);
                let jet = jc.dm.get(a, b).map(|v| v.value());
                assert_eq!(sym, jet, "∂x^{a} ∂y^{b} M");
            }
        }
        let kk = jet_curvature_at(&spec, &p.0, &p.1).unwrap();
        assert_eq!(kk, at(&c.kk, &p));
    }
}
