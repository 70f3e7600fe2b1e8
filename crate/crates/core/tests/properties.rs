use proptest::prelude::*;

use webcurv::algebra::parse::parse_ratfunc;
use webcurv::algebra::{rational, IntPoly, Matrix, Monomial, Rational, RationalFunction, SlopePolynomial, Var};

fn int_poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec((0u32..3, 0u32..3, -5i64..=5), 0..4)
        .prop_map(|terms| IntPoly::from_terms(terms.into_iter().map(|(a, b, c)| (Monomial::new(a, b), c.into()))))
}

fn nonzero_poly() -> impl Strategy<Value = IntPoly> {
    int_poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (int_poly(), nonzero_poly()).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=6).prop_map(|(n, d)| rational(n, d))
}

fn slope_poly(max_width: usize) -> impl Strategy<Value = SlopePolynomial<RationalFunction>> {
    prop::collection::vec(ratfunc(), 1..=max_width).prop_map(SlopePolynomial::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn display_round_trips(f in ratfunc()) {
        prop_assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn common_factors_cancel(n in int_poly(), d in nonzero_poly(), k in nonzero_poly()) {
        let plain = RationalFunction::new(n.clone(), d.clone()).unwrap();
        let padded = RationalFunction::new(n.mul(&k), d.mul(&k)).unwrap();
        prop_assert_eq!(padded.num(), plain.num());
        prop_assert_eq!(padded.den(), plain.den());
    }

    #[test]
    fn multiplication_distributes(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
        prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
    }

    #[test]
    fn mixed_partials_commute(f in ratfunc()) {
        let xy = f.derivative(Var::X).derivative(Var::Y);
        let yx = f.derivative(Var::Y).derivative(Var::X);
        prop_assert_eq!(xy, yx);
    }

    #[test]
    fn leibniz_rule(a in ratfunc(), b in ratfunc()) {
        let lhs = a.mul_ref(&b).derivative(Var::X);
        let rhs = a.derivative(Var::X).mul_ref(&b).add_ref(&a.mul_ref(&b.derivative(Var::X)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_multiplicative(a in ratfunc(), b in ratfunc(), x in small_rational(), y in small_rational()) {
        if let (Some(va), Some(vb)) = (a.eval(&x, &y), b.eval(&x, &y)) {
            prop_assert_eq!(a.mul_ref(&b).eval(&x, &y), Some(va * vb));
        }
    }

    #[test]
    fn convolution_is_multiplication(a in slope_poly(3), b in slope_poly(3)) {
        let h = b.width() - 1;
        let product = a.convolution_matrix(h).mul(&b.to_column()).unwrap();
        let direct = a.mul(&b);
        prop_assert_eq!(product.rows(), a.width() + h);
        for i in 0..product.rows() {
            prop_assert_eq!(product.get(i, 0), &direct.coeff(i));
        }
    }

    #[test]
    fn convolution_composes(a in slope_poly(2), b in slope_poly(2), h in 0usize..3) {
        let lhs = a.mul(&b).convolution_matrix(h);
        let rhs = a.convolution_matrix(h + b.width() - 1).mul(&b.convolution_matrix(h)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn inverse_is_two_sided(entries in prop::collection::vec(small_rational(), 9)) {
        let a = Matrix::new(3, 3, entries).unwrap();
        if let Ok(inv) = a.inverse() {
            prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(3));
            prop_assert_eq!(inv.mul(&a).unwrap(), Matrix::identity(3));
        } else {
            prop_assert_eq!(a.determinant().unwrap(), rational(0, 1));
        }
    }

    #[test]
    fn symbolic_inverse(entries in prop::collection::vec(ratfunc(), 4)) {
        let a = Matrix::new(2, 2, entries).unwrap();
        if let Ok(inv) = a.inverse() {
            prop_assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(2));
        }
    }
}
