use fourbody_core::parse::{parse_poly, parse_ratfunc};
use fourbody_core::*;
use proptest::prelude::*;

fn reg() -> Registry {
    Registry::new(&["x", "y", "z"], &["a"])
}

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

/// Sparse low-degree polynomial in `x, y, z, a`.
fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..=2, 0u32..=2, 0u32..=1, 0u32..=1), rational()), 0..6).prop_map(|terms| {
        let r = reg();
        let mut p = Poly::zero(&r);
        for ((i, j, k, l), c) in terms {
            let m = Monomial::from_exponents(&[i, j, k, l]);
            p = &p + &Poly::monomial(&r, m, c);
        }
        p
    })
}

fn point() -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(rational(), 4)
}

/// Second-order operator with polynomial coefficients.
fn op() -> impl Strategy<Value = DiffOp> {
    prop::collection::vec((0usize..3, 0usize..3, poly()), 1..4).prop_flat_map(|pairs| {
        prop::collection::vec(poly(), 3).prop_map(move |firsts| {
            let r = reg();
            let mut o = DiffOp::zero(&r);
            for (i, j, c) in &pairs {
                o.add_pair(*i, *j, RatFunc::from_poly(c.clone()));
            }
            for (i, c) in firsts.into_iter().enumerate() {
                o.add_first(i, RatFunc::from_poly(c));
            }
            o
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn polynomial_ring_axioms(p in poly(), s in poly(), t in poly()) {
        prop_assert_eq!(&(&p + &s) + &t, &p + &(&s + &t));
        prop_assert_eq!(&p * &s, &s * &p);
        prop_assert_eq!(&p * &(&s + &t), &(&p * &s) + &(&p * &t));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn evaluation_is_a_ring_homomorphism(p in poly(), s in poly(), pt in point()) {
        prop_assert_eq!((&p * &s).eval(&pt), p.eval(&pt) * s.eval(&pt));
        prop_assert_eq!((&p + &s).eval(&pt), p.eval(&pt) + s.eval(&pt));
    }

    #[test]
    fn derivative_obeys_leibniz(p in poly(), s in poly(), i in 0usize..3) {
        let lhs = (&p * &s).derivative(i);
        let rhs = &(&p.derivative(i) * &s) + &(&p * &s.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn printing_then_parsing_round_trips(p in poly()) {
        let back: Poly = parse_poly(&reg(), &p.to_string()).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn rational_function_division_inverts_multiplication(p in poly(), s in poly()) {
        prop_assume!(!s.is_zero());
        let f = RatFunc::from_poly(p.clone());
        let g = RatFunc::from_poly(s);
        let back = f.checked_mul(&g).unwrap().checked_div(&g).unwrap();
        prop_assert!(back.equals(&f));
    }

    #[test]
    fn composition_is_nested_application(a in op(), b in op(), f in poly()) {
        let ab = a.checked_compose(&b).unwrap();
        let lhs = ab.apply_poly(&f).unwrap();
        let rhs = a.apply(&b.apply_poly(&f).unwrap()).unwrap();
        prop_assert!(lhs.equals(&rhs));
    }

    #[test]
    fn commutator_is_antisymmetric(a in op(), b in op()) {
        let ab = a.commutator(&b).unwrap();
        let ba = b.commutator(&a).unwrap();
        prop_assert!(ab.checked_add(&ba).unwrap().is_zero());
    }

    #[test]
    fn gauge_round_trip(a in op(), n in -3i64..=3, d in 1i64..=4, k in 1i64..=3) {
        let r = reg();
        let base = parse_poly(&r, &format!("1 + x^2 + {k}*y*z")).unwrap();
        let g = GaugeFactor::power(base, parse_ratfunc(&r, &format!("{n}/{d} + a")).unwrap())
            .with_exp(parse_poly(&r, "x*y - z").unwrap());
        let there = gauge_conjugate(&a, &g).unwrap();
        let back = gauge_conjugate(&there, &g.inverse()).unwrap();
        prop_assert!(back.equals(&a));
    }

    #[test]
    fn gauge_conjugation_matches_direct_action(a in op(), f in poly()) {
        // with Γ = e^x, conjugation replaces ∂_x by ∂_x + 1
        let r = reg();
        let g = GaugeFactor::exponential(Poly::named(&r, "x"));
        let conj = gauge_conjugate(&a, &g).unwrap();
        let mut shifted = DiffOp::zero(&r);
        for (alpha, c) in a.terms() {
            let ex = alpha.exp(0);
            let rest = Monomial::from_exponents(&[0, alpha.exp(1), alpha.exp(2), 0]);
            for j in 0..=ex {
                let binom = if ex == 2 && j == 1 { 2 } else { 1 };
                let m = rest.mul(&Monomial::from_exponents(&[j, 0, 0, 0]));
                shifted.add_term(m, c.scale_rational(&q(binom, 1)));
            }
        }
        prop_assert!(conj.apply_poly(&f).unwrap().equals(&shifted.apply_poly(&f).unwrap()));
    }
}
