use proptest::prelude::*;
use qtmoments::ring::{rational, Assignment, Monomial, Polynomial, Var};

fn poly() -> impl Strategy<Value = Polynomial> {
    let term = (-9i64..=9, 0u32..3, 0u32..3, 0u32..3, 0u32..3);
    prop::collection::vec(term, 0..6).prop_map(|terms| {
        terms
            .into_iter()
            .map(|(c, l, t, q, x)| {
                Polynomial::term(c, Monomial::from_exponents([(Var::Lambda, l), (Var::T, t), (Var::Q, q), (Var::X, x)]))
            })
            .sum()
    })
}

fn assignment() -> impl Strategy<Value = Assignment> {
    let r = (-6i64..=6, 1i64..=5).prop_map(|(n, d)| rational(n, d));
    (r.clone(), r.clone(), r.clone(), r).prop_map(|(l, t, q, x)| {
        Assignment::from([(Var::Lambda, l), (Var::T, t), (Var::Q, q), (Var::X, x)])
    })
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_laws(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Polynomial::one(), a.clone());
    }

    #[test]
    fn evaluation_is_a_ring_map(a in poly(), b in poly(), at in assignment()) {
        let (ea, eb) = (a.eval(&at).unwrap(), b.eval(&at).unwrap());
        prop_assert_eq!((&a * &b).eval(&at).unwrap(), &ea * &eb);
        prop_assert_eq!((&a + &b).eval(&at).unwrap(), ea + eb);
    }

    #[test]
    fn canonical_string_round_trips(a in poly()) {
        let s = a.canonical_string().unwrap();
        prop_assert_eq!(Polynomial::parse(&s).unwrap(), a);
    }

    #[test]
    fn json_round_trips(a in poly()) {
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(Polynomial::from_json(&back).unwrap(), a);
    }

    #[test]
    fn half_powers_resolve(a in poly(), k in 0u32..4) {
        let s2 = Polynomial::var(Var::S).pow(2 * k);
        let expected = &a * &Polynomial::var(Var::Lambda).pow(k);
        prop_assert_eq!((&a * &s2).resolve_half_powers().unwrap(), expected);
    }

    #[test]
    fn pow_matches_repeated_product(a in poly(), k in 0u32..4) {
        let mut acc = Polynomial::one();
        for _ in 0..k {
            acc = &acc * &a;
        }
        prop_assert_eq!(a.pow(k), acc);
    }
}
