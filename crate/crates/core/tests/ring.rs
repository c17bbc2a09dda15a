//! Property tests for the class ring and its specializations.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;

use motzeta_core::{HodgePolynomial, MotivicClass};

fn class_strategy(min_lexp: i64) -> impl Strategy<Value = MotivicClass> {
    prop::collection::vec(
        (
            min_lexp..6i64,
            -5i64..6,
            prop::sample::select(vec![None, Some("s"), Some("w")]),
        ),
        0..6,
    )
    .prop_map(|terms| {
        let mut acc = MotivicClass::zero();
        for (l, c, s) in terms {
            let mut t = MotivicClass::l_pow(l).mul_int(c);
            if let Some(name) = s {
                t = t * MotivicClass::symbol(name);
            }
            acc = acc + t;
        }
        acc
    })
}

fn int_table() -> BTreeMap<String, BigInt> {
    [
        ("s".to_string(), BigInt::from(2)),
        ("w".to_string(), BigInt::from(3)),
    ]
    .into()
}

fn hodge_table() -> BTreeMap<String, HodgePolynomial> {
    [
        ("s".to_string(), HodgePolynomial::u().add(&HodgePolynomial::v())),
        ("w".to_string(), HodgePolynomial::uv_pow(1)),
    ]
    .into()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn addition_commutes(a in class_strategy(-3), b in class_strategy(-3)) {
        prop_assert_eq!(a.clone() + b.clone(), b + a);
    }

    #[test]
    fn addition_associates(a in class_strategy(-3), b in class_strategy(-3), c in class_strategy(-3)) {
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a + (b + c));
    }

    #[test]
    fn multiplication_commutes(a in class_strategy(-3), b in class_strategy(-3)) {
        prop_assert_eq!(a.clone() * b.clone(), b * a);
    }

    #[test]
    fn multiplication_associates(a in class_strategy(-3), b in class_strategy(-3), c in class_strategy(-3)) {
        prop_assert_eq!((a.clone() * b.clone()) * c.clone(), a * (b * c));
    }

    #[test]
    fn multiplication_distributes(a in class_strategy(-3), b in class_strategy(-3), c in class_strategy(-3)) {
        prop_assert_eq!(a.clone() * (b.clone() + c.clone()), a.clone() * b + a * c);
    }

    #[test]
    fn subtraction_inverts_addition(a in class_strategy(-3), b in class_strategy(-3)) {
        prop_assert_eq!((a.clone() + b.clone()) - b, a);
    }

    #[test]
    fn units_behave(a in class_strategy(-3)) {
        prop_assert_eq!(a.clone() * MotivicClass::one(), a.clone());
        prop_assert_eq!(a.clone() + MotivicClass::zero(), a.clone());
        prop_assert_eq!(a.clone() * MotivicClass::zero(), MotivicClass::zero());
    }

    #[test]
    fn point_count_is_a_ring_hom(a in class_strategy(0), b in class_strategy(0), q in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let t = int_table();
        let pa = a.specialize_point_count(q, &t).unwrap();
        let pb = b.specialize_point_count(q, &t).unwrap();
        prop_assert_eq!((a.clone() + b.clone()).specialize_point_count(q, &t).unwrap(), &pa + &pb);
        prop_assert_eq!((a * b).specialize_point_count(q, &t).unwrap(), pa * pb);
    }

    #[test]
    fn euler_is_a_ring_hom(a in class_strategy(-3), b in class_strategy(-3)) {
        let t = int_table();
        let ea = a.specialize_euler(&t).unwrap();
        let eb = b.specialize_euler(&t).unwrap();
        prop_assert_eq!((a.clone() + b.clone()).specialize_euler(&t).unwrap(), &ea + &eb);
        prop_assert_eq!((a * b).specialize_euler(&t).unwrap(), ea * eb);
    }

    #[test]
    fn hodge_is_a_ring_hom(a in class_strategy(0), b in class_strategy(0)) {
        let t = hodge_table();
        let ha = a.specialize_hodge(&t).unwrap();
        let hb = b.specialize_hodge(&t).unwrap();
        prop_assert_eq!((a.clone() + b.clone()).specialize_hodge(&t).unwrap(), ha.add(&hb));
        prop_assert_eq!((a * b).specialize_hodge(&t).unwrap(), ha.mul(&hb));
    }

    #[test]
    fn hodge_at_u_v_one_matches_euler(a in class_strategy(0)) {
        // evaluating the Hodge polynomial at u = v = 1 gives the Euler number
        let sym_int: BTreeMap<String, BigInt> =
            [("s".to_string(), BigInt::from(2)), ("w".to_string(), BigInt::from(1))].into();
        let sym_hodge: BTreeMap<String, HodgePolynomial> = [
            ("s".to_string(), HodgePolynomial::constant(BigInt::from(2))),
            ("w".to_string(), HodgePolynomial::constant(BigInt::from(1))),
        ]
        .into();
        let h = a.specialize_hodge(&sym_hodge).unwrap();
        let total: BigInt = h.terms().map(|(_, c)| c.clone()).sum();
        prop_assert_eq!(total, a.specialize_euler(&sym_int).unwrap());
    }

    #[test]
    fn render_parse_roundtrip(a in class_strategy(-3)) {
        let text = a.to_string();
        let symbols: std::collections::BTreeSet<String> =
            ["s".to_string(), "w".to_string()].into();
        let back = motzeta_core::parse_class_with_symbols(&text, &symbols).unwrap();
        prop_assert_eq!(back, a);
    }
}
