mod common;

use common::{digits, poly_add, poly_mul, MODULI};
use gfmatroid::gf::{FieldError, FieldSpec};
use gfmatroid::FieldElem;
use proptest::prelude::*;

const ORDERS: &[u32] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27];

#[test]
fn arithmetic_matches_polynomial_oracle() {
    for &(p, k, modulus) in MODULI {
        let f = FieldSpec::new(p, k, None).unwrap();
        assert_eq!(f.modulus(), modulus);
        let q = f.order();
        for a in 0..q {
            for b in 0..q {
                let (x, y) = (f.elem(a).unwrap(), f.elem(b).unwrap());
                assert_eq!(f.add(x, y).code(), poly_add(a, b, p, k), "GF({q}) {a}+{b}");
                assert_eq!(f.mul(x, y).code(), poly_mul(a, b, p, modulus), "GF({q}) {a}*{b}");
            }
        }
    }
}

#[test]
fn prime_fields_match_integer_arithmetic() {
    for p in [2u32, 3, 5, 7, 11, 13] {
        let f = FieldSpec::prime(p).unwrap();
        for a in 0..p {
            for b in 0..p {
                let (x, y) = (f.elem(a).unwrap(), f.elem(b).unwrap());
                assert_eq!(f.add(x, y).code(), (a + b) % p);
                assert_eq!(f.mul(x, y).code(), a * b % p);
                assert_eq!(f.sub(x, y).code(), (a + p - b) % p);
            }
        }
    }
}

#[test]
fn inverses_by_exhaustive_check() {
    for &q in ORDERS {
        let f = FieldSpec::of_order(q).unwrap();
        for a in f.nonzero_elements() {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), FieldElem::ONE);
            let others = f.nonzero_elements().filter(|&b| f.mul(a, b) == FieldElem::ONE).count();
            assert_eq!(others, 1);
        }
        assert_eq!(f.inv(FieldElem::ZERO), Err(FieldError::DivisionByZero));
    }
}

#[test]
fn multiplicative_group_is_cyclic() {
    for &q in ORDERS {
        let f = FieldSpec::of_order(q).unwrap();
        let generator = f.nonzero_elements().find(|&g| {
            (1..q as u64 - 1).all(|e| f.pow(g, e) != FieldElem::ONE)
        });
        assert!(generator.is_some(), "GF({q}) has a primitive element");
    }
}

#[test]
fn supplied_modulus_checks() {
    // x^2 + 1 = (x + 1)^2 over GF(2)
    assert!(matches!(FieldSpec::new(2, 2, Some(&[1, 0, 1])), Err(FieldError::Reducible(_))));
    assert!(matches!(FieldSpec::new(2, 2, Some(&[1, 1])), Err(FieldError::MalformedModulus { .. })));
    assert_eq!(FieldSpec::new(6, 1, None), Err(FieldError::NotPrime(6)));
    assert_eq!(FieldSpec::of_order(12), Err(FieldError::NotPrimePower(12)));
    assert!(matches!(FieldSpec::new(7, 3, None), Err(FieldError::NoBundledModulus { .. })));
    // x^3 + 3 is irreducible over GF(7): 3 is not a cube mod 7
    let f = FieldSpec::new(7, 3, Some(&[3, 0, 0, 1])).unwrap();
    assert_eq!(f.order(), 343);
    let x = f.elem(7).unwrap();
    assert_eq!(f.pow(x, 3), f.elem(4).unwrap());
}

#[test]
fn spec_round_trips_through_text() {
    for &q in ORDERS {
        let f = FieldSpec::of_order(q).unwrap();
        let back: FieldSpec = f.to_string().parse().unwrap();
        assert_eq!(back, f);
    }
    assert!("2,x,7".parse::<FieldSpec>().is_err());
}

#[test]
fn digit_encoding_is_little_endian() {
    let f = FieldSpec::of_order(9).unwrap();
    // x is code 3; x^2 = -2x - 2 = x + 1 is code 4 under x^2 + 2x + 2
    let x = f.elem(3).unwrap();
    assert_eq!(digits(3, 3, 2), vec![0, 1]);
    assert_eq!(f.mul(x, x).code(), 4);
}

fn field_and_triple() -> impl Strategy<Value = (FieldSpec, FieldElem, FieldElem, FieldElem)> {
    prop::sample::select(ORDERS.to_vec()).prop_flat_map(|q| {
        (0..q, 0..q, 0..q).prop_map(move |(a, b, c)| {
            let f = FieldSpec::of_order(q).unwrap();
            let e = |x| f.elem(x).unwrap();
            let (a, b, c) = (e(a), e(b), e(c));
            (f, a, b, c)
        })
    })
}

proptest! {
    #[test]
    fn field_axioms((f, a, b, c) in field_and_triple()) {
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
    }

    #[test]
    fn frobenius_is_additive((f, a, b, _c) in field_and_triple()) {
        let p = f.characteristic() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, f.order() as u64), a);
    }
}
