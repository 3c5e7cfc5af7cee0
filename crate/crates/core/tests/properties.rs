use proptest::prelude::*;

use smallgen::divisor::{height_of, principal_divisor, HeightValue};
use smallgen::gf::field_make;
use smallgen::{CurveModel, FFElement, Poly};

fn field_case() -> impl Strategy<Value = (u64, usize)> {
    prop::sample::select(vec![(2, 1), (3, 1), (7, 1), (2, 4), (3, 2), (5, 3)])
}

fn coeffs(order: u64, len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0..order, 1..=len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, k) in field_case(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = field_make(p, k).unwrap();
        let (a, b, c) = (a % f.order(), b % f.order(), c % f.order());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
        prop_assert_eq!(f.pow(a, f.order()), a);
        prop_assert_eq!(f.frobenius(a, k), a);
    }

    #[test]
    fn division_with_remainder(a in coeffs(9, 12), b in coeffs(9, 6)) {
        let f = field_make(3, 2).unwrap();
        let (a, b) = (Poly::from_raw(&f, a), Poly::from_raw(&f, b));
        prop_assume!(!b.is_zero());
        let (q, r) = a.divrem(&b).unwrap();
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.deg() < b.deg());
    }

    #[test]
    fn factorization_multiplies_back(a in coeffs(5, 10)) {
        let f = field_make(5, 1).unwrap();
        let a = Poly::from_raw(&f, a);
        prop_assume!(!a.is_zero());
        let fac = a.factor().unwrap();
        let mut back = Poly::constant(&f, fac.unit);
        for (p, e) in &fac.factors {
            prop_assert!(p.is_monic() && p.is_irreducible());
            back = &back * &p.pow(*e as u64);
        }
        prop_assert_eq!(back, a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn valuations_are_additive(a in coeffs(7, 2), b in coeffs(7, 2), c in coeffs(7, 2), d in coeffs(7, 2)) {
        let curve = CurveModel::from_text(7, 3, "x^4+2").unwrap();
        let f = curve.field().clone();
        let z = FFElement::from_polys(&curve, &[Poly::from_raw(&f, a), Poly::from_raw(&f, b)], &Poly::one(&f)).unwrap();
        let w = FFElement::from_polys(&curve, &[Poly::from_raw(&f, c), Poly::zero(&f), Poly::from_raw(&f, d)], &Poly::one(&f)).unwrap();
        prop_assume!(!z.is_zero() && !w.is_zero());
        let zw = &z * &w;
        let dz = principal_divisor(&curve, std::slice::from_ref(&z)).unwrap();
        let dw = principal_divisor(&curve, std::slice::from_ref(&w)).unwrap();
        let dzw = principal_divisor(&curve, std::slice::from_ref(&zw)).unwrap();
        prop_assert_eq!(dzw.degree(), 0);
        for v in dz.support().chain(dw.support()).chain(dzw.support()) {
            prop_assert_eq!(dzw.coeff(v), dz.coeff(v) + dw.coeff(v));
        }
        let inv = z.inv().unwrap();
        prop_assert_eq!(height_of(&curve, &inv).unwrap(), height_of(&curve, &z).unwrap());
        if z.as_constant().is_some() {
            prop_assert_eq!(height_of(&curve, &z).unwrap(), HeightValue::integer(0));
        }
    }
}
