mod common;

use chordbar::barcode::{barcode, barcode_definitional, extract, recover, Bar, Barcode};
use chordbar::coefficients::{rat, FieldSpec, Scalar};
use chordbar::fixtures;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn field() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::F2),
        Just(FieldSpec::Fp(3)),
        Just(FieldSpec::Fp(7)),
        Just(FieldSpec::Q)
    ]
}

fn scalar(f: FieldSpec) -> impl Strategy<Value = Scalar> {
    (-20i64..20, 1i64..6).prop_map(move |(n, d)| match f {
        FieldSpec::Q => f.from_rational(&rat(n, d)).unwrap(),
        _ => f.from_i64(n),
    })
}

fn three(f: FieldSpec) -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    (scalar(f), scalar(f), scalar(f))
}

proptest! {
    #[test]
    fn field_axioms((f, (a, b, c)) in field().prop_flat_map(|f| (Just(f), three(f)))) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        } else {
            prop_assert!(a.inv().is_err());
        }
        prop_assert_eq!(f.parse_scalar(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn engines_agree_on_random_complexes(f in field(), seed in any::<u64>(), n in 1usize..9) {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let c = fixtures::random_complex(&mut r, f, n);
        prop_assert!(common::square_is_zero(&c));
        prop_assert_eq!(barcode(&c), barcode_definitional(&c));
        let total: usize = barcode(&c).bars().iter().map(|b| if b.is_infinite() { 1 } else { 2 }).sum();
        prop_assert_eq!(total, c.len());
    }

    #[test]
    fn recovery_inverts_extraction(bars in prop::collection::vec((0i64..8, 1i64..5, any::<bool>(), 0i64..3), 0..7)) {
        let b = Barcode::new(
            bars.into_iter()
                .map(|(s, len, inf, d)| if inf { Bar::infinite(rat(s, 1), d) } else { Bar::finite(rat(s, 1), rat(s + len, 1), d) })
                .collect(),
        );
        let mut got = recover(&extract(&b)).unwrap();
        let mut want = b.intervals();
        got.sort();
        want.sort();
        prop_assert_eq!(got, want);
    }
}
