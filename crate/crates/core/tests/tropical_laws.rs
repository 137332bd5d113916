//! Algebraic laws of min-plus matrices on random instances.

use proptest::prelude::*;
use termlab_core::tropical::{ClampBound, Entry, Finite, Infinite, TropicalMatrix};

const CASES: u32 = 10_000;

fn entry() -> impl Strategy<Value = Entry> {
    prop_oneof![
        4 => (-12i64..=12).prop_map(Finite),
        1 => Just(Infinite),
    ]
}

fn square(dim: usize) -> impl Strategy<Value = TropicalMatrix> {
    prop::collection::vec(prop::collection::vec(entry(), dim), dim)
        .prop_map(TropicalMatrix::from_rows)
}

fn triple() -> impl Strategy<Value = (TropicalMatrix, TropicalMatrix, TropicalMatrix)> {
    (1usize..=4).prop_flat_map(|d| (square(d), square(d), square(d)))
}

fn pair() -> impl Strategy<Value = (TropicalMatrix, TropicalMatrix)> {
    (1usize..=4).prop_flat_map(|d| (square(d), square(d)))
}

/// Adds `by` to every finite entry.
fn shifted(m: &TropicalMatrix, by: i64) -> TropicalMatrix {
    let rows = m
        .rows()
        .map(|r| {
            r.iter()
                .map(|e| match e {
                    Finite(v) => Finite(v + by),
                    Infinite => Infinite,
                })
                .collect()
        })
        .collect();
    TropicalMatrix::from_rows(rows)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(CASES))]

    #[test]
    fn product_is_associative((a, b, c) in triple()) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_neutral(a in (1usize..=5).prop_flat_map(square)) {
        let id = TropicalMatrix::identity(a.dim());
        prop_assert_eq!(&id.mul(&a).unwrap(), &a);
        prop_assert_eq!(&a.mul(&id).unwrap(), &a);
    }

    #[test]
    fn z_shifts_every_finite_entry(a in (1usize..=5).prop_flat_map(square)) {
        let z = TropicalMatrix::diagonal(a.dim(), -1);
        let expect = shifted(&a, -1);
        prop_assert_eq!(&z.mul(&a).unwrap(), &expect);
        prop_assert_eq!(&a.mul(&z).unwrap(), &expect);
    }

    #[test]
    fn product_is_monotone((a, b, c) in triple()) {
        // a' = min(a, c) sits below a
        let lower = TropicalMatrix::from_rows(
            a.rows()
                .zip(c.rows())
                .map(|(x, y)| x.iter().zip(y).map(|(p, q)| *p.min(q)).collect())
                .collect(),
        );
        prop_assert!(lower.le(&a));
        prop_assert!(lower.mul(&b).unwrap().le(&a.mul(&b).unwrap()));
        prop_assert!(b.mul(&lower).unwrap().le(&b.mul(&a).unwrap()));
    }

    #[test]
    fn clamping_only_weakens((a, b) in pair(), k in 1i64..=10) {
        let k = ClampBound::new(k).unwrap();
        prop_assert!(a.le(&a.clamped(k)));
        prop_assert_eq!(a.clamped(k).clamped(k), a.clamped(k));
        let exact = a.mul(&b).unwrap();
        let coarse = a.clamped(k).mul_clamped(&b.clamped(k), k).unwrap();
        prop_assert!(exact.le(&coarse));
        // a negative clamped diagonal is a negative exact diagonal
        for i in 0..exact.dim() {
            if coarse.get(i, i).is_negative() {
                prop_assert!(exact.get(i, i).is_negative());
            }
        }
    }

    #[test]
    fn text_format_round_trips(a in (1usize..=5).prop_flat_map(square)) {
        let text = a.to_string();
        prop_assert_eq!(TropicalMatrix::parse(&text).unwrap(), a);
    }
}
