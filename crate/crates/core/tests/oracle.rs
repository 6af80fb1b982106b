//! Frozen intersection numbers and the recursions they must satisfy.

use bigphase_core::oracle::dvv_oracle;
use bigphase_core::series::q;
use bigphase_core::Q;
use proptest::prelude::*;

fn fact(n: u32) -> Q {
    (1..=n as i64).fold(q(1, 1), |a, k| a * q(k, 1))
}

#[test]
fn frozen_values() {
    let cases: &[(&[u32], u32, (i64, i64))] = &[
        (&[0, 0, 0], 0, (1, 1)),
        (&[1], 1, (1, 24)),
        (&[4], 2, (1, 1152)),
        (&[2, 3], 2, (29, 5760)),
        (&[2, 2, 2], 2, (7, 240)),
        (&[1, 4], 2, (1, 384)),
        (&[0, 5], 2, (1, 1152)),
        (&[7], 3, (1, 82944)),
        (&[0, 0, 0, 1], 0, (1, 1)),
        (&[0, 0, 0, 1, 1], 0, (2, 1)),
    ];
    for (levels, g, (n, d)) in cases {
        assert_eq!(dvv_oracle(levels, *g), q(*n, *d), "<{levels:?}>_{g}");
    }
}

#[test]
fn dimension_and_stability_violations_vanish() {
    assert_eq!(dvv_oracle(&[0, 0], 0), q(0, 1));
    assert_eq!(dvv_oracle(&[3], 2), q(0, 1));
    assert_eq!(dvv_oracle(&[], 1), q(0, 1));
    assert_eq!(dvv_oracle(&[0], 1), q(0, 1));
}

#[test]
fn insertion_order_is_irrelevant() {
    assert_eq!(dvv_oracle(&[3, 2], 2), dvv_oracle(&[2, 3], 2));
    assert_eq!(dvv_oracle(&[1, 0, 2, 0], 0), dvv_oracle(&[0, 0, 1, 2], 0));
}

/// `n` levels summing to `total`, by dropping `total` units into slots.
fn composition(n: usize, total: u32) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..n, total as usize).prop_map(move |slots| {
        let mut ds = vec![0u32; n];
        for s in slots {
            ds[s] += 1;
        }
        ds
    })
}

fn genus0_input() -> impl Strategy<Value = Vec<u32>> {
    (3usize..=7).prop_flat_map(|n| composition(n, (n - 3) as u32))
}

/// Stable `(g, n)` with levels meeting the dimension constraint.
fn stable_input() -> impl Strategy<Value = (u32, Vec<u32>)> {
    prop_oneof![
        (3usize..=5).prop_map(|n| (0u32, n)),
        (1usize..=4).prop_map(|n| (1u32, n)),
        (1usize..=3).prop_map(|n| (2u32, n))
    ]
    .prop_flat_map(|(g, n)| composition(n, 3 * g + n as u32 - 3).prop_map(move |ds| (g, ds)))
}

proptest! {
    #[test]
    fn genus_zero_is_multinomial(ds in genus0_input()) {
        let n = ds.len() as u32;
        let expect = ds.iter().fold(fact(n - 3), |a, &d| a / fact(d));
        prop_assert_eq!(dvv_oracle(&ds, 0), expect);
    }

    #[test]
    fn genus_one_powers_of_tau1(n in 1u32..=6) {
        prop_assert_eq!(dvv_oracle(&vec![1; n as usize], 1), fact(n - 1) / q(24, 1));
    }

    #[test]
    fn string_equation((g, ds) in stable_input()) {
        let mut with = ds.clone();
        with.push(0);
        let mut rhs = q(0, 1);
        for i in 0..ds.len() {
            if ds[i] > 0 {
                let mut lowered = ds.clone();
                lowered[i] -= 1;
                rhs += dvv_oracle(&lowered, g);
            }
        }
        prop_assert_eq!(dvv_oracle(&with, g), rhs);
    }

    #[test]
    fn dilaton_equation((g, ds) in stable_input()) {
        let mut with = ds.clone();
        with.push(1);
        let factor = q(2 * g as i64 - 2 + ds.len() as i64, 1);
        prop_assert_eq!(dvv_oracle(&with, g), factor * dvv_oracle(&ds, g));
    }
}
