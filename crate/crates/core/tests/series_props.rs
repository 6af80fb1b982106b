//! Algebraic laws of truncated series and vector fields on random inputs.

use bigphase_core::series::{q, Monomial};
use bigphase_core::{Order, Series, VarId, VarWindow, VectorField, Q};
use proptest::prelude::*;

fn small_window() -> VarWindow {
    VarWindow::new(3, 2).unwrap()
}

fn rational() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn var(w: VarWindow) -> impl Strategy<Value = VarId> {
    (0..=w.max_level, 1..=w.num_classes).prop_map(|(l, c)| VarId::new(l, c))
}

fn monomial(w: VarWindow) -> impl Strategy<Value = Monomial> {
    prop::collection::vec((var(w), 1u32..=2), 0..=3).prop_map(move |ps| Monomial::new(&w, &ps))
}

fn order() -> impl Strategy<Value = Order> {
    prop_oneof![Just(Order::EXACT), (0i32..=4).prop_map(Order::at)]
}

fn series(w: VarWindow) -> impl Strategy<Value = Series> {
    (prop::collection::vec((monomial(w), rational()), 0..=6), order())
        .prop_map(move |(ts, ord)| Series::from_terms(w, ts, ord))
}

/// Exact polynomials in `t₀, t₁` of degree at most 2 in `t₀`.
fn poly(w: VarWindow) -> impl Strategy<Value = Series> {
    prop::collection::vec((0u32..=2, 0u32..=1, rational()), 0..=5).prop_map(move |ts| {
        let terms =
            ts.into_iter().map(|(a, b, c)| (Monomial::new(&w, &[(VarId::new(0, 1), a), (VarId::new(1, 1), b)]), c));
        Series::from_terms(w, terms, Order::EXACT)
    })
}

fn same(a: &Series, b: &Series) -> bool {
    (a - b).is_zero()
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in series(small_window()), b in series(small_window()), c in series(small_window())) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_is_a_commutative_ring(a in series(small_window()), b in series(small_window()), c in series(small_window())) {
        prop_assert!(same(&(&a * &b), &(&b * &a)));
        prop_assert!(same(&(&(&a * &b) * &c), &(&a * &(&b * &c))));
        prop_assert!(same(&(&a * &(&b + &c)), &(&(&a * &b) + &(&a * &c))));
        prop_assert_eq!(&a * &Series::one(small_window()), a.clone());
    }

    #[test]
    fn validity_never_exceeds_the_cap(a in series(small_window()), b in series(small_window())) {
        let cap = small_window().cap();
        for s in [&a * &b, &a + &b] {
            prop_assert!(s.valid().is_exact() || s.valid().value().unwrap() <= cap);
            prop_assert!(s.terms().all(|(m, _)| s.valid().admits(m.weight())));
        }
    }

    #[test]
    fn partial_derivatives_obey_leibniz(a in series(small_window()), b in series(small_window()), v in var(small_window())) {
        let lhs = (&a * &b).partial(v);
        let rhs = &(&a.partial(v) * &b) + &(&a * &b.partial(v));
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn partial_derivatives_commute(a in series(small_window()), u in var(small_window()), v in var(small_window())) {
        prop_assert!(same(&a.partial(u).partial(v), &a.partial(v).partial(u)));
    }

    #[test]
    fn shift_is_a_ring_homomorphism(a in poly(VarWindow::new(12, 1).unwrap()), b in poly(VarWindow::new(12, 1).unwrap()), c in rational()) {
        let t0 = VarId::new(0, 1);
        let ab = (&a * &b).shift(t0, &c, 4).unwrap();
        let sa = a.shift(t0, &c, 4).unwrap();
        let sb = b.shift(t0, &c, 4).unwrap();
        prop_assert!(same(&ab, &(&sa * &sb)));
        prop_assert!(same(&(&a + &b).shift(t0, &c, 4).unwrap(), &(&sa + &sb)));
    }

    #[test]
    fn shifts_compose_additively(a in poly(VarWindow::new(12, 1).unwrap()), c in rational(), d in rational()) {
        let t0 = VarId::new(0, 1);
        let twice = a.shift(t0, &c, 2).unwrap().shift(t0, &d, 2).unwrap();
        let once = a.shift(t0, &(c + d), 2).unwrap();
        prop_assert!(same(&twice, &once));
    }

    #[test]
    fn reciprocal_inverts_units(a in series(small_window()), c in rational()) {
        prop_assume!(c != q(0, 1));
        let unit = &Series::constant(small_window(), c) + &a.filter_terms(|m| m.weight() > 0);
        let inv = unit.recip().unwrap();
        prop_assert!(same(&(&unit * &inv), &Series::one(small_window())));
    }

    #[test]
    fn tau_minus_undoes_tau_plus(coeffs in prop::collection::vec((0u32..=2, 1u32..=2, series(small_window())), 0..=4)) {
        let w = small_window();
        let mut f = VectorField::zero(w);
        for (l, c, s) in coeffs {
            f = f.add(&VectorField::basis(w, l, c).mul_fn(&s));
        }
        let back = f.tau_plus().unwrap().tau_minus();
        prop_assert!(back.sub(&f).is_zero());
        prop_assert!(f.tau_plus().unwrap().pi().is_zero());
    }
}

#[test]
fn zero_constant_term_is_not_invertible() {
    let w = small_window();
    let t = Series::var(w, VarId::new(0, 1));
    assert!(t.recip().is_err());
}

#[test]
fn shift_rejects_series_beyond_the_degree_bound() {
    let w = VarWindow::new(12, 1).unwrap();
    let t0 = Series::var(w, VarId::new(0, 1));
    let cube = &(&t0 * &t0) * &t0;
    assert!(cube.shift(VarId::new(0, 1), &q(1, 1), 2).is_err());
    let s = cube.shift(VarId::new(0, 1), &q(1, 1), 3).unwrap();
    assert_eq!(s.constant_term().unwrap(), q(1, 1));
}

#[test]
fn coefficients_beyond_validity_are_refused() {
    let w = small_window();
    let m = Monomial::new(&w, &[(VarId::new(2, 1), 1)]);
    let s = Series::from_terms(w, [(Monomial::one(), q(1, 1))], Order::at(1));
    assert!(s.coeff(&m).is_err());
    assert_eq!(s.coeff(&Monomial::one()).unwrap(), q(1, 1));
}
