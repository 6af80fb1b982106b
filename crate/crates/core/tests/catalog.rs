//! Catalog selection, the solver on point data, and operator laws on
//! random fields.

use std::collections::BTreeSet;

use bigphase_core::catalog::{self, CATALOG};
use bigphase_core::check::Status;
use bigphase_core::genfun::build_point_genfun;
use bigphase_core::model::point_model;
use bigphase_core::series::q;
use bigphase_core::solver::reconstruct_f2;
use bigphase_core::{Context, Error, GenusDegrees, Monomial, Series, VarId, VarWindow, VectorField, Q};
use proptest::prelude::*;

fn ctx(target: u32, shift: Q, with_f2: bool) -> Context {
    let deg = GenusDegrees::for_target(target);
    let w = VarWindow::new(deg.required_max_level(), 1).unwrap();
    Context::new(point_model(), build_point_genfun(w, deg, &shift, with_f2).unwrap()).unwrap()
}

#[test]
fn ids_are_unique_and_tagged() {
    let ids: BTreeSet<&str> = CATALOG.iter().map(|e| e.id).collect();
    assert_eq!(ids.len(), CATALOG.len());
    assert!(CATALOG.iter().all(|e| (1..=9).contains(&e.criterion) && e.genus <= 2));
    assert_eq!(catalog::suites().len(), 9);
}

#[test]
fn selection_by_id_suite_tag_and_all() {
    assert_eq!(catalog::select(&["trr1".into()]).unwrap().len(), 1);
    let trr = catalog::select(&["trr".into()]).unwrap();
    assert!(trr.len() > 1 && trr.iter().all(|e| e.suite == "trr"));
    let c6 = catalog::select(&["c6".into()]).unwrap();
    assert!(!c6.is_empty() && c6.iter().all(|e| e.criterion == 6));
    assert_eq!(catalog::select(&["all".into()]).unwrap().len(), CATALOG.len());
    assert_eq!(catalog::select(&[]).unwrap().len(), CATALOG.len());
    let both = catalog::select(&["trr1".into(), "trr".into()]).unwrap();
    assert_eq!(both.len(), trr.len());
}

#[test]
fn unknown_selection_is_a_config_error() {
    assert!(matches!(catalog::select(&["nope".into()]), Err(Error::Config(_))));
}

#[test]
fn genus_two_entries_skip_without_f2() {
    let c = ctx(6, q(1, 1), false);
    let out = catalog::run_catalog(&c, &["trr1".into(), "string-equation".into()]).unwrap();
    assert!(out.iter().any(|o| matches!(o.status, Status::Skip(_))));
}

#[test]
fn perturbed_f2_is_reported_with_its_monomial() {
    let c = ctx(6, q(1, 1), true);
    let w = c.window();
    let f2 = c.gen.f(2).unwrap();
    let m = Monomial::new(&w, &[(VarId::new(0, 1), 1), (VarId::new(3, 1), 1)]);
    let bad = f2.with_coeff(m.clone(), f2.coeff(&m).unwrap() + q(1, 7));
    let pc = c.with_gen(c.gen.with_fg(2, bad)).unwrap();
    let out = catalog::run_catalog(&pc, &["virasoro-constraints".into()]).unwrap();
    assert_eq!(out[0].status, Status::Fail);
    let off = out[0].offending.as_ref().unwrap();
    assert!(!off.monomial.is_empty() && off.coefficient != q(0, 1));
}

#[test]
fn solver_matches_the_oracle_away_from_the_origin() {
    for shift in [q(1, 1), q(2, 1), q(-1, 2)] {
        let full = ctx(5, shift.clone(), true);
        let bare = full.with_gen(full.gen.without_f2()).unwrap();
        let rep = reconstruct_f2(&bare).unwrap();
        assert!((&rep.f2 - full.gen.f(2).unwrap()).is_zero(), "shift {shift}");
        assert!(rep.diagnostics.iter().all(|(_, ok, _)| *ok));
    }
}

#[test]
fn solver_refuses_the_origin() {
    let c = ctx(4, q(0, 1), false);
    assert!(matches!(reconstruct_f2(&c), Err(Error::SingularC)));
}

fn coeff_series(w: VarWindow) -> impl Strategy<Value = Series> {
    prop::collection::vec((0u32..=2, 0u32..=1, -3i64..=3), 1..=3).prop_map(move |ts| {
        let terms = ts
            .into_iter()
            .map(|(a, b, c)| (Monomial::new(&w, &[(VarId::new(0, 1), a), (VarId::new(1, 1), b)]), q(c, 1)));
        Series::from_terms(w, terms, bigphase_core::Order::EXACT)
    })
}

fn field(w: VarWindow, max_level: u32) -> impl Strategy<Value = VectorField> {
    prop::collection::vec((0..=max_level, coeff_series(w)), 1..=2).prop_map(move |cs| {
        cs.into_iter().fold(VectorField::zero(w), |f, (l, s)| f.add(&VectorField::basis(w, l, 1).mul_fn(&s)))
    })
}

fn point_window() -> VarWindow {
    let deg = GenusDegrees::for_target(4);
    VarWindow::new(deg.required_max_level(), 1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quantum_product_is_commutative_and_associative(
        u in field(point_window(), 2), v in field(point_window(), 2), x in field(point_window(), 2)
    ) {
        let c = ctx(4, q(1, 1), false);
        let uv = c.qprod(&u, &v).unwrap();
        prop_assert!(uv.sub(&c.qprod(&v, &u).unwrap()).is_zero());
        let left = c.qprod(&uv, &x).unwrap();
        let right = c.qprod(&u, &c.qprod(&v, &x).unwrap()).unwrap();
        prop_assert!(left.sub(&right).is_zero());
    }

    #[test]
    fn bracket_is_a_lie_bracket(u in field(point_window(), 3), v in field(point_window(), 3), x in field(point_window(), 3)) {
        let c = ctx(4, q(1, 1), false);
        prop_assert!(c.bracket(&u, &v).add(&c.bracket(&v, &u)).is_zero());
        let jac = c.bracket(&u, &c.bracket(&v, &x))
            .add(&c.bracket(&v, &c.bracket(&x, &u)))
            .add(&c.bracket(&x, &c.bracket(&u, &v)));
        prop_assert!(jac.is_zero());
    }

    #[test]
    fn derivations_obey_leibniz(v in field(point_window(), 3), a in coeff_series(point_window()), b in coeff_series(point_window())) {
        let c = ctx(4, q(1, 1), false);
        let lhs = c.deriv(&v, &(&a * &b));
        let rhs = &(&c.deriv(&v, &a) * &b) + &(&a * &c.deriv(&v, &b));
        prop_assert!((&lhs - &rhs).is_zero());
    }

}
