//! Model construction and the grading checks.

use bigphase_core::model::{point_model, validate_model};
use bigphase_core::series::{q, qi};
use bigphase_core::{Error, ManifoldModel, Q};

fn m2(a: [[i64; 2]; 2]) -> Vec<Vec<Q>> {
    a.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect()
}

fn projective_line() -> ManifoldModel {
    ManifoldModel::new(m2([[0, 1], [1, 0]]), vec![qi(0), qi(1)], m2([[0, 2], [0, 0]]), None, None).unwrap()
}

#[test]
fn point_model_is_valid() {
    let m = point_model();
    assert!(validate_model(&m).is_empty());
    assert_eq!(m.dim(), qi(0));
    assert_eq!(m.chi, qi(1));
}

#[test]
fn projective_line_shape_is_valid_with_derived_numbers() {
    let m = projective_line();
    assert!(validate_model(&m).is_empty(), "{:?}", validate_model(&m));
    assert_eq!(m.dim(), qi(1));
    assert_eq!(m.chi, qi(2));
    assert_eq!(m.c1_cdm1, qi(2));
    assert_eq!(m.eta_inv, m2([[0, 1], [1, 0]]));
    assert_eq!(m.chern_lower(0, 0), qi(2));
}

#[test]
fn point_derived_numbers_match_the_explicit_ones() {
    let m = ManifoldModel::new(vec![vec![qi(1)]], vec![q(1, 2)], vec![vec![qi(0)]], None, None).unwrap();
    assert_eq!(m, point_model());
}

#[test]
fn pairing_grading_violation_is_reported() {
    let m = ManifoldModel::new(m2([[0, 1], [1, 0]]), vec![qi(0), qi(0)], m2([[0, 0], [0, 0]]), None, None).unwrap();
    let v = validate_model(&m);
    assert!(v.iter().any(|s| s.contains("pairing-grading violation")), "{v:?}");
}

#[test]
fn chern_grading_violation_is_reported() {
    let m = ManifoldModel::new(m2([[0, 1], [1, 0]]), vec![qi(0), qi(1)], m2([[2, 0], [0, 0]]), None, None).unwrap();
    let v = validate_model(&m);
    assert!(v.iter().any(|s| s.contains("Chern-grading violation")), "{v:?}");
}

#[test]
fn asymmetric_pairing_is_reported() {
    let m = ManifoldModel::new(m2([[1, 1], [0, 1]]), vec![q(1, 2), q(1, 2)], m2([[0, 0], [0, 0]]), None, None).unwrap();
    assert!(validate_model(&m).iter().any(|s| s.contains("not symmetric")));
}

#[test]
fn malformed_models_are_rejected() {
    let singular = ManifoldModel::new(m2([[1, 1], [1, 1]]), vec![qi(0), qi(1)], m2([[0, 0], [0, 0]]), None, None);
    assert!(matches!(singular, Err(Error::Model(_))));
    let shape = ManifoldModel::new(vec![vec![qi(1)]], vec![qi(0), qi(1)], m2([[0, 0], [0, 0]]), None, None);
    assert!(matches!(shape, Err(Error::Model(_))));
    let empty = ManifoldModel::new(vec![], vec![], vec![], None, None);
    assert!(matches!(empty, Err(Error::Model(_))));
}
