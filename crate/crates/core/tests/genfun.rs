//! Point-target generating functions: origin coefficients, shifted
//! expansions, record ingestion and un-shifting.

use std::collections::BTreeMap;

use bigphase_core::genfun::{build_point_genfun, genfun_from_records, point_records, unshift_point_series};
use bigphase_core::oracle::dvv_oracle;
use bigphase_core::series::q;
use bigphase_core::{Error, GenusDegrees, GwRecord, Monomial, VarId, VarWindow, Q};

fn t(level: u32) -> VarId {
    VarId::new(level, 1)
}

fn setup(target: u32) -> (VarWindow, GenusDegrees) {
    let deg = GenusDegrees::for_target(target);
    (VarWindow::new(deg.required_max_level(), 1).unwrap(), deg)
}

fn base(shift: Q) -> BTreeMap<VarId, Q> {
    BTreeMap::from([(t(0), shift)])
}

#[test]
fn degrees_follow_the_target() {
    let d = GenusDegrees::for_target(6);
    assert_eq!((d.g0, d.g1, d.g2), (13, 11, 6));
    assert_eq!(d.required_max_level(), 14);
}

#[test]
fn origin_coefficients_are_intersection_numbers_over_automorphisms() {
    let (w, deg) = setup(6);
    let g = build_point_genfun(w, deg, &q(0, 1), true).unwrap();
    type Case<'a> = (u32, &'a [(VarId, u32)], (i64, i64));
    let cases: &[Case] = &[
        (0, &[(t(0), 3)], (1, 6)),
        (0, &[(t(0), 3), (t(1), 1)], (1, 6)),
        (0, &[(t(0), 3), (t(1), 2)], (1, 6)),
        (1, &[(t(1), 1)], (1, 24)),
        (1, &[(t(1), 2)], (1, 48)),
        (1, &[(t(0), 1), (t(2), 1)], (1, 24)),
        (2, &[(t(4), 1)], (1, 1152)),
    ];
    for (genus, pairs, (n, d)) in cases {
        let m = Monomial::new(&w, pairs);
        assert_eq!(g.f(*genus).unwrap().coeff(&m).unwrap(), q(*n, *d), "genus {genus} {}", m.display(&w));
    }
    let f0 = g.f(0).unwrap();
    assert_eq!(f0.coeff(&Monomial::new(&w, &[(t(0), 2)])).unwrap(), q(0, 1));
}

#[test]
fn records_rebuild_the_generating_functions_at_any_base() {
    let (w, deg) = setup(5);
    let records = point_records(w, deg, true);
    for shift in [q(0, 1), q(1, 1), q(3, 2), q(-1, 3)] {
        let (ingested, warnings) = genfun_from_records(w, deg, &base(shift.clone()), &records).unwrap();
        // At the origin the many-τ₀ records lie above every degree and are skipped.
        assert_eq!(warnings.is_empty(), shift != q(0, 1), "{warnings:?}");
        assert_eq!(ingested, build_point_genfun(w, deg, &shift, true).unwrap());
    }
}

#[test]
fn record_values_match_the_oracle() {
    let (w, deg) = setup(6);
    for r in point_records(w, deg, true) {
        let levels: Vec<u32> = r.insertions.iter().map(|v| v.level).collect();
        assert_eq!(r.value, dvv_oracle(&levels, r.genus));
    }
}

#[test]
fn unshifting_recovers_origin_invariants() {
    let (w, deg) = setup(6);
    for shift in [q(1, 1), q(2, 1), q(-1, 2)] {
        let g = build_point_genfun(w, deg, &shift, true).unwrap();
        for genus in [1, 2] {
            let rec = unshift_point_series(g.f(genus).unwrap(), genus, &shift).unwrap();
            assert!(!rec.is_empty());
            for (levels, value) in rec {
                assert_eq!(value, dvv_oracle(&levels, genus), "genus {genus} {levels:?} at shift {shift}");
            }
        }
    }
}

#[test]
fn ingestion_requires_genus_zero_and_consistent_duplicates() {
    let (w, deg) = setup(4);
    assert!(genfun_from_records(w, deg, &base(q(1, 1)), &[]).is_err());
    let mut records = point_records(w, deg, false);
    records.push(records[0].clone());
    assert!(genfun_from_records(w, deg, &base(q(1, 1)), &records).is_ok());
    let mut bad = records[0].clone();
    bad.value += q(1, 1);
    records.push(bad);
    assert!(genfun_from_records(w, deg, &base(q(1, 1)), &records).is_err());
}

#[test]
fn records_outside_the_window_warn() {
    let (w, deg) = setup(4);
    let mut records = point_records(w, deg, false);
    records.push(GwRecord { genus: 1, insertions: vec![t(w.max_level + 1)], value: q(1, 1) });
    records.push(GwRecord { genus: 3, insertions: vec![t(7)], value: q(1, 82944) });
    let (_, warnings) = genfun_from_records(w, deg, &base(q(1, 1)), &records).unwrap();
    assert_eq!(warnings.len(), 2, "{warnings:?}");
}

#[test]
fn f2_is_optional() {
    let (w, deg) = setup(4);
    let g = build_point_genfun(w, deg, &q(1, 1), false).unwrap();
    assert!(g.has(0) && g.has(1) && !g.has(2));
    assert!(matches!(g.f(2), Err(Error::MissingGenus(2))));
}
