use pcmap_core::covers::{finiteness_certificate, FinitenessStatus};
use pcmap_core::scanner::{
    classify, classify_circle, default_start_points, reduce, scan, CircleAffineMap, ClassificationStatus,
    ClassifyBudget, ScanStatus,
};
use pcmap_core::{Rational, Scalar};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn rotation() -> CircleAffineMap<Rational> {
    CircleAffineMap::contracted_rotation(q(1, 2), q(7, 10)).unwrap()
}

#[test]
fn long_window_needs_a_larger_budget() {
    // At delta = 17/100 the rotated map has a 3-cycle that ten steps cannot
    // certify from any default start point.
    let red = reduce(&rotation()).unwrap();
    let line = red.conjugate(&q(17, 100)).unwrap();
    for x0 in default_start_points(&line) {
        let short = classify(&line, &x0, &ClassifyBudget::with_iterations(10));
        assert_eq!(short.status, ClassificationStatus::Undecided);
        let long = classify(&line, &x0, &ClassifyBudget::with_iterations(1_000_000));
        assert_eq!(long.period(), Some(3));
    }
}

#[test]
fn circle_classification_returns_circle_points() {
    let f = rotation();
    let c = classify_circle(&f, &q(0, 1), &ClassifyBudget::default()).unwrap();
    let ClassificationStatus::Periodic { period, orbit } = c.status else {
        panic!("undecided");
    };
    assert_eq!(period, 2);
    // {x/2 + 7/10} has the 2-cycle 1/15 <-> 11/15.
    let mut orbit = orbit;
    orbit.sort();
    assert_eq!(orbit, vec![q(1, 15), q(11, 15)]);
    for x in &orbit {
        assert_eq!(f.apply(&f.apply(x)), *x);
    }
}

#[test]
fn rotation_scan_leaves_few_rotations_unresolved() {
    let f = CircleAffineMap::contracted_rotation(0.5, 0.7).unwrap();
    let r = scan(&f, 10_000, &ClassifyBudget::with_iterations(100_000)).unwrap();
    assert!(r.unresolved_fraction() < 0.05, "{}", r.unresolved_fraction());
    assert!(r.flagged.windows(2).all(|w| w[0].hi < w[1].lo));
}

#[test]
fn certified_rotations_are_not_flagged() {
    let f = rotation();
    let red = reduce(&f).unwrap();
    let r = scan(&f, 24, &ClassifyBudget::with_iterations(100_000)).unwrap();
    let mut certified = 0;
    for row in &r.rows {
        let line = red.conjugate(&row.delta).unwrap();
        let v = finiteness_certificate(&line, &q(0, 1), &q(0, 1), 24, 1, 12);
        if v.status == FinitenessStatus::CertifiedFinite && v.no_singular_connection {
            certified += 1;
            assert_eq!(row.status, ScanStatus::Periodic, "delta {}", row.delta);
        }
    }
    assert!(certified > 0);
}

#[test]
fn zero_slope_circle_map_is_short_circuited() {
    let f = CircleAffineMap::contracted_rotation(q(0, 1), q(1, 3)).unwrap();
    assert!(classify_circle(&f, &q(1, 2), &ClassifyBudget::default()).is_err());
    assert_eq!(f.apply(&q(1, 2)).to_f64(), 1.0 / 3.0);
}
