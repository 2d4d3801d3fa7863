use std::collections::BTreeSet;

use pcmap_core::covers::{cover_certificate, omega_centers};
use pcmap_core::scanner::{classify, reduce, scan, CircleAffineMap, ClassifyBudget, ScanStatus};
use pcmap_core::symbolic::{enumerate_itineraries, find_singular_connection, prefixes, q_set};
use pcmap_core::{Breakpoints, Ifs, ItineraryWord, PiecewiseContraction, Rational, Scalar};
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

/// Nonzero slope `p/d` with `|p| < d`.
fn slope() -> impl Strategy<Value = Rational> {
    (2i64..=9)
        .prop_flat_map(|d| (1..d, any::<bool>(), Just(d)))
        .prop_map(|(p, neg, d)| q(if neg { -p } else { p }, d))
}

fn small_rational(span: i64) -> impl Strategy<Value = Rational> {
    (-span * 8..=span * 8, 1i64..=8).prop_map(|(n, d)| q(n, 8 * d))
}

fn ifs(k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Ifs<Rational>> {
    k.prop_flat_map(|k| (prop::collection::vec(slope(), k), prop::collection::vec(small_rational(3), k)))
        .prop_map(|(s, b)| Ifs::from_parts(&s, &b).unwrap())
}

fn line_map(k: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PiecewiseContraction<Rational>> {
    ifs(k)
        .prop_flat_map(|ifs| {
            let n = ifs.k() - 1;
            (Just(ifs), prop::collection::btree_set(-48i64..=48, n))
        })
        .prop_map(|(ifs, pts)| {
            let a = pts.into_iter().map(|p| q(p, 16)).collect();
            PiecewiseContraction::new(ifs, Breakpoints::new(a).unwrap()).unwrap()
        })
}

fn to_float(f: &PiecewiseContraction<Rational>) -> PiecewiseContraction<f64> {
    let slopes: Vec<f64> = f.ifs().branches().iter().map(|b| b.slope().to_f64()).collect();
    let intercepts: Vec<f64> = f.ifs().branches().iter().map(|b| b.intercept().to_f64()).collect();
    let a = f.breakpoints().as_slice().iter().map(Scalar::to_f64).collect();
    PiecewiseContraction::new(Ifs::from_parts(&slopes, &intercepts).unwrap(), Breakpoints::new(a).unwrap()).unwrap()
}

fn circle_map() -> impl Strategy<Value = CircleAffineMap<Rational>> {
    (1usize..=3)
        .prop_flat_map(|k| {
            (
                slope(),
                prop::collection::btree_set(1i64..24, k - 1),
                prop::collection::vec((0i64..24).prop_map(|n| q(n, 24)), k),
            )
        })
        .prop_map(|(lambda, a, b)| {
            let a = a.into_iter().map(|p| q(p, 24)).collect();
            CircleAffineMap::new(lambda, a, b).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn attractor_is_invariant(ifs in ifs(2..=5), words in prop::collection::vec(prop::collection::vec(1usize..=5, 1..=30), 1..8)) {
        let k_phi = ifs.attractor().clone();
        for w in words {
            let w: Vec<usize> = w.into_iter().map(|s| (s - 1) % ifs.k() + 1).collect();
            let phi = ifs.compose(&ItineraryWord::new(w, ifs.k()).unwrap()).unwrap();
            prop_assert!(k_phi.contains(&phi.apply(&k_phi.lo)));
            prop_assert!(k_phi.contains(&phi.apply(&k_phi.hi)));
        }
    }

    #[test]
    fn orbits_enter_the_attracting_interval(f in line_map(2..=4), scale in 0i64..=1000, sign in any::<bool>()) {
        let r = f.ifs().r_phi().clone();
        prop_assume!(!r.is_zero());
        let x0 = r.clone() * Rational::from_i64(if sign { scale } else { -scale });
        let lambda = f.ifs().lambda_phi().to_f64();
        let bound = ((r.to_f64() / (x0.abs().to_f64() + r.to_f64())).ln() / lambda.ln()).ceil().max(0.0) as usize;
        let k_phi = f.ifs().attractor();
        let mut x = x0;
        let mut entered = k_phi.contains(&x);
        for _ in 0..bound {
            if entered { break; }
            x = f.apply(&x);
            entered = k_phi.contains(&x);
        }
        prop_assert!(entered);
    }

    #[test]
    fn orbit_is_composition_along_itinerary(f in line_map(2..=4), x0 in small_rational(10), n in 1usize..=12) {
        let it = f.itinerary(&x0, n);
        let phi = f.ifs().compose(&ItineraryWord::new(it, f.k()).unwrap()).unwrap();
        let orbit = f.orbit(&x0, n);
        prop_assert_eq!(&phi.apply(&x0), &orbit[n - 1].0);
    }

    #[test]
    fn exact_and_float_backends_agree(f in line_map(2..=4), x0 in small_rational(5)) {
        let g = to_float(&f);
        let (ce, cf) = (f.ifs().constants(), g.ifs().constants());
        prop_assert!((ce.lambda_phi.to_f64() - cf.lambda_phi).abs() < 1e-12);
        prop_assert!((ce.r_phi.to_f64() - cf.r_phi).abs() < 1e-9 * (1.0 + cf.r_phi));
        // Itineraries agree while the exact orbit stays clear of the breakpoints.
        let (mut xe, mut xf) = (x0.clone(), x0.to_f64());
        for _ in 0..20 {
            let near = f.breakpoints().as_slice().iter().any(|a| (a.to_f64() - xe.to_f64()).abs() < 1e-6);
            if near { break; }
            let (ye, ie) = f.step(&xe);
            let (yf, iff) = g.step(&xf);
            prop_assert_eq!(ie, iff);
            prop_assert!((ye.to_f64() - yf).abs() < 1e-9);
            xe = ye;
            xf = yf;
        }
    }

    #[test]
    fn overlapping_layers_imply_singular_connection(f in line_map(2..=3), n in 2usize..=6) {
        let qs = q_set(&f, n);
        let witness = find_singular_connection(&f, n - 1);
        if qs.overlapping {
            prop_assert!(witness.is_some());
        }
        if witness.is_none() {
            prop_assert!(!qs.overlapping);
        }
    }

    #[test]
    fn deeper_cells_refine_shallower_ones(f in line_map(2..=3), n in 1usize..=6) {
        let shallow: BTreeSet<ItineraryWord> = enumerate_itineraries(&f, n).into_iter().map(|c| c.word).collect();
        let deep: BTreeSet<ItineraryWord> = enumerate_itineraries(&f, n + 1).into_iter().map(|c| c.word).collect();
        prop_assert_eq!(prefixes(&deep, n), shallow);
        let (a, b) = (q_set(&f, n).points, q_set(&f, n + 1).points);
        prop_assert!(a.iter().all(|x| b.contains(x)));
    }

    #[test]
    fn depth_m_covers_contain_deeper_centers(f in line_map(2..=3), m in 1usize..=4) {
        let zero = Rational::from_i64(0);
        let shallow = omega_centers(&f, &zero, m, 1);
        let deep = omega_centers(&f, &zero, 2 * m, 1);
        let r = f.ifs().r_phi().clone();
        let radius = (Rational::from_i64(1) + Rational::from_i64(2) * r) * f.ifs().lambda_phi().powi(m as u32);
        for (_, c) in &deep {
            prop_assert!(shallow.iter().any(|(_, s)| (c.clone() - s.clone()).abs() <= radius));
        }
    }

    #[test]
    fn cover_bound_scales_by_lambda(f in line_map(2..=3), n in 1usize..=6) {
        let zero = Rational::from_i64(0);
        let a = cover_certificate(&f, &zero, 1.0, n, 1).unwrap();
        let b = cover_certificate(&f, &zero, 1.0, n + 1, 1).unwrap();
        let lambda = f.ifs().lambda_phi().clone();
        let lhs = b.bound * Rational::from_i64(a.word_count as i64);
        let rhs = a.bound * lambda * Rational::from_i64(b.word_count as i64);
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn reduction_conjugates_rotated_maps(f in circle_map(), t in -99i64..=99, x0 in (0i64..100).prop_map(|n| q(n, 100))) {
        let red = reduce(&f).unwrap();
        let delta = red.gap.ell.clone() * q(t, 100);
        let g = red.rotated_line(&delta).unwrap();
        let h = red.conjugate(&delta).unwrap();
        let s = red.shift(&delta).unwrap();
        let fd = f.rotated(&delta);
        let mut x = x0.clone();
        let mut y = red.to_line(&x0);
        let mut z = y.clone() - s.clone();
        for _ in 0..100 {
            x = fd.apply(&x);
            y = g.apply(&y);
            z = h.apply(&z);
            prop_assert_eq!(&y, &(z.clone() + s.clone()));
            prop_assert_eq!(&red.to_line(&x), &y);
        }
    }

    #[test]
    fn more_budget_never_loses_a_classification(f in line_map(2..=3), x0 in small_rational(10), b1 in 1usize..200, extra in 0usize..2000) {
        let g = to_float(&f);
        let lo = classify(&g, &x0.to_f64(), &ClassifyBudget::with_iterations(b1));
        let hi = classify(&g, &x0.to_f64(), &ClassifyBudget::with_iterations(b1 + extra));
        if lo.is_periodic() {
            prop_assert_eq!(lo, hi);
        }
    }
}

#[test]
fn scan_flags_shrink_with_budget() {
    let f = CircleAffineMap::contracted_rotation(0.5, 0.7).unwrap();
    let small = scan(&f, 400, &ClassifyBudget::with_iterations(20)).unwrap();
    let large = scan(&f, 400, &ClassifyBudget::with_iterations(2000)).unwrap();
    for (a, b) in small.rows.iter().zip(&large.rows) {
        assert_eq!(a.delta, b.delta);
        if b.status == ScanStatus::Unresolved {
            assert_eq!(a.status, ScanStatus::Unresolved, "delta {}", a.delta);
        }
    }
    assert!(small.unresolved_count() > large.unresolved_count());
}

#[test]
fn rotated_map_scans_are_translates() {
    // Rotating f by a whole number of grid steps moves the gap by the same
    // amount and leaves its length alone, so the two grids line up.
    let f = CircleAffineMap::contracted_rotation(q(1, 2), q(7, 10));
    let f = f.unwrap();
    let grid = 80;
    let ell = reduce(&f).unwrap().gap.ell;
    let step = Rational::from_i64(2) * ell / Rational::from_i64(grid as i64);
    let shift = 8usize;
    let delta0 = step * Rational::from_i64(shift as i64);
    let budget = ClassifyBudget::with_iterations(5000);
    let to_f = |m: &CircleAffineMap<Rational>| {
        CircleAffineMap::new(m.lambda().to_f64(), vec![], vec![m.intercepts()[0].to_f64()]).unwrap()
    };
    let a = scan(&to_f(&f), grid, &budget).unwrap();
    let b = scan(&to_f(&f.rotated(&delta0)), grid, &budget).unwrap();
    let mut compared = 0;
    for j in shift..grid {
        let (ra, rb) = (&a.rows[j], &b.rows[j - shift]);
        assert!((ra.delta - (rb.delta + delta0.to_f64())).abs() < 1e-12);
        assert_eq!(ra.status, rb.status, "delta {}", ra.delta);
        if ra.status == ScanStatus::Periodic {
            assert_eq!(ra.period, rb.period);
        }
        compared += 1;
    }
    assert_eq!(compared, grid - shift);
}
