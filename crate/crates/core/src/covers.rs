//! Interval covers of the accumulation set `Ω^ε`, the separation quantity
//! that certifies finiteness of `Q_{a+δ}`, and the Hausdorff-measure upper
//! bound built from the covers.
//!
//! `Ω^ε` itself is never materialized. Only its depth-`n` centers
//! `φ_ω(0)`, `ω ∈ I^(n)(ε)`, are computed, since those are what the covers use.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::maps::{ItineraryWord, PiecewiseContraction};
use crate::scalar::{Backend, Scalar};
use crate::symbolic::{enlarged_itineraries, enumerate_itineraries, find_singular_connection, prefixes};

/// The pairs `(ω, φ_ω(0))` for `ω` in the sampled `I^(n)(ε)`, ordered by word.
pub fn omega_centers<S: Scalar>(
    f: &PiecewiseContraction<S>,
    epsilon: &S,
    n: usize,
    samples: usize,
) -> Vec<(ItineraryWord, S)> {
    assert!(n >= 1, "depth must be at least 1");
    centers_of(f, &enlarged_itineraries(f, epsilon, n, samples))
}

fn centers_of<S: Scalar>(f: &PiecewiseContraction<S>, words: &BTreeSet<ItineraryWord>) -> Vec<(ItineraryWord, S)> {
    words
        .iter()
        .map(|w| {
            let c = f.ifs().compose_symbols(w.symbols()).intercept().clone();
            (w.clone(), c)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverCertificate<S> {
    pub depth: usize,
    pub epsilon: S,
    pub k: usize,
    pub lambda_phi: S,
    pub r_phi: S,
    pub centers: Vec<(ItineraryWord, S)>,
    /// `#I^(n)(ε)`; the bound counts words, not distinct centers.
    pub word_count: usize,
    /// `(1 + 2 r_Φ) λ_Φ^n`.
    pub radius: S,
    pub dimension: f64,
    /// `(k-1) 2^d (1 + 2 r_Φ)^d #I^(n)(ε) λ_Φ^{nd}`.
    pub bound: S,
    /// Arithmetic that produced `bound`.
    pub bound_backend: Backend,
}

/// Depth-`n` cover of `Ω^ε` and the resulting `H^d` upper bound.
///
/// The exact backend keeps the bound rational when `d` is a positive
/// integer; every other case evaluates the powers in floating point.
pub fn cover_certificate<S: Scalar>(
    f: &PiecewiseContraction<S>,
    epsilon: &S,
    d: f64,
    n: usize,
    samples: usize,
) -> Result<CoverCertificate<S>> {
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::NonPositiveDimension(d));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("cover depth must be at least 1".into()));
    }
    let ifs = f.ifs();
    let k = ifs.k();
    let lambda = ifs.lambda_phi().clone();
    let r = ifs.r_phi().clone();
    let centers = omega_centers(f, epsilon, n, samples);
    let word_count = centers.len();
    let spread = S::one() + S::from_i64(2) * r.clone();
    let radius = spread.clone() * lambda.powi(n as u32);

    let integer_d = d.fract() == 0.0 && d <= u32::MAX as f64;
    let (bound, bound_backend) = if S::BACKEND == Backend::Exact && integer_d {
        let e = d as u32;
        let b = S::from_i64((k - 1) as i64)
            * S::from_i64(2).powi(e)
            * spread.powi(e)
            * S::from_i64(word_count as i64)
            * lambda.powi(e * n as u32);
        (b, Backend::Exact)
    } else {
        let b = (k - 1) as f64
            * 2f64.powf(d)
            * spread.to_f64().powf(d)
            * word_count as f64
            * lambda.to_f64().powf(n as f64 * d);
        (S::from_f64(b), Backend::Float)
    };

    Ok(CoverCertificate {
        depth: n,
        epsilon: epsilon.clone(),
        k,
        lambda_phi: lambda,
        r_phi: r,
        centers,
        word_count,
        radius,
        dimension: d,
        bound,
        bound_backend,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Separation<S> {
    /// Minimum of `|a_i + δ − φ_ω(0)|`; `None` when there are no centers.
    pub tau: Option<S>,
    /// `|δ| < ε`, the hypothesis of the finiteness lemma.
    pub inside_band: bool,
}

/// Minimum distance between the shifted breakpoints `a_i + δ` and the centers
/// of every depth `m = 1..=n`.
///
/// Centers come from the sampled `I^(m)(ε)` together with the itineraries of
/// `f_{Φ, a+δ}` itself, so the minimum never misses a word the finiteness
/// argument needs even when `δ` is off the sampling grid.
pub fn separation<S: Scalar>(
    f: &PiecewiseContraction<S>,
    delta: &S,
    epsilon: &S,
    n: usize,
    samples: usize,
) -> Separation<S> {
    assert!(n >= 1, "depth must be at least 1");
    let mut top = enlarged_itineraries(f, epsilon, n, samples);
    top.extend(enumerate_itineraries(&f.shifted(delta), n).into_iter().map(|c| c.word));
    let mut words = BTreeSet::new();
    for m in 1..=n {
        words.extend(prefixes(&top, m));
    }
    let shifted: Vec<S> = f.breakpoints().shifted(delta).as_slice().to_vec();
    let tau = centers_of(f, &words)
        .into_iter()
        .flat_map(|(_, c)| shifted.iter().map(move |a| (a.clone() - c.clone()).abs()))
        .reduce(S::min_of);
    Separation {
        tau,
        inside_band: delta.abs() < *epsilon,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FinitenessStatus {
    CertifiedFinite,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FinitenessVerdict<S> {
    pub delta: S,
    pub epsilon: S,
    pub tau: Option<S>,
    /// First depth with `2 r_Φ λ_Φ^n < τ`.
    pub n_star: Option<usize>,
    pub status: FinitenessStatus,
    pub inside_band: bool,
    /// Depth to which `(Φ, a+δ)` was searched for singular connections.
    pub guard_depth: usize,
    /// No singular connection up to `guard_depth`. Asymptotic periodicity
    /// follows from a certified-finite verdict only when this holds.
    pub no_singular_connection: bool,
}

/// Certifies that `Q_{a+δ}` is finite by separating `S_{a+δ}` from the
/// depth-`≤ n_max` centers.
///
/// If `2 r_Φ λ_Φ^{n*} < τ`, no `n*`-regular point of `K_Φ` is mapped onto a
/// shifted breakpoint at step `n*`. Then `D^(n*) ∩ K_Φ` is empty, and so is
/// every deeper layer, which leaves `Q_{a+δ} = Q^(n*) ∩ K_Φ`.
pub fn finiteness_certificate<S: Scalar>(
    f: &PiecewiseContraction<S>,
    delta: &S,
    epsilon: &S,
    n_max: usize,
    samples: usize,
    guard_depth: usize,
) -> FinitenessVerdict<S> {
    assert!(n_max >= 1, "n_max must be at least 1");
    let sep = separation(f, delta, epsilon, n_max, samples);
    let lambda = f.ifs().lambda_phi().clone();
    let two_r = S::from_i64(2) * f.ifs().r_phi().clone();
    let n_star = match &sep.tau {
        Some(tau) if !tau.is_zero() => (1..=n_max).find(|&n| two_r.clone() * lambda.powi(n as u32) < *tau),
        Some(_) => None,
        None => Some(1),
    };
    let status = if n_star.is_some() {
        FinitenessStatus::CertifiedFinite
    } else {
        FinitenessStatus::Inconclusive
    };
    let no_singular_connection = find_singular_connection(&f.shifted(delta), guard_depth).is_none();
    FinitenessVerdict {
        delta: delta.clone(),
        epsilon: epsilon.clone(),
        tau: sep.tau,
        n_star,
        status,
        inside_band: sep.inside_band,
        guard_depth,
        no_singular_connection,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Breakpoints, Ifs};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn example(a: Rational) -> PiecewiseContraction<Rational> {
        let ifs = Ifs::from_parts(&[q(1, 2), q(1, 2)], &[q(0, 1), q(1, 2)]).unwrap();
        PiecewiseContraction::new(ifs, Breakpoints::new(vec![a]).unwrap()).unwrap()
    }

    fn word(s: &[usize]) -> ItineraryWord {
        ItineraryWord::new(s.to_vec(), 2).unwrap()
    }

    #[test]
    fn centers_at_depth_three() {
        let c = omega_centers(&example(q(1, 2)), &q(0, 1), 3, 65);
        assert_eq!(c, vec![(word(&[1, 1, 1]), q(0, 1)), (word(&[2, 2, 2]), q(7, 8))]);
        let k = example(q(1, 2)).ifs().attractor().clone();
        assert!(c.iter().all(|(_, x)| k.contains(x)));
    }

    #[test]
    fn depth_one_centers_are_branch_images_of_zero() {
        let c = omega_centers(&example(q(1, 2)), &q(0, 1), 1, 65);
        assert_eq!(c, vec![(word(&[1]), q(0, 1)), (word(&[2]), q(1, 2))]);
    }

    #[test]
    fn bound_by_hand() {
        let f = example(q(1, 2));
        let c = cover_certificate(&f, &q(0, 1), 1.0, 3, 65).unwrap();
        assert_eq!(c.word_count, 2);
        assert_eq!(c.r_phi, q(3, 1));
        assert_eq!(c.radius, q(7, 8));
        assert_eq!(c.bound, q(7, 2));
        assert_eq!(c.bound_backend, Backend::Exact);

        let c4 = cover_certificate(&f, &q(0, 1), 1.0, 4, 65).unwrap();
        assert_eq!(c4.bound, q(7, 4));
        let c10 = cover_certificate(&f, &q(0, 1), 1.0, 10, 65).unwrap();
        assert_eq!(c10.bound, q(7, 256));
    }

    #[test]
    fn fractional_dimension_falls_back_to_float() {
        let c = cover_certificate(&example(q(1, 2)), &q(0, 1), 0.5, 3, 65).unwrap();
        assert_eq!(c.bound_backend, Backend::Float);
        let expected = 2f64.sqrt() * 7f64.sqrt() * 2.0 * 0.5f64.powf(1.5);
        assert!((c.bound.to_f64() - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonpositive_dimension() {
        let f = example(q(1, 2));
        for d in [0.0, -1.0, f64::NAN] {
            assert!(cover_certificate(&f, &q(0, 1), d, 3, 65).is_err());
        }
    }

    #[test]
    fn separation_is_zero_when_a_center_hits_the_breakpoint() {
        let s = separation(&example(q(1, 2)), &q(0, 1), &q(1, 100), 6, 65);
        assert_eq!(s.tau, Some(q(0, 1)));
        assert!(s.inside_band);
    }

    #[test]
    fn separation_positive_off_the_dyadics() {
        let f = example(q(2, 5));
        let s = separation(&f, &q(0, 1), &q(0, 1), 6, 1);
        let tau = s.tau.unwrap();
        assert!(tau > q(0, 1));
        // Q = {2/5}: the realized words are 1^m (center 0) and 2^m (centers
        // 1 - 2^-m), so the nearest center is 1/2.
        assert_eq!(tau, q(1, 10));
    }

    #[test]
    fn separation_nonincreasing_in_depth() {
        let f = example(q(2, 5));
        let taus: Vec<_> = (1..=7)
            .map(|n| separation(&f, &q(0, 1), &q(1, 50), n, 9).tau.unwrap())
            .collect();
        assert!(taus.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn verdicts() {
        // 6 (1/2)^n < 1/10 first holds at n = 6.
        let v = finiteness_certificate(&example(q(2, 5)), &q(0, 1), &q(0, 1), 5, 1, 12);
        assert_eq!(v.status, FinitenessStatus::Inconclusive);
        assert_eq!(v.n_star, None);

        let v = finiteness_certificate(&example(q(2, 5)), &q(0, 1), &q(0, 1), 12, 1, 12);
        assert_eq!(v.status, FinitenessStatus::CertifiedFinite);
        // 2/5 = 3/8 + 2/5 / 16 is fixed by a word of length 4.
        assert!(!v.no_singular_connection);
        assert_eq!(v.tau, Some(q(1, 10)));
        let v = finiteness_certificate(&example(q(2, 5)), &q(0, 1), &q(0, 1), 12, 1, 3);
        assert!(v.no_singular_connection);
        assert_eq!(v.n_star, Some(6));

        let v = finiteness_certificate(&example(q(1, 2)), &q(0, 1), &q(0, 1), 12, 1, 12);
        assert_eq!(v.status, FinitenessStatus::Inconclusive);
        assert_eq!(v.tau, Some(q(0, 1)));
    }
}
