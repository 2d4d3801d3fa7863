//! Symbolic dynamics of a piecewise contraction: preimage layers of the
//! breakpoints, regular cells with their itineraries, enlarged itinerary
//! sets over a band of breakpoint shifts, singular connections and the
//! subexponential growth check.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::maps::{Interval, ItineraryWord, PiecewiseContraction};
use crate::scalar::{dedup_sorted, sort_scalars, Scalar};

/// For every target `t` and branch `i`, the point `φ_i^{-1}(t)` when it lies
/// in branch `i`'s own cell. Sorted and deduplicated.
pub fn preimage_points<S: Scalar>(f: &PiecewiseContraction<S>, targets: &[S]) -> Vec<S> {
    let mut out = Vec::new();
    for t in targets {
        for (idx, branch) in f.ifs().branches().iter().enumerate() {
            let x = branch.preimage(t);
            if f.branch_index(&x) == idx + 1 {
                out.push(x);
            }
        }
    }
    sort_scalars(&mut out);
    dedup_sorted(&mut out, f.tol());
    out
}

/// The layers `D^(0) = S_a, …, D^(n-1)` and their union restricted to `K_Φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct PreimageSet<S> {
    pub depth: usize,
    /// Raw layers over the whole line; `layers[j]` is `D^(j)`.
    pub layers: Vec<Vec<S>>,
    /// `Q^(n) ∩ K_Φ`, sorted.
    pub points: Vec<S>,
    /// Some point belongs to two different layers.
    pub overlapping: bool,
}

impl<S: Scalar> PreimageSet<S> {
    /// `D^(j) ∩ K_Φ`.
    pub fn layer_in(&self, j: usize, k_phi: &Interval<S>) -> Vec<S> {
        self.layers[j].iter().filter(|x| k_phi.contains(x)).cloned().collect()
    }

    /// `Q^(n)` over the whole line, sorted and deduplicated.
    pub fn all_points(&self, tol: f64) -> Vec<S> {
        let mut all: Vec<S> = self.layers.iter().flatten().cloned().collect();
        sort_scalars(&mut all);
        dedup_sorted(&mut all, tol);
        all
    }
}

/// `Q^(n) = D^(0) ∪ … ∪ D^(n-1)`, layer by layer.
pub fn q_set<S: Scalar>(f: &PiecewiseContraction<S>, n: usize) -> PreimageSet<S> {
    assert!(n >= 1, "depth must be at least 1");
    let tol = f.tol();
    let mut layers = vec![f.breakpoints().as_slice().to_vec()];
    while layers.len() < n {
        let next = preimage_points(f, layers.last().expect("nonempty"));
        layers.push(next);
    }
    let mut tagged: Vec<(S, usize)> = layers
        .iter()
        .enumerate()
        .flat_map(|(j, layer)| layer.iter().map(move |x| (x.clone(), j)))
        .collect();
    tagged.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("ordered"));
    let overlapping = tagged
        .windows(2)
        .any(|w| w[0].1 != w[1].1 && w[0].0.approx_eq(&w[1].0, tol));

    let k_phi = f.ifs().attractor();
    let mut points: Vec<S> = tagged
        .into_iter()
        .map(|(x, _)| x)
        .filter(|x| k_phi.contains(x))
        .collect();
    dedup_sorted(&mut points, tol);
    PreimageSet {
        depth: n,
        layers,
        points,
        overlapping,
    }
}

/// `Q^(n) ∩ K_Φ`, computed from layers restricted to `K_Φ`.
///
/// `f(K_Φ) ⊂ K_Φ` gives `D^(j) ∩ K_Φ = f^{-1}(D^(j-1) ∩ K_Φ) ∩ K_Φ`, so points
/// outside `K_Φ` never need to be tracked.
pub fn attractor_cuts<S: Scalar>(f: &PiecewiseContraction<S>, n: usize) -> Vec<S> {
    let k_phi = f.ifs().attractor();
    let inside = |v: Vec<S>| -> Vec<S> { v.into_iter().filter(|x| k_phi.contains(x)).collect() };
    let mut layer = inside(f.breakpoints().as_slice().to_vec());
    let mut all = layer.clone();
    for _ in 1..n {
        if layer.is_empty() {
            break;
        }
        layer = inside(preimage_points(f, &layer));
        all.extend(layer.iter().cloned());
    }
    sort_scalars(&mut all);
    dedup_sorted(&mut all, f.tol());
    all
}

/// Whether `f^j(x) ∉ S_a` for every `0 ≤ j < n`.
pub fn is_regular<S: Scalar>(f: &PiecewiseContraction<S>, x: &S, n: usize) -> bool {
    let mut y = x.clone();
    for _ in 0..n {
        if f.is_breakpoint(&y) {
            return false;
        }
        y = f.apply(&y);
    }
    true
}

/// A maximal open interval of `n`-regular points sharing one itinerary.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularCell<S> {
    pub interval: Interval<S>,
    pub word: ItineraryWord,
}

/// The connected components of `K_Φ ∖ Q^(n)` and their itineraries.
///
/// Cells are open, so their endpoints are excluded. When `K_Φ` collapses to
/// the single point `{0}` the degenerate cell `[0, 0]` is returned if `0`
/// is `n`-regular.
pub fn enumerate_itineraries<S: Scalar>(f: &PiecewiseContraction<S>, n: usize) -> Vec<RegularCell<S>> {
    assert!(n >= 1, "depth must be at least 1");
    let k_phi = f.ifs().attractor().clone();
    if k_phi.lo == k_phi.hi {
        let x = k_phi.lo.clone();
        if !is_regular(f, &x, n) {
            return Vec::new();
        }
        let word = ItineraryWord::from_symbols(f.itinerary(&x, n));
        return vec![RegularCell {
            interval: k_phi,
            word,
        }];
    }
    let slack = S::slack(f.tol());
    let lo_cut = k_phi.lo.clone() + slack.clone();
    let hi_cut = k_phi.hi.clone() - slack;
    let mut bounds = vec![k_phi.lo.clone()];
    bounds.extend(
        attractor_cuts(f, n)
            .into_iter()
            .filter(|x| *x > lo_cut && *x < hi_cut),
    );
    bounds.push(k_phi.hi.clone());
    bounds
        .windows(2)
        .map(|w| {
            let interval = Interval::new(w[0].clone(), w[1].clone());
            let word = ItineraryWord::from_symbols(f.itinerary(&interval.midpoint(), n));
            RegularCell { interval, word }
        })
        .collect()
}

/// Uniform grid of `samples` shifts over `[-ε, ε]`, endpoints included, with
/// `0` always present. Sorted.
pub fn delta_grid<S: Scalar>(epsilon: &S, samples: usize) -> Vec<S> {
    if epsilon.is_zero() || samples <= 1 {
        return vec![S::zero()];
    }
    let span = S::from_i64(2) * epsilon.clone();
    let last = S::from_i64(samples as i64 - 1);
    let mut grid: Vec<S> = (0..samples)
        .map(|j| -epsilon.clone() + span.clone() * S::from_i64(j as i64) / last.clone())
        .collect();
    if !grid.iter().any(|d| d.is_zero()) {
        grid.push(S::zero());
        sort_scalars(&mut grid);
    }
    grid
}

/// The `n`-prefixes of a set of words.
pub fn prefixes(words: &BTreeSet<ItineraryWord>, n: usize) -> BTreeSet<ItineraryWord> {
    words.iter().map(|w| w.prefix(n)).collect()
}

/// Finite-sample approximation from below of `I^(n)(ε)`: the union of the
/// itineraries of `f_{Φ, a+δ}` over [`delta_grid`].
pub fn enlarged_itineraries<S: Scalar>(
    f: &PiecewiseContraction<S>,
    epsilon: &S,
    n: usize,
    samples: usize,
) -> BTreeSet<ItineraryWord> {
    delta_grid(epsilon, samples)
        .into_par_iter()
        .map(|delta| {
            enumerate_itineraries(&f.shifted(&delta), n)
                .into_iter()
                .map(|c| c.word)
                .collect::<BTreeSet<_>>()
        })
        .reduce(BTreeSet::new, |mut a, b| {
            a.extend(b);
            a
        })
}

/// A word `ω` with `φ_ω(a_source) = a_target`.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularConnectionWitness<S> {
    pub word: ItineraryWord,
    /// 1-based breakpoint index.
    pub source: usize,
    /// 1-based breakpoint index.
    pub target: usize,
    /// `φ_ω(a_source)`, recomputed by composition.
    pub value: S,
}

/// Exhaustive search for `φ_ω(a_i) = a_j` over all words of length at most
/// `depth`. Returns the first witness in (length, word, source, target)
/// order; `None` only means there is none up to `depth`.
///
/// Meet in the middle: a word of length `n` is split as `u·w` with
/// `|u| = ⌈n/2⌉`; forward images `φ_u(a_i)` are matched against backward
/// points `y` with `φ_w(y) = a_j`. Every forward image stays in
/// `[-R, R]`, `R = max(2 r_Φ, max |a_i|)`, which is invariant under every
/// branch, so backward points outside it are dropped.
pub fn find_singular_connection<S: Scalar>(
    f: &PiecewiseContraction<S>,
    depth: usize,
) -> Option<SingularConnectionWitness<S>> {
    let ifs = f.ifs();
    let breaks = f.breakpoints().as_slice();
    if breaks.is_empty() || depth == 0 {
        return None;
    }
    let tol = f.tol();
    let slack = S::slack(tol);
    let radius = breaks
        .iter()
        .map(|a| a.abs())
        .fold(S::from_i64(2) * ifs.r_phi().clone(), S::max_of)
        + slack.clone();

    struct Node<S> {
        symbols: Vec<usize>,
        index: usize,
        value: S,
    }

    let seed = || -> Vec<Node<S>> {
        breaks
            .iter()
            .enumerate()
            .map(|(i, a)| Node {
                symbols: Vec::new(),
                index: i + 1,
                value: a.clone(),
            })
            .collect()
    };
    let mut forward = vec![seed()];
    let mut backward = vec![seed()];

    for n in 1..=depth {
        let head = n.div_ceil(2);
        let tail = n - head;
        while forward.len() <= head {
            let prev = forward.last().expect("seeded");
            let next = prev
                .iter()
                .flat_map(|node| {
                    ifs.branches().iter().enumerate().map(move |(b, phi)| {
                        let mut symbols = node.symbols.clone();
                        symbols.push(b + 1);
                        Node {
                            symbols,
                            index: node.index,
                            value: phi.apply(&node.value),
                        }
                    })
                })
                .collect();
            forward.push(next);
        }
        while backward.len() <= tail {
            let prev = backward.last().expect("seeded");
            let mut next: Vec<Node<S>> = prev
                .iter()
                .flat_map(|node| {
                    ifs.branches().iter().enumerate().filter_map(|(b, phi)| {
                        let y = phi.preimage(&node.value);
                        if y.abs() > radius {
                            return None;
                        }
                        let mut symbols = Vec::with_capacity(node.symbols.len() + 1);
                        symbols.push(b + 1);
                        symbols.extend_from_slice(&node.symbols);
                        Some(Node {
                            symbols,
                            index: node.index,
                            value: y,
                        })
                    })
                })
                .collect();
            next.sort_by(|a, b| a.value.partial_cmp(&b.value).expect("ordered"));
            backward.push(next);
        }
        let targets = &backward[tail];
        let mut best: Option<(Vec<usize>, usize, usize)> = None;
        for node in &forward[head] {
            let lo = node.value.clone() - slack.clone();
            let hi = node.value.clone() + slack.clone();
            let start = targets.partition_point(|t| t.value < lo);
            for t in targets[start..].iter().take_while(|t| t.value <= hi) {
                let mut symbols = node.symbols.clone();
                symbols.extend_from_slice(&t.symbols);
                let candidate = (symbols, node.index, t.index);
                if best.as_ref().is_none_or(|b| candidate < *b) {
                    best = Some(candidate);
                }
            }
        }
        if let Some((symbols, source, target)) = best {
            let word = ItineraryWord::from_symbols(symbols);
            let value = ifs.compose_symbols(word.symbols()).apply(&breaks[source - 1]);
            debug_assert!(value.approx_eq(&breaks[target - 1], tol));
            return Some(SingularConnectionWitness {
                word,
                source,
                target,
                value,
            });
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthRow {
    pub n: usize,
    /// `α_n(ε)`.
    pub count: usize,
    /// `log(α_n) / n`.
    pub log_rate: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrowthTable<S> {
    pub epsilon: S,
    pub samples: usize,
    pub rows: Vec<GrowthRow>,
}

/// Itinerary counts `α_n(ε)` for `n = 1..=n_max`.
///
/// Every depth-`n` cell contains a depth-`n_max` cell whose word extends its
/// own, so the depth-`n` words are exactly the `n`-prefixes of the
/// depth-`n_max` words. One enumeration per shift serves every depth.
pub fn growth_table<S: Scalar>(
    f: &PiecewiseContraction<S>,
    n_max: usize,
    epsilon: &S,
    samples: usize,
) -> GrowthTable<S> {
    let counts = itinerary_counts(f, n_max, epsilon, samples);
    let rows = counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(n, &count)| GrowthRow {
            n,
            count,
            log_rate: if count == 0 {
                f64::NEG_INFINITY
            } else {
                (count as f64).ln() / n as f64
            },
        })
        .collect();
    GrowthTable {
        epsilon: epsilon.clone(),
        samples,
        rows,
    }
}

/// `α_0 = 1, α_1, …, α_{n_max}`.
fn itinerary_counts<S: Scalar>(f: &PiecewiseContraction<S>, n_max: usize, epsilon: &S, samples: usize) -> Vec<usize> {
    let top = enlarged_itineraries(f, epsilon, n_max, samples);
    let mut counts = vec![usize::from(!top.is_empty())];
    counts.extend((1..=n_max).map(|n| prefixes(&top, n).len()));
    counts
}

#[derive(Clone, Debug, PartialEq)]
pub enum DoublingStatus {
    /// `α_{n+m}(ε) ≤ 2 α_n(ε)` held for every checked `n`.
    Holds,
    /// Some `n ≥ n0` broke the inequality.
    Violated,
    /// `4 λ_Φ^n r_Φ < τ(m)` never happened for `n ≤ n_max`.
    NoN0,
    /// A singular connection exists within the guard depth.
    SingularConnection,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DoublingReport<S> {
    pub rho: f64,
    /// `⌈log 2 / log ρ⌉`.
    pub m: usize,
    /// Minimum gap of `Q^(m)_{a+δ}` over the δ-grid; `None` when every
    /// grid set has fewer than two points (an infinite gap).
    pub tau: Option<S>,
    pub n0: Option<usize>,
    pub holds: bool,
    pub status: DoublingStatus,
    /// `α_0 … α_{n_max}`.
    pub counts: Vec<usize>,
    /// Values of `n` with `α_{n+m} > 2 α_n`.
    pub violations: Vec<usize>,
    /// `2^{-n0/m} α_{n0}`.
    pub constant: Option<f64>,
    /// Whether `α_n ≤ C ρ^n` for `n0 ≤ n ≤ n_max`.
    pub bound_holds: bool,
    /// `max_{0≤r<m} 2^{-(n0+r)/m} α_{n0+r}`. Iterating the doubling
    /// inequality from each residue class mod `m` only gives this constant;
    /// `constant` alone can fail when `α` jumps inside the first period.
    pub residue_constant: Option<f64>,
    /// Whether `α_n ≤ residue_constant · ρ^n` for `n0 ≤ n ≤ n_max`.
    pub residue_bound_holds: bool,
    /// Largest grid `|δ|` such that `#Q^(m)_{a+δ}` matches `δ = 0` on the
    /// whole band up to it. An empirical stand-in for `ε0(m)`.
    pub stable_band: S,
    pub guard_depth: usize,
    pub witness: Option<SingularConnectionWitness<S>>,
}

/// `⌈log 2 / log ρ⌉`, robust to rounding when `ρ` is an exact root of 2.
pub fn doubling_period(rho: f64) -> usize {
    assert!(rho > 1.0, "rho must exceed 1");
    let ratio = std::f64::consts::LN_2 / rho.ln();
    (ratio - 1e-9).ceil().max(1.0) as usize
}

/// Runs the doubling argument behind the subexponential growth of
/// itineraries on the sampled band `|δ| ≤ ε`.
pub fn check_doubling<S: Scalar>(
    f: &PiecewiseContraction<S>,
    epsilon: &S,
    rho: f64,
    n_max: usize,
    samples: usize,
    guard_depth: usize,
) -> DoublingReport<S> {
    let m = doubling_period(rho);
    let tol = f.tol();
    let grid = delta_grid(epsilon, samples);

    let mut report = DoublingReport {
        rho,
        m,
        tau: None,
        n0: None,
        holds: false,
        status: DoublingStatus::NoN0,
        counts: Vec::new(),
        violations: Vec::new(),
        constant: None,
        bound_holds: false,
        residue_constant: None,
        residue_bound_holds: false,
        stable_band: S::zero(),
        guard_depth,
        witness: None,
    };

    if let Some(w) = find_singular_connection(f, guard_depth) {
        report.witness = Some(w);
        report.status = DoublingStatus::SingularConnection;
        return report;
    }

    let sizes: Vec<(S, usize, Option<S>)> = grid
        .par_iter()
        .map(|delta| {
            let pts = q_set(&f.shifted(delta), m).all_points(tol);
            let gap = pts
                .windows(2)
                .map(|w| w[1].clone() - w[0].clone())
                .reduce(S::min_of);
            (delta.clone(), pts.len(), gap)
        })
        .collect();
    report.tau = sizes.iter().filter_map(|(_, _, g)| g.clone()).reduce(S::min_of);

    let base = sizes
        .iter()
        .find(|(d, _, _)| d.is_zero())
        .map(|(_, n, _)| *n)
        .unwrap_or(0);
    let mut by_radius: Vec<(S, usize)> = sizes.iter().map(|(d, n, _)| (d.abs(), *n)).collect();
    by_radius.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("ordered"));
    for (radius, count) in by_radius {
        if count != base {
            break;
        }
        report.stable_band = radius;
    }

    let lambda = f.ifs().lambda_phi().clone();
    let four_r = S::from_i64(4) * f.ifs().r_phi().clone();
    report.n0 = (0..=n_max).find(|&n| match &report.tau {
        None => true,
        Some(tau) => four_r.clone() * lambda.powi(n as u32) < *tau,
    });

    report.counts = itinerary_counts(f, n_max, epsilon, samples);
    let Some(n0) = report.n0 else {
        return report;
    };
    let counts = &report.counts;
    report.violations = (n0..=n_max.saturating_sub(m))
        .filter(|&n| n + m <= n_max && counts[n + m] > 2 * counts[n])
        .collect();
    report.holds = report.violations.is_empty();
    report.status = if report.holds {
        DoublingStatus::Holds
    } else {
        DoublingStatus::Violated
    };
    let c = 2f64.powf(-(n0 as f64) / m as f64) * counts[n0] as f64;
    report.constant = Some(c);
    let within = |c: f64| (n0..=n_max).all(|n| counts[n] as f64 <= c * rho.powi(n as i32) * (1.0 + 1e-12));
    report.bound_holds = within(c);
    let rc = (n0..(n0 + m).min(n_max + 1))
        .map(|n| 2f64.powf(-(n as f64) / m as f64) * counts[n] as f64)
        .fold(0.0, f64::max);
    report.residue_constant = Some(rc);
    report.residue_bound_holds = within(rc);
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::{Breakpoints, Ifs};
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn line(slopes: &[Rational], intercepts: &[Rational], breaks: &[Rational]) -> PiecewiseContraction<Rational> {
        let ifs = Ifs::from_parts(slopes, intercepts).unwrap();
        PiecewiseContraction::new(ifs, Breakpoints::new(breaks.to_vec()).unwrap()).unwrap()
    }

    fn worked() -> PiecewiseContraction<Rational> {
        line(&[q(1, 2), q(1, 2)], &[q(0, 1), q(1, 2)], &[q(1, 2)])
    }

    fn connected() -> PiecewiseContraction<Rational> {
        line(&[q(1, 2), q(1, 2)], &[q(1, 4), q(1, 2)], &[q(1, 2)])
    }

    fn word(s: &[usize]) -> ItineraryWord {
        ItineraryWord::from_symbols(s.to_vec())
    }

    #[test]
    fn preimages_by_branchwise_solve() {
        let f = worked();
        assert!(preimage_points(&f, &[q(1, 2)]).is_empty());
        assert!(preimage_points(&f, &[q(1, 4)]).is_empty());
        assert_eq!(preimage_points(&f, &[q(1, 8)]), vec![q(1, 4)]);
    }

    #[test]
    fn q_set_layers() {
        let f = worked();
        let qs = q_set(&f, 5);
        assert_eq!(qs.layers[0], vec![q(1, 2)]);
        assert!(qs.layers[1..].iter().all(|l| l.is_empty()));
        assert_eq!(qs.points, vec![q(1, 2)]);
        assert!(!qs.overlapping);

        assert_eq!(q_set(&f, 1).points, f.breakpoints().as_slice().to_vec());

        // a_1 = 1/2 is the fixed point of branch 2, so it is its own preimage.
        let g = line(&[q(1, 3), q(1, 2)], &[q(5, 1), q(1, 4)], &[q(1, 2)]);
        let qs = q_set(&g, 2);
        assert_eq!(qs.layers[1], vec![q(-27, 2), q(1, 2)]);
        assert!(qs.overlapping);
    }

    #[test]
    fn regularity() {
        let f = worked();
        assert!(!is_regular(&f, &q(1, 2), 3));
        assert!(is_regular(&f, &q(1, 4), 10));
        assert!(!is_regular(&connected(), &q(1, 2), 1));
    }

    #[test]
    fn worked_example_cells() {
        let cells = enumerate_itineraries(&worked(), 4);
        assert_eq!(cells.len(), 2);
        assert_eq!(cells[0].interval, Interval::new(q(-6, 1), q(1, 2)));
        assert_eq!(cells[0].word, word(&[1, 1, 1, 1]));
        assert_eq!(cells[1].interval, Interval::new(q(1, 2), q(6, 1)));
        assert_eq!(cells[1].word, word(&[2, 2, 2, 2]));
    }

    #[test]
    fn depth_one_words_are_the_branches() {
        let f = line(
            &[q(1, 2), q(-1, 3), q(1, 4)],
            &[q(1, 1), q(0, 1), q(-1, 1)],
            &[q(-1, 2), q(1, 3)],
        );
        let words: Vec<_> = enumerate_itineraries(&f, 1).into_iter().map(|c| c.word).collect();
        assert_eq!(words, vec![word(&[1]), word(&[2]), word(&[3])]);
    }

    #[test]
    fn degenerate_attractor_has_one_point_cell() {
        let f = line(&[q(1, 2), q(1, 3)], &[q(0, 1), q(0, 1)], &[q(1, 1)]);
        let cells = enumerate_itineraries(&f, 3);
        assert_eq!(cells.len(), 1);
        assert_eq!(cells[0].word, word(&[1, 1, 1]));
        let g = line(&[q(1, 2), q(1, 3)], &[q(0, 1), q(0, 1)], &[q(0, 1)]);
        assert!(enumerate_itineraries(&g, 3).is_empty());
    }

    #[test]
    fn delta_grid_contains_zero_and_endpoints() {
        let g = delta_grid(&q(1, 10), 4);
        assert_eq!(g.first(), Some(&q(-1, 10)));
        assert_eq!(g.last(), Some(&q(1, 10)));
        assert!(g.contains(&q(0, 1)));
        assert_eq!(g.len(), 5);
        assert_eq!(delta_grid(&q(1, 10), 5).len(), 5);
        assert_eq!(delta_grid(&q(0, 1), 65), vec![q(0, 1)]);
    }

    #[test]
    fn enlarged_set_examples() {
        let f = worked();
        let plain: BTreeSet<_> = enumerate_itineraries(&f, 4).into_iter().map(|c| c.word).collect();
        assert_eq!(enlarged_itineraries(&f, &q(0, 1), 4, 65), plain);
        assert_eq!(enlarged_itineraries(&f, &q(1, 100), 4, 101).len(), 2);
    }

    #[test]
    fn singular_connection_examples() {
        let w = find_singular_connection(&connected(), 1).unwrap();
        assert_eq!((w.word.clone(), w.source, w.target, w.value), (word(&[1]), 1, 1, q(1, 2)));
        assert!(find_singular_connection(&worked(), 12).is_none());

        // a_1 is the fixed point of branch 2.
        let f = line(&[q(1, 3), q(1, 2)], &[q(5, 1), q(1, 4)], &[q(1, 2)]);
        let w = find_singular_connection(&f, 5).unwrap();
        assert_eq!(w.word, word(&[2]));
    }

    #[test]
    fn witness_order_prefers_short_then_lexicographic() {
        // φ_1(a_2) = a_1 and φ_2(a_1) = a_2; the (1), source 2 witness is first.
        let f = line(
            &[q(1, 2), q(1, 2), q(1, 2)],
            &[q(-1, 2), q(1, 1), q(0, 1)],
            &[q(0, 1), q(1, 1)],
        );
        let w = find_singular_connection(&f, 3).unwrap();
        assert_eq!((w.word, w.source, w.target), (word(&[1]), 2, 1));
    }

    #[test]
    fn growth_of_worked_example_is_flat() {
        let t = growth_table(&worked(), 12, &q(0, 1), 65);
        assert!(t.rows.iter().all(|r| r.count == 2));
        assert!(t.rows.last().unwrap().log_rate < 0.06);
    }

    #[test]
    fn doubling_on_worked_example_is_vacuous() {
        let r = check_doubling(&worked(), &q(0, 1), 2f64.sqrt(), 12, 65, 12);
        assert_eq!(r.m, 2);
        assert_eq!(r.tau, None);
        assert_eq!(r.n0, Some(0));
        assert!(r.holds);
        assert_eq!(r.status, DoublingStatus::Holds);
        // α_0 = 1 and α_1 = 2: the constant 2^{-n0/m} α_{n0} = 1 is already
        // beaten at n = 1, while the residue-class constant max(1, 2/√2) works.
        assert_eq!(r.constant, Some(1.0));
        assert!(!r.bound_holds);
        assert!((r.residue_constant.unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert!(r.residue_bound_holds);
    }

    #[test]
    fn doubling_period_examples() {
        assert_eq!(doubling_period(2.0), 1);
        assert_eq!(doubling_period(2f64.sqrt()), 2);
        assert_eq!(doubling_period(1.1), 8);
    }

    #[test]
    fn doubling_refuses_singular_pairs() {
        let r = check_doubling(&connected(), &q(0, 1), 2.0, 8, 1, 4);
        assert_eq!(r.status, DoublingStatus::SingularConnection);
        assert!(!r.holds);
    }
}
