use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::maps::PiecewiseContraction;
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};
use crate::scanner::circle::{reduce, CircleAffineMap};

/// Limits for [`classify`].
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifyBudget {
    /// Total number of map evaluations, transient included.
    pub max_iterations: usize,
    pub transient_skip: usize,
    /// Float equality tolerance; the exact backend ignores it.
    pub tolerance: f64,
    pub period_cap: usize,
}

impl Default for ClassifyBudget {
    fn default() -> Self {
        Self {
            max_iterations: 100_000,
            transient_skip: 0,
            tolerance: DEFAULT_TOLERANCE,
            period_cap: 256,
        }
    }
}

impl ClassifyBudget {
    pub fn with_iterations(max_iterations: usize) -> Self {
        Self {
            max_iterations,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max_iterations must be positive".into()));
        }
        if self.period_cap == 0 {
            return Err(Error::InvalidArgument("period_cap must be positive".into()));
        }
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidArgument("tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ClassificationStatus<S> {
    /// The orbit is attracted to the periodic orbit `orbit`, listed from
    /// the point the orbit was last near.
    Periodic { period: usize, orbit: Vec<S> },
    Undecided,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S> {
    pub status: ClassificationStatus<S>,
    pub iterations_used: usize,
}

impl<S> Classification<S> {
    pub fn period(&self) -> Option<usize> {
        match &self.status {
            ClassificationStatus::Periodic { period, .. } => Some(*period),
            ClassificationStatus::Undecided => None,
        }
    }

    pub fn is_periodic(&self) -> bool {
        self.period().is_some()
    }
}

/// Tolerance for `f^p(x*) = x*` in float mode: `tol / (1 - λ_Φ)`.
pub(crate) fn equality_tolerance<S: Scalar>(f: &PiecewiseContraction<S>, tol: f64) -> f64 {
    tol / (1.0 - f.ifs().lambda_phi().to_f64())
}

/// Decides whether the orbit of `x0` is attracted to a periodic orbit.
///
/// After the transient the orbit is followed with Brent's tortoise and hare.
/// Each time the hare meets the tortoise, and at every power-of-two
/// checkpoint, the recent branch symbols are searched for a period `p`. The
/// fixed point `z` of the composed word must have that word as its
/// itinerary, period exactly `p`, and the balls around `z_j` of radius
/// `|x - z|` times the partial slope products must each avoid the
/// breakpoints. Then every later iterate stays in those balls and
/// converges to the orbit of `z`, so `Periodic` is never a guess.
///
/// The checkpoint schedule does not depend on the budget: a larger budget
/// never turns `Periodic` into `Undecided`.
pub fn classify<S: Scalar>(f: &PiecewiseContraction<S>, x0: &S, budget: &ClassifyBudget) -> Classification<S> {
    let eq_tol = equality_tolerance(f, budget.tolerance);
    let window = 2 * budget.period_cap;
    let mut x = x0.clone();
    let mut used = 0;
    while used < budget.transient_skip.min(budget.max_iterations) {
        x = f.apply(&x);
        used += 1;
    }

    let mut history: VecDeque<usize> = VecDeque::with_capacity(window);
    let mut tortoise = x.clone();
    let mut power = 1usize;
    let mut lam = 0usize;
    while used < budget.max_iterations {
        let (y, i) = f.step(&x);
        x = y;
        used += 1;
        if history.len() == window {
            history.pop_front();
        }
        history.push_back(i);
        lam += 1;

        let met = x.approx_eq(&tortoise, eq_tol);
        if met || lam == power {
            let symbols: Vec<usize> = history.iter().copied().collect();
            if let Some(orbit) = certify(f, &x, &symbols, budget.period_cap, budget.tolerance, eq_tol) {
                return Classification {
                    status: ClassificationStatus::Periodic {
                        period: orbit.len(),
                        orbit,
                    },
                    iterations_used: used,
                };
            }
        }
        if lam == power {
            power = power.saturating_mul(2);
            tortoise = x.clone();
            lam = 0;
        } else if met {
            tortoise = x.clone();
            lam = 0;
        }
    }
    Classification {
        status: ClassificationStatus::Undecided,
        iterations_used: used,
    }
}

/// Candidate periods `p ≤ cap` of the most recent symbols, smallest first:
/// the last `min(2p, len)` symbols must repeat with period `p`. Read off
/// the Z-function of the reversed window.
fn recent_periods(s: &[usize], cap: usize) -> Vec<usize> {
    let n = s.len();
    let r: Vec<usize> = s.iter().rev().copied().collect();
    let mut z = vec![0usize; n];
    let (mut l, mut h) = (0usize, 0usize);
    for i in 1..n {
        if i < h {
            z[i] = (h - i).min(z[i - l]);
        }
        while i + z[i] < n && r[z[i]] == r[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > h {
            l = i;
            h = i + z[i];
        }
    }
    (1..=cap.min(n)).filter(|&p| p == n || z[p] >= p.min(n - p)).collect()
}

fn certify<S: Scalar>(
    f: &PiecewiseContraction<S>,
    x: &S,
    symbols: &[usize],
    period_cap: usize,
    tol: f64,
    eq_tol: f64,
) -> Option<Vec<S>> {
    let ifs = f.ifs();
    let margin = S::slack(tol);
    let breaks = f.breakpoints().as_slice();
    let k = f.k();
    for p in recent_periods(symbols, period_cap) {
        let word = &symbols[symbols.len() - p..];
        let z = ifs.compose_symbols(word).fixed_point();

        let mut pts = Vec::with_capacity(p);
        let mut y = z.clone();
        let mut ok = true;
        for (j, &sym) in word.iter().enumerate() {
            if (j > 0 && y.approx_eq(&z, eq_tol)) || f.branch_index(&y) != sym {
                ok = false;
                break;
            }
            pts.push(y.clone());
            y = ifs.branch(sym).apply(&y);
        }
        if !ok || !y.approx_eq(&z, eq_tol) {
            continue;
        }

        let mut radius = (x.clone() - z.clone()).abs();
        let fits = word.iter().zip(&pts).all(|(&sym, c)| {
            let lo_ok = sym == 1 || breaks[sym - 2] <= c.clone() - radius.clone() - margin.clone();
            let hi_ok = sym == k || c.clone() + radius.clone() + margin.clone() < breaks[sym - 1];
            radius = radius.clone() * ifs.branch(sym).slope().abs();
            lo_ok && hi_ok
        });
        if fits {
            return Some(pts);
        }
    }
    None
}

/// Start points covering every cell of `K_Φ` cut by the breakpoints: the
/// midpoint of each piece plus both ends of `K_Φ`.
pub fn default_start_points<S: Scalar>(f: &PiecewiseContraction<S>) -> Vec<S> {
    let k_phi = f.ifs().attractor();
    if k_phi.lo == k_phi.hi {
        return vec![k_phi.lo.clone()];
    }
    let mut bounds = vec![k_phi.lo.clone()];
    bounds.extend(
        f.breakpoints()
            .as_slice()
            .iter()
            .filter(|a| **a > k_phi.lo && **a < k_phi.hi)
            .cloned(),
    );
    bounds.push(k_phi.hi.clone());
    let two = S::from_i64(2);
    let mut out: Vec<S> = bounds
        .windows(2)
        .map(|w| (w[0].clone() + w[1].clone()) / two.clone())
        .collect();
    out.push(k_phi.lo.clone());
    out.push(k_phi.hi.clone());
    out
}

/// [`classify`] for a circle map, run on its line reduction. The orbit in
/// the result is in circle coordinates.
pub fn classify_circle<S: Scalar>(
    f: &CircleAffineMap<S>,
    x0: &S,
    budget: &ClassifyBudget,
) -> Result<Classification<S>> {
    let red = reduce(f)?;
    let mut out = classify(&red.line, &red.to_line(x0), budget);
    if let ClassificationStatus::Periodic { orbit, .. } = &mut out.status {
        for y in orbit.iter_mut() {
            *y = red.to_circle(y);
        }
    }
    Ok(out)
}
