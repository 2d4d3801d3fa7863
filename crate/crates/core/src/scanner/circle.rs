//! Contracted circle maps `f(x) = {λx + b_i}` and their reduction to a
//! piecewise contraction of the line.

use crate::error::{Error, Result};
use crate::maps::{Breakpoints, Ifs, PiecewiseContraction};
use crate::scalar::{dedup_sorted, sort_scalars, Scalar, DEFAULT_TOLERANCE};

/// `f(x) = {λx + b_i}` on `[a_{i-1}, a_i)`, with `a_0 = 0` and `a_k = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleAffineMap<S> {
    lambda: S,
    breakpoints: Vec<S>,
    intercepts: Vec<S>,
    tol: f64,
}

impl<S: Scalar> CircleAffineMap<S> {
    /// `breakpoints` are the interior points `a_1 < … < a_{k-1}` in `(0, 1)`.
    pub fn new(lambda: S, breakpoints: Vec<S>, intercepts: Vec<S>) -> Result<Self> {
        if lambda.abs() >= S::one() {
            return Err(Error::NotContracting(lambda.to_string()));
        }
        let inside = breakpoints.iter().all(|a| *a > S::zero() && *a < S::one());
        let increasing = breakpoints.windows(2).all(|w| w[0] < w[1]);
        if !inside || !increasing {
            return Err(Error::CircleBreakpoints);
        }
        if intercepts.len() != breakpoints.len() + 1 {
            return Err(Error::InterceptCount {
                intervals: breakpoints.len() + 1,
                got: intercepts.len(),
            });
        }
        Ok(Self {
            lambda,
            breakpoints,
            intercepts,
            tol: DEFAULT_TOLERANCE,
        })
    }

    /// `{λx + b}` on the whole circle.
    pub fn contracted_rotation(lambda: S, b: S) -> Result<Self> {
        Self::new(lambda, Vec::new(), vec![b])
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn lambda(&self) -> &S {
        &self.lambda
    }

    pub fn breakpoints(&self) -> &[S] {
        &self.breakpoints
    }

    pub fn intercepts(&self) -> &[S] {
        &self.intercepts
    }

    /// Number of intervals.
    pub fn k(&self) -> usize {
        self.intercepts.len()
    }

    /// 1-based interval of `x ∈ [0, 1)`.
    pub fn cell_index(&self, x: &S) -> usize {
        self.breakpoints.partition_point(|a| a <= x) + 1
    }

    pub fn apply(&self, x: &S) -> S {
        let x = x.fract_part();
        let i = self.cell_index(&x);
        (self.lambda.clone() * x + self.intercepts[i - 1].clone()).fract_part()
    }

    /// `f_δ = R_δ ∘ f`.
    pub fn rotated(&self, delta: &S) -> Self {
        Self {
            lambda: self.lambda.clone(),
            breakpoints: self.breakpoints.clone(),
            intercepts: self.intercepts.iter().map(|b| b.clone() + delta.clone()).collect(),
            tol: self.tol,
        }
    }

    /// `f(x0), …, f^n(x0)`.
    pub fn orbit(&self, x0: &S, n: usize) -> Vec<S> {
        let mut out = Vec::with_capacity(n);
        let mut x = x0.fract_part();
        for _ in 0..n {
            x = self.apply(&x);
            out.push(x.clone());
        }
        out
    }

    fn cell_bounds(&self) -> Vec<S> {
        let mut b = vec![S::zero()];
        b.extend(self.breakpoints.iter().cloned());
        b.push(S::one());
        b
    }
}

/// A component of `I ∖ f(I)`: midpoint `c` and clearance `ℓ = dist(c, f(I))`.
#[derive(Clone, Debug, PartialEq)]
pub struct Gap<S> {
    pub c: S,
    pub ell: S,
}

/// The largest gap of `f(I)` in the circle, ties going to the smaller
/// midpoint.
pub fn gap<S: Scalar>(f: &CircleAffineMap<S>) -> Result<Gap<S>> {
    if f.lambda.is_zero() {
        return Err(Error::ZeroSlopeCircle);
    }
    let one = S::one();
    let bounds = f.cell_bounds();
    let mut arcs: Vec<(S, S)> = Vec::new();
    for (i, w) in bounds.windows(2).enumerate() {
        let b = &f.intercepts[i];
        let y0 = f.lambda.clone() * w[0].clone() + b.clone();
        let y1 = f.lambda.clone() * w[1].clone() + b.clone();
        let len = (y1.clone() - y0.clone()).abs();
        let lo = S::min_of(y0, y1).fract_part();
        let hi = lo.clone() + len;
        if hi > one {
            arcs.push((lo, one.clone()));
            arcs.push((S::zero(), hi - one.clone()));
        } else {
            arcs.push((lo, hi));
        }
    }
    arcs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("ordered"));

    let mut merged: Vec<(S, S)> = Vec::new();
    for (lo, hi) in arcs {
        match merged.last_mut() {
            Some(last) if lo <= last.1 => last.1 = S::max_of(last.1.clone(), hi),
            _ => merged.push((lo, hi)),
        }
    }

    let mut gaps: Vec<(S, S)> = merged.windows(2).map(|w| (w[0].1.clone(), w[1].0.clone())).collect();
    let first = merged.first().expect("at least one arc");
    let last = merged.last().expect("at least one arc");
    gaps.push((last.1.clone(), first.0.clone() + one));

    let slack = S::slack(f.tol);
    let two = S::from_i64(2);
    let mut best: Option<(S, S)> = None;
    for (lo, hi) in gaps {
        let len = hi.clone() - lo.clone();
        if len <= S::zero() {
            continue;
        }
        let mid = ((lo + hi) / two.clone()).fract_part();
        best = match best {
            None => Some((len, mid)),
            Some((bl, bm)) => {
                let longer = len.clone() > bl.clone() + slack.clone();
                let tie = (len.clone() - bl.clone()).abs() <= slack;
                if longer || (tie && mid < bm) {
                    Some((len, mid))
                } else {
                    Some((bl, bm))
                }
            }
        };
    }
    let (len, c) = best.ok_or_else(|| Error::InvalidArgument("the image of f covers the circle".into()))?;
    Ok(Gap { c, ell: len / two })
}

/// The line map `G` with `g = R_{-c} ∘ f ∘ R_c = G` on `[0, 1)`.
///
/// `g(I) ⊂ [ℓ, 1-ℓ]`, so for `|δ| < ℓ` the rotated map `g_δ` agrees with
/// `G_δ = G + δ` on `[0, 1)` and `G_δ` maps `[0, 1)` into itself. `G_δ` is
/// conjugate to `f_{Φ, a - s}`, `s = δ / (1 - λ)`, by `y ↦ y + s`.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<S> {
    pub gap: Gap<S>,
    pub lambda: S,
    pub line: PiecewiseContraction<S>,
}

impl<S: Scalar> Reduction<S> {
    /// `s = δ / (1 - λ)`, for `|δ| < ℓ`.
    pub fn shift(&self, delta: &S) -> Result<S> {
        if delta.abs() >= self.gap.ell {
            return Err(Error::OutsideWindow {
                delta: delta.to_string(),
                ell: self.gap.ell.to_string(),
            });
        }
        Ok(delta.clone() / (S::one() - self.lambda.clone()))
    }

    /// `G_δ = G + δ`.
    pub fn rotated_line(&self, delta: &S) -> Result<PiecewiseContraction<S>> {
        self.shift(delta)?;
        let ifs = self.line.ifs().translated(delta);
        Ok(PiecewiseContraction::new(ifs, self.line.breakpoints().clone())?.with_tolerance(self.line.tol()))
    }

    /// `f_{Φ, a - δ/(1-λ)}`, whose orbits are those of `G_δ` moved by `-s`.
    pub fn conjugate(&self, delta: &S) -> Result<PiecewiseContraction<S>> {
        let s = self.shift(delta)?;
        Ok(self.line.shifted(&-s))
    }

    /// Circle point to the line coordinate `{x - c}`.
    pub fn to_line(&self, x: &S) -> S {
        (x.clone() - self.gap.c.clone()).fract_part()
    }

    /// Line coordinate back to the circle, `{y + c}`.
    pub fn to_circle(&self, y: &S) -> S {
        (y.clone() + self.gap.c.clone()).fract_part()
    }
}

/// Moves `f` so the gap midpoint sits at `0` and extends the result
/// affinely to the whole line.
pub fn reduce<S: Scalar>(f: &CircleAffineMap<S>) -> Result<Reduction<S>> {
    let gap = gap(f)?;
    let c = gap.c.clone();
    let one = S::one();
    let two = S::from_i64(2);

    let mut starts = vec![S::zero()];
    starts.extend(f.cell_bounds()[..f.k()].iter().map(|a| (a.clone() - c.clone()).fract_part()));
    sort_scalars(&mut starts);
    dedup_sorted(&mut starts, 0.0);

    let mut ends = starts[1..].to_vec();
    ends.push(one.clone());
    let mut intercepts: Vec<S> = starts
        .iter()
        .zip(&ends)
        .map(|(s, e)| {
            let m = (s.clone() + e.clone()) / two.clone();
            let x = m.clone() + c.clone();
            let wrap = if x >= one { one.clone() } else { S::zero() };
            let i = f.cell_index(&(x - wrap.clone()));
            let beta = f.lambda.clone() * (c.clone() - wrap) + f.intercepts[i - 1].clone() - c.clone();
            let n = (f.lambda.clone() * m + beta.clone()).floor();
            beta - n
        })
        .collect();
    let mut breaks = starts[1..].to_vec();
    if intercepts.len() == 1 {
        intercepts.push(intercepts[0].clone());
        breaks.push(S::from_ratio(1, 2));
    }
    let slopes = vec![f.lambda.clone(); intercepts.len()];
    let ifs = Ifs::from_parts(&slopes, &intercepts)?;
    let line = PiecewiseContraction::new(ifs, Breakpoints::new(breaks)?)?.with_tolerance(f.tol);
    Ok(Reduction {
        gap,
        lambda: f.lambda.clone(),
        line,
    })
}
