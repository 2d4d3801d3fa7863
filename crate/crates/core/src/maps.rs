//! Affine contractions, iterated function systems and the piecewise
//! contraction `f_{Φ,a}` they define on the real line.
//!
//! Branch and symbol indices are 1-based throughout, matching the usual
//! notation for itineraries: branch `i` acts on the half-open cell
//! `[a_{i-1}, a_i)`, with the first cell extended to `-∞` and the last to `+∞`.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

/// The map `x ↦ slope·x + intercept` with `|slope| < 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineContraction<S> {
    slope: S,
    intercept: S,
}

impl<S: Scalar> AffineContraction<S> {
    pub fn new(slope: S, intercept: S) -> Result<Self> {
        if slope.abs() >= S::one() {
            return Err(Error::NotContracting(slope.to_string()));
        }
        Ok(Self { slope, intercept })
    }

    pub fn slope(&self) -> &S {
        &self.slope
    }

    pub fn intercept(&self) -> &S {
        &self.intercept
    }

    pub fn apply(&self, x: &S) -> S {
        self.slope.clone() * x.clone() + self.intercept.clone()
    }

    /// Inverse image of `y`. Requires a nonzero slope.
    pub fn preimage(&self, y: &S) -> S {
        (y.clone() - self.intercept.clone()) / self.slope.clone()
    }

    /// The unique fixed point `b / (1 - λ)`.
    pub fn fixed_point(&self) -> S {
        self.intercept.clone() / (S::one() - self.slope.clone())
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &Self) -> Self {
        Self {
            slope: next.slope.clone() * self.slope.clone(),
            intercept: next.slope.clone() * self.intercept.clone() + next.intercept.clone(),
        }
    }

    /// Same map with `delta` added to the intercept.
    pub fn translated(&self, delta: &S) -> Self {
        Self {
            slope: self.slope.clone(),
            intercept: self.intercept.clone() + delta.clone(),
        }
    }
}

/// Returns the fixed point of `phi`.
pub fn fixed_point<S: Scalar>(phi: &AffineContraction<S>) -> S {
    phi.fixed_point()
}

/// A closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(lo: S, hi: S) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: &S) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn width(&self) -> S {
        self.hi.clone() - self.lo.clone()
    }

    pub fn midpoint(&self) -> S {
        (self.lo.clone() + self.hi.clone()) / S::from_i64(2)
    }
}

/// `λ_Φ`, `r_Φ` and the attracting interval `K_Φ = [-2 r_Φ, 2 r_Φ]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ContractionConstants<S> {
    pub lambda_phi: S,
    pub r_phi: S,
    pub attractor: Interval<S>,
}

/// An injective affine IFS with `k ≥ 2` branches.
#[derive(Clone, Debug, PartialEq)]
pub struct Ifs<S> {
    branches: Vec<AffineContraction<S>>,
    constants: ContractionConstants<S>,
}

impl<S: Scalar> Ifs<S> {
    pub fn new(branches: Vec<AffineContraction<S>>) -> Result<Self> {
        if branches.len() < 2 {
            return Err(Error::TooFewBranches(branches.len()));
        }
        if let Some(i) = branches.iter().position(|b| b.slope().is_zero()) {
            return Err(Error::ZeroSlope(i + 1));
        }
        let constants = contraction_constants_of(&branches);
        Ok(Self {
            branches,
            constants,
        })
    }

    /// Builds the IFS from parallel slope and intercept lists.
    pub fn from_parts(slopes: &[S], intercepts: &[S]) -> Result<Self> {
        if slopes.len() != intercepts.len() {
            return Err(Error::InvalidArgument(format!(
                "{} slopes but {} intercepts",
                slopes.len(),
                intercepts.len()
            )));
        }
        let branches = slopes
            .iter()
            .zip(intercepts)
            .map(|(s, b)| AffineContraction::new(s.clone(), b.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(branches)
    }

    pub fn k(&self) -> usize {
        self.branches.len()
    }

    pub fn branches(&self) -> &[AffineContraction<S>] {
        &self.branches
    }

    /// Branch `i`, 1-based.
    pub fn branch(&self, i: usize) -> &AffineContraction<S> {
        &self.branches[i - 1]
    }

    pub fn constants(&self) -> &ContractionConstants<S> {
        &self.constants
    }

    pub fn lambda_phi(&self) -> &S {
        &self.constants.lambda_phi
    }

    pub fn r_phi(&self) -> &S {
        &self.constants.r_phi
    }

    pub fn attractor(&self) -> &Interval<S> {
        &self.constants.attractor
    }

    pub fn fixed_points(&self) -> Vec<S> {
        self.branches.iter().map(|b| b.fixed_point()).collect()
    }

    /// `φ_ω = φ_{ω_n} ∘ … ∘ φ_{ω_1}`.
    pub fn compose(&self, word: &ItineraryWord) -> Result<AffineContraction<S>> {
        word.check_range(self.k())?;
        Ok(self.compose_symbols(word.symbols()))
    }

    pub(crate) fn compose_symbols(&self, symbols: &[usize]) -> AffineContraction<S> {
        let mut acc = self.branch(symbols[0]).clone();
        for &s in &symbols[1..] {
            acc = acc.then(self.branch(s));
        }
        acc
    }

    /// Every branch translated by `delta`.
    pub fn translated(&self, delta: &S) -> Self {
        let branches = self.branches.iter().map(|b| b.translated(delta)).collect::<Vec<_>>();
        let constants = contraction_constants_of(&branches);
        Self {
            branches,
            constants,
        }
    }
}

fn contraction_constants_of<S: Scalar>(branches: &[AffineContraction<S>]) -> ContractionConstants<S> {
    let lambda_phi = branches
        .iter()
        .map(|b| b.slope().abs())
        .fold(S::zero(), S::max_of);
    let max_fixed = branches
        .iter()
        .map(|b| b.fixed_point().abs())
        .fold(S::zero(), S::max_of);
    let r_phi = (S::one() + lambda_phi.clone()) / (S::one() - lambda_phi.clone()) * max_fixed;
    let two_r = S::from_i64(2) * r_phi.clone();
    ContractionConstants {
        lambda_phi,
        r_phi,
        attractor: Interval::new(-two_r.clone(), two_r),
    }
}

/// Returns `(λ_Φ, r_Φ, K_Φ)`.
pub fn contraction_constants<S: Scalar>(ifs: &Ifs<S>) -> ContractionConstants<S> {
    ifs.constants().clone()
}

/// Strictly increasing discontinuity points `a_1 < … < a_{k-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Breakpoints<S>(Vec<S>);

impl<S: Scalar> Breakpoints<S> {
    pub fn new(points: Vec<S>) -> Result<Self> {
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedBreakpoints);
        }
        Ok(Self(points))
    }

    pub fn as_slice(&self) -> &[S] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `a + δ`.
    pub fn shifted(&self, delta: &S) -> Self {
        Self(self.0.iter().map(|a| a.clone() + delta.clone()).collect())
    }

    /// Whether `x` equals some breakpoint (within `tol` for floats).
    pub fn contains(&self, x: &S, tol: f64) -> bool {
        self.0.iter().any(|a| a.approx_eq(x, tol))
    }
}

/// The piecewise contraction `f_{Φ,a}`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseContraction<S> {
    ifs: Ifs<S>,
    breaks: Breakpoints<S>,
    tol: f64,
}

impl<S: Scalar> PiecewiseContraction<S> {
    pub fn new(ifs: Ifs<S>, breaks: Breakpoints<S>) -> Result<Self> {
        if ifs.k() != breaks.len() + 1 {
            return Err(Error::BreakpointCount {
                branches: ifs.k(),
                expected: ifs.k() - 1,
                got: breaks.len(),
            });
        }
        Ok(Self {
            ifs,
            breaks,
            tol: DEFAULT_TOLERANCE,
        })
    }

    /// Tolerance for float equality tests (ignored by the exact backend).
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn ifs(&self) -> &Ifs<S> {
        &self.ifs
    }

    pub fn breakpoints(&self) -> &Breakpoints<S> {
        &self.breaks
    }

    pub fn k(&self) -> usize {
        self.ifs.k()
    }

    /// 1 if `x < a_1`, `i` if `a_{i-1} ≤ x < a_i`, `k` if `x ≥ a_{k-1}`.
    pub fn branch_index(&self, x: &S) -> usize {
        self.breaks.as_slice().partition_point(|a| a <= x) + 1
    }

    pub fn apply(&self, x: &S) -> S {
        self.ifs.branch(self.branch_index(x)).apply(x)
    }

    /// One step: the image of `x` and the branch that produced it.
    pub fn step(&self, x: &S) -> (S, usize) {
        let i = self.branch_index(x);
        (self.ifs.branch(i).apply(x), i)
    }

    /// `n` steps from `x0`; entry `j` holds `f^{j+1}(x0)` and the branch
    /// applied to `f^j(x0)`.
    pub fn orbit(&self, x0: &S, n: usize) -> Vec<(S, usize)> {
        let mut out = Vec::with_capacity(n);
        let mut x = x0.clone();
        for _ in 0..n {
            let (y, i) = self.step(&x);
            out.push((y.clone(), i));
            x = y;
        }
        out
    }

    /// Branch indices of the first `n` iterates of `x0`.
    pub fn itinerary(&self, x0: &S, n: usize) -> Vec<usize> {
        self.orbit(x0, n).into_iter().map(|(_, i)| i).collect()
    }

    /// `f_{Φ, a+δ}`.
    pub fn shifted(&self, delta: &S) -> Self {
        Self {
            ifs: self.ifs.clone(),
            breaks: self.breaks.shifted(delta),
            tol: self.tol,
        }
    }

    /// Whether `x` is one of the breakpoints.
    pub fn is_breakpoint(&self, x: &S) -> bool {
        self.breaks.contains(x, self.tol)
    }
}

/// A nonempty word over `{1, …, k}`; the first symbol is applied first.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItineraryWord(Vec<usize>);

impl ItineraryWord {
    pub fn new(symbols: Vec<usize>, k: usize) -> Result<Self> {
        let w = Self(symbols);
        w.check_range(k)?;
        Ok(w)
    }

    pub(crate) fn from_symbols(symbols: Vec<usize>) -> Self {
        Self(symbols)
    }

    fn check_range(&self, k: usize) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::EmptyWord);
        }
        match self.0.iter().find(|&&s| s == 0 || s > k) {
            Some(&symbol) => Err(Error::SymbolOutOfRange { symbol, k }),
            None => Ok(()),
        }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The first `n` symbols.
    pub fn prefix(&self, n: usize) -> Self {
        Self(self.0[..n.min(self.0.len())].to_vec())
    }
}

impl fmt::Display for ItineraryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Composes the branches of `ifs` along `omega`.
pub fn compose<S: Scalar>(ifs: &Ifs<S>, omega: &ItineraryWord) -> Result<AffineContraction<S>> {
    ifs.compose(omega)
}
