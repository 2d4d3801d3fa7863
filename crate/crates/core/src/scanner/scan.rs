//! Rotation-parameter scans of circle maps and box counting of the
//! unresolved set.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::Interval;
use crate::scalar::Scalar;
use crate::scanner::circle::{reduce, CircleAffineMap, Gap};
use crate::scanner::classify::{classify, default_start_points, ClassifyBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanStatus {
    /// Every start point was certified periodic.
    Periodic,
    /// Some start point stayed undecided within the budget.
    Unresolved,
}

impl ScanStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            ScanStatus::Periodic => "periodic",
            ScanStatus::Unresolved => "unresolved",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow<S> {
    pub delta: S,
    pub status: ScanStatus,
    /// Longest period found among the start points.
    pub period: Option<usize>,
    /// Iterations summed over the start points.
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BoxDimension {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    /// Fewer than two scales with a nonzero count; `slope` is then 0.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport<S> {
    pub gap: Gap<S>,
    pub grid: usize,
    pub budget: ClassifyBudget,
    pub rows: Vec<ScanRow<S>>,
    /// Unresolved rotations as disjoint sorted intervals.
    pub flagged: Vec<Interval<S>>,
    pub refinement_levels: usize,
    pub boxdim: Option<BoxDimension>,
}

impl<S: Scalar> ScanReport<S> {
    pub fn unresolved_count(&self) -> usize {
        self.rows.iter().filter(|r| r.status == ScanStatus::Unresolved).count()
    }

    pub fn unresolved_fraction(&self) -> f64 {
        self.unresolved_count() as f64 / self.rows.len() as f64
    }
}

fn classify_rotation<S: Scalar>(
    red: &crate::scanner::circle::Reduction<S>,
    delta: &S,
    budget: &ClassifyBudget,
) -> ScanRow<S> {
    let line = red.conjugate(delta).expect("rotation inside the window");
    let mut period = None;
    let mut iterations = 0;
    let mut resolved = true;
    for x0 in default_start_points(&line) {
        let c = classify(&line, &x0, budget);
        iterations += c.iterations_used;
        match c.period() {
            Some(p) => period = Some(period.map_or(p, |q: usize| q.max(p))),
            None => resolved = false,
        }
    }
    ScanRow {
        delta: delta.clone(),
        status: if resolved {
            ScanStatus::Periodic
        } else {
            ScanStatus::Unresolved
        },
        period,
        iterations,
    }
}

/// Cell `j` of a uniform partition of `(-ℓ, ℓ)` into `grid` pieces.
fn grid_cell<S: Scalar>(ell: &S, grid: usize, j: usize) -> Interval<S> {
    let width = S::from_i64(2) * ell.clone() / S::from_i64(grid as i64);
    let lo = -ell.clone() + width.clone() * S::from_i64(j as i64);
    Interval::new(lo.clone(), lo + width)
}

fn merge<S: Scalar>(mut cells: Vec<Interval<S>>) -> Vec<Interval<S>> {
    cells.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("ordered"));
    let mut out: Vec<Interval<S>> = Vec::new();
    for c in cells {
        match out.last_mut() {
            Some(last) if c.lo <= last.hi => last.hi = S::max_of(last.hi.clone(), c.hi),
            _ => out.push(c),
        }
    }
    out
}

/// Classifies `f_δ` at the midpoints of `grid` equal cells of `(-ℓ, ℓ)`.
///
/// Each `f_δ` is run on its line conjugate from the start points of
/// [`default_start_points`]. A rotation is flagged when any start point
/// stays undecided; the flagged set over-approximates the rotations whose
/// maps are not asymptotically periodic.
pub fn scan<S: Scalar>(f: &CircleAffineMap<S>, grid: usize, budget: &ClassifyBudget) -> Result<ScanReport<S>> {
    if grid < 2 {
        return Err(Error::InvalidArgument("scan grid needs at least 2 points".into()));
    }
    budget.validate()?;
    let red = reduce(f)?;
    let rows: Vec<ScanRow<S>> = (0..grid)
        .into_par_iter()
        .map(|j| classify_rotation(&red, &grid_cell(&red.gap.ell, grid, j).midpoint(), budget))
        .collect();
    let flagged = merge(
        rows.iter()
            .enumerate()
            .filter(|(_, r)| r.status == ScanStatus::Unresolved)
            .map(|(j, _)| grid_cell(&red.gap.ell, grid, j))
            .collect(),
    );
    Ok(ScanReport {
        gap: red.gap,
        grid,
        budget: budget.clone(),
        rows,
        flagged,
        refinement_levels: 0,
        boxdim: None,
    })
}

/// Bisects the flagged cells `levels` times, keeping the halves whose
/// midpoint is still unresolved, then box-counts the survivors at `scales`.
pub fn refine_and_boxdim<S: Scalar>(
    f: &CircleAffineMap<S>,
    report: &ScanReport<S>,
    levels: usize,
    scales: &[f64],
) -> Result<ScanReport<S>> {
    if levels == 0 {
        return Err(Error::InvalidArgument("refinement needs at least one level".into()));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) || scales.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::InvalidArgument("scales must be positive and decreasing".into()));
    }
    let red = reduce(f)?;
    let mut cells: Vec<Interval<S>> = report
        .rows
        .iter()
        .enumerate()
        .filter(|(_, r)| r.status == ScanStatus::Unresolved)
        .map(|(j, _)| grid_cell(&red.gap.ell, report.grid, j))
        .collect();
    for _ in 0..levels {
        let halves: Vec<Interval<S>> = cells
            .iter()
            .flat_map(|c| {
                let m = c.midpoint();
                [Interval::new(c.lo.clone(), m.clone()), Interval::new(m, c.hi.clone())]
            })
            .collect();
        cells = halves
            .into_par_iter()
            .filter(|h| classify_rotation(&red, &h.midpoint(), &report.budget).status == ScanStatus::Unresolved)
            .collect();
    }
    let flagged = merge(cells);
    let as_f64: Vec<(f64, f64)> = flagged.iter().map(|c| (c.lo.to_f64(), c.hi.to_f64())).collect();
    let mut out = report.clone();
    out.flagged = flagged;
    out.refinement_levels = levels;
    out.boxdim = Some(box_dimension(&as_f64, scales));
    Ok(out)
}

/// `count` scales `start, start·ratio, start·ratio², …`.
pub fn geometric_scales(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|j| start * ratio.powi(j as i32)).collect()
}

/// Box counts of a union of closed intervals on the grids `s·ℤ` and the
/// least-squares slope of `log N(s)` against `log(1/s)`.
pub fn box_dimension(set: &[(f64, f64)], scales: &[f64]) -> BoxDimension {
    let counts: Vec<usize> = scales.iter().map(|&s| box_count(set, s)).collect();
    let pts: Vec<(f64, f64)> = scales
        .iter()
        .zip(&counts)
        .filter(|(_, &n)| n > 0)
        .map(|(&s, &n)| ((1.0 / s).ln(), (n as f64).ln()))
        .collect();
    let degenerate = pts.len() < 2;
    let slope = if degenerate { 0.0 } else { least_squares_slope(&pts) };
    BoxDimension {
        scales: scales.to_vec(),
        counts,
        slope,
        degenerate,
    }
}

fn box_count(set: &[(f64, f64)], s: f64) -> usize {
    let mut ranges: Vec<(i64, i64)> = set
        .iter()
        .map(|&(lo, hi)| {
            let a = (lo / s).floor() as i64;
            let b = if hi > lo { ((hi / s).ceil() as i64 - 1).max(a) } else { a };
            (a, b)
        })
        .collect();
    ranges.sort_unstable();
    let mut total = 0i64;
    let mut current: Option<(i64, i64)> = None;
    for (a, b) in ranges {
        current = match current {
            Some((ca, cb)) if a <= cb + 1 => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca + 1;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((ca, cb)) = current {
        total += cb - ca + 1;
    }
    total as usize
}

fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}
