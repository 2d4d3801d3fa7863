use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::maps::{Breakpoints, Ifs, PiecewiseContraction};
use crate::scalar::{sort_scalars, Scalar};
use crate::scanner::classify::{classify, default_start_points, equality_tolerance, ClassificationStatus, ClassifyBudget};

#[derive(Clone, Debug, PartialEq)]
pub struct CensusRow<S> {
    pub breakpoints: Vec<S>,
    /// Distinct periodic orbits reached from the start points.
    pub orbits: usize,
    pub periods: Vec<usize>,
    /// Every start point was classified.
    pub classified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusReport<S> {
    pub k: usize,
    pub seed: u64,
    pub rows: Vec<CensusRow<S>>,
}

impl<S> CensusReport<S> {
    pub fn classified_fraction(&self) -> f64 {
        self.rows.iter().filter(|r| r.classified).count() as f64 / self.rows.len() as f64
    }

    pub fn max_orbits(&self) -> usize {
        self.rows.iter().map(|r| r.orbits).max().unwrap_or(0)
    }

    /// Rows with more than `k` distinct periodic orbits.
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.orbits > self.k).count()
    }
}

/// Draws `samples` breakpoint vectors uniformly in `K_Φ` and counts the
/// periodic orbits reached from the default start points of each map.
pub fn census<S: Scalar>(ifs: &Ifs<S>, samples: usize, budget: &ClassifyBudget, seed: u64) -> Result<CensusReport<S>> {
    if samples == 0 {
        return Err(Error::InvalidArgument("census needs at least one sample".into()));
    }
    budget.validate()?;
    let k = ifs.k();
    let k_phi = ifs.attractor();
    let (lo, hi) = (k_phi.lo.to_f64(), k_phi.hi.to_f64());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draws = Vec::with_capacity(samples);
    while draws.len() < samples {
        let mut a: Vec<S> = (0..k - 1)
            .map(|_| S::from_f64(if hi > lo { rng.gen_range(lo..hi) } else { lo }))
            .collect();
        sort_scalars(&mut a);
        if let Ok(b) = Breakpoints::new(a) {
            draws.push(b);
        }
    }
    let rows = draws
        .into_par_iter()
        .map(|b| {
            let f = PiecewiseContraction::new(ifs.clone(), b).expect("k - 1 breakpoints");
            census_row(&f, budget)
        })
        .collect();
    Ok(CensusReport { k, seed, rows })
}

fn census_row<S: Scalar>(f: &PiecewiseContraction<S>, budget: &ClassifyBudget) -> CensusRow<S> {
    let eq_tol = equality_tolerance(f, budget.tolerance);
    let mut found: Vec<Vec<S>> = Vec::new();
    let mut classified = true;
    for x0 in default_start_points(f) {
        match classify(f, &x0, budget).status {
            ClassificationStatus::Periodic { orbit, .. } => {
                let seen = found
                    .iter()
                    .any(|o| o.len() == orbit.len() && o.iter().any(|y| y.approx_eq(&orbit[0], eq_tol)));
                if !seen {
                    found.push(orbit);
                }
            }
            ClassificationStatus::Undecided => classified = false,
        }
    }
    CensusRow {
        breakpoints: f.breakpoints().as_slice().to_vec(),
        orbits: found.len(),
        periods: found.iter().map(Vec::len).collect(),
        classified,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_branches_have_one_orbit() {
        let ifs = Ifs::from_parts(&[0.5, 0.5], &[0.25, 0.25]).unwrap();
        let r = census(&ifs, 20, &ClassifyBudget::default(), 7).unwrap();
        assert!(r.rows.iter().all(|row| row.orbits == 1 && row.classified));
        assert_eq!(r.violations(), 0);
    }

    #[test]
    fn seeded_census_is_reproducible() {
        let ifs = Ifs::from_parts(&[0.5, -0.6], &[0.3, 0.9]).unwrap();
        let a = census(&ifs, 30, &ClassifyBudget::default(), 11).unwrap();
        let b = census(&ifs, 30, &ClassifyBudget::default(), 11).unwrap();
        assert_eq!(a, b);
        assert!(a.max_orbits() <= 2);
    }
}
