//! Serialized report shapes. Every scalar is written as a string so exact
//! rationals such as `7/8` survive a round trip unchanged.

use pcmap_core::scanner::{CircleAffineMap, ClassifyBudget};
use pcmap_core::{PiecewiseContraction, Scalar};
use serde::{Deserialize, Serialize};

pub fn text<S: Scalar>(x: &S) -> String {
    x.to_string()
}

pub fn texts<S: Scalar>(xs: &[S]) -> Vec<String> {
    xs.iter().map(text).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineSpec {
    pub slopes: Vec<String>,
    pub intercepts: Vec<String>,
    pub breakpoints: Vec<String>,
}

impl LineSpec {
    pub fn of<S: Scalar>(f: &PiecewiseContraction<S>) -> Self {
        let b = f.ifs().branches();
        Self {
            slopes: b.iter().map(|x| text(x.slope())).collect(),
            intercepts: b.iter().map(|x| text(x.intercept())).collect(),
            breakpoints: texts(f.breakpoints().as_slice()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircleSpec {
    pub lambda: String,
    pub breakpoints: Vec<String>,
    pub intercepts: Vec<String>,
}

impl CircleSpec {
    pub fn of<S: Scalar>(f: &CircleAffineMap<S>) -> Self {
        Self {
            lambda: text(f.lambda()),
            breakpoints: texts(f.breakpoints()),
            intercepts: texts(f.intercepts()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum MapSpec {
    Line(LineSpec),
    Circle(CircleSpec),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BudgetSpec {
    pub max_iterations: usize,
    pub transient_skip: usize,
    pub tolerance: f64,
    pub period_cap: usize,
}

impl From<&ClassifyBudget> for BudgetSpec {
    fn from(b: &ClassifyBudget) -> Self {
        Self {
            max_iterations: b.max_iterations,
            transient_skip: b.transient_skip,
            tolerance: b.tolerance,
            period_cap: b.period_cap,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub backend: String,
    pub map: MapSpec,
    pub x0: String,
    /// `periodic`, `undecided`, or `exceptional set empty` for a circle map
    /// with slope 0.
    pub status: String,
    pub period: Option<usize>,
    pub orbit: Vec<String>,
    pub iterations_used: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellRecord {
    pub depth: usize,
    pub lo: String,
    pub hi: String,
    pub word: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GrowthRecord {
    Row {
        n: usize,
        count: usize,
        log_rate: f64,
    },
    Doubling {
        rho: f64,
        m: usize,
        tau: Option<String>,
        n0: Option<usize>,
        status: String,
        holds: bool,
        violations: Vec<usize>,
        constant: Option<f64>,
        bound_holds: bool,
        residue_constant: Option<f64>,
        residue_bound_holds: bool,
        stable_band: String,
        guard_depth: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularReport {
    pub depth: usize,
    pub found: bool,
    pub word: Option<Vec<usize>>,
    pub source: Option<usize>,
    pub target: Option<usize>,
    pub value: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CenterRecord {
    pub word: Vec<usize>,
    pub center: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub backend: String,
    pub map: MapSpec,
    pub epsilon: String,
    pub samples: usize,
    pub depth: usize,
    pub dimension: f64,
    pub lambda_phi: String,
    pub r_phi: String,
    pub radius: String,
    pub word_count: usize,
    pub centers: Vec<CenterRecord>,
    pub bound: String,
    pub bound_backend: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub backend: String,
    pub map: MapSpec,
    pub delta: String,
    pub epsilon: String,
    pub n_max: usize,
    pub samples: usize,
    pub lambda_phi: String,
    pub r_phi: String,
    pub tau: Option<String>,
    pub n_star: Option<usize>,
    /// `certified-finite` or `inconclusive`.
    pub status: String,
    pub inside_band: bool,
    pub guard_depth: usize,
    pub no_singular_connection: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDimReport {
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSidecar {
    pub generated_at: String,
    pub seed: u64,
    pub backend: String,
    pub map: MapSpec,
    pub gap_center: String,
    pub window_half_width: String,
    pub grid: usize,
    pub budget: BudgetSpec,
    pub unresolved: usize,
    pub unresolved_fraction: f64,
    pub refinement_levels: usize,
    pub flagged: Vec<[String; 2]>,
    pub boxdim: BoxDimReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReduceReport {
    pub backend: String,
    pub map: MapSpec,
    pub gap_center: String,
    pub window_half_width: String,
    pub line: LineSpec,
    pub delta: String,
    pub shift: String,
    pub conjugate_breakpoints: Vec<String>,
    pub x0: String,
    pub steps: usize,
    /// Orbit of the rotated line map from the line coordinate of `x0`.
    pub rotated_orbit: Vec<String>,
    /// Orbit of the conjugate map, moved back by the shift.
    pub conjugate_orbit: Vec<String>,
    pub conjugacy_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub breakpoints: Vec<String>,
    pub orbits: usize,
    pub periods: Vec<usize>,
    pub classified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub backend: String,
    pub seed: u64,
    pub k: usize,
    pub samples: usize,
    pub budget: BudgetSpec,
    pub classified_fraction: f64,
    pub max_orbits: usize,
    pub violations: usize,
    pub rows: Vec<CensusRecord>,
}
