//! Run configuration: a TOML document of `section.key = value` entries.
//!
//! Numbers may be written as TOML numbers or as strings; strings keep
//! fractions such as `"7/8"` exact.
//!
//! ```toml
//! backend = "exact"
//! line.slopes = ["1/2", "1/2"]
//! line.intercepts = ["0", "1/2"]
//! line.breakpoints = ["1/2"]
//! classify.x0 = "3/10"
//! ```

use std::path::Path;

use pcmap_core::scanner::{CircleAffineMap, ClassifyBudget};
use pcmap_core::{Backend, Breakpoints, Ifs, PiecewiseContraction, Scalar, DEFAULT_TOLERANCE};
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Number {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Number {
    fn text(&self) -> String {
        match self {
            Number::Text(s) => s.clone(),
            Number::Int(i) => i.to_string(),
            Number::Float(x) => x.to_string(),
        }
    }

    pub fn parse<S: Scalar>(&self, key: &str) -> Result<S, CliError> {
        S::parse(&self.text()).map_err(|e| CliError::Validation(format!("{key}: {e}")))
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LineSection {
    pub k: Option<usize>,
    pub slopes: Option<Vec<Number>>,
    pub intercepts: Option<Vec<Number>>,
    pub breakpoints: Option<Vec<Number>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleSection {
    pub lambda: Option<Number>,
    pub intercepts: Option<Vec<Number>>,
    #[serde(default)]
    pub breakpoints: Vec<Number>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifySection {
    pub x0: Option<Number>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSection {
    pub max_iterations: Option<usize>,
    pub transient_skip: Option<usize>,
    pub period_cap: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DepthSection {
    pub depth: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthSection {
    pub n_max: Option<usize>,
    pub epsilon: Option<Number>,
    pub samples: Option<usize>,
    pub rho: Option<f64>,
    pub guard_depth: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSection {
    pub d: Option<f64>,
    pub n: Option<usize>,
    pub epsilon: Option<Number>,
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertifySection {
    pub delta: Option<Number>,
    pub epsilon: Option<Number>,
    pub n_max: Option<usize>,
    pub samples: Option<usize>,
    pub guard_depth: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanSection {
    pub grid: Option<usize>,
    pub levels: Option<usize>,
    pub scale_count: Option<usize>,
    pub scale_ratio: Option<f64>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReduceSection {
    pub delta: Option<Number>,
    pub x0: Option<Number>,
    pub steps: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CensusSection {
    pub samples: Option<usize>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub backend: Option<String>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub line: Option<LineSection>,
    pub circle: Option<CircleSection>,
    #[serde(default)]
    pub classify: ClassifySection,
    #[serde(default)]
    pub budget: BudgetSection,
    #[serde(default)]
    pub itineraries: DepthSection,
    #[serde(default)]
    pub growth: GrowthSection,
    #[serde(default)]
    pub singular: DepthSection,
    #[serde(default)]
    pub cover: CoverSection,
    #[serde(default)]
    pub certify: CertifySection,
    #[serde(default)]
    pub scan: ScanSection,
    #[serde(default)]
    pub reduce: ReduceSection,
    #[serde(default)]
    pub census: CensusSection,
}

/// Which map the configuration defines.
pub enum MapForm<S> {
    Line(PiecewiseContraction<S>),
    Circle(CircleAffineMap<S>),
}

fn missing(key: &str) -> CliError {
    CliError::Validation(format!("missing key `{key}`"))
}

fn numbers<S: Scalar>(values: &[Number], key: &str) -> Result<Vec<S>, CliError> {
    values.iter().map(|v| v.parse(key)).collect()
}

fn core(key: &str) -> impl Fn(pcmap_core::Error) -> CliError + '_ {
    move |e| CliError::Validation(format!("{key}: {e}"))
}

impl RunConfig {
    pub fn from_str(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Validation(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Validation(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str(&text)
    }

    pub fn backend(&self) -> Result<Backend, CliError> {
        match &self.backend {
            None => Ok(Backend::Exact),
            Some(b) => b.parse().map_err(core("backend")),
        }
    }

    pub fn tolerance(&self) -> f64 {
        self.tol.unwrap_or(DEFAULT_TOLERANCE)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn budget(&self) -> Result<ClassifyBudget, CliError> {
        let d = ClassifyBudget::default();
        let b = ClassifyBudget {
            max_iterations: self.budget.max_iterations.unwrap_or(d.max_iterations),
            transient_skip: self.budget.transient_skip.unwrap_or(d.transient_skip),
            tolerance: self.tolerance(),
            period_cap: self.budget.period_cap.unwrap_or(d.period_cap),
        };
        b.validate().map_err(core("budget"))?;
        Ok(b)
    }

    pub fn map<S: Scalar>(&self) -> Result<MapForm<S>, CliError> {
        match (&self.line, &self.circle) {
            (Some(_), Some(_)) => Err(CliError::Validation(
                "define exactly one of `line` and `circle`, not both".into(),
            )),
            (None, None) => Err(CliError::Validation(
                "missing map: define `line.*` or `circle.*` keys".into(),
            )),
            (Some(_), None) => self.line_map().map(MapForm::Line),
            (None, Some(_)) => self.circle_map().map(MapForm::Circle),
        }
    }

    pub fn line_map<S: Scalar>(&self) -> Result<PiecewiseContraction<S>, CliError> {
        let line = self.line.as_ref().ok_or_else(|| missing("line.slopes"))?;
        let slopes = line.slopes.as_ref().ok_or_else(|| missing("line.slopes"))?;
        let intercepts = line.intercepts.as_ref().ok_or_else(|| missing("line.intercepts"))?;
        let breakpoints = line.breakpoints.as_ref().ok_or_else(|| missing("line.breakpoints"))?;
        let slopes: Vec<S> = numbers(slopes, "line.slopes")?;
        let intercepts: Vec<S> = numbers(intercepts, "line.intercepts")?;
        if slopes.len() != intercepts.len() {
            return Err(CliError::Validation(format!(
                "line.intercepts: {} slopes but {} intercepts",
                slopes.len(),
                intercepts.len()
            )));
        }
        if let Some(k) = line.k {
            if k != slopes.len() {
                return Err(CliError::Validation(format!("line.k: k = {k} but {} slopes", slopes.len())));
            }
        }
        let ifs = Ifs::from_parts(&slopes, &intercepts).map_err(core("line.slopes"))?;
        let a = Breakpoints::new(numbers(breakpoints, "line.breakpoints")?).map_err(core("line.breakpoints"))?;
        Ok(PiecewiseContraction::new(ifs, a)
            .map_err(core("line.breakpoints"))?
            .with_tolerance(self.tolerance()))
    }

    pub fn circle_map<S: Scalar>(&self) -> Result<CircleAffineMap<S>, CliError> {
        let circle = self.circle.as_ref().ok_or_else(|| missing("circle.lambda"))?;
        let lambda: S = circle.lambda.as_ref().ok_or_else(|| missing("circle.lambda"))?.parse("circle.lambda")?;
        let intercepts = circle.intercepts.as_ref().ok_or_else(|| missing("circle.intercepts"))?;
        let b = numbers(intercepts, "circle.intercepts")?;
        let a = numbers(&circle.breakpoints, "circle.breakpoints")?;
        Ok(CircleAffineMap::new(lambda, a, b)
            .map_err(core("circle"))?
            .with_tolerance(self.tolerance()))
    }
}

pub(crate) fn number_or<S: Scalar>(value: &Option<Number>, key: &str, default: &str) -> Result<S, CliError> {
    match value {
        Some(v) => v.parse(key),
        None => S::parse(default).map_err(core(key)),
    }
}
