//! Maximum-likelihood fitting of heavy-tailed families above a lower cutoff
//! `xmin`, KS-based `xmin` selection, and Vuong likelihood-ratio model
//! comparison.
//!
//! Four families are supported, each truncated at `xmin`:
//!
//! | family | density above `xmin` ∝ | parameters |
//! |---|---|---|
//! | power law | `x^-α` | `α > 1` |
//! | truncated power law | `x^-α e^{-λx}` | `α ≥ 0`, `λ > 0` |
//! | lognormal | lognormal(`μ`, `σ`) | `σ > 0` |
//! | exponential | `e^{-λx}` | `λ > 0` |
//!
//! Discrete samples (counts) use normalized probability mass functions over
//! the integers `≥ xmin`; the discrete lognormal assigns each integer `x` the
//! lognormal mass of `[x - ½, x + ½)`. Continuous samples use densities.

mod ccdf;
mod compare;
mod fit;
mod model;
pub mod optimize;
pub mod special;
mod xmin;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use ccdf::ccdf;
pub use compare::{best_fit, loglikelihood_ratio, BestFit, BestFitOptions, ComparisonResult, FamilyRecord};
pub use fit::{fit, fit_exponential, fit_lognormal, fit_power_law, fit_truncated_power_law};
pub use model::Model;
pub use xmin::{select_xmin, XminPolicy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SampleKind {
    Discrete,
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    PowerLaw,
    TruncatedPowerLaw,
    Lognormal,
    Exponential,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::PowerLaw,
        Family::TruncatedPowerLaw,
        Family::Lognormal,
        Family::Exponential,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::PowerLaw => "power_law",
            Family::TruncatedPowerLaw => "truncated_power_law",
            Family::Lognormal => "lognormal",
            Family::Exponential => "exponential",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| format!("unknown family `{s}`"))
    }
}

/// Fitted parameters; serializes as a flat object of the named parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Params {
    PowerLaw { alpha: f64 },
    TruncatedPowerLaw { alpha: f64, lambda: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Exponential { lambda: f64 },
}

impl Params {
    pub fn family(&self) -> Family {
        match self {
            Params::PowerLaw { .. } => Family::PowerLaw,
            Params::TruncatedPowerLaw { .. } => Family::TruncatedPowerLaw,
            Params::Lognormal { .. } => Family::Lognormal,
            Params::Exponential { .. } => Family::Exponential,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error("sample is empty")]
    EmptySample,
    #[error("sample value {0} is not positive and finite")]
    NonPositive(f64),
    #[error("discrete sample value {0} is not an integer")]
    NotInteger(f64),
    #[error("xmin {0} is invalid for this sample")]
    InvalidXmin(f64),
    #[error("only {n_tail} value(s) at or above xmin {xmin}; at least 2 are needed")]
    TooFewTail { xmin: f64, n_tail: usize },
    #[error("{family}: degenerate sample ({reason})")]
    Degenerate { family: Family, reason: &'static str },
    #[error("{family}: optimizer did not converge after {evaluations} evaluations (last {last:?})")]
    NotConverged {
        family: Family,
        last: Params,
        evaluations: usize,
    },
    #[error("no candidate xmin leaves a fittable tail")]
    NoFittableTail,
    #[error("fits use different cutoffs or sample kinds (xmin {a} vs {b})")]
    MismatchedXmin { a: f64, b: f64 },
    #[error("every family failed: {}", summarize(.0))]
    AllFitsFailed(Vec<(Family, String)>),
}

fn summarize(causes: &[(Family, String)]) -> String {
    causes
        .iter()
        .map(|(f, e)| format!("{f}: {e}"))
        .collect::<Vec<_>>()
        .join("; ")
}

/// A positive sample, kept sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    values: Vec<f64>,
    kind: SampleKind,
}

impl SampleSet {
    pub fn new(kind: SampleKind, mut values: Vec<f64>) -> Result<Self, FitError> {
        if values.is_empty() {
            return Err(FitError::EmptySample);
        }
        for &v in &values {
            if !(v.is_finite() && v > 0.0) {
                return Err(FitError::NonPositive(v));
            }
            if kind == SampleKind::Discrete && v.fract() != 0.0 {
                return Err(FitError::NotInteger(v));
            }
        }
        values.sort_by(f64::total_cmp);
        Ok(SampleSet { values, kind })
    }

    pub fn discrete(values: impl IntoIterator<Item = u64>) -> Result<Self, FitError> {
        Self::new(SampleKind::Discrete, values.into_iter().map(|v| v as f64).collect())
    }

    pub fn continuous(values: Vec<f64>) -> Result<Self, FitError> {
        Self::new(SampleKind::Continuous, values)
    }

    pub fn kind(&self) -> SampleKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Values `≥ xmin`, ascending.
    pub fn tail(&self, xmin: f64) -> &[f64] {
        let start = self.values.partition_point(|&v| v < xmin);
        &self.values[start..]
    }

    /// Distinct values, ascending.
    pub fn distinct(&self) -> Vec<f64> {
        let mut d = self.values.clone();
        d.dedup();
        d
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub family: Family,
    pub kind: SampleKind,
    pub xmin: f64,
    pub params: Params,
    /// Log-likelihood of the `n_tail` values at or above `xmin` under the
    /// `xmin`-truncated model.
    pub loglik: f64,
    pub n_tail: usize,
    /// Kolmogorov–Smirnov distance between the tail and the fitted model.
    pub ks_distance: f64,
}

impl FitResult {
    pub fn model(&self) -> Model {
        Model::new(self.kind, self.xmin, self.params)
    }
}
