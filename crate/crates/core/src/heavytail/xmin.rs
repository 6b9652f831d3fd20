use serde::{Deserialize, Serialize};

use super::{fit_power_law, FitError, SampleSet};

/// How the lower cutoff is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XminPolicy {
    /// Minimize the KS distance of the power-law fit over candidate cutoffs.
    Ks,
    /// Use this cutoff as given.
    Fixed(f64),
}

impl Default for XminPolicy {
    fn default() -> Self {
        XminPolicy::Ks
    }
}

impl std::str::FromStr for XminPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ks" => Ok(XminPolicy::Ks),
            other => other
                .strip_prefix("fixed:")
                .unwrap_or(other)
                .parse::<f64>()
                .map(XminPolicy::Fixed)
                .map_err(|_| format!("xmin policy must be `ks` or a number, got `{other}`")),
        }
    }
}

impl std::fmt::Display for XminPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            XminPolicy::Ks => f.write_str("ks"),
            XminPolicy::Fixed(x) => write!(f, "{x}"),
        }
    }
}

/// The distinct sample value whose power-law tail fit has the smallest KS
/// distance. Candidates must leave at least two distinct values in the tail;
/// ties go to the smaller cutoff.
pub fn select_xmin(s: &SampleSet) -> Result<f64, FitError> {
    let distinct = s.distinct();
    let mut best: Option<(f64, f64)> = None;
    // The largest distinct value can never leave two distinct tail values.
    for &candidate in distinct.iter().take(distinct.len().saturating_sub(1)) {
        if s.tail(candidate).len() < 2 {
            break;
        }
        let Ok(fit) = fit_power_law(s, candidate) else {
            continue;
        };
        if best.map_or(true, |(_, d)| fit.ks_distance < d) {
            best = Some((candidate, fit.ks_distance));
        }
    }
    best.map(|(x, _)| x).ok_or(FitError::NoFittableTail)
}
