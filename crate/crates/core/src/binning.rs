//! Head/tail breaks: repeatedly split a heavy-tailed set at its mean and keep
//! splitting the part above the mean while it stays a minority.

use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_HEAD_FRACTION_LIMIT: f64 = 0.4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Bin<T> {
    /// Mean of this bin together with every bin inside it, i.e. the mean of
    /// the set whose split produced this bin. For bin 1 it is its own mean.
    pub threshold: f64,
    /// Ascending by key.
    pub members: Vec<T>,
}

/// Bins indexed innermost-first: `bins[0]` holds the largest values.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinPartition<T> {
    pub bins: Vec<Bin<T>>,
    pub head_fraction_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BinningError {
    #[error("cannot bin an empty set")]
    Empty,
    #[error("head fraction limit must lie in (0, 1), got {0}")]
    BadLimit(f64),
    #[error("a non-finite key cannot be binned")]
    NonFinite,
    #[error("requested {requested} bins but only {available} exist")]
    TooManyBins { requested: usize, available: usize },
    #[error("the walk needs at least one bin")]
    ZeroBins,
}

pub fn head_tail_breaks(values: &[f64], limit: f64) -> Result<BinPartition<f64>, BinningError> {
    head_tail_breaks_by(values.to_vec(), |&v| v, limit)
}

/// Head/tail breaks over arbitrary items ranked by `key`. Items tied on the
/// key keep their input order within a bin.
pub fn head_tail_breaks_by<T>(
    items: Vec<T>,
    key: impl Fn(&T) -> f64,
    limit: f64,
) -> Result<BinPartition<T>, BinningError> {
    if items.is_empty() {
        return Err(BinningError::Empty);
    }
    if !(limit > 0.0 && limit < 1.0) {
        return Err(BinningError::BadLimit(limit));
    }
    let mut keyed: Vec<(f64, T)> = items.into_iter().map(|t| (key(&t), t)).collect();
    if keyed.iter().any(|(k, _)| !k.is_finite()) {
        return Err(BinningError::NonFinite);
    }
    keyed.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Peel tails off the ascending list from the bottom; `rest` is what is
    // still to be split.
    let mut outer_first = Vec::new();
    let mut rest = keyed;
    loop {
        let mean = rest.iter().map(|(k, _)| k).sum::<f64>() / rest.len() as f64;
        let cut = rest.partition_point(|(k, _)| *k <= mean);
        let head = rest.len() - cut;
        let split = head > 0 && (head as f64) < limit * rest.len() as f64;
        if !split {
            outer_first.push((mean, rest));
            break;
        }
        let head_part = rest.split_off(cut);
        outer_first.push((mean, rest));
        rest = head_part;
        if head == 1 {
            let only = rest[0].0;
            outer_first.push((only, rest));
            break;
        }
    }
    let bins = outer_first
        .into_iter()
        .rev()
        .map(|(threshold, members)| Bin {
            threshold,
            members: members.into_iter().map(|(_, t)| t).collect(),
        })
        .collect();
    Ok(BinPartition {
        bins,
        head_fraction_limit: limit,
    })
}

impl<T> BinPartition<T> {
    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.bins.iter().map(|b| b.members.len()).collect()
    }

    /// Members of the innermost bin.
    pub fn tail_members(&self) -> &[T] {
        &self.bins[0].members
    }

    /// Cumulative member sets: element `j` is the union of bins `1..=j+1`.
    pub fn walk_schedule(&self, k: usize) -> Result<Vec<Vec<&T>>, BinningError> {
        if k == 0 {
            return Err(BinningError::ZeroBins);
        }
        if k > self.bins.len() {
            return Err(BinningError::TooManyBins {
                requested: k,
                available: self.bins.len(),
            });
        }
        let mut acc = Vec::new();
        Ok(self.bins[..k]
            .iter()
            .map(|b| {
                acc.extend(b.members.iter());
                acc.clone()
            })
            .collect())
    }
}
