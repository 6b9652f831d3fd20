use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use super::{fit, select_xmin, Family, FitError, FitResult, SampleSet, XminPolicy};

/// Vuong comparison of two fits on the same tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonResult {
    pub family_a: Family,
    pub family_b: Family,
    /// `Σ (ln p_a(x) - ln p_b(x))` over the tail.
    pub loglik_ratio: f64,
    /// The summed ratio divided by `σ √n`, where `σ²` is the population
    /// variance of the pointwise differences. Positive favors `a`.
    pub normalized_ratio: f64,
    /// Two-sided significance of `|normalized_ratio|` under a standard
    /// normal null.
    pub p_value: f64,
}

/// Compares fits `a` and `b` on the tail of `s` they were both fitted to.
///
/// When every pointwise difference is the same nonzero number the
/// normalized ratio is `±∞` with `p = 0`.
pub fn loglikelihood_ratio(s: &SampleSet, a: &FitResult, b: &FitResult) -> Result<ComparisonResult, FitError> {
    if a.xmin != b.xmin || a.kind != b.kind || a.kind != s.kind() {
        return Err(FitError::MismatchedXmin { a: a.xmin, b: b.xmin });
    }
    let tail = s.tail(a.xmin);
    let (ma, mb) = (a.model(), b.model());
    let diffs: Vec<f64> = tail.iter().map(|&x| ma.ln_pdf(x) - mb.ln_pdf(x)).collect();
    let n = diffs.len() as f64;
    let total: f64 = diffs.iter().sum();
    let mean = total / n;
    let variance = diffs.iter().map(|d| (d - mean) * (d - mean)).sum::<f64>() / n;
    let (normalized_ratio, p_value) = if variance > 0.0 {
        let r = total / (variance * n).sqrt();
        (r, libm::erfc(r.abs() / SQRT_2))
    } else if total == 0.0 {
        (0.0, 1.0)
    } else {
        (total.signum() * f64::INFINITY, 0.0)
    };
    Ok(ComparisonResult {
        family_a: a.family,
        family_b: b.family,
        loglik_ratio: total,
        normalized_ratio,
        p_value,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestFitOptions {
    pub families: Vec<Family>,
    pub significance: f64,
    pub xmin: XminPolicy,
}

impl Default for BestFitOptions {
    fn default() -> Self {
        BestFitOptions {
            families: Family::ALL.to_vec(),
            significance: 0.1,
            xmin: XminPolicy::Ks,
        }
    }
}

/// One family's fit and its tournament record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub family: Family,
    pub fit: FitResult,
    /// Opponents this family beat significantly.
    pub wins: Vec<Family>,
    /// Opponents that beat this family significantly.
    pub losses: Vec<Family>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BestFit {
    pub xmin: f64,
    pub winner: Family,
    /// Unbeaten families first, then by descending log-likelihood.
    pub ranking: Vec<FamilyRecord>,
    pub comparisons: Vec<ComparisonResult>,
    /// Families whose fit failed, with the reason.
    pub failures: Vec<(Family, String)>,
}

/// Fits every requested family at a common cutoff and runs the pairwise
/// likelihood-ratio tournament. The winner is the family no other family
/// beats at the significance threshold, with the highest log-likelihood
/// breaking ties among the unbeaten.
pub fn best_fit(s: &SampleSet, opts: &BestFitOptions) -> Result<BestFit, FitError> {
    let xmin = match opts.xmin {
        XminPolicy::Ks => select_xmin(s)?,
        XminPolicy::Fixed(x) => x,
    };
    let mut families = opts.families.clone();
    families.sort();
    families.dedup();

    let mut fits = Vec::new();
    let mut failures = Vec::new();
    for &family in &families {
        match fit(family, s, xmin) {
            Ok(f) => fits.push(f),
            Err(e) => failures.push((family, e.to_string())),
        }
    }
    if fits.is_empty() {
        return Err(FitError::AllFitsFailed(failures));
    }

    let mut records: Vec<FamilyRecord> = fits
        .iter()
        .map(|f| FamilyRecord {
            family: f.family,
            fit: f.clone(),
            wins: Vec::new(),
            losses: Vec::new(),
        })
        .collect();
    let mut comparisons = Vec::new();
    for i in 0..fits.len() {
        for j in i + 1..fits.len() {
            let c = loglikelihood_ratio(s, &fits[i], &fits[j])?;
            if c.p_value < opts.significance && c.normalized_ratio != 0.0 {
                let (w, l) = if c.normalized_ratio > 0.0 { (i, j) } else { (j, i) };
                let (wf, lf) = (records[w].family, records[l].family);
                records[w].wins.push(lf);
                records[l].losses.push(wf);
            }
            comparisons.push(c);
        }
    }
    records.sort_by(|a, b| {
        a.losses
            .is_empty()
            .cmp(&b.losses.is_empty())
            .reverse()
            .then(b.fit.loglik.total_cmp(&a.fit.loglik))
            .then(a.family.cmp(&b.family))
    });
    Ok(BestFit {
        xmin,
        winner: records[0].family,
        ranking: records,
        comparisons,
        failures,
    })
}
