use super::optimize::{golden_max, nelder_mead, Optimum};
use super::{Family, FitError, FitResult, Model, Params, SampleKind, SampleSet};

/// Tail of `s` at `xmin`, validated for fitting.
fn tail_at(s: &SampleSet, xmin: f64) -> Result<&[f64], FitError> {
    if !(xmin.is_finite() && xmin > 0.0) || (s.kind() == SampleKind::Discrete && xmin.fract() != 0.0) {
        return Err(FitError::InvalidXmin(xmin));
    }
    let tail = s.tail(xmin);
    if tail.len() < 2 {
        return Err(FitError::TooFewTail {
            xmin,
            n_tail: tail.len(),
        });
    }
    Ok(tail)
}

fn all_equal(tail: &[f64]) -> bool {
    tail.first() == tail.last()
}

/// Largest gap between the empirical CDF of `tail` and the model CDF.
pub(crate) fn ks_distance(model: &Model, tail: &[f64], kind: SampleKind) -> f64 {
    let n = tail.len() as f64;
    let mut distinct = Vec::new();
    let mut below = Vec::new(); // empirical CDF just below each distinct value
    let mut at = Vec::new(); // empirical CDF at each distinct value
    let mut i = 0;
    while i < tail.len() {
        let x = tail[i];
        let mut j = i;
        while j < tail.len() && tail[j] == x {
            j += 1;
        }
        distinct.push(x);
        below.push(i as f64 / n);
        at.push(j as f64 / n);
        i = j;
    }
    let cdf = model.cdf_sorted(&distinct);
    let mut d: f64 = 0.0;
    for k in 0..distinct.len() {
        d = d.max((at[k] - cdf[k]).abs());
        if kind == SampleKind::Continuous {
            d = d.max((below[k] - cdf[k]).abs());
        }
    }
    d.min(1.0)
}

fn finish(s: &SampleSet, xmin: f64, tail: &[f64], params: Params) -> FitResult {
    let model = Model::new(s.kind(), xmin, params);
    FitResult {
        family: params.family(),
        kind: s.kind(),
        xmin,
        params,
        loglik: model.loglik(tail),
        n_tail: tail.len(),
        ks_distance: ks_distance(&model, tail, s.kind()),
    }
}

/// Power-law exponent: the closed-form Hill estimator for continuous data,
/// golden-section maximization of the zeta-normalized likelihood for
/// discrete data.
pub fn fit_power_law(s: &SampleSet, xmin: f64) -> Result<FitResult, FitError> {
    let tail = tail_at(s, xmin)?;
    if all_equal(tail) {
        return Err(FitError::Degenerate {
            family: Family::PowerLaw,
            reason: "all tail values equal xmin",
        });
    }
    let n = tail.len() as f64;
    let alpha = match s.kind() {
        SampleKind::Continuous => {
            let log_sum: f64 = tail.iter().map(|&x| (x / xmin).ln()).sum();
            1.0 + n / log_sum
        }
        SampleKind::Discrete => {
            let log_sum: f64 = tail.iter().map(|&x| x.ln()).sum();
            let loglik = |alpha: f64| {
                -alpha * log_sum - n * super::special::ln_cutoff_sum(alpha, 0.0, xmin as u64)
            };
            golden_max(loglik, 1.0 + 1e-9, 50.0, 1e-10)
        }
    };
    Ok(finish(s, xmin, tail, Params::PowerLaw { alpha }))
}

/// Exponential rate; both sample kinds have a closed-form MLE.
pub fn fit_exponential(s: &SampleSet, xmin: f64) -> Result<FitResult, FitError> {
    let tail = tail_at(s, xmin)?;
    let excess = tail.iter().map(|&x| x - xmin).sum::<f64>() / tail.len() as f64;
    if excess <= 0.0 || all_equal(tail) {
        return Err(FitError::Degenerate {
            family: Family::Exponential,
            reason: "tail mean equals xmin",
        });
    }
    let lambda = match s.kind() {
        SampleKind::Continuous => 1.0 / excess,
        SampleKind::Discrete => (1.0 / excess).ln_1p(),
    };
    Ok(finish(s, xmin, tail, Params::Exponential { lambda }))
}

fn negated_loglik(kind: SampleKind, xmin: f64, tail: &[f64], params: Params) -> f64 {
    -Model::new(kind, xmin, params).loglik(tail)
}

/// Runs Nelder–Mead from each start, restarting once from the best vertex,
/// and keeps the lowest value.
fn minimize_from(
    family: Family,
    to_params: impl Fn(&[f64]) -> Option<Params>,
    objective: impl Fn(Params) -> f64,
    starts: &[[f64; 2]],
    step: [f64; 2],
) -> Result<Optimum, FitError> {
    let f = |x: &[f64]| to_params(x).map_or(f64::INFINITY, &objective);
    let mut best: Option<Optimum> = None;
    for start in starts {
        let run = nelder_mead(f, start, &step).and_then(|o| {
            let evals = o.evaluations;
            nelder_mead(f, &o.x, &step.map(|s| s * 0.01)).map(|mut r| {
                r.evaluations += evals;
                r
            })
        });
        match run {
            Ok(o) => {
                if best.as_ref().map_or(true, |b| o.value < b.value) {
                    best = Some(o);
                }
            }
            Err(nc) => {
                let last = to_params(&nc.last).unwrap_or(match family {
                    Family::Lognormal => Params::Lognormal { mu: nc.last[0], sigma: nc.last[1].exp() },
                    _ => Params::TruncatedPowerLaw { alpha: nc.last[0], lambda: nc.last[1].exp() },
                });
                return Err(FitError::NotConverged {
                    family,
                    last,
                    evaluations: nc.evaluations,
                });
            }
        }
    }
    Ok(best.expect("at least one start"))
}

/// Lognormal by numeric maximization of the `xmin`-truncated likelihood over
/// `(μ, ln σ)`, started from the untruncated log-moment estimates.
pub fn fit_lognormal(s: &SampleSet, xmin: f64) -> Result<FitResult, FitError> {
    let tail = tail_at(s, xmin)?;
    if all_equal(tail) {
        return Err(FitError::Degenerate {
            family: Family::Lognormal,
            reason: "fewer than two distinct tail values",
        });
    }
    let n = tail.len() as f64;
    let mu0 = tail.iter().map(|x| x.ln()).sum::<f64>() / n;
    let var0 = tail.iter().map(|x| (x.ln() - mu0).powi(2)).sum::<f64>() / n;
    let sigma0 = var0.sqrt().max(1e-3);
    let kind = s.kind();
    let to_params = |x: &[f64]| {
        let sigma = x[1].exp();
        (sigma.is_finite() && sigma > 0.0 && x[0].is_finite()).then_some(Params::Lognormal { mu: x[0], sigma })
    };
    let opt = minimize_from(
        Family::Lognormal,
        to_params,
        |p| negated_loglik(kind, xmin, tail, p),
        &[[mu0, sigma0.ln()]],
        [0.1 * sigma0.max(0.1), 0.1],
    )?;
    let params = to_params(&opt.x).expect("optimum is feasible");
    if let Params::Lognormal { sigma, .. } = params {
        if sigma < 1e-8 {
            return Err(FitError::Degenerate {
                family: Family::Lognormal,
                reason: "scale collapsed to zero",
            });
        }
    }
    Ok(finish(s, xmin, tail, params))
}

/// Log of the smallest cutoff rate tried; at `e^-700` the cutoff factor is
/// numerically 1 on any realistic sample, so this start reproduces the pure
/// power law.
const LN_LAMBDA_FLOOR: f64 = -700.0;

/// Power law with exponential cutoff by Nelder–Mead over `(α, ln λ)`.
///
/// Starts from the pure power-law exponent with the cutoff at its floor
/// (which reproduces the power-law likelihood, so the result never falls
/// below it) and with `λ₀ = 1/mean(tail)`.
pub fn fit_truncated_power_law(s: &SampleSet, xmin: f64) -> Result<FitResult, FitError> {
    let tail = tail_at(s, xmin)?;
    if all_equal(tail) {
        return Err(FitError::Degenerate {
            family: Family::TruncatedPowerLaw,
            reason: "all tail values equal xmin",
        });
    }
    let kind = s.kind();
    let alpha0 = match fit_power_law(s, xmin) {
        Ok(FitResult {
            params: Params::PowerLaw { alpha },
            ..
        }) => alpha,
        _ => 1.5,
    };
    let mean = tail.iter().sum::<f64>() / tail.len() as f64;
    let to_params = |x: &[f64]| {
        let ok = (0.0..=50.0).contains(&x[0]) && (LN_LAMBDA_FLOOR..=10.0).contains(&x[1]);
        ok.then(|| Params::TruncatedPowerLaw {
            alpha: x[0],
            lambda: x[1].exp(),
        })
    };
    let opt = minimize_from(
        Family::TruncatedPowerLaw,
        to_params,
        |p| negated_loglik(kind, xmin, tail, p),
        &[[alpha0, LN_LAMBDA_FLOOR], [alpha0, (1.0 / mean).ln()], [1.0, (1.0 / mean).ln()]],
        [0.1, 1.0],
    )?;
    let params = to_params(&opt.x).expect("optimum is feasible");
    Ok(finish(s, xmin, tail, params))
}

/// Dispatches to the family's fitter.
pub fn fit(family: Family, s: &SampleSet, xmin: f64) -> Result<FitResult, FitError> {
    match family {
        Family::PowerLaw => fit_power_law(s, xmin),
        Family::TruncatedPowerLaw => fit_truncated_power_law(s, xmin),
        Family::Lognormal => fit_lognormal(s, xmin),
        Family::Exponential => fit_exponential(s, xmin),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(r: &FitResult) -> f64 {
        match r.params {
            Params::PowerLaw { alpha } | Params::TruncatedPowerLaw { alpha, .. } => alpha,
            _ => panic!("no alpha"),
        }
    }

    #[test]
    fn hill_estimator_closed_form() {
        let s = SampleSet::continuous(vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        let r = fit_power_law(&s, 1.0).unwrap();
        let expected = 1.0 + 4.0 / (6.0 * 2f64.ln());
        assert!((alpha(&r) - expected).abs() < 1e-12);
        assert!((expected - 1.9618).abs() < 1e-4);
        assert_eq!(r.n_tail, 4);
    }

    #[test]
    fn hill_estimator_is_scale_free() {
        let s = SampleSet::continuous(vec![1.0, 2.0, 4.0, 8.0]).unwrap();
        let t = SampleSet::continuous(vec![10.0, 20.0, 40.0, 80.0]).unwrap();
        let a = alpha(&fit_power_law(&s, 1.0).unwrap());
        let b = alpha(&fit_power_law(&t, 10.0).unwrap());
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn values_below_xmin_are_filtered() {
        let s = SampleSet::continuous(vec![0.5, 1.0, 2.0, 4.0, 8.0]).unwrap();
        let r = fit_power_law(&s, 1.0).unwrap();
        assert_eq!(r.n_tail, 4);
    }

    #[test]
    fn exponential_closed_form() {
        let s = SampleSet::continuous(vec![2.0, 3.0, 5.0]).unwrap();
        let r = fit_exponential(&s, 2.0).unwrap();
        assert_eq!(r.params, Params::Exponential { lambda: 0.75 });
    }

    #[test]
    fn zero_spread_is_degenerate() {
        let s = SampleSet::continuous(vec![4.0, 4.0, 4.0]).unwrap();
        assert!(matches!(fit_exponential(&s, 4.0), Err(FitError::Degenerate { .. })));
        let s = SampleSet::discrete([5, 5, 5]).unwrap();
        assert!(matches!(fit_lognormal(&s, 5.0), Err(FitError::Degenerate { .. })));
        assert!(matches!(fit_power_law(&s, 5.0), Err(FitError::Degenerate { .. })));
    }

    #[test]
    fn lognormal_log_moments_without_truncation() {
        let e2 = 2f64.exp();
        let s = SampleSet::continuous(vec![1.0, e2]).unwrap();
        let r = fit_lognormal(&s, 1e-6).unwrap();
        let Params::Lognormal { mu, sigma } = r.params else { panic!() };
        assert!((mu - 1.0).abs() < 1e-6, "{mu}");
        assert!((sigma - 1.0).abs() < 1e-6, "{sigma}");
    }

    #[test]
    fn too_few_tail_values() {
        let s = SampleSet::discrete([1, 2, 30]).unwrap();
        assert_eq!(
            fit_power_law(&s, 30.0).unwrap_err(),
            FitError::TooFewTail { xmin: 30.0, n_tail: 1 }
        );
    }

    #[test]
    fn discrete_xmin_must_be_integral() {
        let s = SampleSet::discrete([1, 2, 3]).unwrap();
        assert_eq!(fit_power_law(&s, 1.5).unwrap_err(), FitError::InvalidXmin(1.5));
    }

    #[test]
    fn truncated_nests_power_law_on_small_sample() {
        for kind in [SampleKind::Continuous, SampleKind::Discrete] {
            let s = SampleSet::new(kind, vec![1.0, 2.0, 4.0, 8.0]).unwrap();
            let pl = fit_power_law(&s, 1.0).unwrap();
            let tpl = fit_truncated_power_law(&s, 1.0).unwrap();
            assert!(tpl.loglik >= pl.loglik - 1e-6, "{kind:?}: {} < {}", tpl.loglik, pl.loglik);
        }
    }

    #[test]
    fn ks_distance_is_a_fraction() {
        let s = SampleSet::discrete([1, 1, 2, 3, 5, 8, 13, 21]).unwrap();
        for f in super::super::Family::ALL {
            let r = fit(f, &s, 1.0).unwrap();
            assert!((0.0..=1.0).contains(&r.ks_distance), "{f}: {}", r.ks_distance);
        }
    }
}
