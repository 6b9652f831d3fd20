use std::f64::consts::PI;

use super::special::{ln_cutoff_normalizer, ln_norm_interval, ln_norm_sf};
use super::{Params, SampleKind};

/// A fully specified `xmin`-truncated distribution with its normalizer
/// precomputed.
#[derive(Debug, Clone, Copy)]
pub struct Model {
    kind: SampleKind,
    xmin: f64,
    params: Params,
    ln_norm: f64,
}

impl Model {
    pub fn new(kind: SampleKind, xmin: f64, params: Params) -> Self {
        let ln_norm = match (params, kind) {
            (Params::PowerLaw { alpha }, SampleKind::Continuous) => (alpha - 1.0).ln() - xmin.ln(),
            (Params::PowerLaw { alpha }, SampleKind::Discrete) => ln_cutoff_normalizer(alpha, 0.0, xmin, kind),
            (Params::TruncatedPowerLaw { alpha, lambda }, _) => ln_cutoff_normalizer(alpha, lambda, xmin, kind),
            (Params::Lognormal { mu, sigma }, SampleKind::Continuous) => {
                ln_norm_sf((xmin.ln() - mu) / sigma)
            }
            (Params::Lognormal { mu, sigma }, SampleKind::Discrete) => {
                ln_norm_sf(((xmin - 0.5).ln() - mu) / sigma)
            }
            (Params::Exponential { lambda }, SampleKind::Continuous) => lambda.ln(),
            (Params::Exponential { lambda }, SampleKind::Discrete) => (-(-lambda).exp_m1()).ln(),
        };
        Model {
            kind,
            xmin,
            params,
            ln_norm,
        }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    /// Log density (continuous) or log mass (discrete) at `x ≥ xmin`.
    pub fn ln_pdf(&self, x: f64) -> f64 {
        match (self.params, self.kind) {
            (Params::PowerLaw { alpha }, SampleKind::Continuous) => self.ln_norm - alpha * (x / self.xmin).ln(),
            (Params::PowerLaw { alpha }, SampleKind::Discrete) => -alpha * x.ln() - self.ln_norm,
            (Params::TruncatedPowerLaw { alpha, lambda }, _) => -alpha * x.ln() - lambda * x - self.ln_norm,
            (Params::Lognormal { mu, sigma }, SampleKind::Continuous) => {
                let z = (x.ln() - mu) / sigma;
                -x.ln() - sigma.ln() - 0.5 * (2.0 * PI).ln() - 0.5 * z * z - self.ln_norm
            }
            (Params::Lognormal { mu, sigma }, SampleKind::Discrete) => {
                let lo = ((x - 0.5).ln() - mu) / sigma;
                let hi = ((x + 0.5).ln() - mu) / sigma;
                ln_norm_interval(lo, hi) - self.ln_norm
            }
            (Params::Exponential { lambda }, _) => self.ln_norm - lambda * (x - self.xmin),
        }
    }

    /// Sum of `ln_pdf` over `xs`.
    pub fn loglik(&self, xs: &[f64]) -> f64 {
        xs.iter().map(|&x| self.ln_pdf(x)).sum()
    }

    /// `ln P(X ≥ x)` for `x ≥ xmin` (`x` integral for discrete models).
    fn ln_survival(&self, x: f64) -> f64 {
        if x <= self.xmin {
            return 0.0;
        }
        match (self.params, self.kind) {
            (Params::PowerLaw { alpha }, SampleKind::Continuous) => (1.0 - alpha) * (x / self.xmin).ln(),
            (Params::PowerLaw { alpha }, SampleKind::Discrete) => {
                ln_cutoff_normalizer(alpha, 0.0, x, self.kind) - self.ln_norm
            }
            (Params::TruncatedPowerLaw { alpha, lambda }, _) => {
                ln_cutoff_normalizer(alpha, lambda, x, self.kind) - self.ln_norm
            }
            (Params::Lognormal { mu, sigma }, SampleKind::Continuous) => {
                ln_norm_sf((x.ln() - mu) / sigma) - self.ln_norm
            }
            (Params::Lognormal { mu, sigma }, SampleKind::Discrete) => {
                ln_norm_sf(((x - 0.5).ln() - mu) / sigma) - self.ln_norm
            }
            (Params::Exponential { lambda }, _) => -lambda * (x - self.xmin),
        }
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x < self.xmin {
            return 0.0;
        }
        let next = match self.kind {
            SampleKind::Continuous => x,
            SampleKind::Discrete => x.floor() + 1.0,
        };
        -self.ln_survival(next).exp_m1()
    }

    /// `P(X ≤ x)` at each of the ascending values `xs`. Discrete power laws
    /// accumulate mass across short gaps instead of re-evaluating the
    /// normalizer at every point.
    pub fn cdf_sorted(&self, xs: &[f64]) -> Vec<f64> {
        let discrete_power = self.kind == SampleKind::Discrete
            && matches!(self.params, Params::PowerLaw { .. } | Params::TruncatedPowerLaw { .. });
        if !discrete_power {
            return xs.iter().map(|&x| self.cdf(x)).collect();
        }
        let mut out = Vec::with_capacity(xs.len());
        let mut covered = self.xmin; // mass accumulated for all k < covered
        let mut mass = 0.0;
        for &x in xs {
            if x < self.xmin {
                out.push(0.0);
                continue;
            }
            if x + 1.0 - covered > 256.0 {
                mass = self.cdf(x);
            } else {
                let mut k = covered;
                while k <= x {
                    mass += self.ln_pdf(k).exp();
                    k += 1.0;
                }
            }
            covered = x + 1.0;
            out.push(mass.min(1.0));
        }
        out
    }
}
