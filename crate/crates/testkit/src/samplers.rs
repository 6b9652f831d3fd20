use rand::{Rng, RngExt};
use rand_distr::{Distribution, Exp, LogNormal};

/// `Σ_{k≥start} k^-alpha`: 4096 explicit terms, then the integral plus the
/// first two Euler–Maclaurin corrections.
pub fn hurwitz_zeta(alpha: f64, start: u64) -> f64 {
    assert!(alpha > 1.0);
    const TERMS: u64 = 4096;
    let mut sum = 0.0;
    for k in start..start + TERMS {
        sum += (k as f64).powf(-alpha);
    }
    let n = (start + TERMS) as f64;
    sum + n.powf(1.0 - alpha) / (alpha - 1.0) + 0.5 * n.powf(-alpha)
        + alpha * n.powf(-alpha - 1.0) / 12.0
}

/// Exact inverse-CDF draw from the discrete power law
/// `P(x) = x^-alpha / ζ(alpha, xmin)`, `x ≥ xmin`.
pub struct DiscretePowerLaw {
    alpha: f64,
    xmin: u64,
    norm: f64,
}

impl DiscretePowerLaw {
    pub fn new(alpha: f64, xmin: u64) -> Self {
        DiscretePowerLaw {
            alpha,
            xmin,
            norm: hurwitz_zeta(alpha, xmin),
        }
    }

    /// `P(X ≥ x)`.
    fn survival(&self, x: u64) -> f64 {
        if x <= self.xmin {
            1.0
        } else if x - self.xmin < 64 {
            let head: f64 = (self.xmin..x).map(|k| (k as f64).powf(-self.alpha)).sum();
            1.0 - head / self.norm
        } else {
            hurwitz_zeta(self.alpha, x) / self.norm
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        // Smallest x with P(X > x) < u.
        let mut hi = self.xmin;
        while self.survival(hi + 1) >= u {
            hi = self.xmin + (hi - self.xmin + 1) * 2;
        }
        let mut lo = self.xmin;
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.survival(mid + 1) < u {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        lo
    }

    pub fn samples<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u64> {
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

/// Discrete power law with exponential cutoff, by rejection from the pure
/// power law: accept `x` with probability `exp(-lambda (x - xmin))`.
pub fn discrete_truncated_power_law<R: Rng + ?Sized>(
    rng: &mut R,
    alpha: f64,
    lambda: f64,
    xmin: u64,
    n: usize,
) -> Vec<u64> {
    let base = DiscretePowerLaw::new(alpha, xmin);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = base.sample(rng);
        let accept: f64 = rng.random();
        if accept < (-lambda * (x - xmin) as f64).exp() {
            out.push(x);
        }
    }
    out
}

/// Lognormal draws rounded to the nearest integer, keeping values ≥ `xmin`.
pub fn discrete_lognormal<R: Rng + ?Sized>(
    rng: &mut R,
    mu: f64,
    sigma: f64,
    xmin: u64,
    n: usize,
) -> Vec<u64> {
    let d = LogNormal::new(mu, sigma).unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = (d.sample(rng) + 0.5).floor() as u64;
        if x >= xmin.max(1) {
            out.push(x);
        }
    }
    out
}

pub fn lognormal<R: Rng + ?Sized>(rng: &mut R, mu: f64, sigma: f64, n: usize) -> Vec<f64> {
    let d = LogNormal::new(mu, sigma).unwrap();
    (0..n).map(|_| d.sample(rng)).collect()
}

/// Continuous exponential shifted to start at `xmin`.
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, lambda: f64, xmin: f64, n: usize) -> Vec<f64> {
    let d = Exp::new(lambda).unwrap();
    (0..n).map(|_| xmin + d.sample(rng)).collect()
}

/// Continuous Pareto with density `∝ x^-alpha` above `xmin`.
pub fn continuous_power_law<R: Rng + ?Sized>(rng: &mut R, alpha: f64, xmin: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            xmin * (1.0 - u).powf(-1.0 / (alpha - 1.0))
        })
        .collect()
}

/// Positive heavy-tailed multiset for property tests.
pub fn heavy_tailed_values<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let alpha = rng.random_range(1.5..3.5);
    continuous_power_law(rng, alpha, 1.0, n)
        .into_iter()
        .map(|x| (x * 100.0).round() / 100.0)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two_is_pi_squared_over_six() {
        let z = hurwitz_zeta(2.0, 1);
        assert!((z - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_respects_xmin_and_frequency() {
        let mut r = crate::rng(1);
        let d = DiscretePowerLaw::new(2.5, 5);
        let xs = d.samples(&mut r, 20_000);
        assert!(xs.iter().all(|&x| x >= 5));
        let p5 = 5f64.powf(-2.5) / hurwitz_zeta(2.5, 5);
        let f5 = xs.iter().filter(|&&x| x == 5).count() as f64 / xs.len() as f64;
        assert!((p5 - f5).abs() < 0.015, "{p5} vs {f5}");
    }
}
