//! Log-space special functions and quadrature used by the likelihoods.

use std::f64::consts::{LN_2, PI, SQRT_2};

use super::SampleKind;

/// `ln erfc(x)`, accurate past the point where `erfc` underflows.
pub fn ln_erfc(x: f64) -> f64 {
    if x < 26.0 {
        libm::erfc(x).ln()
    } else {
        // Asymptotic series; the first omitted term is below 1e-10 at x = 26.
        let x2 = x * x;
        let inv = 1.0 / x2;
        let series = 1.0 - 0.5 * inv + 0.75 * inv * inv - 1.875 * inv * inv * inv;
        -x2 - (x * PI.sqrt()).ln() + series.ln()
    }
}

/// `ln P(Z > z)` for a standard normal `Z`.
pub fn ln_norm_sf(z: f64) -> f64 {
    -LN_2 + ln_erfc(z / SQRT_2)
}

/// `ln P(Z ≤ z)`.
pub fn ln_norm_cdf(z: f64) -> f64 {
    ln_norm_sf(-z)
}

/// `ln(1 - e^x)` for `x ≤ 0`.
pub fn ln_1m_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln P(a < Z ≤ b)` for `a < b`, choosing the tail that avoids
/// cancellation.
pub fn ln_norm_interval(a: f64, b: f64) -> f64 {
    debug_assert!(a <= b);
    if a >= 0.0 {
        let (la, lb) = (ln_norm_sf(a), ln_norm_sf(b));
        la + ln_1m_exp(lb - la)
    } else if b <= 0.0 {
        let (la, lb) = (ln_norm_cdf(a), ln_norm_cdf(b));
        lb + ln_1m_exp(la - lb)
    } else {
        (1.0 - 0.5 * libm::erfc(-a / SQRT_2) - 0.5 * libm::erfc(b / SQRT_2)).ln()
    }
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const KRONROD_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights at the odd-indexed Kronrod nodes.
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let centre = f(mid);
    let mut kronrod = KRONROD_WEIGHTS[7] * centre;
    let mut gauss = GAUSS_WEIGHTS[3] * centre;
    for i in 0..7 {
        let dx = half * GK_NODES[i];
        let pair = f(mid - dx) + f(mid + dx);
        kronrod += KRONROD_WEIGHTS[i] * pair;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Adaptive Gauss–Kronrod integration of a smooth non-negative integrand.
pub fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    fn recurse(f: &impl Fn(f64) -> f64, a: f64, b: f64, whole: (f64, f64), tol: f64, depth: u32) -> f64 {
        let (value, err) = whole;
        if err <= tol || depth == 0 {
            return value;
        }
        let m = 0.5 * (a + b);
        let left = gauss_kronrod_15(f, a, m);
        let right = gauss_kronrod_15(f, m, b);
        recurse(f, a, m, left, 0.5 * tol, depth - 1) + recurse(f, m, b, right, 0.5 * tol, depth - 1)
    }
    let first = gauss_kronrod_15(f, a, b);
    let tol = (rel_tol * first.0.abs()).max(f64::MIN_POSITIVE);
    recurse(f, a, b, first, tol, 40)
}

/// `ln ∫_start^∞ x^-alpha e^{-lambda x} dx`, `+∞` when the integral
/// diverges (`lambda = 0`, `alpha ≤ 1`).
pub fn ln_cutoff_integral(alpha: f64, lambda: f64, start: f64) -> f64 {
    debug_assert!(start > 0.0 && lambda >= 0.0);
    let c = lambda * start;
    let prefix = (1.0 - alpha) * start.ln() - c;
    if c == 0.0 {
        return if alpha > 1.0 {
            prefix - (alpha - 1.0).ln()
        } else {
            f64::INFINITY
        };
    }
    // Substituting x = start·e^t leaves a log-concave integrand in t.
    let g = |t: f64| (1.0 - alpha) * t - c * t.exp_m1();
    let peak = if alpha < 1.0 {
        ((1.0 - alpha) / c).ln().max(0.0)
    } else {
        0.0
    };
    let top = g(peak);
    let mut end = peak + 1.0;
    while g(end) > top - 60.0 {
        end = peak + 2.0 * (end - peak);
    }
    let h = |t: f64| (g(t) - top).exp();
    let mut total = integrate(&h, peak, end, 1e-13);
    if peak > 0.0 {
        total += integrate(&h, 0.0, peak, 1e-13);
    }
    prefix + top + total.ln()
}

const DIRECT_TERMS: u64 = 100;

/// `ln Σ_{k≥start} k^-alpha e^{-lambda k}` for integer `start ≥ 1`.
///
/// The first hundred terms are summed directly. The remainder from
/// `N = start + 100` is the Euler–Maclaurin expansion through the
/// `f'''` term, whose truncation error is below `1e-12` of the total for
/// every `alpha` the fitters visit. With a positive cutoff the direct sum
/// stops early once a geometric bound puts the remainder below `1e-17` of
/// the running sum. Returns `+∞` for the divergent `lambda = 0, alpha ≤ 1`.
pub fn ln_cutoff_sum(alpha: f64, lambda: f64, start: u64) -> f64 {
    debug_assert!(start >= 1 && lambda >= 0.0);
    if lambda == 0.0 && alpha <= 1.0 {
        return f64::INFINITY;
    }
    let ln_term = |k: f64| -alpha * k.ln() - lambda * k;
    let s = start as f64;
    let base = ln_term(s);
    let ratio = (-lambda).exp();
    let mut sum = 0.0;
    for k in start..start + DIRECT_TERMS {
        let r = (ln_term(k as f64) - base).exp();
        sum += r;
        if lambda > 0.0 && alpha >= 0.0 && r * ratio / (1.0 - ratio) < 1e-17 * sum {
            return base + sum.ln();
        }
    }
    let n = (start + DIRECT_TERMS) as f64;
    let rn = (ln_term(n) - base).exp();
    let d1 = -alpha / n - lambda;
    let d2 = alpha / (n * n);
    let d3 = -2.0 * alpha / (n * n * n);
    let f1 = d1;
    let f3 = d1 * d1 * d1 + 3.0 * d1 * d2 + d3;
    let integral = (ln_cutoff_integral(alpha, lambda, n) - base).exp();
    let tail = integral + rn * (0.5 - f1 / 12.0 + f3 / 720.0);
    base + (sum + tail).ln()
}

/// Dispatches on sample kind; `start` must be integral for discrete samples.
pub fn ln_cutoff_normalizer(alpha: f64, lambda: f64, start: f64, kind: SampleKind) -> f64 {
    match kind {
        SampleKind::Continuous => ln_cutoff_integral(alpha, lambda, start),
        SampleKind::Discrete => ln_cutoff_sum(alpha, lambda, start as u64),
    }
}
