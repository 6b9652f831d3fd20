//! Small deterministic optimizers for the likelihood fits.

pub const MAX_EVALUATIONS: usize = 10_000;
pub const PARAM_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct Optimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct NotConverged {
    pub last: Vec<f64>,
    pub evaluations: usize,
}

/// Nelder–Mead minimization. Non-finite objective values are treated as
/// `+∞`, which lets callers express parameter bounds by returning `NaN` or
/// infinity.
///
/// Stops once every vertex lies within `PARAM_TOLERANCE` of the best one in
/// every coordinate, or once the simplex values agree to relative `1e-15`
/// (flat directions).
pub fn nelder_mead(
    mut f: impl FnMut(&[f64]) -> f64,
    start: &[f64],
    step: &[f64],
) -> Result<Optimum, NotConverged> {
    let dim = start.len();
    let mut evals = 0;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            f64::INFINITY
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let v0 = eval(start, &mut evals);
    simplex.push((start.to_vec(), v0));
    for i in 0..dim {
        let mut x = start.to_vec();
        x[i] += step[i];
        let v = eval(&x, &mut evals);
        simplex.push((x, v));
    }
    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0];
        let spread_x = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&best.0).map(|(a, b)| (a - b).abs()))
            .fold(0.0, f64::max);
        let worst_v = simplex[dim].1;
        let flat = best.1.is_finite() && (worst_v - best.1).abs() <= 1e-15 * best.1.abs().max(1e-300);
        if spread_x <= PARAM_TOLERANCE || flat {
            return Ok(Optimum {
                x: best.0.clone(),
                value: best.1,
                evaluations: evals,
            });
        }
        if evals >= MAX_EVALUATIONS {
            return Err(NotConverged {
                last: best.0.clone(),
                evaluations: evals,
            });
        }
        let centroid: Vec<f64> = (0..dim)
            .map(|j| simplex[..dim].iter().map(|(x, _)| x[j]).sum::<f64>() / dim as f64)
            .collect();
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + t * (w - c))
                .collect()
        };
        let worst = simplex[dim].0.clone();
        let reflected = along(-1.0, &worst);
        let fr = eval(&reflected, &mut evals);
        if fr < simplex[0].1 {
            let expanded = along(-2.0, &worst);
            let fe = eval(&expanded, &mut evals);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let (contracted, fc) = if fr < worst_v {
                let c = along(-0.5, &worst);
                let v = eval(&c, &mut evals);
                (c, v)
            } else {
                let c = along(0.5, &worst);
                let v = eval(&c, &mut evals);
                (c, v)
            };
            if fc < fr.min(worst_v) {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = best
                        .iter()
                        .zip(&vertex.0)
                        .map(|(b, x)| b + 0.5 * (x - b))
                        .collect();
                    let v = eval(&shrunk, &mut evals);
                    *vertex = (shrunk, v);
                }
            }
        }
    }
}

/// Golden-section maximization of a unimodal function on `[lo, hi]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}
