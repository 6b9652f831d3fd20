use super::SampleSet;

/// Empirical survival function at each distinct value: `(x, P(X ≥ x))`,
/// ascending in `x`.
pub fn ccdf(s: &SampleSet) -> Vec<(f64, f64)> {
    let values = s.values();
    let n = values.len() as f64;
    let mut out = Vec::new();
    let mut i = 0;
    while i < values.len() {
        let x = values[i];
        out.push((x, (values.len() - i) as f64 / n));
        while i < values.len() && values[i] == x {
            i += 1;
        }
    }
    out
}
