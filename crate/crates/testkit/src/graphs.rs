use std::collections::HashSet;

use rand::{Rng, RngExt};

/// Uniform random simple undirected graph with `n` nodes and up to `m`
/// distinct edges (fewer if `m` exceeds the number of pairs).
pub fn gnm<R: Rng + ?Sized>(rng: &mut R, n: u32, m: usize) -> Vec<(u32, u32)> {
    let max = n as usize * (n as usize).saturating_sub(1) / 2;
    let m = m.min(max);
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let a = rng.random_range(0..n);
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    edges
}

/// Chung–Lu style graph with a power-law expected degree sequence, for
/// dependency-graph-scale workloads. Produces exactly `m` distinct edges.
pub fn heavy_tailed_graph<R: Rng + ?Sized>(rng: &mut R, n: u32, m: usize, exponent: f64) -> Vec<(u32, u32)> {
    let weights: Vec<f64> = (1..=n as u64)
        .map(|i| (i as f64).powf(-1.0 / (exponent - 1.0)))
        .collect();
    let total: f64 = weights.iter().sum();
    let mut cumulative = Vec::with_capacity(weights.len());
    let mut acc = 0.0;
    for w in &weights {
        acc += w / total;
        cumulative.push(acc);
    }
    let pick = |r: &mut R| {
        let u: f64 = r.random();
        cumulative.partition_point(|&c| c < u).min(n as usize - 1) as u32
    };
    let mut seen = HashSet::with_capacity(m);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let a = pick(rng);
        // One uniform endpoint keeps the hubs from saturating.
        let b = rng.random_range(0..n);
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        if seen.insert(key) {
            edges.push(key);
        }
    }
    edges
}

/// Reference values computed from dense all-pairs distances.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub giant_component_size: usize,
    pub density: Option<f64>,
    pub assortativity: Option<f64>,
    pub local_efficiency: Option<f64>,
    pub global_efficiency: Option<f64>,
}

const INF: u32 = u32::MAX / 4;

fn floyd_warshall(adj: &[Vec<bool>]) -> Vec<Vec<u32>> {
    let n = adj.len();
    let mut d = vec![vec![INF; n]; n];
    for i in 0..n {
        d[i][i] = 0;
        for j in 0..n {
            if adj[i][j] {
                d[i][j] = 1;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// `(1/(n(n-1))) Σ_{i≠j} 1/d_ij` straight from the definition.
pub fn efficiency_of_matrix(adj: &[Vec<bool>]) -> Option<f64> {
    let n = adj.len();
    if n < 2 {
        return None;
    }
    let d = floyd_warshall(adj);
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j && d[i][j] < INF {
                sum += 1.0 / d[i][j] as f64;
            }
        }
    }
    Some(sum / (n * (n - 1)) as f64)
}

/// Brute-force metrics for a simple undirected graph on nodes `0..n`.
pub fn oracle_metrics(n: usize, edges: &[(u32, u32)]) -> OracleMetrics {
    let mut adj = vec![vec![false; n]; n];
    for &(a, b) in edges {
        if a != b {
            adj[a as usize][b as usize] = true;
            adj[b as usize][a as usize] = true;
        }
    }
    let m = (0..n).map(|i| (i + 1..n).filter(|&j| adj[i][j]).count()).sum::<usize>();
    let d = floyd_warshall(&adj);

    // Components from reachability classes.
    let mut label = vec![usize::MAX; n];
    let mut sizes = Vec::new();
    for i in 0..n {
        if label[i] == usize::MAX {
            let c = sizes.len();
            let mut size = 0;
            for j in 0..n {
                if d[i][j] < INF {
                    label[j] = c;
                    size += 1;
                }
            }
            sizes.push(size);
        }
    }

    let density = (n >= 2).then(|| m as f64 / (n as f64 * (n as f64 - 1.0) / 2.0));

    let deg: Vec<f64> = adj.iter().map(|r| r.iter().filter(|&&x| x).count() as f64).collect();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if adj[i][j] {
                xs.push(deg[i]);
                ys.push(deg[j]);
            }
        }
    }
    let assortativity = pearson(&xs, &ys);

    let local_efficiency = (n >= 1).then(|| {
        let mut total = 0.0;
        for i in 0..n {
            let nb: Vec<usize> = (0..n).filter(|&j| adj[i][j]).collect();
            if nb.len() < 2 {
                continue;
            }
            let sub: Vec<Vec<bool>> = nb
                .iter()
                .map(|&a| nb.iter().map(|&b| adj[a][b]).collect())
                .collect();
            total += efficiency_of_matrix(&sub).unwrap();
        }
        total / n as f64
    });

    OracleMetrics {
        nodes: n,
        edges: m,
        components: sizes.len(),
        giant_component_size: sizes.iter().copied().max().unwrap_or(0),
        density,
        assortativity,
        local_efficiency,
        global_efficiency: efficiency_of_matrix(&adj),
    }
}

fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx < 1e-12 || syy < 1e-12 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}
