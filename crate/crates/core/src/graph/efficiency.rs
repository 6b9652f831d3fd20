//! Hop distances and Latora–Marchiori efficiency.
//!
//! Global efficiency sums `1/d(i, j)` over ordered pairs. Rather than adding
//! floating-point reciprocals in whatever order worker threads finish, every
//! BFS contributes to an integer histogram of distances; the histogram is
//! merged by integer addition and only converted to a float at the end, in
//! increasing distance order. The result is therefore bit-identical for any
//! worker count.

use std::collections::BTreeMap;

use rayon::prelude::*;

use super::{Csr, Graph, GraphError};

/// Degree of parallelism for the BFS-heavy metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Workers(pub usize);

impl Default for Workers {
    fn default() -> Self {
        Workers(1)
    }
}

impl Workers {
    /// Runs `op` inside a dedicated pool of this many threads.
    pub fn install<R: Send>(self, op: impl FnOnce() -> R + Send) -> R {
        if self.0 <= 1 {
            return op();
        }
        match rayon::ThreadPoolBuilder::new().num_threads(self.0).build() {
            Ok(pool) => pool.install(op),
            Err(_) => op(),
        }
    }
}

/// Count of ordered reachable pairs at each hop distance (index 0 unused).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DistanceHistogram(pub Vec<u64>);

impl DistanceHistogram {
    fn record(&mut self, distance: usize, count: u64) {
        if self.0.len() <= distance {
            self.0.resize(distance + 1, 0);
        }
        self.0[distance] += count;
    }

    pub fn merge(mut self, other: DistanceHistogram) -> DistanceHistogram {
        if other.0.len() > self.0.len() {
            self.0.resize(other.0.len(), 0);
        }
        for (a, b) in self.0.iter_mut().zip(other.0) {
            *a += b;
        }
        self
    }

    /// `Σ count(d) / d`, summed in increasing `d`.
    pub fn inverse_distance_sum(&self) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .map(|(d, &c)| c as f64 / d as f64)
            .fold(0.0, |acc, x| acc + x)
    }
}

const LANES: usize = 4;
const BATCH: usize = 64 * LANES;
type Mask = [u64; LANES];

struct Scratch {
    seen: Vec<Mask>,
    frontier: Vec<Mask>,
    next: Vec<Mask>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch {
            seen: vec![[0; LANES]; n],
            frontier: vec![[0; LANES]; n],
            next: vec![[0; LANES]; n],
        }
    }

    fn reset(&mut self, n: usize) {
        for buf in [&mut self.seen, &mut self.frontier, &mut self.next] {
            buf.clear();
            buf.resize(n, [0; LANES]);
        }
    }
}

/// Bit-parallel BFS from up to `BATCH` sources at once; every lane carries
/// one source. Adds the distance histogram of all sources to `hist`.
fn multi_source_bfs(adj: &Csr, sources: &[u32], scratch: &mut Scratch, hist: &mut DistanceHistogram) {
    debug_assert!(sources.len() <= BATCH);
    let n = adj.node_count();
    scratch.reset(n);
    let Scratch { seen, frontier, next } = scratch;
    for (lane, &s) in sources.iter().enumerate() {
        let bit = 1u64 << (lane % 64);
        seen[s as usize][lane / 64] |= bit;
        frontier[s as usize][lane / 64] |= bit;
    }
    let mut level = 0;
    loop {
        level += 1;
        for v in 0..n {
            let f = frontier[v];
            if f == [0; LANES] {
                continue;
            }
            for &w in adj.neighbors(v as u32) {
                let slot = &mut next[w as usize];
                for k in 0..LANES {
                    slot[k] |= f[k];
                }
            }
        }
        let mut found = 0u64;
        for v in 0..n {
            let mut fresh = [0u64; LANES];
            for k in 0..LANES {
                fresh[k] = next[v][k] & !seen[v][k];
                seen[v][k] |= fresh[k];
                found += u64::from(fresh[k].count_ones());
            }
            frontier[v] = fresh;
            next[v] = [0; LANES];
        }
        if found == 0 {
            break;
        }
        hist.record(level, found);
    }
}

/// Distance histogram over all ordered pairs of `adj`, parallel over source
/// batches.
fn all_pairs_histogram(adj: &Csr, workers: Workers) -> DistanceHistogram {
    let n = adj.node_count();
    let sources: Vec<u32> = (0..n as u32).collect();
    workers.install(|| {
        sources
            .par_chunks(BATCH)
            .map_init(
                || Scratch::new(n),
                |scratch, chunk| {
                    let mut h = DistanceHistogram::default();
                    multi_source_bfs(adj, chunk, scratch, &mut h);
                    h
                },
            )
            .reduce(DistanceHistogram::default, DistanceHistogram::merge)
    })
}

fn efficiency_of(adj: &Csr, workers: Workers) -> Option<f64> {
    let n = adj.node_count();
    if n < 2 {
        return None;
    }
    let h = all_pairs_histogram(adj, workers);
    Some(h.inverse_distance_sum() / (n as f64 * (n as f64 - 1.0)))
}

/// Unweighted hop distances from `source` on the undirected view. Unreachable
/// nodes are absent.
pub fn shortest_path_lengths_from<'g>(
    g: &'g Graph,
    source: &str,
) -> Result<BTreeMap<&'g str, usize>, GraphError> {
    let s = g
        .node_id(source)
        .ok_or_else(|| GraphError::UnknownNode(source.to_owned()))?;
    let adj = g.adjacency();
    let mut dist = vec![usize::MAX; g.node_count()];
    dist[s.index()] = 0;
    let mut queue = std::collections::VecDeque::from([s.0]);
    while let Some(v) = queue.pop_front() {
        let d = dist[v as usize] + 1;
        for &w in adj.neighbors(v) {
            if dist[w as usize] == usize::MAX {
                dist[w as usize] = d;
                queue.push_back(w);
            }
        }
    }
    Ok(dist
        .iter()
        .enumerate()
        .filter(|(_, &d)| d != usize::MAX)
        .map(|(v, &d)| (g.labels()[v].as_str(), d))
        .collect())
}

/// Global efficiency of the undirected view, `None` when `n < 2`.
/// Unreachable pairs contribute zero.
pub fn global_efficiency(g: &Graph, workers: Workers) -> Option<f64> {
    efficiency_of(g.adjacency(), workers)
}

/// Subgraph of `adj` induced by the sorted node set `nodes`, reindexed
/// `0..nodes.len()`. `slot` maps global ids to local index + 1 and is left
/// zeroed on return.
fn induced(adj: &Csr, nodes: &[u32], slot: &mut [u32]) -> Csr {
    for (i, &v) in nodes.iter().enumerate() {
        slot[v as usize] = i as u32 + 1;
    }
    let rows = nodes
        .iter()
        .map(|&v| {
            adj.neighbors(v)
                .iter()
                .filter_map(|&w| slot[w as usize].checked_sub(1))
                .collect::<Vec<u32>>()
        })
        .collect();
    for &v in nodes {
        slot[v as usize] = 0;
    }
    // Neighbor rows are ascending and `slot` is monotone over `nodes`, so the
    // local rows stay sorted.
    Csr::from_sorted_rows(rows)
}

fn neighborhood_efficiency(adj: &Csr, v: u32, slot: &mut [u32], scratch: &mut Option<Scratch>) -> f64 {
    let nbrs = adj.neighbors(v);
    let k = nbrs.len();
    if k < 2 {
        return 0.0;
    }
    let sub = induced(adj, nbrs, slot);
    if sub.edge_count() == 0 {
        return 0.0;
    }
    let scratch = scratch.get_or_insert_with(|| Scratch::new(0));
    let mut h = DistanceHistogram::default();
    let sources: Vec<u32> = (0..k as u32).collect();
    for chunk in sources.chunks(BATCH) {
        multi_source_bfs(&sub, chunk, scratch, &mut h);
    }
    h.inverse_distance_sum() / (k as f64 * (k as f64 - 1.0))
}

/// Mean over nodes of the global efficiency of each node's neighborhood
/// subgraph (the node itself excluded). Nodes with fewer than two neighbors
/// contribute zero. `None` only for the empty graph.
pub fn local_efficiency(g: &Graph, workers: Workers) -> Option<f64> {
    let adj = g.adjacency();
    let n = adj.node_count();
    if n == 0 {
        return None;
    }
    let mut per_node: Vec<f64> = workers.install(|| {
        (0..n as u32)
            .into_par_iter()
            .map_init(
                || (vec![0u32; n], None),
                |(slot, scratch), v| neighborhood_efficiency(adj, v, slot, scratch),
            )
            .collect()
    });
    // Summing in value order makes the mean independent of both scheduling
    // and node labelling.
    per_node.sort_unstable_by(f64::total_cmp);
    Some(per_node.iter().fold(0.0, |acc, x| acc + x) / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((labels[i].clone(), labels[j].clone()));
            }
        }
        Graph::undirected(labels.iter(), edges).unwrap()
    }

    fn star3() -> Graph {
        Graph::undirected(["c"], [("c", "a"), ("c", "b"), ("c", "d")]).unwrap()
    }

    fn path3() -> Graph {
        Graph::undirected(["a"], [("a", "b"), ("b", "c")]).unwrap()
    }

    #[test]
    fn bfs_distances() {
        let g = path3();
        let d = shortest_path_lengths_from(&g, "a").unwrap();
        assert_eq!(d.into_iter().collect::<Vec<_>>(), vec![("a", 0), ("b", 1), ("c", 2)]);

        let g = Graph::undirected(["c"], [("a", "b")]).unwrap();
        let d = shortest_path_lengths_from(&g, "a").unwrap();
        assert_eq!(d.len(), 2);
        assert!(!d.contains_key("c"));

        let star = star3();
        let d = shortest_path_lengths_from(&star, "c").unwrap();
        assert!(d.iter().all(|(k, &v)| (*k == "c") == (v == 0) && v <= 1));
    }

    #[test]
    fn unknown_source() {
        assert_eq!(
            shortest_path_lengths_from(&path3(), "zz").unwrap_err(),
            GraphError::UnknownNode("zz".into())
        );
    }

    #[test]
    fn global_closed_forms() {
        assert_eq!(global_efficiency(&complete(5), Workers(1)), Some(1.0));
        let p = global_efficiency(&path3(), Workers(1)).unwrap();
        assert!((p - 5.0 / 6.0).abs() < 1e-12);
        let s = global_efficiency(&star3(), Workers(1)).unwrap();
        assert!((s - 0.75).abs() < 1e-12);
    }

    #[test]
    fn local_closed_forms() {
        assert_eq!(local_efficiency(&complete(4), Workers(1)), Some(1.0));
        assert_eq!(local_efficiency(&star3(), Workers(1)), Some(0.0));
        assert_eq!(local_efficiency(&path3(), Workers(1)), Some(0.0));
    }

    #[test]
    fn batches_larger_than_one_word() {
        // More than BATCH sources exercises batch boundaries.
        let n = BATCH + 37;
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let g = Graph::undirected(
            labels.iter(),
            labels.windows(2).map(|w| (w[0].as_str(), w[1].as_str())),
        )
        .unwrap();
        // Path on n nodes: Σ_{i≠j} 1/|i-j| = 2 Σ_{d=1}^{n-1} (n-d)/d.
        let expected: f64 = (1..n).map(|d| 2.0 * (n - d) as f64 / d as f64).sum::<f64>()
            / (n as f64 * (n as f64 - 1.0));
        let got = global_efficiency(&g, Workers(3)).unwrap();
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn worker_count_does_not_change_bits() {
        let mut edges = Vec::new();
        for i in 0..300u32 {
            edges.push((i.to_string(), ((i * 7 + 3) % 300).to_string()));
            edges.push((i.to_string(), ((i * 13 + 1) % 300).to_string()));
        }
        let g = Graph::undirected(Vec::<String>::new(), edges.iter().map(|(a, b)| (a, b))).unwrap();
        let a = (global_efficiency(&g, Workers(1)), local_efficiency(&g, Workers(1)));
        let b = (global_efficiency(&g, Workers(4)), local_efficiency(&g, Workers(4)));
        assert_eq!(a.0.map(f64::to_bits), b.0.map(f64::to_bits));
        assert_eq!(a.1.map(f64::to_bits), b.1.map(f64::to_bits));
    }

    #[test]
    fn edgeless_graph_is_positive_zero() {
        let g = Graph::undirected(["a", "b"], Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(global_efficiency(&g, Workers(1)).map(f64::to_bits), Some(0.0f64.to_bits()));
        assert_eq!(local_efficiency(&g, Workers(1)).map(f64::to_bits), Some(0.0f64.to_bits()));
    }
}
