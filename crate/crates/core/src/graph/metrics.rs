use serde::{Deserialize, Serialize};

use super::{Graph, NodeId};

/// Weakly connected components of a graph.
///
/// Component ids are assigned in order of each component's smallest node
/// index, so the partition is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Components {
    /// Component id of every node.
    pub membership: Vec<u32>,
    /// Size of every component, indexed by id.
    pub sizes: Vec<usize>,
}

impl Components {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    pub fn giant_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    /// Node ids of each component, ascending.
    pub fn groups(&self) -> Vec<Vec<NodeId>> {
        let mut groups = vec![Vec::new(); self.sizes.len()];
        for (v, &c) in self.membership.iter().enumerate() {
            groups[c as usize].push(NodeId(v as u32));
        }
        groups
    }
}

pub fn weakly_connected_components(g: &Graph) -> Components {
    let adj = g.adjacency();
    let n = g.node_count();
    let mut membership = vec![u32::MAX; n];
    let mut sizes = Vec::new();
    let mut stack = Vec::new();
    for start in 0..n {
        if membership[start] != u32::MAX {
            continue;
        }
        let id = sizes.len() as u32;
        membership[start] = id;
        stack.push(start as u32);
        let mut size = 0;
        while let Some(v) = stack.pop() {
            size += 1;
            for &w in adj.neighbors(v) {
                if membership[w as usize] == u32::MAX {
                    membership[w as usize] = id;
                    stack.push(w);
                }
            }
        }
        sizes.push(size);
    }
    Components { membership, sizes }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityMode {
    Directed,
    #[default]
    Undirected,
}

impl std::str::FromStr for DensityMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "directed" => Ok(DensityMode::Directed),
            "undirected" => Ok(DensityMode::Undirected),
            other => Err(format!("unknown density mode `{other}` (expected directed|undirected)")),
        }
    }
}

/// Density of a simple graph with `n` nodes and `m` edges, `None` when
/// `n < 2`.
///
/// Undirected: `m / (n(n-1)/2)`. Directed: `m / (n(n-1))` where `m` counts
/// arcs.
pub fn density_from_counts(n: usize, m: usize, mode: DensityMode) -> Option<f64> {
    if n < 2 {
        return None;
    }
    let (n, m) = (n as f64, m as f64);
    let pairs = n * (n - 1.0);
    Some(match mode {
        DensityMode::Directed => m / pairs,
        DensityMode::Undirected => m / (pairs / 2.0),
    })
}

/// Directed density counts the stored arcs (both orientations of each edge
/// for an undirected graph); undirected density counts adjacent pairs of the
/// undirected view.
pub fn density(g: &Graph, mode: DensityMode) -> Option<f64> {
    let m = match mode {
        DensityMode::Undirected => g.undirected_edge_count(),
        DensityMode::Directed => match g.direction() {
            super::Direction::Directed => g.edge_count(),
            super::Direction::Undirected => 2 * g.edge_count(),
        },
    };
    density_from_counts(g.node_count(), m, mode)
}

/// Degree assortativity of the undirected view: the Pearson correlation of
/// endpoint degrees over every edge taken in both orientations.
///
/// The sums are accumulated in exact integer arithmetic. Returns `None` for
/// an edgeless graph or when all endpoint degrees are equal.
pub fn degree_assortativity(g: &Graph) -> Option<f64> {
    let adj = g.adjacency();
    let mut count: u128 = 0;
    let mut sum: u128 = 0;
    let mut sum_sq: u128 = 0;
    let mut sum_prod: u128 = 0;
    for v in 0..adj.node_count() as u32 {
        let dv = adj.degree(v) as u128;
        for &w in adj.neighbors(v) {
            let dw = adj.degree(w) as u128;
            count += 1;
            sum += dv;
            sum_sq += dv * dv;
            sum_prod += dv * dw;
        }
    }
    if count == 0 {
        return None;
    }
    // Both orientations are present, so the two marginals coincide.
    let denom = count * sum_sq - sum * sum;
    if denom == 0 {
        return None;
    }
    let numer = (count * sum_prod) as i128 - (sum * sum) as i128;
    Some((numer as f64 / denom as f64).clamp(-1.0, 1.0))
}
