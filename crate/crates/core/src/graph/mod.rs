//! Graph representations and the network metrics computed over them.
//!
//! Every graph interns its node labels to dense `u32` indices and keeps a
//! sorted, deduplicated CSR adjacency of its *undirected view*. Directed
//! graphs additionally remember their arcs, which only matter for node/edge
//! counts and for directed density; components, assortativity and both
//! efficiencies always run on the undirected view.

mod bipartite;
mod csr;
mod efficiency;
mod metrics;
mod report;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use bipartite::{project_onto_contributors, BipartiteEdge, BipartiteError, BipartiteGraph};
pub use csr::Csr;
pub use efficiency::{
    global_efficiency, local_efficiency, shortest_path_lengths_from, DistanceHistogram, Workers,
};
pub use metrics::{
    degree_assortativity, density, density_from_counts, weakly_connected_components, Components,
    DensityMode,
};
pub use report::{full_metrics, MetricsOptions, MetricsReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {position}: empty node label")]
    EmptyLabel { position: usize },
    #[error("unknown node `{0}`")]
    UnknownNode(String),
}

/// Dense index of an interned node label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Directed,
    Undirected,
}

/// Bijection between labels and dense indices, in first-seen order.
#[derive(Debug, Clone, Default)]
pub struct Interner {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
}

impl Interner {
    pub fn intern(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId(self.labels.len() as u32);
        self.labels.push(label.to_owned());
        self.index.insert(label.to_owned(), id);
        id
    }

    pub fn get(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    pub fn label(&self, id: NodeId) -> &str {
        &self.labels[id.index()]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// A simple graph (no self-loops, no parallel edges), directed or undirected.
#[derive(Debug, Clone)]
pub struct Graph {
    nodes: Interner,
    direction: Direction,
    /// Stored edges: arcs `(from, to)` when directed, `(min, max)` pairs when
    /// undirected. Sorted and unique.
    edges: Vec<(u32, u32)>,
    undirected: Csr,
}

impl Graph {
    /// Builds a directed graph from labelled `(importer, imported)` pairs.
    /// Self-loops are dropped and duplicate arcs collapsed.
    pub fn directed<I, S>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        Self::from_labeled(Direction::Directed, std::iter::empty::<&str>(), edges)
    }

    /// Builds an undirected graph. `nodes` lets callers register isolates.
    pub fn undirected<N, I, S, T>(nodes: N, edges: I) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = T>,
        T: AsRef<str>,
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        Self::from_labeled(Direction::Undirected, nodes, edges)
    }

    fn from_labeled<N, I, S, T>(direction: Direction, nodes: N, edges: I) -> Result<Self, GraphError>
    where
        N: IntoIterator<Item = T>,
        T: AsRef<str>,
        I: IntoIterator<Item = (S, S)>,
        S: AsRef<str>,
    {
        let mut interner = Interner::default();
        for (position, label) in nodes.into_iter().enumerate() {
            let label = label.as_ref();
            if label.is_empty() {
                return Err(GraphError::EmptyLabel { position });
            }
            interner.intern(label);
        }
        let mut raw = Vec::new();
        for (position, (a, b)) in edges.into_iter().enumerate() {
            let (a, b) = (a.as_ref(), b.as_ref());
            if a.is_empty() || b.is_empty() {
                return Err(GraphError::EmptyLabel { position });
            }
            raw.push((interner.intern(a).0, interner.intern(b).0));
        }
        Ok(Self::from_indices(interner, direction, raw))
    }

    /// Builds from already-interned endpoints. Self-loops and duplicates are
    /// removed here, so callers may pass raw pairs.
    pub fn from_indices(nodes: Interner, direction: Direction, mut edges: Vec<(u32, u32)>) -> Self {
        edges.retain(|&(a, b)| a != b);
        if direction == Direction::Undirected {
            for e in edges.iter_mut() {
                if e.0 > e.1 {
                    *e = (e.1, e.0);
                }
            }
        }
        edges.sort_unstable();
        edges.dedup();
        let undirected = Csr::from_pairs(nodes.len(), edges.iter().copied());
        Graph {
            nodes,
            direction,
            edges,
            undirected,
        }
    }

    pub(crate) fn from_undirected_csr(nodes: Interner, undirected: Csr) -> Self {
        let edges = undirected.undirected_pairs();
        Graph {
            nodes,
            direction: Direction::Undirected,
            edges,
            undirected,
        }
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Number of stored edges: arcs for a directed graph, unordered pairs
    /// otherwise.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of unordered adjacent pairs in the undirected view.
    pub fn undirected_edge_count(&self) -> usize {
        self.undirected.edge_count()
    }

    pub fn node_id(&self, label: &str) -> Option<NodeId> {
        self.nodes.get(label)
    }

    pub fn label(&self, id: NodeId) -> &str {
        self.nodes.label(id)
    }

    pub fn labels(&self) -> &[String] {
        self.nodes.labels()
    }

    /// Stored edges as labelled pairs, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.edges
            .iter()
            .map(move |&(a, b)| (self.nodes.label(NodeId(a)), self.nodes.label(NodeId(b))))
    }

    /// In-degree of every node in the stored (directed) edge set.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.node_count()];
        for &(_, b) in &self.edges {
            deg[b as usize] += 1;
        }
        deg
    }

    /// Neighbors of `id` in the undirected view, ascending.
    pub fn neighbors(&self, id: NodeId) -> &[u32] {
        self.undirected.neighbors(id.0)
    }

    pub fn adjacency(&self) -> &Csr {
        &self.undirected
    }

    /// Same graph with node indices permuted: node `i` moves to `perm[i]`.
    pub fn relabeled(&self, perm: &[u32]) -> Graph {
        assert_eq!(perm.len(), self.node_count());
        let mut labels = vec![String::new(); perm.len()];
        for (old, &new) in perm.iter().enumerate() {
            labels[new as usize] = self.nodes.labels[old].clone();
        }
        let mut interner = Interner::default();
        for l in &labels {
            interner.intern(l);
        }
        let edges = self
            .edges
            .iter()
            .map(|&(a, b)| (perm[a as usize], perm[b as usize]))
            .collect();
        Graph::from_indices(interner, self.direction, edges)
    }
}

/// Convenience for the dependency-graph constructor.
pub fn build_directed_graph<I, S>(edges: I) -> Result<Graph, GraphError>
where
    I: IntoIterator<Item = (S, S)>,
    S: AsRef<str>,
{
    Graph::directed(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedupe_and_self_loops() {
        let g = Graph::directed([("a", "b"), ("a", "b"), ("c", "c")]).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![("a", "b")]);
    }

    #[test]
    fn empty_edge_list_is_an_empty_graph() {
        let g = Graph::directed(Vec::<(&str, &str)>::new()).unwrap();
        assert_eq!(g.node_count(), 0);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn empty_label_is_rejected_with_position() {
        let err = Graph::directed([("a", "b"), ("x", "")]).unwrap_err();
        assert_eq!(err, GraphError::EmptyLabel { position: 1 });
    }

    #[test]
    fn reciprocal_arcs_collapse_in_undirected_view() {
        let g = Graph::directed([("a", "b"), ("b", "a")]).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert_eq!(g.undirected_edge_count(), 1);
    }

    #[test]
    fn interning_is_a_bijection() {
        let g = Graph::undirected(["z", "y"], [("y", "x")]).unwrap();
        for (i, l) in g.labels().iter().enumerate() {
            assert_eq!(g.node_id(l), Some(NodeId(i as u32)));
        }
        assert_eq!(g.node_count(), 3);
    }
}
