//! Contributor–library bipartite graphs and their contributor projection.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use super::{Csr, Graph, Interner, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BipartiteError {
    #[error("edge {contributor} -> {library} has zero weight")]
    ZeroWeight { contributor: String, library: String },
    #[error("empty label")]
    EmptyLabel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BipartiteEdge {
    pub contributor: String,
    pub library: String,
    pub weight: u64,
}

/// Contributors (left) linked to the libraries (right) they worked on. The
/// two sides are labelled independently, so a login may equal a library name.
/// Edge weights are contribution counts, always at least one.
#[derive(Debug, Clone, Default)]
pub struct BipartiteGraph {
    contributors: Interner,
    libraries: Interner,
    /// `(contributor, library, weight)`, sorted and unique on the first two.
    edges: Vec<(u32, u32, u64)>,
}

impl BipartiteGraph {
    /// Repeated `(contributor, library)` pairs have their weights summed.
    pub fn from_edges<I, S, T>(edges: I) -> Result<Self, BipartiteError>
    where
        I: IntoIterator<Item = (S, T, u64)>,
        S: AsRef<str>,
        T: AsRef<str>,
    {
        let mut contributors = Interner::default();
        let mut libraries = Interner::default();
        let mut raw = Vec::new();
        for (c, l, w) in edges {
            let (c, l) = (c.as_ref(), l.as_ref());
            if c.is_empty() || l.is_empty() {
                return Err(BipartiteError::EmptyLabel);
            }
            if w == 0 {
                return Err(BipartiteError::ZeroWeight {
                    contributor: c.to_owned(),
                    library: l.to_owned(),
                });
            }
            raw.push((contributors.intern(c).0, libraries.intern(l).0, w));
        }
        raw.sort_unstable();
        let mut edges: Vec<(u32, u32, u64)> = Vec::with_capacity(raw.len());
        for (c, l, w) in raw {
            match edges.last_mut() {
                Some(last) if last.0 == c && last.1 == l => last.2 += w,
                _ => edges.push((c, l, w)),
            }
        }
        Ok(BipartiteGraph {
            contributors,
            libraries,
            edges,
        })
    }

    pub fn contributor_count(&self) -> usize {
        self.contributors.len()
    }

    pub fn library_count(&self) -> usize {
        self.libraries.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contributors(&self) -> &[String] {
        self.contributors.labels()
    }

    pub fn libraries(&self) -> &[String] {
        self.libraries.labels()
    }

    pub fn edges(&self) -> impl Iterator<Item = BipartiteEdge> + '_ {
        self.edge_labels().map(|(c, l, weight)| BipartiteEdge {
            contributor: c.to_owned(),
            library: l.to_owned(),
            weight,
        })
    }

    /// `(contributor, library, weight)` borrowing the graph's labels.
    pub fn edge_labels(&self) -> impl Iterator<Item = (&str, &str, u64)> + '_ {
        self.edges
            .iter()
            .map(|&(c, l, w)| (self.contributors.label(NodeId(c)), self.libraries.label(NodeId(l)), w))
    }

    /// Total weight of each contributor's edges, in contributor order.
    pub fn contributor_totals(&self) -> Vec<(&str, u64)> {
        let mut totals = vec![0u64; self.contributor_count()];
        for &(c, _, w) in &self.edges {
            totals[c as usize] += w;
        }
        self.contributors
            .labels()
            .iter()
            .map(String::as_str)
            .zip(totals)
            .collect()
    }

    /// Libraries each contributor worked on, as sorted library indices.
    pub fn libraries_of(&self, contributor: &str) -> BTreeSet<&str> {
        let Some(c) = self.contributors.get(contributor) else {
            return BTreeSet::new();
        };
        self.edges
            .iter()
            .filter(|e| e.0 == c.0)
            .map(|e| self.libraries.label(NodeId(e.1)))
            .collect()
    }

    /// Keeps only the edges of the given contributors. Contributor and
    /// library order follows first appearance in the retained edges.
    pub fn restrict_to_contributors(&self, keep: &HashSet<&str>) -> BipartiteGraph {
        self.filter_edges(|c, _| keep.contains(c))
    }

    /// Keeps only edges whose `(contributor, library)` satisfy `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(&str, &str) -> bool) -> BipartiteGraph {
        let retained = self.edges.iter().filter_map(|&(c, l, w)| {
            let (cl, ll) = (
                self.contributors.label(NodeId(c)),
                self.libraries.label(NodeId(l)),
            );
            keep(cl, ll).then_some((cl, ll, w))
        });
        BipartiteGraph::from_edges(retained).expect("subset of a valid bipartite graph")
    }
}

/// Simple unweighted projection onto contributors: two contributors are
/// adjacent iff they share at least one library. Every contributor becomes a
/// node, including those who share no library with anyone.
pub fn project_onto_contributors(b: &BipartiteGraph) -> Graph {
    let nc = b.contributor_count();
    let mut members: Vec<Vec<u32>> = vec![Vec::new(); b.library_count()];
    let mut libs_of: Vec<Vec<u32>> = vec![Vec::new(); nc];
    for &(c, l, _) in &b.edges {
        members[l as usize].push(c);
        libs_of[c as usize].push(l);
    }
    let mut stamp = vec![u32::MAX; nc];
    let rows = (0..nc as u32)
        .map(|u| {
            let mut row = Vec::new();
            stamp[u as usize] = u;
            for &l in &libs_of[u as usize] {
                for &v in &members[l as usize] {
                    if stamp[v as usize] != u {
                        stamp[v as usize] = u;
                        row.push(v);
                    }
                }
            }
            row.sort_unstable();
            row
        })
        .collect();
    Graph::from_undirected_csr(b.contributors.clone(), Csr::from_sorted_rows(rows))
}
