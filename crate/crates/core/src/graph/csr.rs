/// Compressed sparse row adjacency of a simple undirected graph.
///
/// Each row is sorted ascending and contains no duplicates or self-loops.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Csr {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    /// Symmetric adjacency from unordered pairs. Loops and repeats are dropped.
    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (u32, u32)>) -> Self {
        let mut arcs: Vec<(u32, u32)> = Vec::new();
        for (a, b) in pairs {
            if a != b {
                arcs.push((a, b));
                arcs.push((b, a));
            }
        }
        arcs.sort_unstable();
        arcs.dedup();
        let mut offsets = vec![0usize; n + 1];
        for &(a, _) in &arcs {
            offsets[a as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let targets = arcs.into_iter().map(|(_, b)| b).collect();
        Csr { offsets, targets }
    }

    /// From per-node neighbor lists that are already symmetric, sorted and
    /// unique.
    pub fn from_sorted_rows(rows: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        offsets.push(0);
        let total = rows.iter().map(Vec::len).sum();
        let mut targets = Vec::with_capacity(total);
        for row in rows {
            debug_assert!(row.windows(2).all(|w| w[0] < w[1]));
            targets.extend(row);
            offsets.push(targets.len());
        }
        Csr { offsets, targets }
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.offsets.len().saturating_sub(1)
    }

    /// Unordered edge count.
    #[inline]
    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        let v = v as usize;
        self.offsets[v + 1] - self.offsets[v]
    }

    pub(crate) fn undirected_pairs(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for v in 0..self.node_count() as u32 {
            out.extend(self.neighbors(v).iter().filter(|&&w| w > v).map(|&w| (v, w)));
        }
        out
    }
}
