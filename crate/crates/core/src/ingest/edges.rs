use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use super::{read_table, IngestError};

/// Parsed `source,target` rows, duplicates and self-imports included.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeList {
    pub pairs: Vec<(String, String)>,
    /// Source line of each pair.
    pub lines: Vec<u64>,
    pub warnings: Vec<String>,
}

pub fn parse_edge_list<R: Read>(reader: R) -> Result<EdgeList, IngestError> {
    let mut out = EdgeList::default();
    let rows = read_table("edges", reader, &["source", "target"], &mut out.warnings)?;
    for row in rows {
        let source = row.label("edges", 0, "source")?.to_owned();
        let target = row.label("edges", 1, "target")?.to_owned();
        out.pairs.push((source, target));
        out.lines.push(row.line);
    }
    Ok(out)
}

/// Number of distinct importers of each imported library. Self-imports do
/// not count.
pub fn import_counts<S: AsRef<str>>(edges: &[(S, S)]) -> BTreeMap<String, u64> {
    let distinct: BTreeSet<(&str, &str)> = edges
        .iter()
        .map(|(a, b)| (a.as_ref(), b.as_ref()))
        .filter(|(a, b)| a != b)
        .collect();
    let mut counts = BTreeMap::new();
    for (_, imported) in distinct {
        *counts.entry(imported.to_owned()).or_insert(0) += 1;
    }
    counts
}
