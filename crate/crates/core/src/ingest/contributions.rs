use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{read_table, IngestError};
use crate::graph::{BipartiteError, BipartiteGraph};

pub const DEFAULT_MIN_CONTRIBUTORS: usize = 3;

/// Activity of one contributor on one library.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ContributionRecord {
    pub contributor: String,
    pub library: String,
    pub commits: u64,
    pub merged_pulls: u64,
}

impl ContributionRecord {
    pub fn weight(&self) -> u64 {
        self.commits + self.merged_pulls
    }
}

/// Reads `contributor,library,commits,pulls`. Rows with no activity and
/// repeated (contributor, library) pairs are rejected.
pub fn read_contributions<R: Read>(reader: R) -> Result<(Vec<ContributionRecord>, Vec<String>), IngestError> {
    const T: &str = "contributions";
    let mut warnings = Vec::new();
    let rows = read_table(T, reader, &["contributor", "library", "commits", "pulls"], &mut warnings)?;
    let mut seen = BTreeSet::new();
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let r = ContributionRecord {
            contributor: row.label(T, 0, "contributor")?.to_owned(),
            library: row.label(T, 1, "library")?.to_owned(),
            commits: row.count(T, 2, "commits")?,
            merged_pulls: row.count(T, 3, "pulls")?,
        };
        if r.weight() == 0 {
            return Err(IngestError::malformed(T, row.line, "record has no activity"));
        }
        if !seen.insert((r.contributor.clone(), r.library.clone())) {
            return Err(IngestError::malformed(
                T,
                row.line,
                format!("repeated pair {} / {}", r.contributor, r.library),
            ));
        }
        out.push(r);
    }
    Ok((out, warnings))
}

pub fn write_contributions<W: Write>(writer: W, records: &[ContributionRecord]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["contributor", "library", "commits", "pulls"])?;
    for r in records {
        w.write_record([
            r.contributor.as_str(),
            r.library.as_str(),
            &r.commits.to_string(),
            &r.merged_pulls.to_string(),
        ])?;
    }
    w.flush()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExcludedLibrary {
    pub library: String,
    pub contributors: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExclusionReport {
    pub min_contributors: usize,
    pub excluded: Vec<ExcludedLibrary>,
}

/// Contributor–library graph weighted by commits plus merged pulls, without
/// libraries that have fewer than `min_contributors` distinct contributors.
pub fn build_bipartite_from_records(
    records: &[ContributionRecord],
    min_contributors: usize,
) -> Result<(BipartiteGraph, ExclusionReport), BipartiteError> {
    let mut per_library: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for r in records.iter().filter(|r| r.weight() > 0) {
        per_library.entry(&r.library).or_default().insert(&r.contributor);
    }
    let excluded: Vec<ExcludedLibrary> = per_library
        .iter()
        .filter(|(_, c)| c.len() < min_contributors)
        .map(|(l, c)| ExcludedLibrary {
            library: (*l).to_owned(),
            contributors: c.len(),
        })
        .collect();
    let dropped: BTreeSet<&str> = excluded.iter().map(|e| e.library.as_str()).collect();
    let graph = BipartiteGraph::from_edges(
        records
            .iter()
            .filter(|r| r.weight() > 0 && !dropped.contains(r.library.as_str()))
            .map(|r| (r.contributor.as_str(), r.library.as_str(), r.weight())),
    )?;
    Ok((
        graph,
        ExclusionReport {
            min_contributors,
            excluded,
        },
    ))
}
