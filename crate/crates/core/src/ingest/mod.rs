//! CSV inputs: dependency edge lists, contribution tables and GHTorrent-style
//! table exports.

mod contributions;
mod edges;
mod ghtorrent;
mod samples;

use std::io::Read;

use thiserror::Error;

pub use contributions::{
    build_bipartite_from_records, read_contributions, write_contributions, ContributionRecord, ExcludedLibrary,
    ExclusionReport, DEFAULT_MIN_CONTRIBUTORS,
};
pub use edges::{import_counts, parse_edge_list, EdgeList};
pub use ghtorrent::{
    aggregate_contributions, parse_ghtorrent_tables, AggregateOptions, CommitRow, Project, PullRequestRow,
    TableBundle, TableSources,
};
pub use samples::{read_samples, NamedSample};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{table}: {source}")]
    Io {
        table: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{table}: missing column `{column}`")]
    MissingColumn { table: String, column: String },
    #[error("{table} line {line}: {message}")]
    Malformed { table: String, line: u64, message: String },
    /// A foreign key with no matching row, e.g. `commits line 2: project 99`.
    #[error("{table} line {line}: {kind} {key}")]
    Dangling {
        table: String,
        line: u64,
        kind: &'static str,
        key: u64,
    },
}

impl IngestError {
    fn malformed(table: &str, line: u64, message: impl Into<String>) -> Self {
        IngestError::Malformed {
            table: table.to_owned(),
            line,
            message: message.into(),
        }
    }
}

/// A data row with its fields reordered to the requested columns.
struct Row {
    line: u64,
    fields: Vec<String>,
}

impl Row {
    fn label(&self, table: &str, i: usize, column: &str) -> Result<&str, IngestError> {
        match self.fields[i].as_str() {
            "" => Err(IngestError::malformed(table, self.line, format!("empty {column}"))),
            s => Ok(s),
        }
    }

    fn count(&self, table: &str, i: usize, column: &str) -> Result<u64, IngestError> {
        self.fields[i].parse().map_err(|_| {
            IngestError::malformed(
                table,
                self.line,
                format!("{column} must be a non-negative integer, got `{}`", self.fields[i]),
            )
        })
    }
}

/// Reads a headed CSV table, requiring `columns` (in any order). Unknown
/// columns are skipped with a warning pushed onto `warnings`.
fn read_table<R: Read>(
    table: &str,
    reader: R,
    columns: &[&str],
    warnings: &mut Vec<String>,
) -> Result<Vec<Row>, IngestError> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header = rdr.headers().map_err(|e| csv_error(table, e))?.clone();
    let mut index = Vec::with_capacity(columns.len());
    for &c in columns {
        match header.iter().position(|h| h == c) {
            Some(i) => index.push(i),
            None => {
                return Err(IngestError::MissingColumn {
                    table: table.to_owned(),
                    column: c.to_owned(),
                })
            }
        }
    }
    for h in header.iter().filter(|h| !columns.contains(h)) {
        warnings.push(format!("{table}: ignoring unknown column `{h}`"));
    }

    let mut rows = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(table, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != header.len() {
            return Err(IngestError::malformed(
                table,
                line,
                format!("expected {} fields, found {}", header.len(), record.len()),
            ));
        }
        rows.push(Row {
            line,
            fields: index.iter().map(|&i| record[i].to_owned()).collect(),
        });
    }
    Ok(rows)
}

fn csv_error(table: &str, e: csv::Error) -> IngestError {
    let line = e.position().map_or(0, |p| p.line());
    let message = e.to_string();
    match e.into_kind() {
        csv::ErrorKind::Io(source) => IngestError::Io {
            table: table.to_owned(),
            source,
        },
        _ => IngestError::malformed(table, line, message),
    }
}
