use std::io::Read;

use super::{csv_error, IngestError};

#[derive(Debug, Clone, PartialEq)]
pub struct NamedSample {
    pub name: String,
    pub values: Vec<f64>,
}

/// Reads a headed CSV where every column is one sample. Columns may have
/// different lengths; empty cells are skipped.
pub fn read_samples<R: Read>(reader: R) -> Result<Vec<NamedSample>, IngestError> {
    const T: &str = "samples";
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out: Vec<NamedSample> = rdr
        .headers()
        .map_err(|e| csv_error(T, e))?
        .iter()
        .map(|h| NamedSample {
            name: h.to_owned(),
            values: Vec::new(),
        })
        .collect();
    if out.is_empty() || out.iter().any(|s| s.name.is_empty()) {
        return Err(IngestError::malformed(T, 1, "every column needs a name"));
    }
    for record in rdr.records() {
        let record = record.map_err(|e| csv_error(T, e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() > out.len() {
            return Err(IngestError::malformed(
                T,
                line,
                format!("expected at most {} fields, found {}", out.len(), record.len()),
            ));
        }
        for (sample, cell) in out.iter_mut().zip(record.iter()) {
            if cell.is_empty() {
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => sample.values.push(v),
                _ => {
                    return Err(IngestError::malformed(
                        T,
                        line,
                        format!("`{cell}` in column {} is not a finite number", sample.name),
                    ))
                }
            }
        }
    }
    Ok(out)
}
