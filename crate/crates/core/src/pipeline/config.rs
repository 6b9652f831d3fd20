use std::path::PathBuf;

use serde::Serialize;

use super::PipelineError;
use crate::binning::DEFAULT_HEAD_FRACTION_LIMIT;
use crate::graph::DensityMode;
use crate::heavytail::{Family, SampleKind, XminPolicy};
use crate::ingest::DEFAULT_MIN_CONTRIBUTORS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
    /// Aligned text, numbers rounded to three decimals.
    Table,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            "table" => Ok(OutputFormat::Table),
            other => Err(format!("format must be json, csv or table, got `{other}`")),
        }
    }
}

/// Every knob of a run. Serializing gives the echo embedded in reports;
/// the worker count is left out of it so reports do not depend on it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub edges: Option<PathBuf>,
    pub contributions: Option<PathBuf>,
    pub samples: Option<PathBuf>,
    /// Column of the samples file used by `bins` and `ccdf`; the first
    /// column when unset.
    pub column: Option<String>,
    pub tables_dir: Option<PathBuf>,
    pub density_mode: DensityMode,
    pub kind: SampleKind,
    pub xmin: XminPolicy,
    pub families: Vec<Family>,
    pub significance: f64,
    pub head_fraction_limit: f64,
    pub min_contributors: usize,
    pub bins: usize,
    /// Studied libraries for the tail walk; every surviving library when
    /// unset.
    pub libraries: Option<Vec<String>>,
    pub per_repo_bins: bool,
    pub merged_only: bool,
    pub exclude_logins: Option<String>,
    /// Falls back to the subcommand's natural format when unset.
    pub format: Option<OutputFormat>,
    #[serde(skip)]
    pub workers: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            edges: None,
            contributions: None,
            samples: None,
            column: None,
            tables_dir: None,
            density_mode: DensityMode::Undirected,
            kind: SampleKind::Discrete,
            xmin: XminPolicy::Ks,
            families: Family::ALL.to_vec(),
            significance: 0.1,
            head_fraction_limit: DEFAULT_HEAD_FRACTION_LIMIT,
            min_contributors: DEFAULT_MIN_CONTRIBUTORS,
            bins: 5,
            libraries: None,
            per_repo_bins: false,
            merged_only: true,
            exclude_logins: None,
            format: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool, String> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("{key} must be true or false, got `{v}`")),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
    v.parse().map_err(|_| format!("{key}: cannot parse `{v}`"))
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_owned).collect()
}

impl RunConfig {
    /// Sets one field from its textual form. Keys are the field names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let v = value.trim();
        let r: Result<(), String> = (|| {
            match key {
                "edges" => self.edges = Some(v.into()),
                "contributions" => self.contributions = Some(v.into()),
                "samples" => self.samples = Some(v.into()),
                "column" => self.column = Some(v.into()),
                "tables_dir" => self.tables_dir = Some(v.into()),
                "density_mode" => self.density_mode = v.parse().map_err(|e| format!("{e}"))?,
                "kind" => {
                    self.kind = match v {
                        "discrete" => SampleKind::Discrete,
                        "continuous" => SampleKind::Continuous,
                        _ => return Err(format!("kind must be discrete or continuous, got `{v}`")),
                    }
                }
                "xmin" => self.xmin = v.parse()?,
                "families" => {
                    let mut fams = Vec::new();
                    for f in list(v) {
                        fams.push(f.parse::<Family>().map_err(|e| format!("{e}"))?);
                    }
                    if fams.is_empty() {
                        return Err("families must name at least one family".into());
                    }
                    self.families = fams;
                }
                "significance" => {
                    let s: f64 = parse_num(key, v)?;
                    if !(s > 0.0 && s < 1.0) {
                        return Err(format!("significance must lie in (0, 1), got {s}"));
                    }
                    self.significance = s;
                }
                "head_fraction_limit" => {
                    let s: f64 = parse_num(key, v)?;
                    if !(s > 0.0 && s < 1.0) {
                        return Err(format!("head_fraction_limit must lie in (0, 1), got {s}"));
                    }
                    self.head_fraction_limit = s;
                }
                "min_contributors" => self.min_contributors = parse_num(key, v)?,
                "bins" => {
                    self.bins = parse_num(key, v)?;
                    if self.bins == 0 {
                        return Err("bins must be at least 1".into());
                    }
                }
                "libraries" => self.libraries = Some(list(v)),
                "per_repo_bins" => self.per_repo_bins = parse_bool(key, v)?,
                "merged_only" => self.merged_only = parse_bool(key, v)?,
                "exclude_logins" => {
                    regex::Regex::new(v).map_err(|e| format!("exclude_logins: {e}"))?;
                    self.exclude_logins = Some(v.into());
                }
                "format" => self.format = Some(v.parse()?),
                "workers" => {
                    self.workers = parse_num(key, v)?;
                    if self.workers == 0 {
                        return Err("workers must be at least 1".into());
                    }
                }
                _ => return Err(format!("unknown setting `{key}`")),
            }
            Ok(())
        })();
        r.map_err(PipelineError::Input)
    }

    /// Applies a flat `key = value` file. `#` starts a comment line.
    pub fn apply_file(&mut self, text: &str) -> Result<(), PipelineError> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(PipelineError::Input(format!("config line {}: expected key = value", i + 1)));
            };
            self.set(k.trim(), v)
                .map_err(|e| PipelineError::Input(format!("config line {}: {e}", i + 1)))?;
        }
        Ok(())
    }

    pub fn format_or(&self, fallback: OutputFormat) -> OutputFormat {
        self.format.unwrap_or(fallback)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::default();
        c.apply_file("# run\nbins = 3\nfamilies = power_law, lognormal\nxmin=1\n\nper_repo_bins = true\n")
            .unwrap();
        c.set("bins", "2").unwrap();
        assert_eq!(c.bins, 2);
        assert_eq!(c.families, vec![Family::PowerLaw, Family::Lognormal]);
        assert_eq!(c.xmin, XminPolicy::Fixed(1.0));
        assert!(c.per_repo_bins);
    }

    #[test]
    fn errors_name_the_line() {
        let mut c = RunConfig::default();
        let e = c.apply_file("bins = 2\nspeed = fast\n").unwrap_err();
        assert_eq!(e.to_string(), "config line 2: unknown setting `speed`");
        assert!(c.set("significance", "1.5").is_err());
        assert!(c.set("exclude_logins", "(").is_err());
    }

    #[test]
    fn echo_leaves_out_workers() {
        let mut a = RunConfig::default();
        let mut b = RunConfig::default();
        a.workers = 1;
        b.workers = 8;
        let (ja, jb) = (serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(ja, jb);
        assert!(!ja.contains("workers"));
    }
}
