use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use regex::Regex;
use serde::Serialize;

use super::{display, open, Cell, Meta, PipelineError, Report, Rows, Run, RunConfig};
use crate::binning::{head_tail_breaks_by, BinPartition, BinningError};
use crate::graph::{
    build_directed_graph, full_metrics, project_onto_contributors, BipartiteEdge, BipartiteGraph, DensityMode,
    MetricsOptions, MetricsReport, Workers,
};
use crate::heavytail::{best_fit, BestFitOptions, ComparisonResult, Family, FamilyRecord, Params, SampleSet};
use crate::ingest::{
    aggregate_contributions, build_bipartite_from_records, import_counts, parse_edge_list, parse_ghtorrent_tables,
    read_contributions, read_samples, AggregateOptions, ContributionRecord, ExclusionReport, TableSources,
};

fn input(e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Input(e.to_string())
}

// deps-metrics

#[derive(Debug, Clone, Serialize)]
pub struct DepsMetricsReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub metrics: MetricsReport,
}

const METRIC_COLUMNS: [&str; 8] = [
    "nodes",
    "edges",
    "components",
    "giant_component_size",
    "density",
    "assortativity",
    "local_efficiency",
    "global_efficiency",
];

fn metric_cells(m: &MetricsReport) -> Vec<Cell> {
    vec![
        m.nodes.into(),
        m.edges.into(),
        m.components.into(),
        m.giant_component_size.into(),
        m.density.into(),
        m.assortativity.into(),
        m.local_efficiency.into(),
        m.global_efficiency.into(),
    ]
}

impl Report for DepsMetricsReport {
    fn rows(&self) -> Rows {
        Rows {
            header: METRIC_COLUMNS.to_vec(),
            rows: vec![metric_cells(&self.metrics)],
        }
    }
}

pub fn deps_metrics(cfg: &RunConfig) -> Result<Run<DepsMetricsReport>, PipelineError> {
    let (f, _) = open(&cfg.edges, "edges", "deps-metrics")?;
    let list = parse_edge_list(f)?;
    let g = build_directed_graph(list.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))).map_err(input)?;
    let metrics = full_metrics(
        &g,
        MetricsOptions {
            density_mode: cfg.density_mode,
            workers: Workers(cfg.workers),
        },
    );
    Ok(Run::ok(
        DepsMetricsReport {
            meta: Meta::new("deps-metrics", cfg),
            metrics,
        },
        list.warnings,
    ))
}

// fit

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FamilyFailure {
    pub family: Family,
    pub reason: String,
}

/// Fit summary for one sample. `error` is set, and the fit fields
/// are empty, when the sample could not be fitted at all.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitRow {
    pub sample: String,
    pub n: usize,
    pub total: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commits: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pulls: Option<u64>,
    pub xmin: Option<f64>,
    pub winner: Option<Family>,
    pub ranking: Vec<FamilyRecord>,
    pub comparisons: Vec<ComparisonResult>,
    pub failures: Vec<FamilyFailure>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub rows: Vec<FitRow>,
}

impl Report for FitReport {
    fn rows(&self) -> Rows {
        let header = vec![
            "sample",
            "n",
            "total",
            "commits",
            "pulls",
            "xmin",
            "winner",
            "power_law_alpha",
            "power_law_loglik",
            "truncated_power_law_alpha",
            "truncated_power_law_lambda",
            "truncated_power_law_loglik",
            "lognormal_mu",
            "lognormal_sigma",
            "lognormal_loglik",
            "exponential_lambda",
            "exponential_loglik",
            "error",
        ];
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut cells: Vec<Cell> = vec![
                    r.sample.as_str().into(),
                    r.n.into(),
                    r.total.into(),
                    r.commits.map_or(Cell::Empty, Cell::Int),
                    r.pulls.map_or(Cell::Empty, Cell::Int),
                    r.xmin.into(),
                    r.winner.map_or(Cell::Empty, |w| w.as_str().into()),
                ];
                for family in Family::ALL {
                    let fit = r.ranking.iter().find(|f| f.family == family).map(|f| &f.fit);
                    let params: Vec<Option<f64>> = match fit.map(|f| f.params) {
                        Some(Params::PowerLaw { alpha }) => vec![Some(alpha)],
                        Some(Params::TruncatedPowerLaw { alpha, lambda }) => vec![Some(alpha), Some(lambda)],
                        Some(Params::Lognormal { mu, sigma }) => vec![Some(mu), Some(sigma)],
                        Some(Params::Exponential { lambda }) => vec![Some(lambda)],
                        None if family == Family::PowerLaw || family == Family::Exponential => vec![None],
                        None => vec![None, None],
                    };
                    cells.extend(params.into_iter().map(Cell::from));
                    cells.push(fit.map(|f| f.loglik).into());
                }
                cells.push(r.error.clone().map_or(Cell::Empty, Cell::Text));
                cells
            })
            .collect();
        Rows { header, rows }
    }
}

struct FitInput {
    name: String,
    values: Vec<f64>,
    commits: Option<u64>,
    pulls: Option<u64>,
}

impl FitInput {
    fn plain(name: impl Into<String>, values: Vec<f64>) -> Self {
        FitInput {
            name: name.into(),
            values,
            commits: None,
            pulls: None,
        }
    }
}

fn fit_inputs(cfg: &RunConfig, warnings: &mut Vec<String>) -> Result<Vec<FitInput>, PipelineError> {
    let mut inputs = Vec::new();
    if cfg.samples.is_some() {
        let (f, _) = open(&cfg.samples, "samples", "fit")?;
        inputs.extend(read_samples(f)?.into_iter().map(|s| FitInput::plain(s.name, s.values)));
    }
    if cfg.contributions.is_some() {
        let (f, _) = open(&cfg.contributions, "contributions", "fit")?;
        let (records, w) = read_contributions(f)?;
        warnings.extend(w);
        let (_, excluded) = exclusions(cfg, &records, warnings)?;
        let dropped: HashSet<&str> = excluded.excluded.iter().map(|e| e.library.as_str()).collect();
        let mut per_library: BTreeMap<&str, FitInput> = BTreeMap::new();
        for r in records.iter().filter(|r| !dropped.contains(r.library.as_str())) {
            let entry = per_library.entry(&r.library).or_insert_with(|| FitInput {
                name: r.library.clone(),
                values: Vec::new(),
                commits: Some(0),
                pulls: Some(0),
            });
            entry.values.push(r.weight() as f64);
            *entry.commits.as_mut().expect("set above") += r.commits;
            *entry.pulls.as_mut().expect("set above") += r.merged_pulls;
        }
        inputs.extend(per_library.into_values());
    }
    if cfg.edges.is_some() {
        let (f, _) = open(&cfg.edges, "edges", "fit")?;
        let list = parse_edge_list(f)?;
        warnings.extend(list.warnings.iter().cloned());
        let counts = import_counts(&list.pairs);
        inputs.push(FitInput::plain("import_counts", counts.values().map(|&c| c as f64).collect()));
        let g = build_directed_graph(list.pairs.iter().map(|(a, b)| (a.as_str(), b.as_str()))).map_err(input)?;
        let mut degree: BTreeMap<&str, u64> = BTreeMap::new();
        for (a, b) in g.edges() {
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        inputs.push(FitInput::plain("degree", degree.values().map(|&d| d as f64).collect()));
    }
    if inputs.is_empty() {
        return Err(PipelineError::Input("fit needs --samples, --contributions or --edges".into()));
    }
    Ok(inputs)
}

fn fit_one(input: &FitInput, cfg: &RunConfig, opts: &BestFitOptions) -> FitRow {
    let mut row = FitRow {
        sample: input.name.clone(),
        n: input.values.len(),
        total: input.values.iter().fold(0.0, |acc, x| acc + x),
        commits: input.commits,
        pulls: input.pulls,
        xmin: None,
        winner: None,
        ranking: Vec::new(),
        comparisons: Vec::new(),
        failures: Vec::new(),
        error: None,
    };
    match SampleSet::new(cfg.kind, input.values.clone()).and_then(|s| best_fit(&s, opts)) {
        Ok(b) => {
            row.xmin = Some(b.xmin);
            row.winner = Some(b.winner);
            row.ranking = b.ranking;
            row.comparisons = b.comparisons;
            row.failures = b
                .failures
                .into_iter()
                .map(|(family, reason)| FamilyFailure { family, reason })
                .collect();
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Fits every sample; samples that cannot be fitted get an `error` and the
/// run goes on.
pub fn fit(cfg: &RunConfig) -> Result<Run<FitReport>, PipelineError> {
    let mut warnings = Vec::new();
    let inputs = fit_inputs(cfg, &mut warnings)?;
    let opts = BestFitOptions {
        families: cfg.families.clone(),
        significance: cfg.significance,
        xmin: cfg.xmin,
    };
    let rows: Vec<FitRow> = Workers(cfg.workers).install(|| inputs.par_iter().map(|i| fit_one(i, cfg, &opts)).collect());
    for r in &rows {
        if let Some(e) = &r.error {
            warnings.push(format!("{}: {e}", r.sample));
        }
    }
    let numeric_failure = rows
        .iter()
        .all(|r| r.error.is_some())
        .then(|| "no sample could be fitted".to_owned());
    Ok(Run {
        report: FitReport {
            meta: Meta::new("fit", cfg),
            rows,
        },
        warnings,
        numeric_failure,
    })
}

// bins and ccdf share their inputs

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Member {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub value: f64,
}

fn exclusions(
    cfg: &RunConfig,
    records: &[ContributionRecord],
    warnings: &mut Vec<String>,
) -> Result<(BipartiteGraph, ExclusionReport), PipelineError> {
    let (g, report) = build_bipartite_from_records(records, cfg.min_contributors).map_err(input)?;
    for e in &report.excluded {
        warnings.push(format!(
            "excluding library {} (contributors: {}, minimum {})",
            e.library, e.contributors, report.min_contributors
        ));
    }
    Ok((g, report))
}

/// Contribution graph after the contributor-count exclusion, restricted to
/// the studied libraries.
fn studied_graph(
    cfg: &RunConfig,
    records: &[ContributionRecord],
    warnings: &mut Vec<String>,
) -> Result<(BipartiteGraph, ExclusionReport), PipelineError> {
    let (g, report) = exclusions(cfg, records, warnings)?;
    let Some(libraries) = &cfg.libraries else {
        return Ok((g, report));
    };
    for l in libraries {
        if !g.libraries().contains(l) {
            return Err(PipelineError::Input(format!(
                "library `{l}` has no contributions left after exclusions"
            )));
        }
    }
    let keep: HashSet<&str> = libraries.iter().map(String::as_str).collect();
    Ok((g.filter_edges(|_, l| keep.contains(l)), report))
}

fn labelled_values(
    cfg: &RunConfig,
    command: &str,
    warnings: &mut Vec<String>,
) -> Result<(String, Vec<Member>), PipelineError> {
    let chosen = [cfg.samples.is_some(), cfg.contributions.is_some(), cfg.edges.is_some()]
        .iter()
        .filter(|&&b| b)
        .count();
    if chosen != 1 {
        return Err(PipelineError::Input(format!(
            "{command} takes exactly one of --samples, --contributions, --edges"
        )));
    }
    if cfg.samples.is_some() {
        let (f, path) = open(&cfg.samples, "samples", command)?;
        let samples = read_samples(f)?;
        let sample = match &cfg.column {
            Some(c) => samples.into_iter().find(|s| &s.name == c).ok_or_else(|| {
                PipelineError::Input(format!("{}: no column `{c}`", display(&path)))
            })?,
            None => samples.into_iter().next().expect("read_samples requires a column"),
        };
        let members = sample.values.into_iter().map(|value| Member { label: None, value }).collect();
        Ok((format!("samples:{}", sample.name), members))
    } else if cfg.contributions.is_some() {
        let (f, _) = open(&cfg.contributions, "contributions", command)?;
        let (records, w) = read_contributions(f)?;
        warnings.extend(w);
        let (g, _) = studied_graph(cfg, &records, warnings)?;
        let members = g
            .contributor_totals()
            .into_iter()
            .map(|(c, t)| Member {
                label: Some(c.to_owned()),
                value: t as f64,
            })
            .collect();
        Ok(("contributor_totals".into(), members))
    } else {
        let (f, _) = open(&cfg.edges, "edges", command)?;
        let list = parse_edge_list(f)?;
        warnings.extend(list.warnings.iter().cloned());
        let members = import_counts(&list.pairs)
            .into_iter()
            .map(|(l, c)| Member {
                label: Some(l),
                value: c as f64,
            })
            .collect();
        Ok(("import_counts".into(), members))
    }
}

fn require_positive(members: &[Member], command: &str) -> Result<(), PipelineError> {
    if members.is_empty() {
        return Err(PipelineError::Input(format!("{command}: no values to work on")));
    }
    match members.iter().find(|m| !(m.value > 0.0)) {
        Some(m) => Err(PipelineError::Input(format!(
            "{command} needs positive values, got {}{}",
            m.value,
            m.label.as_ref().map_or(String::new(), |l| format!(" for {l}"))
        ))),
        None => Ok(()),
    }
}

// bins

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinRow {
    /// 1 is the innermost head.
    pub bin: usize,
    pub threshold: f64,
    pub size: usize,
    pub members: Vec<Member>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BinsReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub source: String,
    pub values: usize,
    pub bins: Vec<BinRow>,
}

impl Report for BinsReport {
    fn rows(&self) -> Rows {
        let mut rows = Vec::new();
        for b in &self.bins {
            for m in &b.members {
                rows.push(vec![
                    b.bin.into(),
                    b.threshold.into(),
                    m.label.clone().map_or(Cell::Empty, Cell::Text),
                    m.value.into(),
                ]);
            }
        }
        Rows {
            header: vec!["bin", "threshold", "label", "value"],
            rows,
        }
    }
}

pub fn bins(cfg: &RunConfig) -> Result<Run<BinsReport>, PipelineError> {
    let mut warnings = Vec::new();
    let (source, members) = labelled_values(cfg, "bins", &mut warnings)?;
    require_positive(&members, "bins")?;
    let values = members.len();
    let p = head_tail_breaks_by(members, |m| m.value, cfg.head_fraction_limit).map_err(input)?;
    let bins = p
        .bins
        .into_iter()
        .enumerate()
        .map(|(i, b)| BinRow {
            bin: i + 1,
            threshold: b.threshold,
            size: b.members.len(),
            members: b.members,
        })
        .collect();
    Ok(Run::ok(
        BinsReport {
            meta: Meta::new("bins", cfg),
            source,
            values,
            bins,
        },
        warnings,
    ))
}

// ccdf

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcdfPoint {
    pub x: f64,
    pub ccdf: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CcdfReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub source: String,
    pub points: Vec<CcdfPoint>,
}

impl Report for CcdfReport {
    fn rows(&self) -> Rows {
        Rows {
            header: vec!["x", "ccdf"],
            rows: self.points.iter().map(|p| vec![p.x.into(), p.ccdf.into()]).collect(),
        }
    }
}

pub fn ccdf(cfg: &RunConfig) -> Result<Run<CcdfReport>, PipelineError> {
    let mut warnings = Vec::new();
    let (source, members) = labelled_values(cfg, "ccdf", &mut warnings)?;
    require_positive(&members, "ccdf")?;
    let s = SampleSet::continuous(members.into_iter().map(|m| m.value).collect()).map_err(input)?;
    let points = crate::heavytail::ccdf(&s)
        .into_iter()
        .map(|(x, ccdf)| CcdfPoint { x, ccdf })
        .collect();
    Ok(Run::ok(
        CcdfReport {
            meta: Meta::new("ccdf", cfg),
            source,
            points,
        },
        warnings,
    ))
}

// tailwalk

/// Metrics of the contributor projection after `bins_included` bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailWalkRow {
    pub bins_included: usize,
    pub nodes: usize,
    pub edges: usize,
    pub components: usize,
    pub density: Option<f64>,
    pub assortativity: Option<f64>,
    pub local_efficiency: Option<f64>,
    pub global_efficiency: Option<f64>,
}

/// Bin sizes and thresholds of one partition: the whole contributor set,
/// or one library with per-library binning.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionSummary {
    pub scope: String,
    pub sizes: Vec<usize>,
    pub thresholds: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailWalkReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub libraries: Vec<String>,
    pub excluded: ExclusionReport,
    pub partitions: Vec<PartitionSummary>,
    pub rows: Vec<TailWalkRow>,
    /// Contributor–library edges among bin 1.
    pub bin1_bipartite: Vec<BipartiteEdge>,
}

impl Report for TailWalkReport {
    fn rows(&self) -> Rows {
        let mut header = vec!["bins_included"];
        header.extend(METRIC_COLUMNS.iter().filter(|&&c| c != "giant_component_size"));
        let rows = self
            .rows
            .iter()
            .map(|r| {
                vec![
                    r.bins_included.into(),
                    r.nodes.into(),
                    r.edges.into(),
                    r.components.into(),
                    r.density.into(),
                    r.assortativity.into(),
                    r.local_efficiency.into(),
                    r.global_efficiency.into(),
                ]
            })
            .collect();
        Rows { header, rows }
    }
}

fn summary<T>(scope: &str, p: &BinPartition<T>) -> PartitionSummary {
    PartitionSummary {
        scope: scope.to_owned(),
        sizes: p.sizes(),
        thresholds: p.bins.iter().map(|b| b.threshold).collect(),
    }
}

fn walk_error(e: BinningError) -> PipelineError {
    PipelineError::Input(format!("tailwalk: {e}"))
}

/// Cumulative contributor sets, one per step.
fn schedule<'g>(
    cfg: &RunConfig,
    g: &'g BipartiteGraph,
) -> Result<(Vec<HashSet<&'g str>>, Vec<PartitionSummary>), PipelineError> {
    let limit = cfg.head_fraction_limit;
    if !cfg.per_repo_bins {
        let p = head_tail_breaks_by(g.contributor_totals(), |&(_, t)| t as f64, limit).map_err(input)?;
        let walk = p.walk_schedule(cfg.bins).map_err(walk_error)?;
        let sets = walk.iter().map(|step| step.iter().map(|(c, _)| *c).collect()).collect();
        return Ok((sets, vec![summary("all", &p)]));
    }

    let mut per_library: BTreeMap<&str, Vec<(&str, u64)>> = BTreeMap::new();
    for (c, l, w) in g.edge_labels() {
        per_library.entry(l).or_default().push((c, w));
    }
    let mut partitions = Vec::new();
    let mut summaries = Vec::new();
    for (lib, members) in per_library {
        let p = head_tail_breaks_by(members, |&(_, w)| w as f64, limit).map_err(input)?;
        summaries.push(summary(lib, &p));
        partitions.push(p);
    }
    let available = partitions.iter().map(BinPartition::len).max().unwrap_or(0);
    if cfg.bins > available {
        return Err(walk_error(BinningError::TooManyBins {
            requested: cfg.bins,
            available,
        }));
    }
    let sets = (1..=cfg.bins)
        .map(|j| {
            partitions
                .iter()
                .flat_map(|p| p.bins.iter().take(j))
                .flat_map(|b| b.members.iter().map(|(c, _)| *c))
                .collect()
        })
        .collect();
    Ok((sets, summaries))
}

/// Bins contributors by contribution, then measures the contributor
/// projection as bins are added from the innermost outwards.
pub fn tailwalk(cfg: &RunConfig) -> Result<Run<TailWalkReport>, PipelineError> {
    let (f, _) = open(&cfg.contributions, "contributions", "tailwalk")?;
    let (records, mut warnings) = read_contributions(f)?;
    let (g, excluded) = studied_graph(cfg, &records, &mut warnings)?;
    if g.contributor_count() == 0 {
        return Err(PipelineError::Input("tailwalk: no contributions left after exclusions".into()));
    }
    let (sets, partitions) = schedule(cfg, &g)?;
    let opts = MetricsOptions {
        density_mode: DensityMode::Undirected,
        workers: Workers(cfg.workers),
    };
    let rows = sets
        .iter()
        .enumerate()
        .map(|(i, set)| {
            let m = full_metrics(&project_onto_contributors(&g.restrict_to_contributors(set)), opts);
            TailWalkRow {
                bins_included: i + 1,
                nodes: m.nodes,
                edges: m.edges,
                components: m.components,
                density: m.density,
                assortativity: m.assortativity,
                local_efficiency: m.local_efficiency,
                global_efficiency: m.global_efficiency,
            }
        })
        .collect();
    let mut libraries = g.libraries().to_vec();
    libraries.sort();
    Ok(Run::ok(
        TailWalkReport {
            meta: Meta::new("tailwalk", cfg),
            libraries,
            excluded,
            partitions,
            rows,
            bin1_bipartite: g.restrict_to_contributors(&sets[0]).edges().collect(),
        },
        warnings,
    ))
}

// ingest-ghtorrent

#[derive(Debug, Clone, Serialize)]
pub struct IngestReport {
    #[serde(flatten)]
    pub meta: Meta,
    pub records: Vec<ContributionRecord>,
}

impl Report for IngestReport {
    fn rows(&self) -> Rows {
        Rows {
            header: vec!["contributor", "library", "commits", "pulls"],
            rows: self
                .records
                .iter()
                .map(|r| {
                    vec![
                        r.contributor.as_str().into(),
                        r.library.as_str().into(),
                        r.commits.into(),
                        r.merged_pulls.into(),
                    ]
                })
                .collect(),
        }
    }
}

pub fn ingest_ghtorrent(cfg: &RunConfig) -> Result<Run<IngestReport>, PipelineError> {
    let dir = cfg
        .tables_dir
        .as_ref()
        .ok_or_else(|| PipelineError::Input("ingest-ghtorrent needs --tables".into()))?;
    let bundle = parse_ghtorrent_tables(TableSources::open_dir(dir)?)?;
    let exclude_logins = cfg.exclude_logins.as_deref().map(Regex::new).transpose().map_err(input)?;
    let records = aggregate_contributions(
        &bundle,
        &AggregateOptions {
            merged_only: cfg.merged_only,
            exclude_logins,
        },
    );
    Ok(Run::ok(
        IngestReport {
            meta: Meta::new("ingest-ghtorrent", cfg),
            records,
        },
        bundle.warnings,
    ))
}
