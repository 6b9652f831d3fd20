use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use tailnet::pipeline::{self, render, OutputFormat, PipelineError, Report, Run, RunConfig};

/// Network and heavy-tail analysis of software ecosystems.
#[derive(Parser)]
#[command(name = "tailnet", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Five structural measures of a dependency graph.
    DepsMetrics {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        edges: Option<String>,
        /// directed or undirected
        #[arg(long)]
        density_mode: Option<String>,
    },
    /// Fit heavy-tailed families and pick a winner per sample.
    Fit {
        #[command(flatten)]
        io: Common,
        #[command(flatten)]
        src: Sources,
        #[command(flatten)]
        fit: FitFlags,
    },
    /// Head/tail-breaks bins of a value set.
    Bins {
        #[command(flatten)]
        io: Common,
        #[command(flatten)]
        src: Sources,
        #[arg(long)]
        head_fraction_limit: Option<String>,
    },
    /// Contributor projection metrics while walking up the tail.
    Tailwalk {
        #[command(flatten)]
        io: Common,
        #[arg(long)]
        contributions: Option<String>,
        /// Number of bins to walk through.
        #[arg(short = 'k', long)]
        bins: Option<String>,
        /// Comma-separated studied libraries; all by default.
        #[arg(long)]
        libraries: Option<String>,
        /// Bin contributors within each library instead of by total.
        #[arg(long)]
        per_repo_bins: bool,
        #[arg(long)]
        head_fraction_limit: Option<String>,
        #[arg(long)]
        min_contributors: Option<String>,
    },
    /// Empirical survival function as plot data.
    Ccdf {
        #[command(flatten)]
        io: Common,
        #[command(flatten)]
        src: Sources,
    },
    /// Turn exported users/projects/commits/pull_requests tables into a
    /// contributions table.
    IngestGhtorrent {
        #[command(flatten)]
        io: Common,
        /// Directory holding users.csv, projects.csv, commits.csv and
        /// pull_requests.csv.
        #[arg(long)]
        tables: Option<String>,
        /// Count every pull request, merged or not.
        #[arg(long)]
        all_pulls: bool,
        /// Drop logins matching this regular expression.
        #[arg(long)]
        exclude_logins: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// json, csv or table
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    workers: Option<String>,
    /// Flat key = value settings; flags win over the file.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct Sources {
    #[arg(long)]
    samples: Option<String>,
    /// Column of the samples file to use.
    #[arg(long)]
    column: Option<String>,
    #[arg(long)]
    contributions: Option<String>,
    #[arg(long)]
    edges: Option<String>,
    #[arg(long)]
    min_contributors: Option<String>,
    #[arg(long)]
    libraries: Option<String>,
}

#[derive(Args)]
struct FitFlags {
    /// discrete or continuous
    #[arg(long)]
    kind: Option<String>,
    /// `ks` or a fixed cutoff
    #[arg(long)]
    xmin: Option<String>,
    /// Comma-separated families to compare.
    #[arg(long)]
    families: Option<String>,
    #[arg(long)]
    significance: Option<String>,
}

type Settings = Vec<(&'static str, Option<String>)>;

fn sources(s: Sources) -> Settings {
    vec![
        ("samples", s.samples),
        ("column", s.column),
        ("contributions", s.contributions),
        ("edges", s.edges),
        ("min_contributors", s.min_contributors),
        ("libraries", s.libraries),
    ]
}

fn flag(on: bool, key: &'static str, value: &str) -> (&'static str, Option<String>) {
    (key, on.then(|| value.to_owned()))
}

fn split(command: Command) -> (&'static str, Common, Settings) {
    match command {
        Command::DepsMetrics { io, edges, density_mode } => {
            ("deps-metrics", io, vec![("edges", edges), ("density_mode", density_mode)])
        }
        Command::Fit { io, src, fit } => {
            let mut s = sources(src);
            s.extend([
                ("kind", fit.kind),
                ("xmin", fit.xmin),
                ("families", fit.families),
                ("significance", fit.significance),
            ]);
            ("fit", io, s)
        }
        Command::Bins {
            io,
            src,
            head_fraction_limit,
        } => {
            let mut s = sources(src);
            s.push(("head_fraction_limit", head_fraction_limit));
            ("bins", io, s)
        }
        Command::Tailwalk {
            io,
            contributions,
            bins,
            libraries,
            per_repo_bins,
            head_fraction_limit,
            min_contributors,
        } => (
            "tailwalk",
            io,
            vec![
                ("contributions", contributions),
                ("bins", bins),
                ("libraries", libraries),
                flag(per_repo_bins, "per_repo_bins", "true"),
                ("head_fraction_limit", head_fraction_limit),
                ("min_contributors", min_contributors),
            ],
        ),
        Command::Ccdf { io, src } => ("ccdf", io, sources(src)),
        Command::IngestGhtorrent {
            io,
            tables,
            all_pulls,
            exclude_logins,
        } => (
            "ingest-ghtorrent",
            io,
            vec![
                ("tables_dir", tables),
                flag(all_pulls, "merged_only", "false"),
                ("exclude_logins", exclude_logins),
            ],
        ),
    }
}

fn emit<T: Report>(
    run: Result<Run<T>, PipelineError>,
    cfg: &RunConfig,
    natural: OutputFormat,
    out: Option<&PathBuf>,
) -> anyhow::Result<ExitCode> {
    let run = match run {
        Ok(run) => run,
        Err(e) => {
            eprintln!("error: {e}");
            return Ok(ExitCode::from(e.exit_code() as u8));
        }
    };
    for w in &run.warnings {
        eprintln!("warning: {w}");
    }
    let text = render(&run.report, cfg.format_or(natural));
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(text.as_bytes()).context("writing standard output")?,
    }
    Ok(match run.numeric_failure {
        Some(why) => {
            eprintln!("error: {why}");
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    })
}

fn run(command: Command) -> anyhow::Result<ExitCode> {
    let (name, io, settings) = split(command);
    let mut cfg = RunConfig::default();
    let apply = || -> Result<(), PipelineError> {
        if let Some(path) = &io.config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| PipelineError::Input(format!("{}: {e}", path.display())))?;
            cfg.apply_file(&text)?;
        }
        let common = [("format", io.format.clone()), ("workers", io.workers.clone())];
        for (key, value) in settings.into_iter().chain(common) {
            if let Some(v) = value {
                cfg.set(key, &v)?;
            }
        }
        Ok(())
    };
    if let Err(e) = apply() {
        eprintln!("error: {e}");
        return Ok(ExitCode::from(e.exit_code() as u8));
    }
    let out = io.out.as_ref();
    match name {
        "deps-metrics" => emit(pipeline::deps_metrics(&cfg), &cfg, OutputFormat::Json, out),
        "fit" => emit(pipeline::fit(&cfg), &cfg, OutputFormat::Json, out),
        "bins" => emit(pipeline::bins(&cfg), &cfg, OutputFormat::Json, out),
        "tailwalk" => emit(pipeline::tailwalk(&cfg), &cfg, OutputFormat::Json, out),
        "ccdf" => emit(pipeline::ccdf(&cfg), &cfg, OutputFormat::Csv, out),
        "ingest-ghtorrent" => emit(pipeline::ingest_ghtorrent(&cfg), &cfg, OutputFormat::Csv, out),
        _ => unreachable!("every subcommand is matched"),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
