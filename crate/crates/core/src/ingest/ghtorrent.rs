use std::collections::BTreeMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::{DateTime, NaiveDateTime, Utc};
use regex::Regex;

use super::{read_table, ContributionRecord, IngestError, Row};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Project {
    pub name: String,
    pub forked_from: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommitRow {
    pub author: u64,
    pub project: u64,
    pub created_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PullRequestRow {
    pub user: u64,
    pub project: u64,
    pub merged: bool,
    pub created_at: DateTime<Utc>,
}

/// The four exported tables, with every commit and pull request author and
/// project resolved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableBundle {
    pub users: BTreeMap<u64, String>,
    pub projects: BTreeMap<u64, Project>,
    pub commits: Vec<CommitRow>,
    pub pull_requests: Vec<PullRequestRow>,
    pub warnings: Vec<String>,
}

pub struct TableSources<R> {
    pub users: R,
    pub projects: R,
    pub commits: R,
    pub pull_requests: R,
}

impl TableSources<File> {
    /// Opens `users.csv`, `projects.csv`, `commits.csv` and
    /// `pull_requests.csv` in `dir`.
    pub fn open_dir(dir: &Path) -> Result<Self, IngestError> {
        let open = |table: &str| {
            File::open(dir.join(format!("{table}.csv"))).map_err(|source| IngestError::Io {
                table: table.to_owned(),
                source,
            })
        };
        Ok(TableSources {
            users: open("users")?,
            projects: open("projects")?,
            commits: open("commits")?,
            pull_requests: open("pull_requests")?,
        })
    }
}

fn id(table: &str, row: &Row, i: usize, column: &str) -> Result<u64, IngestError> {
    row.count(table, i, column)
}

fn timestamp(table: &str, row: &Row, i: usize) -> Result<DateTime<Utc>, IngestError> {
    let s = row.fields[i].as_str();
    DateTime::parse_from_rfc3339(s)
        .map(|t| t.with_timezone(&Utc))
        .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%d %H:%M:%S").map(|t| t.and_utc()))
        .or_else(|_| NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S").map(|t| t.and_utc()))
        .map_err(|_| IngestError::malformed(table, row.line, format!("bad timestamp `{s}`")))
}

pub fn parse_ghtorrent_tables<R: Read>(sources: TableSources<R>) -> Result<TableBundle, IngestError> {
    let mut b = TableBundle::default();

    for row in read_table("users", sources.users, &["id", "login"], &mut b.warnings)? {
        let key = id("users", &row, 0, "id")?;
        let login = row.label("users", 1, "login")?.to_owned();
        if b.users.insert(key, login).is_some() {
            return Err(IngestError::malformed("users", row.line, format!("repeated id {key}")));
        }
    }

    let columns = ["id", "name", "forked_from"];
    for row in read_table("projects", sources.projects, &columns, &mut b.warnings)? {
        let key = id("projects", &row, 0, "id")?;
        let name = row.label("projects", 1, "name")?.to_owned();
        let forked_from = match row.fields[2].as_str() {
            "" => None,
            _ => Some(id("projects", &row, 2, "forked_from")?),
        };
        if b.projects.insert(key, Project { name, forked_from }).is_some() {
            return Err(IngestError::malformed("projects", row.line, format!("repeated id {key}")));
        }
    }

    let resolve = |b: &TableBundle, table: &str, line: u64, user: u64, project: u64| {
        if !b.users.contains_key(&user) {
            return Err(IngestError::Dangling {
                table: table.to_owned(),
                line,
                kind: "user",
                key: user,
            });
        }
        if !b.projects.contains_key(&project) {
            return Err(IngestError::Dangling {
                table: table.to_owned(),
                line,
                kind: "project",
                key: project,
            });
        }
        Ok(())
    };

    let columns = ["author_id", "project_id", "created_at"];
    for row in read_table("commits", sources.commits, &columns, &mut b.warnings)? {
        let author = id("commits", &row, 0, "author_id")?;
        let project = id("commits", &row, 1, "project_id")?;
        let created_at = timestamp("commits", &row, 2)?;
        resolve(&b, "commits", row.line, author, project)?;
        b.commits.push(CommitRow {
            author,
            project,
            created_at,
        });
    }

    let columns = ["user_id", "project_id", "merged", "created_at"];
    for row in read_table("pull_requests", sources.pull_requests, &columns, &mut b.warnings)? {
        let user = id("pull_requests", &row, 0, "user_id")?;
        let project = id("pull_requests", &row, 1, "project_id")?;
        let merged = match row.fields[2].as_str() {
            "true" => true,
            "false" => false,
            other => {
                return Err(IngestError::malformed(
                    "pull_requests",
                    row.line,
                    format!("merged must be true or false, got `{other}`"),
                ))
            }
        };
        let created_at = timestamp("pull_requests", &row, 3)?;
        resolve(&b, "pull_requests", row.line, user, project)?;
        b.pull_requests.push(PullRequestRow {
            user,
            project,
            merged,
            created_at,
        });
    }
    Ok(b)
}

#[derive(Debug, Clone)]
pub struct AggregateOptions {
    /// Count only merged pull requests.
    pub merged_only: bool,
    /// Logins matching this pattern are dropped (bots, mirrors).
    pub exclude_logins: Option<Regex>,
}

impl Default for AggregateOptions {
    fn default() -> Self {
        AggregateOptions {
            merged_only: true,
            exclude_logins: None,
        }
    }
}

/// Commit and pull request counts per (login, project name), sorted by
/// contributor then library.
pub fn aggregate_contributions(b: &TableBundle, opts: &AggregateOptions) -> Vec<ContributionRecord> {
    let mut acc: BTreeMap<(&str, &str), (u64, u64)> = BTreeMap::new();
    let keep = |user: u64| {
        let login = b.users[&user].as_str();
        opts.exclude_logins.as_ref().map_or(true, |re| !re.is_match(login)).then_some(login)
    };
    for c in &b.commits {
        if let Some(login) = keep(c.author) {
            acc.entry((login, &b.projects[&c.project].name)).or_default().0 += 1;
        }
    }
    for p in b.pull_requests.iter().filter(|p| p.merged || !opts.merged_only) {
        if let Some(login) = keep(p.user) {
            acc.entry((login, &b.projects[&p.project].name)).or_default().1 += 1;
        }
    }
    acc.into_iter()
        .map(|((c, l), (commits, merged_pulls))| ContributionRecord {
            contributor: c.to_owned(),
            library: l.to_owned(),
            commits,
            merged_pulls,
        })
        .collect()
}
