//! Ingestion round trips and aggregation invariants.

use proptest::prelude::*;
use tailnet::ingest::*;
use tailnet_testkit::fixtures::ghtorrent::{COMMITS, PROJECTS, PULL_REQUESTS, USERS};

fn bundle(commits: &str, pulls: &str) -> TableBundle {
    parse_ghtorrent_tables(TableSources {
        users: USERS.as_bytes(),
        projects: PROJECTS.as_bytes(),
        commits: commits.as_bytes(),
        pull_requests: pulls.as_bytes(),
    })
    .unwrap()
}

fn shuffled(table: &str, order: &[usize]) -> String {
    let mut lines = table.lines();
    let header = lines.next().unwrap();
    let body: Vec<&str> = lines.collect();
    let mut out = format!("{header}\n");
    for &i in order.iter().filter(|&&i| i < body.len()) {
        out += body[i];
        out.push('\n');
    }
    out
}

fn body_len(table: &str) -> usize {
    table.lines().count() - 1
}

#[test]
fn fixture_aggregates_by_login_and_project() {
    let records = aggregate_contributions(&bundle(COMMITS, PULL_REQUESTS), &AggregateOptions::default());
    let find = |c: &str, l: &str| {
        records
            .iter()
            .find(|r| r.contributor == c && r.library == l)
            .map(|r| (r.commits, r.merged_pulls))
    };
    assert_eq!(find("alice", "numpy"), Some((4, 1)));
    assert_eq!(find("bob", "requests"), Some((3, 0)));
    assert_eq!(find("frank", "numpy"), Some((0, 1)));
    assert_eq!(find("heidi", "requests"), None, "unmerged pulls do not count");
    let mut sorted = records.clone();
    sorted.sort_by(|a, b| (&a.contributor, &a.library).cmp(&(&b.contributor, &b.library)));
    assert_eq!(records, sorted);
}

#[test]
fn activity_is_conserved() {
    let b = bundle(COMMITS, PULL_REQUESTS);
    let merged = aggregate_contributions(&b, &AggregateOptions::default());
    let commits: u64 = merged.iter().map(|r| r.commits).sum();
    let pulls: u64 = merged.iter().map(|r| r.merged_pulls).sum();
    assert_eq!(commits as usize, b.commits.len());
    assert_eq!(pulls as usize, b.pull_requests.iter().filter(|p| p.merged).count());

    let all = aggregate_contributions(&b, &AggregateOptions { merged_only: false, exclude_logins: None });
    assert_eq!(all.iter().map(|r| r.merged_pulls).sum::<u64>() as usize, b.pull_requests.len());
}

#[test]
fn excluded_logins_vanish() {
    let b = bundle(COMMITS, PULL_REQUESTS);
    let opts = AggregateOptions {
        merged_only: true,
        exclude_logins: Some(regex::Regex::new("^(alice|bob)$").unwrap()),
    };
    let records = aggregate_contributions(&b, &opts);
    assert!(records.iter().all(|r| r.contributor != "alice" && r.contributor != "bob"));
    assert!(records.iter().any(|r| r.contributor == "carol"));
}

#[test]
fn contributions_round_trip() {
    let records = aggregate_contributions(&bundle(COMMITS, PULL_REQUESTS), &AggregateOptions::default());
    let mut buf = Vec::new();
    write_contributions(&mut buf, &records).unwrap();
    let (back, warnings) = read_contributions(buf.as_slice()).unwrap();
    assert_eq!(back, records);
    assert!(warnings.is_empty());
}

#[test]
fn exclusion_reports_small_libraries() {
    let records = aggregate_contributions(&bundle(COMMITS, PULL_REQUESTS), &AggregateOptions::default());
    let (g, report) = build_bipartite_from_records(&records, 3).unwrap();
    let excluded: Vec<&str> = report.excluded.iter().map(|e| e.library.as_str()).collect();
    assert_eq!(excluded, ["numpy-fork", "setuptools"]);
    let mut libs = g.libraries().to_vec();
    libs.sort();
    assert_eq!(libs, ["numpy", "requests", "six"]);
}

#[test]
fn dangling_keys_are_errors() {
    let bad = format!("{COMMITS}9,1,2018-01-01T00:00:00Z\n");
    let e = parse_ghtorrent_tables(TableSources {
        users: USERS.as_bytes(),
        projects: PROJECTS.as_bytes(),
        commits: bad.as_bytes(),
        pull_requests: PULL_REQUESTS.as_bytes(),
    })
    .unwrap_err();
    assert!(e.to_string().starts_with("commits line "), "{e}");
}

proptest! {
    #[test]
    fn row_order_does_not_matter(
        c in Just((0..body_len(COMMITS)).collect::<Vec<_>>()).prop_shuffle(),
        p in Just((0..body_len(PULL_REQUESTS)).collect::<Vec<_>>()).prop_shuffle(),
    ) {
        let base = aggregate_contributions(&bundle(COMMITS, PULL_REQUESTS), &AggregateOptions::default());
        let moved = aggregate_contributions(
            &bundle(&shuffled(COMMITS, &c), &shuffled(PULL_REQUESTS, &p)),
            &AggregateOptions::default(),
        );
        prop_assert_eq!(base, moved);
    }
}
