//! Exit codes, formats and settings precedence of the binary.

use assert_cmd::Command;
use serde_json::Value;
use tailnet_testkit::fixtures::ghtorrent;
use tempfile::TempDir;

fn tailnet(dir: &TempDir) -> Command {
    let mut c = Command::cargo_bin("tailnet").unwrap();
    c.current_dir(dir.path());
    c
}

fn dir_with(files: &[(&str, &str)]) -> TempDir {
    let dir = TempDir::new().unwrap();
    for (name, text) in files {
        let path = dir.path().join(name);
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(path, text).unwrap();
    }
    dir
}

fn json(out: &[u8]) -> Value {
    serde_json::from_slice(out).unwrap()
}

const EDGES: &str = "source,target\na,b\nb,c\nc,a\nd,a\n";

#[test]
fn deps_metrics_json_and_table() {
    let dir = dir_with(&[("e.csv", EDGES)]);
    let out = tailnet(&dir).args(["deps-metrics", "--edges", "e.csv"]).output().unwrap();
    assert!(out.status.success());
    let v = json(&out.stdout);
    assert_eq!(v["command"], "deps-metrics");
    assert_eq!(v["metrics"]["nodes"], 4);
    assert_eq!(v["config"]["edges"], "e.csv");

    let out = tailnet(&dir)
        .args(["deps-metrics", "--edges", "e.csv", "--format", "table"])
        .output()
        .unwrap();
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().contains("global_efficiency"), "{text}");
}

#[test]
fn missing_file_exits_one() {
    let dir = TempDir::new().unwrap();
    let out = tailnet(&dir).args(["deps-metrics", "--edges", "absent.csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("absent.csv"));
}

#[test]
fn malformed_rows_exit_one_with_line_number() {
    let dir = dir_with(&[("e.csv", "source,target\na,b\n,c\n")]);
    let out = tailnet(&dir).args(["deps-metrics", "--edges", "e.csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    let dir = TempDir::new().unwrap();
    tailnet(&dir).args(["tailwalk", "--no-such-flag"]).assert().code(1);
    tailnet(&dir).arg("--help").assert().code(0);
    tailnet(&dir).args(["fit", "--xmin", "sideways"]).assert().code(1);
}

#[test]
fn unfittable_samples_exit_two_after_writing() {
    let dir = dir_with(&[("s.csv", "flat\n4\n4\n4\n")]);
    let out = tailnet(&dir).args(["fit", "--samples", "s.csv"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out.stdout);
    assert!(v["rows"][0]["error"].is_string());
}

#[test]
fn flags_override_config_file() {
    let dir = dir_with(&[
        ("run.conf", "# shared settings\nbins = 9\nhead_fraction_limit = 0.4\n"),
        ("s.csv", "v\n1\n1\n1\n1\n1\n1\n2\n3\n6\n12\n"),
    ]);
    let out = tailnet(&dir)
        .args(["bins", "--samples", "s.csv", "--config", "run.conf", "--head-fraction-limit", "0.35"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out.stdout);
    assert_eq!(v["config"]["bins"], 9);
    assert_eq!(v["config"]["head_fraction_limit"], 0.35);
}

#[test]
fn bad_config_line_exits_one() {
    let dir = dir_with(&[("run.conf", "bins = 2\nspeed = fast\n"), ("e.csv", EDGES)]);
    let out = tailnet(&dir)
        .args(["deps-metrics", "--edges", "e.csv", "--config", "run.conf"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("config line 2"));
}

#[test]
fn ccdf_defaults_to_csv() {
    let dir = dir_with(&[("s.csv", "v\n1\n2\n2\n4\n")]);
    let out = tailnet(&dir).args(["ccdf", "--samples", "s.csv"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "x,ccdf\n1,1\n2,0.75\n4,0.25\n");
}

#[test]
fn ingest_then_tailwalk_writes_files() {
    let dir = dir_with(&[
        ("t/users.csv", ghtorrent::USERS),
        ("t/projects.csv", ghtorrent::PROJECTS),
        ("t/commits.csv", ghtorrent::COMMITS),
        ("t/pull_requests.csv", ghtorrent::PULL_REQUESTS),
    ]);
    tailnet(&dir)
        .args(["ingest-ghtorrent", "--tables", "t", "--out", "c.csv"])
        .assert()
        .success();
    let csv = std::fs::read_to_string(dir.path().join("c.csv")).unwrap();
    assert!(csv.starts_with("contributor,library,commits,pulls\n"));

    let out = tailnet(&dir)
        .args(["tailwalk", "--contributions", "c.csv", "-k", "2", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("warning: excluding library setuptools"), "{err}");
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);

    tailnet(&dir)
        .args(["tailwalk", "--contributions", "c.csv", "-k", "3"])
        .assert()
        .code(1);
}

#[test]
fn excluded_logins_drop_out() {
    let dir = dir_with(&[
        ("t/users.csv", ghtorrent::USERS),
        ("t/projects.csv", ghtorrent::PROJECTS),
        ("t/commits.csv", ghtorrent::COMMITS),
        ("t/pull_requests.csv", ghtorrent::PULL_REQUESTS),
    ]);
    let out = tailnet(&dir)
        .args(["ingest-ghtorrent", "--tables", "t", "--exclude-logins", "^alice$", "--format", "json"])
        .output()
        .unwrap();
    let v = json(&out.stdout);
    let records = v["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["contributor"] != "alice"));
}
