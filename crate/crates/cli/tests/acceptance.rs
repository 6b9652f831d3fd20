//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Criterion failures are printed, not raised, so the rest of the workspace
//! suite still runs; set `ACCEPTANCE_STRICT=1` to exit non-zero on any FAIL.

use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use tailnet::binning::{head_tail_breaks, DEFAULT_HEAD_FRACTION_LIMIT};
use tailnet::graph::*;
use tailnet::heavytail::*;
use tailnet::ingest::{write_contributions, ContributionRecord};
use tailnet::pipeline::{self, RunConfig};
use tailnet_testkit::fixtures::{ghtorrent, specialists_and_bridges};
use tailnet_testkit::graphs::{gnm, heavy_tailed_graph, oracle_metrics};
use tailnet_testkit::rand::RngExt;
use tailnet_testkit::{rng, samplers};

type Check = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn graph(nodes: &[&str], edges: &[(&str, &str)]) -> Graph {
    Graph::undirected(nodes.iter().copied(), edges.iter().copied()).unwrap()
}

fn indexed(n: usize, edges: &[(u32, u32)]) -> Graph {
    Graph::undirected(
        (0..n).map(|i| i.to_string()),
        edges.iter().map(|(a, b)| (a.to_string(), b.to_string())),
    )
    .unwrap()
}

fn density_reproduction() -> Check {
    let rows = [
        (65, 191, 0.092),
        (254, 3568, 0.111),
        (1778, 268_543, 0.170),
        (5702, 2_803_769, 0.173),
        (7383, 4_686_695, 0.172),
    ];
    let mut worst: f64 = 0.0;
    for (n, m, published) in rows {
        let d = density_from_counts(n, m, DensityMode::Undirected).unwrap();
        worst = worst.max((d - published).abs());
    }
    verdict(worst <= 0.001, format!("max |error| {worst:.5} over 5 rows"))
}

fn closed_forms() -> Check {
    let w = Workers(1);
    let k = |n: usize| {
        let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((labels[i].clone(), labels[j].clone()));
            }
        }
        Graph::undirected(&labels, e).unwrap()
    };
    let path3 = graph(&[], &[("a", "b"), ("b", "c")]);
    let path4 = graph(&[], &[("a", "b"), ("b", "c"), ("c", "d")]);
    let star = graph(&[], &[("c", "x"), ("c", "y"), ("c", "z")]);
    let cases = [
        ("global K5", global_efficiency(&k(5), w), 1.0),
        ("global path3", global_efficiency(&path3, w), 5.0 / 6.0),
        ("global star", global_efficiency(&star, w), 0.75),
        ("local K4", local_efficiency(&k(4), w), 1.0),
        ("local star", local_efficiency(&star, w), 0.0),
        ("local path3", local_efficiency(&path3, w), 0.0),
        ("assortativity star", degree_assortativity(&star), -1.0),
        ("assortativity path4", degree_assortativity(&path4), -0.5),
    ];
    let bad: Vec<String> = cases
        .iter()
        .filter(|(_, got, want)| got.map_or(true, |g| (g - want).abs() > 1e-12))
        .map(|(name, got, want)| format!("{name}: {got:?} != {want}"))
        .collect();
    verdict(bad.is_empty(), if bad.is_empty() { "8 closed forms".into() } else { bad.join("; ") })
}

fn close(a: Option<f64>, b: Option<f64>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9,
        _ => false,
    }
}

fn brute_force() -> Check {
    let mut mismatches = Vec::new();
    for seed in 0..100u64 {
        let mut r = rng(1000 + seed);
        let n = r.random_range(1..=50u32);
        let max = (n * (n - 1) / 2) as usize;
        let m = r.random_range(0..=max.min(3 * n as usize));
        let edges = if seed % 2 == 0 { gnm(&mut r, n, m) } else { heavy_tailed_graph(&mut r, n, m, 2.3) };
        let got = full_metrics(&indexed(n as usize, &edges), MetricsOptions::default());
        let want = oracle_metrics(n as usize, &edges);
        let ok = got.nodes == want.nodes
            && got.edges == want.edges
            && got.components == want.components
            && got.giant_component_size == want.giant_component_size
            && close(got.density, want.density)
            && close(got.assortativity, want.assortativity)
            && close(got.local_efficiency, want.local_efficiency)
            && close(got.global_efficiency, want.global_efficiency);
        if !ok {
            mismatches.push(seed);
        }
    }
    verdict(mismatches.is_empty(), format!("{} of 100 graphs match, mismatching seeds {mismatches:?}", 100 - mismatches.len()))
}

fn fit_recovery() -> Check {
    let d = samplers::DiscretePowerLaw::new(2.5, 5);
    let (mut alpha_ok, mut xmin_ok, mut both) = (0, 0, 0);
    for seed in 0..20 {
        let s = SampleSet::discrete(d.samples(&mut rng(seed), 10_000)).unwrap();
        let xmin = select_xmin(&s).unwrap();
        let Params::PowerLaw { alpha } = fit_power_law(&s, xmin).unwrap().params else {
            unreachable!()
        };
        let a = (alpha - 2.5).abs() <= 0.1;
        let x = (4.0..=7.0).contains(&xmin);
        alpha_ok += a as usize;
        xmin_ok += x as usize;
        both += (a && x) as usize;
    }

    let opts = BestFitOptions {
        xmin: XminPolicy::Fixed(1.0),
        ..Default::default()
    };
    let mut lognormal_wins = 0;
    for seed in 0..20 {
        let xs = samplers::discrete_lognormal(&mut rng(500 + seed), 2.0, 1.0, 1, 5_000);
        let b = best_fit(&SampleSet::discrete(xs).unwrap(), &opts).unwrap();
        let beats_pl = b.ranking.iter().any(|r| r.family == Family::Lognormal && r.wins.contains(&Family::PowerLaw));
        lognormal_wins += (b.winner == Family::Lognormal && beats_pl) as usize;
    }
    verdict(
        both >= 18 && lognormal_wins >= 18,
        format!(
            "power law: alpha within 0.1 in {alpha_ok}/20, xmin in [4,7] in {xmin_ok}/20, both in {both}/20 (need 18); \
             lognormal wins and beats power law in {lognormal_wins}/20 (need 18)"
        ),
    )
}

fn ratio_algebra() -> Check {
    let mut problems = Vec::new();
    for seed in 0..50u64 {
        let mut r = rng(2000 + seed);
        let s = match seed % 3 {
            0 => SampleSet::discrete(samplers::DiscretePowerLaw::new(r.random_range(1.8..3.0), 1).samples(&mut r, 2000)),
            1 => SampleSet::discrete(samplers::discrete_lognormal(&mut r, 1.5, 1.0, 1, 2000)),
            _ => SampleSet::continuous(samplers::lognormal(&mut r, 0.5, 1.2, 2000)),
        }
        .unwrap();
        let xmin = s.values()[0];
        let fits: Vec<FitResult> = Family::ALL.iter().filter_map(|&f| fit(f, &s, xmin).ok()).collect();
        for a in &fits {
            let same = loglikelihood_ratio(&s, a, a).unwrap();
            if same.loglik_ratio != 0.0 || same.normalized_ratio != 0.0 || same.p_value != 1.0 {
                problems.push(format!("seed {seed}: R({0:?},{0:?}) = {same:?}", a.family));
            }
            for b in &fits {
                let (ab, ba) = (loglikelihood_ratio(&s, a, b).unwrap(), loglikelihood_ratio(&s, b, a).unwrap());
                if ab.loglik_ratio != -ba.loglik_ratio || ab.normalized_ratio != -ba.normalized_ratio {
                    problems.push(format!("seed {seed}: {:?} vs {:?} not antisymmetric", a.family, b.family));
                }
            }
        }
        let pl = fits.iter().find(|f| f.family == Family::PowerLaw);
        let tpl = fits.iter().find(|f| f.family == Family::TruncatedPowerLaw);
        match (pl, tpl) {
            (Some(pl), Some(tpl)) if tpl.loglik >= pl.loglik - 1e-6 => {}
            _ => problems.push(format!("seed {seed}: nesting")),
        }
    }
    verdict(problems.is_empty(), if problems.is_empty() { "50 samples".into() } else { problems.join("; ") })
}

fn binning() -> Check {
    let p = head_tail_breaks(&[1., 1., 1., 1., 1., 1., 2., 3., 6., 12.], DEFAULT_HEAD_FRACTION_LIMIT).unwrap();
    if p.sizes() != [1, 2, 7] {
        return Err(format!("fixture sizes {:?}", p.sizes()));
    }
    for seed in 0..1000u64 {
        let mut r = rng(3000 + seed);
        let n = r.random_range(1..500);
        let values = samplers::heavy_tailed_values(&mut r, n);
        let p = head_tail_breaks(&values, DEFAULT_HEAD_FRACTION_LIMIT).unwrap();
        let mut all: Vec<f64> = p.bins.iter().flat_map(|b| b.members.clone()).collect();
        let mut want = values.clone();
        all.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        if all != want {
            return Err(format!("seed {seed}: not a partition"));
        }
        for w in p.bins.windows(2) {
            let low = w[0].members.iter().copied().fold(f64::INFINITY, f64::min);
            let high = w[1].members.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if low <= high {
                return Err(format!("seed {seed}: bins out of order"));
            }
        }
        let mut prefix: Vec<f64> = Vec::new();
        for b in &p.bins {
            prefix.extend(&b.members);
            let mean = prefix.iter().sum::<f64>() / prefix.len() as f64;
            if (b.threshold - mean).abs() > 1e-9 * mean.max(1.0) {
                return Err(format!("seed {seed}: threshold {} != {mean}", b.threshold));
            }
        }
    }
    Ok("fixture [1, 2, 7]; 1000 multisets".into())
}

fn fixture_contributions(dir: &Path) -> std::path::PathBuf {
    let records: Vec<ContributionRecord> = specialists_and_bridges()
        .into_iter()
        .map(|(contributor, library, commits, merged_pulls)| ContributionRecord {
            contributor,
            library,
            commits,
            merged_pulls,
        })
        .collect();
    let path = dir.join("contributions.csv");
    write_contributions(std::fs::File::create(&path).unwrap(), &records).unwrap();
    path
}

fn tail_walk_shape() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig {
        contributions: Some(fixture_contributions(dir.path())),
        bins: 3,
        ..RunConfig::default()
    };
    let rows = pipeline::tailwalk(&cfg).map_err(|e| e.to_string())?.report.rows;
    let (one, two) = (&rows[0], &rows[1]);
    let (l1, g1, g2) = (
        one.local_efficiency.unwrap_or(0.0),
        one.global_efficiency.unwrap_or(0.0),
        two.global_efficiency.unwrap_or(0.0),
    );
    let components: Vec<usize> = rows.iter().map(|r| r.components).collect();
    verdict(
        one.components == 14 && l1 > g1 && two.components == 1 && g2 > g1,
        format!("components {components:?}; step 1 local {l1:.3} global {g1:.3}; step 2 global {g2:.3}"),
    )
}

fn tailnet(dir: &Path, args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_tailnet"))
        .current_dir(dir)
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?}: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn golden() -> Check {
    let dir = tempfile::tempdir().unwrap();
    let tables = dir.path().join("tables");
    std::fs::create_dir(&tables).unwrap();
    for (name, text) in [
        ("users.csv", ghtorrent::USERS),
        ("projects.csv", ghtorrent::PROJECTS),
        ("commits.csv", ghtorrent::COMMITS),
        ("pull_requests.csv", ghtorrent::PULL_REQUESTS),
    ] {
        std::fs::write(tables.join(name), text).unwrap();
    }
    tailnet(dir.path(), &["ingest-ghtorrent", "--tables", "tables", "--out", "contributions.csv"])?;
    let walk = |workers: &str| tailnet(dir.path(), &["tailwalk", "--contributions", "contributions.csv", "-k", "2", "--workers", workers]);
    let runs = [walk("1")?, walk("1")?, walk("8")?, walk("8")?];

    let golden_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/tailwalk_k2.json");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&golden_path, &runs[0]).unwrap();
    }
    let expected = std::fs::read(&golden_path).map_err(|e| format!("{}: {e}", golden_path.display()))?;
    let same = runs.iter().all(|r| *r == expected);
    verdict(same, format!("4 runs (workers 1 and 8) against {} bytes of golden JSON", expected.len()))
}

fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn desk_scale() -> Check {
    let edges = heavy_tailed_graph(&mut rng(9), 60_000, 500_000, 2.2);
    let g = indexed(60_000, &edges);
    let start = Instant::now();
    let global = global_efficiency(&g, Workers(8));
    let local = local_efficiency(&g, Workers(8));
    let took = start.elapsed();
    let rss = peak_rss_kib();
    let gib = rss.map_or(f64::NAN, |k| k as f64 / (1024.0 * 1024.0));
    verdict(
        global.is_some() && local.is_some() && took < Duration::from_secs(600) && gib < 4.0,
        format!(
            "{} nodes, {} edges: efficiencies in {:.1}s, peak RSS {gib:.2} GiB, global {:.4}, local {:.4}",
            g.node_count(),
            g.edge_count(),
            took.as_secs_f64(),
            global.unwrap_or(f64::NAN),
            local.unwrap_or(f64::NAN)
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(u32, &str, u64, fn() -> Check); 9] = [
        (1, "projection density from published counts", 1, density_reproduction),
        (2, "closed-form graph oracles", 1, closed_forms),
        (3, "brute-force metric equivalence", 30, brute_force),
        (4, "fit recovery", 300, fit_recovery),
        (5, "likelihood-ratio algebra", 60, ratio_algebra),
        (6, "head/tail breaks", 10, binning),
        (7, "tail-walk shape", 10, tail_walk_shape),
        (8, "golden end-to-end report", 5, golden),
        (9, "desk-scale efficiency", 600, desk_scale),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs < limit as f64;
        let (ok, detail) = match result {
            Ok(d) => (in_time, d),
            Err(d) => (false, d),
        };
        let status = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id} {status}: {name}: {detail} [{secs:.2}s, limit {limit}s]");
        if !ok {
            failed.push(id);
        }
    }
    println!("acceptance: {}/9 criteria pass, failing {failed:?}", 9 - failed.len());
    if !failed.is_empty() && std::env::var_os("ACCEPTANCE_STRICT").is_some() {
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
