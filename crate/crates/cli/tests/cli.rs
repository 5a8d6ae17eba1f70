use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lvm_core::harness::read_aggregate_csv;

fn lvm(args: &[&str], extra: &[&Path]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lvm"))
        .args(args)
        .args(extra)
        .env_remove("LVM_CACHE")
        .output()
        .expect("spawn lvm")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

const TRIANGLE_AND_TAIL: &str = "# triangle 1-2-3 plus 3-4\n1 2\n2 3\n3 1\n3 4\n4 3\n";

#[test]
fn net_stats_of_edge_file() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("e.txt");
    fs::write(&edges, TRIANGLE_AND_TAIL).unwrap();
    let out = lvm(&["net-stats", "--edges"], &[&edges]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("network,n,edge_count,avg_degree,avg_clustering"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(&row[1..3], ["4", "4"]);
    assert_eq!(row[3].parse::<f64>().unwrap(), 2.0);
    // nodes 1 and 2 have clustering 1, node 3 has 1/3, node 4 has 0
    assert!((row[4].parse::<f64>().unwrap() - (2.0 + 1.0 / 3.0) / 4.0).abs() < 1e-8);
}

#[test]
fn errors_exit_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\n0 x\n").unwrap();
    let out = lvm(&["net-stats", "--edges"], &[&bad]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = lvm(&["net-stats", "--dataset", "nonexistent"], &[]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown dataset"));

    let out = lvm(&["run", "--config"], &[&dir.path().join("missing.json"), Path::new("--out"), dir.path()]);
    assert!(!out.status.success());
}

#[test]
fn centrality_is_keyed_by_raw_id() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("star.txt");
    fs::write(&edges, "10 20\n10 30\n10 40\n").unwrap();
    let csv = dir.path().join("c.csv");
    let out = lvm(&["centrality", "--edges"], &[&edges, Path::new("--out"), &csv]);
    assert!(out.status.success());
    let text = fs::read_to_string(&csv).unwrap();
    let rows: Vec<(i64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (a, b) = l.split_once(',').unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.iter().map(|r| r.0).collect::<Vec<_>>(), [10, 20, 30, 40]);
    assert!((rows[0].1 - 0.5f64.sqrt()).abs() < 1e-6);
    assert!((rows[1].1 - (1.0f64 / 6.0).sqrt()).abs() < 1e-6);
}

fn write_network(dir: &Path) {
    let mut edges = String::new();
    // ring of 120 nodes with chords
    for i in 0..120 {
        edges += &format!("{} {}\n{} {}\n", i, (i + 1) % 120, i, (i * 7 + 3) % 120);
    }
    fs::write(dir.join("ring.txt"), edges).unwrap();
}

#[test]
fn run_and_sweep_write_reproducible_outputs() {
    let dir = tempfile::tempdir().unwrap();
    write_network(dir.path());
    let single = dir.path().join("single.json");
    fs::write(
        &single,
        r#"{"network":"ring.txt","f_init":3,"budget":15,"replications":5,"seed":1,"method":"social","social_depth":2}"#,
    )
    .unwrap();
    let out = lvm(&["run", "--trace", "--config"], &[&single, Path::new("--out"), &dir.path().join("r")]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rows = read_aggregate_csv(fs::read(dir.path().join("r/aggregate.csv")).unwrap().as_slice()).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].method, "social_2");
    assert_eq!(rows[0].dimension, "none");
    assert_eq!(rows[0].mean_runtime_ms, None);
    let attempts = fs::read_to_string(dir.path().join("r/attempts.csv")).unwrap();
    assert_eq!(attempts.lines().count(), 1 + 5 * 15);

    let sweep = dir.path().join("sweep.json");
    fs::write(
        &sweep,
        r#"{"network":"ring.txt","f_init":3,"budget":15,"replications":4,"seed":2,
            "dimension":"budget","values":[5,10],"methods":["random","picky_gec","social_1"]}"#,
    )
    .unwrap();
    for out_dir in ["s1", "s2"] {
        let out = lvm(&["sweep", "--config"], &[&sweep, Path::new("--out"), &dir.path().join(out_dir)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout(&out).lines().count(), 6);
    }
    for f in ["aggregate.csv", "runs.csv", "cumulative.csv", "seeded_centrality.csv", "network.json"] {
        assert_eq!(
            fs::read(dir.path().join("s1").join(f)).unwrap(),
            fs::read(dir.path().join("s2").join(f)).unwrap(),
            "{f}"
        );
    }
    assert!(!dir.path().join("s1/attempts.csv").exists());

    // timing fills the runtime column
    let out = lvm(&["sweep", "--timing", "--config"], &[&sweep, Path::new("--out"), &dir.path().join("t")]);
    assert!(out.status.success());
    let rows = read_aggregate_csv(fs::read(dir.path().join("t/aggregate.csv")).unwrap().as_slice()).unwrap();
    assert!(rows.iter().all(|r| r.mean_runtime_ms.is_some()));

    // commands refuse the other mode's config
    assert!(!lvm(&["run", "--config"], &[&sweep, Path::new("--out"), &dir.path().join("x")]).status.success());
    assert!(!lvm(&["sweep", "--config"], &[&single, Path::new("--out"), &dir.path().join("x")]).status.success());
}
