use std::path::Path;
use std::process::{Command, Output};

use ldp_subgraph::graph::{load_edge_list, Graph};
use ldp_subgraph::mech::{RandomSource, Role};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ldp-subgraph")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn run_writes_one_row_per_trial() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out/a");
    let o = bin(&[
        "run", "--algo", "local-lap-kstar", "--k", "2", "--eps", "1", "--dmax", "true", "--er", "1000,0.05",
        "--trials", "100", "--seed", "7", "--out", p(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("out/a.csv")).unwrap();
    assert_eq!(csv.lines().count(), 101);
    assert!(csv.starts_with(
        "algorithm,n,k,eps0,eps1,eps2,eps_edge_total,eps_entire_total,d_tilde_policy,d_tilde_used,trial,truth,estimate,l2,relative_error,seconds\n"
    ));
    assert!(dir.path().join("out/a.summary.json").exists());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let prefix = dir.path().join(name);
        let o = bin(&[
            "run", "--algo", "local-2rounds-tri", "--eps", "1", "--split", "0,0.5,0.5", "--dmax", "true", "--er",
            "400,0.05", "--n", "300", "--trials", "10", "--seed", "3", "--out", p(&prefix),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(dir.path().join(format!("{name}.csv"))).unwrap()
    };
    assert_eq!(run("x"), run("y"));
}

#[test]
fn clustering_writes_paired_runs() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("cc");
    let o = bin(&[
        "run", "--algo", "clustering", "--eps", "2", "--er", "300,0.1", "--trials", "5", "--seed", "1", "--out",
        p(&prefix),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let read = |suffix: &str| -> Vec<Vec<String>> {
        let mut r = csv::Reader::from_path(dir.path().join(format!("cc{suffix}"))).unwrap();
        r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
    };
    let (main, tri, stars) = (read(".csv"), read(".triangles.csv"), read(".two_stars.csv"));
    assert_eq!((main.len(), tri.len(), stars.len()), (5, 5, 5));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("cc.summary.json")).unwrap()).unwrap();
    let mut re_sum = 0.0;
    for i in 0..5 {
        assert_eq!(main[i][6], "4");
        let t: f64 = tri[i][12].parse().unwrap();
        let s: f64 = stars[i][12].parse().unwrap();
        let cc = if s > 0.0 { (3.0 * t / s).clamp(0.0, 1.0) } else { 0.0 };
        assert_eq!(main[i][12].parse::<f64>().unwrap(), cc);
        let truth: f64 = main[i][11].parse().unwrap();
        re_sum += (cc - truth).abs() / truth.max(0.001);
    }
    let mean_re = summary["mean_relative_error"].as_f64().unwrap();
    assert!((mean_re - re_sum / 5.0).abs() < 1e-12);
}

#[test]
fn gen_writes_complete_and_empty_graphs() {
    let dir = tempfile::tempdir().unwrap();
    for (er_arg, edges) in [("5,1.0", 10), ("5,0.0", 0)] {
        let path = dir.path().join("g.txt");
        let o = bin(&["gen", "--er", er_arg, "--out", p(&path)]);
        assert_eq!(o.status.code(), Some(0));
        let g = load_edge_list(&path).unwrap();
        assert_eq!((g.n(), g.edge_count()), (5, edges));
    }
}

#[test]
fn gen_roundtrips_through_the_loader() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    assert_eq!(bin(&["gen", "--er", "500,0.01", "--seed", "9", "--out", p(&path)]).status.code(), Some(0));
    let expected = ldp_subgraph::graph::generate_er(
        500,
        0.01,
        &mut RandomSource::new(9).trial(0).stream(Role::Generation, 0),
    )
    .unwrap();
    assert_eq!(load_edge_list(&path).unwrap(), expected);
}

#[test]
fn file_and_generated_sources_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    bin(&["gen", "--er", "200,0.05", "--seed", "4", "--out", p(&path)]);
    let run = |source: &[&str], name: &str| {
        let prefix = dir.path().join(name);
        let mut args = vec!["run", "--algo", "local-lap-kstar", "--trials", "5", "--seed", "4", "--out", p(&prefix)];
        args.extend_from_slice(source);
        assert_eq!(bin(&args).status.code(), Some(0));
        std::fs::read(dir.path().join(format!("{name}.csv"))).unwrap()
    };
    assert_eq!(run(&["--input", p(&path)], "file"), run(&["--er", "200,0.05"], "er"));
}

#[test]
fn stats_reports_exact_counts() {
    let dir = tempfile::tempdir().unwrap();
    let k3 = dir.path().join("k3.txt");
    write(&k3, "0 1\n1 2\n0 2\n");
    let o = stdout(&bin(&["stats", "--input", p(&k3)]));
    assert!(o.contains("triangles        1\n") && o.contains("2-stars          3\n"), "{o}");
    assert!(o.contains("clustering       1\n"));

    let k4 = dir.path().join("k4.txt");
    let g = Graph::complete(4);
    let mut text = String::new();
    for (u, v) in g.edges() {
        text.push_str(&format!("{u}\t{v}\n"));
    }
    write(&k4, &text);
    let o = stdout(&bin(&["stats", "--input", p(&k4), "--k", "3"]));
    assert!(o.contains("triangles        4\n") && o.contains("2-stars          12\n"), "{o}");
    assert!(o.contains("3-stars          4\n") && o.contains("clustering       1\n"), "{o}");

    // Five disjoint triangles, a two-edge tail on node 0 and a pendant on
    // node 3: 5 triangles, 15 + 3 + 2 = 20 two-stars.
    let fig = dir.path().join("fig.txt");
    let mut text = String::new();
    for t in 0..5 {
        let b = 3 * t;
        text.push_str(&format!("{b} {}\n{} {}\n{b} {}\n", b + 1, b + 1, b + 2, b + 2));
    }
    text.push_str("0 15\n15 16\n3 17\n");
    write(&fig, &text);
    let o = stdout(&bin(&["stats", "--input", p(&fig)]));
    assert!(o.contains("triangles        5\n") && o.contains("2-stars          20\n"), "{o}");
    assert!(o.contains("clustering       0.75\n"), "{o}");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let usage = |args: &[&str]| assert_eq!(bin(args).status.code(), Some(2), "{args:?}");
    usage(&[]);
    usage(&["run", "--algo", "nope", "--er", "10,0.5", "--out", p(&out)]);
    usage(&["run", "--algo", "local-lap-kstar", "--out", p(&out)]);
    usage(&["run", "--algo", "local-lap-kstar", "--er", "10,0.5", "--input", "x", "--out", p(&out)]);
    usage(&["run", "--algo", "local-lap-kstar", "--er", "10,1.5", "--out", p(&out)]);
    usage(&["run", "--algo", "local-lap-kstar", "--er", "10,0.5", "--split", "0.1,0.45,0.45", "--out", p(&out)]);
    usage(&["run", "--algo", "local-rr-tri", "--er", "10,0.5", "--dmax", "private", "--out", p(&out)]);
    usage(&["run", "--algo", "local-lap-kstar", "--er", "10,0.5", "--eps", "0", "--out", p(&out)]);
    usage(&["run", "--algo", "local-lap-kstar", "--er", "10,0.5", "--dmax", "lots", "--out", p(&out)]);
    usage(&["run", "--algo", "local-lap-kstar", "--er", "10,0.5", "--tight-round2-noise", "--out", p(&out)]);
    usage(&["gen", "--er", "10", "--out", p(&out)]);

    let io = |args: &[&str]| assert_eq!(bin(args).status.code(), Some(1), "{args:?}");
    let missing = dir.path().join("missing.txt");
    io(&["stats", "--input", p(&missing)]);
    io(&["run", "--algo", "local-lap-kstar", "--input", p(&missing), "--out", p(&out)]);
    let bad = dir.path().join("bad.txt");
    write(&bad, "0 1\n1 two\n");
    io(&["stats", "--input", p(&bad)]);
    let blocker = dir.path().join("file");
    write(&blocker, "");
    let unwritable = blocker.join("sub/prefix");
    io(&["run", "--algo", "local-lap-kstar", "--er", "10,0.5", "--trials", "1", "--out", p(&unwritable)]);
    io(&["gen", "--er", "10,0.5", "--out", p(&blocker.join("g.txt"))]);
    assert_eq!(bin(&["--help"]).status.code(), Some(0));
}
