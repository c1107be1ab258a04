use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn marvel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marvel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn generate_learn_check_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "g.edges");
    let pdag = path(dir.path(), "g.pdag");

    let o = marvel(&["generate", "--p", "25", "--delta-in", "3", "--seed", "4", "--out", &graph]);
    assert!(o.status.success(), "{o:?}");

    for algo in ["marvel", "pc"] {
        let o = marvel(&["learn", "--graph", &graph, "--oracle", "dsep", "--algo", algo, "--out", &pdag]);
        assert!(o.status.success(), "{o:?}");
        let out = stdout(&o);
        let mut lines = out.lines();
        assert!(lines.next().unwrap().starts_with("algo,seed,p,"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], algo);
        assert_eq!(row[12], "1.0000", "f1 with an exact oracle");

        let o = marvel(&["oracle-check", "--pdag", &pdag, "--truth", &graph]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).trim(), "equivalent: true");
    }
}

#[test]
fn learn_from_generated_data() {
    let dir = tempfile::tempdir().unwrap();
    let graph = path(dir.path(), "g.edges");
    let data = path(dir.path(), "d.csv");
    let pdag = path(dir.path(), "d.pdag");
    let o = marvel(&[
        "generate", "--generator", "erdos-renyi", "--p", "10", "--m", "12", "--seed", "2", "--out", &graph,
        "--n", "2000", "--data", &data,
    ]);
    assert!(o.status.success(), "{o:?}");
    assert_eq!(fs::read_to_string(&data).unwrap().lines().count(), 2000);

    let o = marvel(&["learn", "--data", &data, "--truth", &graph, "--alpha", "0.01", "--out", &pdag]);
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[5], "2000");
    let recall: f64 = row[11].parse().unwrap();
    assert!(recall > 0.5, "recall {recall}");
}

#[test]
fn bench_writes_reproducible_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "cfg.toml");
    fs::write(&cfg, "generator = \"fixed_indegree\"\np = 15\ndelta_in = 3\nseeds = [1, 2, 3]\n").unwrap();
    let a = path(dir.path(), "a.csv");
    let b = path(dir.path(), "b.csv");
    assert!(marvel(&["bench", &cfg, "--out", &a]).status.success());
    assert!(marvel(&["bench", &cfg, "--out", &b]).status.success());
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert_eq!(text.lines().count(), 5);

    let o = marvel(&["bench", &cfg, "--algo", "pc", "--seed", "9"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.lines().nth(1).unwrap().starts_with("pc,9,15,"));
}

#[test]
fn exit_codes() {
    assert_eq!(marvel(&["--help"]).status.code(), Some(0));
    assert_eq!(marvel(&["learn", "--bogus"]).status.code(), Some(1));
    assert_eq!(marvel(&[]).status.code(), Some(1));
    assert_eq!(marvel(&["learn", "--graph", "/nonexistent/g.edges"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let cfg = path(dir.path(), "bad.toml");
    fs::write(&cfg, "generator = \"fixed_indegree\"\np = 5\nseeds = [1]\n").unwrap();
    let o = marvel(&["bench", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("delta_in"));
}

#[test]
fn oracle_check_detects_difference() {
    let dir = tempfile::tempdir().unwrap();
    let truth = path(dir.path(), "t.edges");
    let pdag = path(dir.path(), "p.pdag");
    fs::write(&truth, "3\n0 2\n1 2\n").unwrap();
    fs::write(&pdag, "3\n0 2 u\n1 2 u\n").unwrap();
    let o = marvel(&["oracle-check", "--pdag", &pdag, "--truth", &truth]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "equivalent: false");
}
