use std::path::Path;
use std::process::{Command, Output};

use congest_core::graph::{cycle, write_graph};

fn congest(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_congest"))
        .args(args)
        .current_dir(dir)
        .env_remove("CONGEST_WORKERS")
        .output()
        .expect("spawn congest")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn generate_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for args in [
        &["generate", "mvc-exact", "--k", "2", "--l", "2", "--seed", "3", "--out", "a.pg"][..],
        &["generate", "mds-exact", "--k", "2", "--l", "2", "--x", "0", "--y", "f", "--out", "b.pg"],
        &["generate", "maxm-lb", "--n", "28", "--eps", "1/2", "--randomize", "4", "--out", "c.pg"],
        &["generate", "maxis-base", "--t", "3", "--eps", "1/3", "--out", "d.pg"],
    ] {
        let o = congest(d, args);
        assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    }
    assert!(d.join("a.json").exists());
    let o = congest(d, &["verify", "a.pg", "b.pg", "c.pg", "d.pg"]);
    assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("pass")).count(), 4);
}

#[test]
fn bad_parameters_carry_a_hint() {
    let dir = tempfile::tempdir().unwrap();
    let o = congest(dir.path(), &["generate", "mvc-exact", "--k", "3", "--l", "2", "--seed", "1", "--out", "x.pg"]);
    assert!(!o.status.success());
    let err = stderr(&o);
    assert!(err.contains("k must be a power of 2") && err.contains("needs --k"), "{err}");
    let o = congest(dir.path(), &["generate", "mvc-base", "--t", "8", "--out", "x.pg"]);
    assert!(!o.status.success() && stderr(&o).contains("--c"), "{}", stderr(&o));
}

#[test]
fn corrupted_sidecar_fails_with_a_diff() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(congest(d, &["generate", "mvc-exact", "--k", "2", "--l", "2", "--x", "6", "--y", "5", "--out", "a.pg"])
        .status
        .success());
    let side = d.join("a.json");
    let text = std::fs::read_to_string(&side).unwrap();
    std::fs::write(&side, text.replace("\"x\": \"6\"", "\"x\": \"9\"")).unwrap();
    let o = congest(d, &["verify", "a.pg"]);
    assert!(!o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("fail") && out.contains("not in rebuild"), "{out}");

    std::fs::write(&side, text.replace("\"value\": 8", "\"value\": 5")).unwrap();
    let out = stdout(&congest(d, &["verify", "a.pg"]));
    assert!(out.contains("stored mvc = 5"), "{out}");
}

#[test]
fn size_guard_refusal_is_fatal_only_when_strict() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(congest(d, &["generate", "mds-fixed", "--n", "6", "--out", "m.pg"]).status.success());
    let o = congest(d, &["verify", "m.pg"]);
    assert!(o.status.success() && stdout(&o).starts_with("refused"));
    assert!(!congest(d, &["verify", "--strict", "m.pg"]).status.success());
    assert!(congest(d, &["verify", "--strict", "--guard-mds", "40", "m.pg"]).status.success());
}

#[test]
fn run_and_scaling_report() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = congest(
        d,
        &[
            "run",
            "--algorithm",
            "propose-matching",
            "--generator",
            "mobius",
            "--n",
            "16,32,64",
            "--seeds",
            "1,2",
            "--oracle",
            "--output",
            "r.csv",
        ],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(d.join("r.csv")).unwrap();
    assert_eq!(csv.lines().count(), 7);
    assert!(csv.starts_with("name,seed,n,m,params,messages,bits,rounds,size,opt,ratio,valid,failed"));

    let o = congest(d, &["scaling-report", "r.csv", "--model", "n"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("exponent") && out.contains("\n16,") && out.contains("\n64,"), "{out}");

    let two = csv.lines().filter(|l| !l.contains(",64,")).collect::<Vec<_>>().join("\n");
    std::fs::write(d.join("two.csv"), two).unwrap();
    let o = congest(d, &["scaling-report", "two.csv"]);
    assert!(!o.status.success() && stderr(&o).contains("at least 3"));
}

#[test]
fn run_rejects_empty_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("s.toml"),
        "name = \"e\"\nalgorithm = \"greedy-mis\"\nseeds = []\n[generator]\nkind = \"cycle\"\nn = [8]\n",
    )
    .unwrap();
    let o = congest(d, &["run", "--spec", "s.toml"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("seed"), "{}", stderr(&o));
}

#[test]
fn config_file_defaults_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("cfg.toml"),
        "[run]\nalgorithm = \"greedy-mis\"\ngenerator = \"cycle\"\nn = [10, 12]\nseeds = [1, 2, 3]\n",
    )
    .unwrap();
    let rows = |o: &Output| stdout(o).lines().count() - 1;
    let o = congest(d, &["--config", "cfg.toml", "run"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(rows(&o), 6);
    let o = congest(d, &["--config", "cfg.toml", "run", "--seeds", "9"]);
    assert_eq!(rows(&o), 2);
    assert!(stdout(&o).lines().skip(1).all(|l| l.split(',').nth(1) == Some("9")));
}

#[test]
fn workers_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let args = [
        "run",
        "--algorithm",
        "ball-growing",
        "--param",
        "problem=mds",
        "--generator",
        "gnp",
        "--n",
        "24",
        "--p",
        "0.2",
        "--seeds",
        "1,2,3,4",
    ];
    let one = congest(d, &[&args[..], &["--workers", "1"]].concat());
    let four = congest(d, &[&args[..], &["--workers", "4"]].concat());
    assert!(one.status.success(), "{}", stderr(&one));
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn solve_prints_every_problem() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("c4.pg"), write_graph(&cycle(4))).unwrap();
    let o = congest(d, &["solve", "c4.pg"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for line in ["mvc 2", "mds 2", "maxis 2", "maxm 2"] {
        assert!(out.contains(line), "{out}");
    }
}
