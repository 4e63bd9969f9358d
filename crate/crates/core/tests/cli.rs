use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_triadic-net"));
    c.env_remove("TRIADIC_NET_LOG_LEVEL");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn simulate(dir: &Path, out: &str, n_final: &str, seed: &str) {
    let o = run_in(
        dir,
        &[
            "simulate",
            "--n-final",
            n_final,
            "--seed",
            seed,
            "--out-dir",
            out,
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn one_tick_simulation() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_in(
        dir.path(),
        &[
            "simulate",
            "--n-final",
            "101",
            "--n0",
            "100",
            "--out-dir",
            "out",
            "--snapshot",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let log = std::fs::read_to_string(dir.path().join("out/log.csv")).unwrap();
    assert!(log.starts_with("#v1 t,kind,arg1,arg2 directed=0\n"));
    let last = log.lines().last().unwrap();
    assert!(last.starts_with("1,"));
    let ticks = std::fs::read_to_string(dir.path().join("out/ticks.csv")).unwrap();
    assert_eq!(ticks.lines().count(), 2);
    let snapshot = std::fs::read_to_string(dir.path().join("out/snapshot.csv")).unwrap();
    assert_eq!(
        snapshot.lines().filter(|l| l.starts_with("user,")).count(),
        101
    );
    let run = read_json(&dir.path().join("out/run.json"));
    assert_eq!(run["params"]["n0"], 100);
    assert_eq!(run["params"]["mu"], 0.5);
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "a", "400", "9");
    simulate(dir.path(), "b", "400", "9");
    simulate(dir.path(), "c", "400", "10");
    let read = |p: &str| std::fs::read(dir.path().join(p)).unwrap();
    assert_eq!(read("a/log.csv"), read("b/log.csv"));
    assert_eq!(read("a/ticks.csv"), read("b/ticks.csv"));
    assert_ne!(read("a/log.csv"), read("c/log.csv"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.toml"),
        "seed = 4\nout_dir = \"from-config\"\n[model]\nn_final = 60\nm = 3\n",
    )
    .unwrap();
    let o = run_in(
        dir.path(),
        &["--config", "run.toml", "simulate", "--m", "2"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let run = read_json(&dir.path().join("from-config/run.json"));
    assert_eq!(run["params"]["seed"], 4);
    assert_eq!(run["params"]["n_final"], 60);
    assert_eq!(run["params"]["m"], 2);
    let o = run_in(
        dir.path(),
        &[
            "--config",
            "run.toml",
            "simulate",
            "--seed",
            "5",
            "--out-dir",
            "flags",
        ],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(
        read_json(&dir.path().join("flags/run.json"))["params"]["seed"],
        5
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // invalid parameters
    assert_eq!(
        code(&run_in(
            dir.path(),
            &["simulate", "--n0", "1", "--n-final", "5"]
        )),
        2
    );
    assert_eq!(
        code(&run_in(
            dir.path(),
            &["simulate", "--theta-min", "9", "--theta-max", "1"]
        )),
        2
    );
    // unknown config key
    std::fs::write(dir.path().join("bad.toml"), "[model]\nlambda = 3\n").unwrap();
    assert_eq!(
        code(&run_in(dir.path(), &["--config", "bad.toml", "simulate"])),
        2
    );
    // unknown measurement and usage errors
    assert_eq!(
        code(&run_in(
            dir.path(),
            &["analyze", "--log", "x.csv", "--measure", "pa:zz:kf"]
        )),
        2
    );
    assert_eq!(code(&run_in(dir.path(), &["frobnicate"])), 2);
    // missing files
    assert_eq!(
        code(&run_in(
            dir.path(),
            &["analyze", "--log", "missing.csv", "--measure", "nn"]
        )),
        3
    );
    assert_eq!(
        code(&run_in(
            dir.path(),
            &["--config", "missing.toml", "simulate"]
        )),
        3
    );
    std::fs::write(dir.path().join("blocker"), "").unwrap();
    let o = run_in(
        dir.path(),
        &["simulate", "--n-final", "20", "--out-dir", "blocker/sub"],
    );
    assert_eq!(code(&o), 3);
}

#[test]
fn analyze_empty_log_fails() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("empty.csv"),
        "#v1 t,kind,arg1,arg2 directed=0\n",
    )
    .unwrap();
    let o = run_in(
        dir.path(),
        &[
            "analyze",
            "--log",
            "empty.csv",
            "--measure",
            "pa:kf:kf",
            "--out-dir",
            "out",
        ],
    );
    assert_eq!(code(&o), 1);
    let s = read_json(&dir.path().join("out/summary.json"));
    assert_eq!(s["format"], "#v1");
    assert_eq!(s["measurements"][0]["ok"], false);
    assert!(s["measurements"][0]["error"]
        .as_str()
        .unwrap()
        .contains("no links"));
}

#[test]
fn analyze_writes_curves_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "sim", "1500", "2");
    let mut args = vec![
        "analyze",
        "--log",
        "sim/log.csv",
        "--out-dir",
        "a",
        "--dt",
        "20",
    ];
    for m in ["pa:kf:kf", "pa:kf:ks", "pa:ks:kf", "pa:ks:ks", "pa:kp:kp"] {
        args.extend(["--measure", m]);
    }
    let o = run_in(dir.path(), &args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let csvs: Vec<_> = std::fs::read_dir(dir.path().join("a"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    assert_eq!(csvs.len(), 5, "{csvs:?}");
    let s = read_json(&dir.path().join("a/summary.json"));
    let ms = s["measurements"].as_array().unwrap();
    assert_eq!(ms.len(), 5);
    for m in ms {
        assert_eq!(m["ok"], true);
        assert_eq!(m["result"]["windows"], 20);
        assert!(m["result"]["alpha_triadic"].is_f64());
    }
    let curve = std::fs::read_to_string(dir.path().join("a/pa_kf_kf.csv")).unwrap();
    assert!(curve.starts_with("#v1 x,c,a_triadic,a_nontriadic,pi,"));
}

#[test]
fn analysis_is_independent_of_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "sim", "800", "6");
    let measures = [
        "growth:kf",
        "growth:ks",
        "dist:ks",
        "dist:kf",
        "pcc:ks:kf",
        "nn",
        "influence:exposure",
        "triadic",
    ];
    let mut outs = Vec::new();
    for threads in ["1", "4"] {
        let out = format!("t{threads}");
        let mut args = vec![
            "analyze",
            "--log",
            "sim/log.csv",
            "--threads",
            threads,
            "--out-dir",
            &out,
        ];
        for m in &measures {
            args.extend(["--measure", m]);
        }
        let o = run_in(dir.path(), &args);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
        outs.push(read_json(&dir.path().join(&out).join("summary.json")));
    }
    assert_eq!(outs[0]["measurements"], outs[1]["measurements"]);
    let tri = &outs[0]["measurements"][7]["result"];
    assert_eq!(tri["social_fraction"], 1.0);
}

#[test]
fn ingest_command() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("s.csv"), "a,b,1\nb,c,2\nc,a,3\nd,a,3\n").unwrap();
    std::fs::write(dir.path().join("c.csv"), "a,x,1\nb,x,2\nc,y,2\n").unwrap();
    let o = run_in(
        dir.path(),
        &[
            "ingest",
            "--social",
            "s.csv",
            "--cross",
            "c.csv",
            "--out-dir",
            "out",
        ],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let log = std::fs::read_to_string(dir.path().join("out/log.csv")).unwrap();
    assert!(log.starts_with("#v1 t,kind,arg1,arg2 directed=1\n"));
    let report = read_json(&dir.path().join("out/ingest.json"));
    assert_eq!(report["filtered_users"], 1);
    assert_eq!(report["total_lines"], 7);
    let ids = std::fs::read_to_string(dir.path().join("out/ids.csv")).unwrap();
    assert!(ids.contains("user,0,a\n"));
    let o = run_in(
        dir.path(),
        &[
            "analyze",
            "--log",
            "out/log.csv",
            "--measure",
            "triadic",
            "--out-dir",
            "out",
        ],
    );
    assert_eq!(code(&o), 0);
}

#[test]
fn reproduce_scores_a_given_log() {
    let dir = tempfile::tempdir().unwrap();
    simulate(dir.path(), "sim", "2000", "3");
    let o = run_in(
        dir.path(),
        &[
            "reproduce",
            "fig5",
            "--log",
            "sim/log.csv",
            "--n-final",
            "2000",
            "--out-dir",
            "r",
        ],
    );
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!([0, 1].contains(&code(&o)));
    assert!(
        stdout
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .count()
            == 2,
        "{stdout}"
    );
    let s = read_json(&dir.path().join("r/fig5.json"));
    assert_eq!(s["target"], "fig5");
    assert_eq!(s["checks"].as_array().unwrap().len(), 2);
    assert!(dir.path().join("r/nn_user.csv").exists());

    let o = run_in(
        dir.path(),
        &[
            "reproduce",
            "table2",
            "--log",
            "sim/log.csv",
            "--n-final",
            "2000",
            "--constant-theta",
            "--out-dir",
            "r",
        ],
    );
    assert!([0, 1].contains(&code(&o)));
    let s = read_json(&dir.path().join("r/table2.json"));
    assert_eq!(s["constant_theta"], true);
    assert_eq!(s["measurements"].as_array().unwrap().len(), 3);
}
