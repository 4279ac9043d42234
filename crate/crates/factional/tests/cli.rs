use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn factional(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_factional")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn analyze_motivating_example() {
    let out = factional(&["analyze", "--prior", &data("motivating_prior.json"), "--degrees", &data("four_regular.txt")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout(&out), "state,X_exact,X_decimal\nA,2432/3125,0.77824\nB,113/3125,0.03616\n");
}

#[test]
fn analyze_json_carries_trace() {
    let out = factional(&[
        "--format", "json", "analyze", "--prior", &data("motivating_prior.json"), "--degrees", &data("four_regular.txt"),
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["rows"][0]["X_exact"], "2432/3125");
    assert_eq!(v["meta"]["trace"]["branch"], "first-only-gate-passed");
}

#[test]
fn config_supplies_options_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(
        dir.path(),
        "c.json",
        &serde_json::json!({"prior": data("motivating_prior.json"), "degrees": ["1000 x 1"]}).to_string(),
    );
    let config = config.display().to_string();
    let out = factional(&["--config", &config, "analyze"]);
    assert!(stdout(&out).contains("A,4/5,0.8"), "{}", stderr(&out));
    let out = factional(&["--config", &config, "analyze", "--degrees", &data("four_regular.txt")]);
    assert!(stdout(&out).contains("A,2432/3125"), "{}", stderr(&out));
}

#[test]
fn unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "c.json", r#"{"prior": "x.json", "cutof_c": 3}"#);
    let out = factional(&["--config", &config.display().to_string(), "analyze"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("`cutof_c`"), "{}", stderr(&out));
}

#[test]
fn malformed_degree_file_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let degrees = write(dir.path(), "d.txt", "4\n4\nfour\n");
    let out = factional(&["analyze", "--prior", &data("motivating_prior.json"), "--degrees", &degrees.display().to_string()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("d.txt:3"), "{}", stderr(&out));
}

#[test]
fn missing_file_exits_2() {
    let out = factional(&["analyze", "--prior", "/nonexistent/prior.json", "--degrees", &data("four_regular.txt")]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mislabeled_states_hint() {
    let dir = tempfile::tempdir().unwrap();
    let swapped = write(
        dir.path(),
        "p.json",
        r#"{"p": "2/5", "mu": "1/2", "states": {
            "B": {"prob": "1/2", "types": {"alpha": "0", "chi": "1/5", "nu": "4/5"}},
            "A": {"prob": "1/2", "types": {"alpha": "0", "chi": "4/5", "nu": "1/5"}}}}"#,
    );
    let swapped = swapped.display().to_string();
    let out = factional(&["analyze", "--prior", &swapped, "--degrees", &data("four_regular.txt")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("hint:"), "{}", stderr(&out));
    let out = factional(&["analyze", "--prior", &swapped, "--degrees", &data("four_regular.txt"), "--auto-relabel"]);
    assert_eq!(stdout(&out), "state,X_exact,X_decimal\nB,113/3125,0.03616\nA,2432/3125,0.77824\n");
}

#[test]
fn oracle_budget_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "g.txt", "0 1\n1 2\n2 0\n");
    let out = factional(&[
        "oracle", "--prior", &data("motivating_prior.json"), "--graph", &graph.display().to_string(), "--budget", "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn strict_null_exits_4() {
    // μ = 1/5 + 1/1200 sits between the two perturbed runs.
    let args = [
        "promise", "--prior", &data("motivating_prior.json"), "--mu", "241/1200", "--degrees", &data("four_regular.txt"),
        "--mu-star", "1/10",
    ];
    let out = factional(&args);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("1/10,0.1,Null"), "{}", stdout(&out));
    let mut strict = args.to_vec();
    strict.push("--strict");
    let out = factional(&strict);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("Null"));
}

#[test]
fn oracle_reduction_reports_clique() {
    let dir = tempfile::tempdir().unwrap();
    let graph = write(dir.path(), "k4.txt", "# n=4\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let out = factional(&["oracle", "--graph", &graph.display().to_string(), "--clique-reduce", "3"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["meta"]["supported"], "YES");
    assert_eq!(v["meta"]["clique_exists"], true);
}

#[test]
fn gen_round_trips_through_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let degrees = dir.path().join("ba.txt").display().to_string();
    let out = factional(&["--seed", "5", "--out", &degrees, "gen", "--family", "ba", "--n", "300", "--param", "2", "--emit", "degrees"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let out = factional(&["analyze", "--prior", &data("motivating_prior.json"), "--degrees", &degrees]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let direct = factional(&[
        "--seed", "5", "analyze", "--prior", &data("motivating_prior.json"), "--family", "ba", "--n", "300", "--param", "2",
    ]);
    assert_eq!(stdout(&out), stdout(&direct));
}

#[test]
fn sweep_is_deterministic_and_seed_sensitive() {
    let args = |seed: &'static str| {
        [
            "--seed", seed, "sweep", "--prior", &data("motivating_prior.json"), "--family", "er", "--from", "1/500", "--to",
            "1/100", "--step", "1/250", "--n", "200", "--trials", "10",
        ]
        .map(String::from)
    };
    let run = |seed| {
        let a = args(seed);
        factional(&a.iter().map(String::as_str).collect::<Vec<_>>())
    };
    let (a, b, c) = (run("1"), run("1"), run("2"));
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().count(), 4);
}

#[test]
fn sweep_generator_error_names_value() {
    let out = factional(&[
        "sweep", "--prior", &data("motivating_prior.json"), "--family", "er", "--from", "1/2", "--to", "2", "--step", "1/2",
        "--n", "20", "--trials", "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("at 3/2"), "{}", stderr(&out));
}

#[test]
fn epistemic_query_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(
        dir.path(),
        "m.json",
        r#"{"outcomes": ["w1", "w2"], "prob": {"w1": "1/2", "w2": "1/2"},
            "partitions": {"i": [["w1"], ["w2"]], "j": [["w1", "w2"]]}}"#,
    );
    let out = factional(&[
        "epistemic", "--model", &model.display().to_string(), "--p", "1", "--mu", "1/2", "--event", "w1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("outcome,fixpoint,search,coalition\n"));
    let out = factional(&["epistemic", "--verify-prop1", "--models", "50"]);
    assert!(stdout(&out).contains("coalition_vs_search"), "{}", stderr(&out));
}

#[test]
fn bounds_and_validate_run() {
    let out = factional(&["bounds", "--prior", &data("motivating_prior.json"), "--degrees", &data("four_regular.txt")]);
    assert!(stdout(&out).contains("markov_noncandidate[A],1386/3125"), "{}", stderr(&out));
    let out = factional(&[
        "validate", "--prior", &data("motivating_prior.json"), "--family", "torus", "--rows", "5", "--cols", "6", "--trials",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("expected_fraction,2432/3125"));
}
