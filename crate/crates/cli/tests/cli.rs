use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_bttp");

/// The n = 3 example schedule; y_j is team 3 + j.
const SAMPLE_N3: &str = r#"{"n":3,"days":[
  [{"home":3,"away":0},{"home":1,"away":5},{"home":2,"away":4}],
  [{"home":4,"away":0},{"home":3,"away":1},{"home":2,"away":5}],
  [{"home":5,"away":0},{"home":4,"away":1},{"home":3,"away":2}],
  [{"home":0,"away":3},{"home":5,"away":1},{"home":4,"away":2}],
  [{"home":0,"away":4},{"home":1,"away":3},{"home":5,"away":2}],
  [{"home":0,"away":5},{"home":1,"away":4},{"home":2,"away":3}]]}"#;

fn bttp(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn uniform_instance(n: usize) -> String {
    let size = 2 * n;
    let rows: Vec<String> = (0..size)
        .map(|a| {
            let cells: Vec<&str> = (0..size).map(|b| if a == b { "0" } else { "1" }).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!(r#"{{"name":"u{n}","n":{n},"matrix":[{}]}}"#, rows.join(","))
}

#[test]
fn sample_schedule_validates_and_renders() {
    let dir = tempfile::tempdir().unwrap();
    let s = write(dir.path(), "sample.json", SAMPLE_N3);
    let out = bttp(&["validate", "--schedule", &s]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).trim(), "feasible");

    let out = bttp(&["render", "--schedule", &s]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let x0 = text.lines().find(|l| l.starts_with("x0")).unwrap();
    let cells: Vec<&str> = x0.split('|').nth(1).unwrap().split_whitespace().collect();
    assert_eq!(cells, vec!["@y0", "@y1", "@y2", "y0", "y1", "y2"]);
}

#[test]
fn broken_schedule_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    // Day 1 repeats day 0's pairings with venues swapped.
    let text = SAMPLE_N3.replace(
        r#"[{"home":4,"away":0},{"home":3,"away":1},{"home":2,"away":5}]"#,
        r#"[{"home":0,"away":3},{"home":5,"away":1},{"home":4,"away":2}]"#,
    );
    let s = write(dir.path(), "bad.json", &text);
    let out = bttp(&["validate", "--schedule", &s]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).to_lowercase().contains("repeat"), "{}", stdout(&out));
}

#[test]
fn solve_writes_a_feasible_schedule() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("s.json");
    let out = bttp(&[
        "solve", "--instance", "nba32", "--variant", "path3", "--m", "5", "--d", "1", "--seed", "7",
        "--no-local-search", "--out", out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["variant"], "path3");
    assert_eq!(report["params"]["l"], 1);
    assert_eq!(report["seed"], 7);
    assert!(report["weight"].as_f64().unwrap() > 0.0);
    assert!(report["gap_vs_ilb"].as_f64().unwrap() > 0.0);

    let out = bttp(&["validate", "--schedule", out_path.to_str().unwrap(), "--instance", "nba32"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("feasible"));
    let weight = report["weight"].as_f64().unwrap();
    assert!(text.contains(&format!("{weight:.3}")));
}

#[test]
fn solve_is_deterministic_given_seed() {
    let run = || {
        let out = bttp(&["solve", "--instance", "nba32", "--variant", "cycle3", "--seed", "3", "--seeds", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let mut v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn infeasible_size_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "n14.json", &uniform_instance(14));
    let out = bttp(&["solve", "--instance", &inst]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no feasible (m, d)"));
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", "{\"name\": \"b\", \"n\": ");
    assert_eq!(bttp(&["solve", "--instance", &broken]).status.code(), Some(2));
    assert_eq!(bttp(&["bounds", "--instance", "/no/such/file"]).status.code(), Some(2));
    assert_eq!(bttp(&["solve", "--instance", "nba32", "--variant", "path4"]).status.code(), Some(2));
    assert_eq!(bttp(&["solve", "--instance", "nba32", "--m", "4", "--d", "1"]).status.code(), Some(2));
    assert_eq!(bttp(&["solve", "--instance", "nba32", "--m", "5"]).status.code(), Some(2));
    let asym = write(dir.path(), "asym.json", r#"{"name":"a","n":1,"matrix":[[0,1],[2,0]]}"#);
    let out = bttp(&["bounds", "--instance", &asym]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("symmetry"));
}

#[test]
fn bounds_and_instance_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nba.json");
    assert_eq!(bttp(&["nba32", "--out", path.to_str().unwrap()]).status.code(), Some(0));
    let out = bttp(&["bounds", "--instance", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let ilb = report["ilb_total"].as_f64().unwrap();
    assert!((ilb - 655477.159).abs() <= 0.003 * 655477.159, "{ilb}");
    assert_eq!(report["ilb_per_team"].as_array().unwrap().len(), 32);
    assert_eq!(report["best_lb"].as_f64().unwrap(), ilb);
}
