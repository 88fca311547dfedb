use std::path::PathBuf;
use std::process::{Command, Output};

fn horo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horo")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("horo-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_is_deterministic() {
    let a = horo(&["verify"]);
    let b = horo(&["verify"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["pass"], true);
}

#[test]
fn failing_table_exits_one() {
    let table = scratch("failing.toml");
    std::fs::write(
        &table,
        "[[fixture]]\nname = \"z\"\nprovenance = \"trivial\"\ngroup = \"Z\"\nradius = 4\nhorizon = 16\n\
         [fixture.expect]\nboundary = 3\n",
    )
    .unwrap();
    let o = horo(&["verify", "--table", table.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["fixtures"][0]["boundary_count"], 2);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(horo(&["--group", "Q8x", "boundary"]).status.code(), Some(2));
    assert_eq!(horo(&["--radius", "4", "--horizon", "5", "boundary"]).status.code(), Some(2));
    let table = scratch("broken.toml");
    std::fs::write(&table, "[[fixture]]\nname = 3\n").unwrap();
    assert_eq!(horo(&["verify", "--table", table.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn element_cap_exits_three() {
    let o = horo(&["--group", "F2", "--cap", "10", "boundary"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn boundary_json_and_csv() {
    let o = horo(&["--group", "Z", "--radius", "3", "boundary"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["boundary"]["count"], 2);

    let o = horo(&["--group", "Z", "--radius", "3", "--format", "csv", "boundary"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = csv::Reader::from_reader(text.as_bytes());
    assert!(rows.records().count() >= 2, "{text}");
}

#[test]
fn output_file() {
    let out = scratch("ball.json");
    let o = horo(&["--group", "Z^2", "--radius", "3", "--out", out.to_str().unwrap(), "ball"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert!(v.is_object());
}

#[test]
fn character_and_orbits() {
    let o = horo(&["--group", "Dinf", "--radius", "4", "character"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"ab\""));
    let o = horo(&["--group", "Z", "--gen", "aa", "--radius", "4", "orbits"]);
    assert!(o.status.success());
}

#[test]
fn grove_and_graph_boundary() {
    let edges = scratch("grove.txt");
    let o = horo(&["--radius", "3", "grove", "--blocks", "24", "--edges", edges.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let grove: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let o = horo(&["--radius", "3", "graph-boundary", edges.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let file: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(grove["boundary"]["functions"], file["boundary"]["functions"]);
    assert_eq!(grove["boundary"]["functions"].as_array().unwrap().len(), 1);
}
