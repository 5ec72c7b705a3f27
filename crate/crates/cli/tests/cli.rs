use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn raagkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raagkit"))
        .args(args)
        .env_remove("RAAGKIT_WORK_LIMIT")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_arg(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn classify_claw_reports_mutual_domination() {
    let o = raagkit(&["classify", &path_arg("claw.graph")]);
    assert!(stdout(&o).contains("not focused: mutual domination a↔b"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn classify_shape_4_7_7() {
    let o = raagkit(&["classify", &path_arg("focused_4_7_7.graph")]);
    assert!(stdout(&o).starts_with("focused: l=4 m=7 k=7 rank=13\n"));
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn classify_c5_reports_rotation() {
    let o = raagkit(&["classify", &path_arg("c5.graph"), "--require", "austere"]);
    assert!(stdout(&o).contains("not austere: automorphism (rotation)"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.graph");
    std::fs::write(&bad, "graph g\nvertex a\nedge a z\n").unwrap();
    let o = raagkit(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("error"));
    assert_eq!(raagkit(&["verify", "/nonexistent/file"]).status.code(), Some(2));
}

#[test]
fn normal_form_and_apply() {
    let o = raagkit(&["nf", &path_arg("ab.graph"), "a b a^-1"]);
    assert_eq!(stdout(&o), "b\n");
    let o = raagkit(&["apply", &path_arg("ab.graph"), "inv a; tv b a", "a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "a^-1 b^-1\n");
    let o = raagkit(&["nf", &path_arg("ab.graph"), "a q"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_passes_and_fault_is_named() {
    let o = raagkit(&["verify", &path_arg("focused_4_7_7.graph")]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("RANK 13 PASS"));
    assert!(text.contains("CBAR_WITNESS PASS"));
    assert!(text.ends_with("RESULT PASS\n"));

    let o = raagkit(&["verify", &path_arg("focused_4_7_7.graph"), "--inject-fault", "relation5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("RELATION 5 FAIL"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("RELATION 5"));
}

#[test]
fn verify_reports_are_reproducible() {
    let args = ["verify", &path_arg("focused_4_7_7.graph"), "--seed", "17"];
    let a = raagkit(&args);
    let b = raagkit(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# raagkit verify seed=17\n"));
}

#[test]
fn centralizer_of_the_block() {
    let o = raagkit(&["centralizer", "--l", "1", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("CENTRALIZER block l=1 bound=2 count=4\n"));
    let o = raagkit(&["centralizer", "--l", "1", "--m", "2", "--k", "3", "--bound", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("CENTRALIZER PASS"));
}

#[test]
fn centralizer_respects_work_limit() {
    let o = Command::new(env!("CARGO_BIN_EXE_raagkit"))
        .args(["centralizer", "--l", "2", "--m", "4", "--k", "3"])
        .env("RAAGKIT_WORK_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("work limit"));
}

#[test]
fn atlas_and_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("atlas.txt");
    let o = raagkit(&["atlas", "--max-n", "6", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("n=6 total=112"));
    let saved = std::fs::read_to_string(&out).unwrap();
    assert!(saved.starts_with("atlas v1 maxN=6\n"));
    let again = raagkit(&["atlas", "--max-n", "6"]);
    assert_eq!(stdout(&again), saved);

    let o = raagkit(&["report", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("TOTAL failed=0\n"));

    let o = raagkit(&["atlas", "--max-n", "9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn build_output_classifies_as_requested() {
    let dir = tempfile::tempdir().unwrap();
    let o = raagkit(&["build", "--l", "2", "--m", "3", "--trees", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let file = dir.path().join("built.graph");
    std::fs::write(&file, &o.stdout).unwrap();
    let o = raagkit(&["classify", file.to_str().unwrap(), "--require", "focused"]);
    assert!(stdout(&o).starts_with("focused: l=2 m=3 k=3 rank=5\n"));
    assert_eq!(o.status.code(), Some(0));
}
