use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drawbench")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_perfect_exits_zero() {
    let o = run(&["eval", path(&fixture("blue_rectangle.actions.json")), path(&fixture("blue_rectangle.task.json"))]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert!(out.contains("Score: 1.00/1.00 - Excellent! Perfect score!"), "{out}");
    let json_end = out.find("\n\nScore:").unwrap();
    let report: serde_json::Value = serde_json::from_str(&out[..json_end]).unwrap();
    assert_eq!(report["score"], 1.0);
    assert!((report["stats"]["coverage"].as_f64().unwrap() - 0.085714).abs() < 1e-6);
}

#[test]
fn eval_wrong_tool_exits_one() {
    let o = run(&["eval", path(&fixture("blue_rectangle.actions.json")), path(&fixture("blue_circle.task.json"))]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("Required tool 'circle' was not used."), "{out}");
    let json_end = out.find("\n\nScore:").unwrap();
    let report: serde_json::Value = serde_json::from_str(&out[..json_end]).unwrap();
    let missing = report["missing_criteria"].as_array().unwrap();
    assert_eq!(missing.len(), 1);
    assert_eq!(missing[0]["id"], "required_tools");
    assert!(missing[0]["unmet"].as_str().unwrap().contains("circle"));
}

#[test]
fn eval_weighted_mode_and_dataset_task() {
    let seed = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/seed.tasks.json");
    let o = run(&[
        "eval",
        path(&fixture("blue_rectangle.actions.json")),
        path(&seed),
        "--task-id",
        "easy-red-circle",
        "--mode",
        "weighted",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    let report: serde_json::Value = serde_json::from_str(&out[..out.find("\n\nScore:").unwrap()]).unwrap();
    assert_eq!(report["mode"], "weighted");
    assert_eq!(report["score"], report["score_weighted"]);
    let o = run(&["eval", path(&fixture("blue_rectangle.actions.json")), path(&seed)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--task-id"));
}

#[test]
fn input_errors_exit_two() {
    let o = run(&["eval", "/nonexistent/a.json", path(&fixture("blue_rectangle.task.json"))]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error: cannot read"));
    let o = run(&[
        "eval",
        path(&fixture("blue_rectangle.actions.json")),
        path(&fixture("blue_rectangle.task.json")),
        "--bogus",
    ]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn garbage_actions_score_zero_not_crash() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("garbage.txt");
    std::fs::write(&p, "I would draw a rectangle here.").unwrap();
    let o = run(&["eval", path(&p), path(&fixture("blue_rectangle.task.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("SYNTAX_ERROR"));
}

#[test]
fn render_writes_one_rectangle() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("rect.svg");
    let o = run(&["render", path(&fixture("blue_rectangle.actions.json")), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("<rect class=\"shape\"").count(), 1, "{svg}");
    assert_eq!(svg.matches("<ellipse").count() + svg.matches("<polyline").count(), 0);
}

#[test]
fn bench_report_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.results.jsonl");
    let b = dir.path().join("b.results.jsonl");
    let o = run(&["bench", "--client", "mock", "--frozen-clock", "--out", path(&a)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let o = run(&["bench", "--client", "mock", "--config", path(&fixture("fast.run.toml")), "--out", path(&b)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text.lines().count(), 20);
    // The config sets temperature 0 and two jobs; neither changes mock output.
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());

    let o = run(&["report", path(&a)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let block = out.split("\n\n").find(|b| b.starts_with("Performance by Difficulty")).unwrap();
    let rows: Vec<&str> = block.lines().skip(3).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[3].starts_with("Very Hard"));

    let o = run(&["report", path(&a), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("table,row,column,value\n"));
}

#[test]
fn bench_config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jsonl");
    let o = run(&["bench", "--client", "nope:model", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["bench", "--client", "mock", "--jobs", "0", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_drawbench"))
        .args(["bench", "--client", "openai:gpt-test", "--out", path(&out)])
        .env_remove("DRAWBENCH_OPENAI_KEY")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("DRAWBENCH_OPENAI_KEY"));
}

#[test]
fn bench_against_unreachable_server_completes() {
    let port = std::net::TcpListener::bind("127.0.0.1:0").unwrap().local_addr().unwrap().port();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.jsonl");
    let tasks = dir.path().join("one.tasks.json");
    std::fs::write(
        &tasks,
        r#"{"schema_version": 1, "name": "one", "version": "0", "tasks": [
            {"id": "a", "text": "x", "category": "grid", "difficulty": "easy", "criteria": {"min_segments": 1}}]}"#,
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_drawbench"))
        .args(["bench", "--dataset", path(&tasks), "--client", "anthropic:m", "--out", path(&out)])
        .env("DRAWBENCH_ANTHROPIC_KEY", "k")
        .env("DRAWBENCH_ANTHROPIC_BASE_URL", format!("http://127.0.0.1:{port}"))
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1 failed"));
    let line = std::fs::read_to_string(&out).unwrap();
    let r: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!((r["failed"].as_bool(), r["turn1"]["attempts"].as_u64()), (Some(true), Some(3)));
}

#[test]
fn validate_dataset_statuses() {
    let seed = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/seed.tasks.json");
    let o = run(&["validate-dataset", path(&seed)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Very Hard"));
    assert_eq!(stdout(&o).matches("25.0%").count(), 4);
    let o = run(&["validate-dataset", path(&fixture("duplicate.tasks.json"))]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("task 'a': duplicate-id"));
    let o = run(&["validate-dataset", "/nonexistent.tasks.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn help_lists_every_flag() {
    let o = run(&["bench", "--help"]);
    assert_eq!(o.status.code(), Some(0));
    let h = stdout(&o);
    for flag in
        ["--dataset", "--client", "--config", "--out", "--jobs", "--mode", "--frozen-clock", "--lenient", "--layout"]
    {
        assert!(h.contains(flag), "{flag}");
    }
}
