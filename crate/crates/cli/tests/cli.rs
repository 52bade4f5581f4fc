use std::process::{Command, Output};

fn deligne(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deligne")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn table_one_as_json() {
    let out = deligne(&["tables", "--which", "1", "--format", "json"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema"], "deligne-report/1");
    assert_eq!(v["passed"], true);
    let rows = v["data"].as_array().unwrap();
    assert_eq!(rows.len(), 21);
    assert_eq!(
        (rows[20]["c"].as_str(), rows[20]["d"].as_u64(), rows[20]["ratio"].as_str()),
        (Some("49/5"), Some(3479), Some("354"))
    );
}

#[test]
fn g2_fixed_points_as_text() {
    let out = deligne(&["fixedpoint", "--type", "G2", "--order", "7"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1 + q^2 + q^3 + 2q^4 + 2q^5 + 5q^6 + O(q^7)"), "{text}");
}

#[test]
fn exhaustive_a1_traces() {
    let out = deligne(&["traces", "--type", "A1", "--exhaustive", "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["data"]["traces"]["order4_checked"], 81);
}

#[test]
fn failing_check_exits_nonzero_with_counterexample() {
    let out = deligne(&["census", "--type", "F4", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["passed"], false);
    assert!(v["first_failure"].as_str().unwrap().contains("(9, -1)"));
}

#[test]
fn invalid_flags_are_rejected() {
    assert_eq!(deligne(&["traces", "--type", "Z9"]).status.code(), Some(2));
    assert_eq!(deligne(&["tables", "--which", "7"]).status.code(), Some(2));
    assert_eq!(deligne(&["casimir", "--c", "1/0"]).status.code(), Some(2));
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("deligne-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("casimir.json");
    let args = ["casimir", "--c", "1/2", "--d", "3", "--format", "json"];
    let direct = deligne(&args);
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    assert!(deligne(&with_file).status.success());
    assert_eq!(std::fs::read(&path).unwrap(), direct.stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}
