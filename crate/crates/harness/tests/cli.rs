use std::process::Command;

fn maxwell() -> Command {
    Command::new(env!("CARGO_BIN_EXE_maxwell"))
}

#[test]
fn nonprop_writes_csv_and_json_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = maxwell()
        .args(["nonprop", "--dt", "0.5", "--summary", "json", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["passed"], true);
    assert_eq!(summary["study"], "nonprop");
    let csv = std::fs::read_to_string(dir.path().join("nonprop_errors_dt0.5.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "t,error_ifebm,error_2iebm,error_mebm,error_em");
    assert_eq!(lines.count(), 7);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let run = || {
        let dir = tempfile::tempdir().unwrap();
        let status = maxwell().args(["robustness", "--seed", "7", "--out"]).arg(dir.path()).status().unwrap();
        assert!(status.success());
        std::fs::read(dir.path().join("robustness.csv")).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn custom_keyframes_and_model_files_are_read() {
    let dir = tempfile::tempdir().unwrap();
    let frames = dir.path().join("frames.json");
    std::fs::write(
        &frames,
        r#"{"times": [0, 1], "frames": [[[1,0,0],[0,1,0],[0,0,1]], [[1.2,0.1,0],[0,1,0],[0,0,1]]]}"#,
    )
    .unwrap();
    let out = maxwell()
        .args(["nonprop", "--method", "2iebm", "--dt", "0.25", "--keyframes"])
        .arg(&frames)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));

    let model = dir.path().join("model.json");
    std::fs::write(&model, r#"{"equilibrium": {"c10": 0.2, "c01": 0.1, "k": "incompressible"}, "branches": []}"#).unwrap();
    let out = maxwell().args(["uniaxial", "--model"]).arg(&model).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn bad_input_exits_with_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("broken.json");
    std::fs::write(&model, r#"{"equilibrium": {"c10": -1, "c01": 0, "k": 1}}"#).unwrap();
    let out = maxwell().args(["uniaxial", "--model"]).arg(&model).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = maxwell().args(["nonprop", "--eta", "0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = maxwell().args(["nonprop", "--method", "rk4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    // the reference must be 100 times finer than the coarse run
    let out = maxwell().args(["convergence", "--dt", "0.5", "--reference-substeps", "100"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn tangent_reference_values_need_the_published_setting() {
    let out = maxwell().args(["tangent-sweep", "--method", "ifebm", "--c01", "0.5"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("no checks run"));
}

#[test]
fn bisection_disables_the_ordering_checks() {
    let out = maxwell().args(["nonprop", "--dt", "0.5"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("ordering not checked"));
}
