use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reducedpoly"))
        .args(args)
        .env_remove("REDUCEDPOLY_TOL")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn check_exit_codes() {
    assert_eq!(
        run(&["check", &path("reduced12.off")]).status.code(),
        Some(0)
    );
    assert_eq!(run(&["check", &path("cube.off")]).status.code(), Some(1));
    assert_eq!(run(&["check", "/no/such/file.off"]).status.code(), Some(2));
    let o = run(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_text_layout() {
    let o = run(&["check", &path("reduced12.off")]);
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "reduced: yes");
    assert!(lines[1].starts_with("omega = 0.99999999"));
    assert_eq!(lines[2], "marked 12 of 12 vertices");
    assert_eq!(
        lines[3],
        "vertex\tmarked\twitness\tdistance\trelint\tnear_miss"
    );
    assert_eq!(lines.len(), 16);
}

#[test]
fn width_json() {
    let o = run(&["width", &path("tetra.off"), "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "width");
    assert_eq!(v["inputs"]["tolerance"], 1e-9);
    assert_eq!(v["inputs"]["sha256"].as_str().unwrap().len(), 64);
    let w = v["outputs"]["omega"].as_f64().unwrap();
    assert!((w - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["outputs"]["attaining_pairs"].as_array().unwrap().len(), 3);
}

#[test]
fn width_text() {
    let text = stdout(&run(&["width", &path("cube.off")]));
    assert!(text.starts_with("omega = 1\nattaining pairs: 3\n"));
}

#[test]
fn antipodal_counts() {
    let text = stdout(&run(&["antipodal", &path("cube.off")]));
    assert!(text.starts_with("strictly antipodal pairs: 13\n"));
    assert_eq!(text.lines().count(), 14);
}

#[test]
fn certify_reduced12_and_cube() {
    for name in ["reduced12.off", "cube.off"] {
        let o = run(&["certify", &path(name)]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), "none found\n");
        let j = run(&["certify", &path(name), "--json"]);
        let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
        assert_eq!(v["outputs"]["certificate_found"], false);
    }
}

#[test]
fn tolerance_from_env_and_flag() {
    let with_env = Command::new(env!("CARGO_BIN_EXE_reducedpoly"))
        .args(["width", &path("cube.off"), "--json"])
        .env("REDUCEDPOLY_TOL", "1e-6")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_slice(&with_env.stdout).unwrap();
    assert_eq!(v["inputs"]["tolerance"], 1e-6);
    let flag = run(&["--tol", "1e-7", "width", &path("cube.off"), "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&flag.stdout).unwrap();
    assert_eq!(v["inputs"]["tolerance"], 1e-7);
}

#[test]
fn output_is_deterministic() {
    for cmd in ["width", "check", "antipodal", "certify"] {
        let a = run(&[cmd, &path("reduced12.off"), "--json"]);
        let b = run(&[cmd, &path("reduced12.off"), "--json"]);
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
}

#[test]
fn construct_writes_off_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let off = dir.path().join("p.off");
    let o = run(&[
        "construct",
        "--d1",
        "1.1",
        "--d2",
        "1.003",
        "--d3",
        "1.004",
        "-o",
        off.to_str().unwrap(),
        "--trace",
    ]);
    assert!(o.status.success());
    assert_eq!(String::from_utf8(o.stderr).unwrap().lines().count(), 5);
    let text = std::fs::read_to_string(&off).unwrap();
    assert_eq!(
        text,
        std::fs::read_to_string(fixture("reduced12.off")).unwrap()
    );
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(off.with_extension("json")).unwrap())
            .unwrap();
    assert_eq!(report["command"], "construct");
    assert_eq!(report["outputs"]["reduced"], true);
    assert_eq!(report["outputs"]["params"]["t"], 0.55);
    assert_eq!(
        report["outputs"]["trace"]["residual_norms"]
            .as_array()
            .unwrap()
            .len(),
        5
    );

    let stdout_off = run(&["construct", "--d1", "1.1", "--d2", "1.003", "--d3", "1.004"]);
    assert_eq!(String::from_utf8(stdout_off.stdout).unwrap(), text);
}

#[test]
fn construct_failures_exit_2() {
    let below_one = run(&["construct", "--d1", "0.9", "--d2", "1", "--d3", "1"]);
    assert_eq!(below_one.status.code(), Some(2));
    let far = run(&[
        "construct",
        "--d1",
        "1.1",
        "--d2",
        "1.003",
        "--d3",
        "1.004",
        "--init",
        "10,10,10,10",
    ]);
    assert_eq!(far.status.code(), Some(2));
    assert!(String::from_utf8(far.stderr)
        .unwrap()
        .contains("outside the admissible region"));
    assert_eq!(
        run(&[
            "construct",
            "--d1",
            "1.1",
            "--d2",
            "1",
            "--d3",
            "1",
            "--init",
            "1,2"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn sweep_single_cell() {
    let o = run(&["sweep", "--d1", "1.1", "--d2", "1.003", "--d3", "1.004"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["outputs"]["sweep"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["reduced"], true);
    let grid = run(&[
        "sweep",
        "--d1",
        "1.09:1.11:3",
        "--d2",
        "1.003",
        "--d3",
        "1.004",
        "--cold",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&grid.stdout).unwrap();
    assert_eq!(v["outputs"]["sweep"].as_array().unwrap().len(), 3);
    assert_eq!(
        run(&["sweep", "--d1", "1:2", "--d2", "1", "--d3", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn report_keys_are_in_schema() {
    let schema: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(
            PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/report-schema.json"),
        )
        .unwrap(),
    )
    .unwrap();
    let props = |section: &str| {
        schema["properties"][section]["properties"]
            .as_object()
            .unwrap()
            .clone()
    };
    let (inputs, outputs) = (props("inputs"), props("outputs"));
    let mut reports: Vec<serde_json::Value> = ["width", "check", "certify", "antipodal"]
        .iter()
        .map(|c| {
            serde_json::from_slice(&run(&[c, &path("reduced12.off"), "--json"]).stdout).unwrap()
        })
        .collect();
    reports.push(
        serde_json::from_str(&std::fs::read_to_string(fixture("reduced12.json")).unwrap()).unwrap(),
    );
    for r in &reports {
        for k in r["inputs"].as_object().unwrap().keys() {
            assert!(inputs.contains_key(k), "{k}");
        }
        for k in r["outputs"].as_object().unwrap().keys() {
            assert!(outputs.contains_key(k), "{k}");
        }
    }
}
