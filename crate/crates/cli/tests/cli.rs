use std::path::PathBuf;
use std::process::{Command, Output};

fn corpus(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus");
    dir.join(format!("{name}.span"))
        .to_string_lossy()
        .into_owned()
}

fn zigzag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zigzag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn enumerate_circle() {
    let out = zigzag(&[
        "enumerate",
        &corpus("circle"),
        "--endpoint",
        "a",
        "--max-len",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "refl\n>s <t\n>t <s\n>s <t >s <t\n>t <s >t <s\n"
    );
}

#[test]
fn stages_circle_row() {
    let out = zigzag(&["stages", &corpus("circle"), "--up-to", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = text.lines().find(|l| l.starts_with("n=2 ")).unwrap();
    assert!(row.contains("|P_A(a)|=5"), "{row}");
    assert!(row.contains("|P_B(b)|=4"), "{row}");
    assert!(row.contains("cycles=0"), "{row}");
    assert!(row.contains("bijection=ok"), "{row}");
}

#[test]
fn reduce_interval() {
    let out = zigzag(&["reduce", &corpus("interval"), "--word", ">s <s"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "refl\n");
}

#[test]
fn info_reports_rank() {
    for (name, rank) in [("circle", 1), ("interval", 0), ("theta", 2), ("tree4", 0)] {
        let out = zigzag(&["info", &corpus(name)]);
        assert_eq!(out.status.code(), Some(0));
        assert!(
            stdout(&out).contains(&format!("pi1_rank={rank}\n")),
            "{name}"
        );
    }
    let out = zigzag(&["info", &corpus("coproduct")]);
    assert!(stdout(&out).contains("component 1:"));
}

#[test]
fn limit_of_interval_is_a_point() {
    for endpoint in ["a", "b"] {
        let out = zigzag(&[
            "limit",
            &corpus("interval"),
            "--up-to",
            "5",
            "--endpoint",
            endpoint,
        ]);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).starts_with("classes=1\n"), "{endpoint}");
    }
}

#[test]
fn check_passes_on_corpus() {
    for name in ["circle", "interval", "theta", "tree4", "coproduct"] {
        let out = zigzag(&["check", &corpus(name), "--oracle", "--seed", "7"]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", stdout(&out));
        assert!(!stdout(&out).contains("FAIL"));
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--json", "check", &corpus("circle"), "--seed", "3"];
    let first = zigzag(&args);
    let second = zigzag(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn json_schema() {
    let out = zigzag(&["--json", "stages", &corpus("circle"), "--up-to", "1"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["command"], "stages");
    assert_eq!(v["rows"][1]["fibers"][0]["size"], 3);
    assert_eq!(v["rows"][1]["bijection"], true);

    let out = zigzag(&["--json", "check", &corpus("interval")]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
    assert!(v["results"].as_array().unwrap().len() >= 10);

    let out = zigzag(&[
        "--json",
        "enumerate",
        &corpus("circle"),
        "--endpoint",
        "b",
        "--max-len",
        "1",
    ]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["words"], serde_json::json!([">s", ">t"]));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(
        zigzag(&["stages", &corpus("circle")]).status.code(),
        Some(2)
    );
    assert_eq!(zigzag(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        zigzag(&[
            "enumerate",
            &corpus("circle"),
            "--endpoint",
            "nope",
            "--max-len",
            "2"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        zigzag(&["reduce", &corpus("circle"), "--word", ">s >t"])
            .status
            .code(),
        Some(2)
    );

    let bad = std::env::temp_dir().join("zigzag-cli-bad.span");
    std::fs::write(&bad, "A a\nB b\nS s a c\nbase a\n").unwrap();
    let out = zigzag(&["info", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    assert_eq!(
        zigzag(&["info", "/nonexistent.span"]).status.code(),
        Some(2)
    );
}
