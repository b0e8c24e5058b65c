use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use pfconflict_core::fixtures;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_pfconflict"));
    cmd.env_remove("PFCONFLICT_EPS");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

struct Files {
    dir: tempfile::TempDir,
}

impl Files {
    fn new() -> Self {
        let f = Files {
            dir: tempfile::tempdir().unwrap(),
        };
        f.write("system.csv", fixtures::REFERENCE_SYSTEM_CSV);
        f.write("system.json", fixtures::REFERENCE_SYSTEM_JSON);
        f.write("loss.json", fixtures::REFERENCE_LOSS_JSON);
        f.write("panel.json", fixtures::REFERENCE_PANEL_JSON);
        f
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p: PathBuf = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn path(&self, name: &str) -> String {
        self.dir.path().join(name).to_str().unwrap().to_string()
    }
}

#[test]
fn validate_reference_table() {
    let f = Files::new();
    let o = run(&["validate", "--system", &f.path("system.csv")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("6 agents, 5 issues, valid\n"), "{text}");
    assert!(text.contains("weights: 0.2000, 0.2000, 0.2000, 0.2000, 0.2000"));
    assert!(text.contains("uniform weights assumed"));

    let o = run(&["validate", "--system", &f.path("system.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("uniform weights assumed"));
}

#[test]
fn validate_names_the_bad_cell() {
    let f = Files::new();
    let bad = fixtures::REFERENCE_SYSTEM_CSV.replacen("x1,\"1.0,0.0\"", "x1,\"1.1,0.0\"", 1);
    assert_ne!(bad, fixtures::REFERENCE_SYSTEM_CSV);
    let p = f.write("bad.csv", &bad);
    let o = run(&["validate", "--system", &p]);
    assert_eq!(o.status.code(), Some(2));
    let text = stdout(&o);
    assert!(text.contains("row 1, column 1"), "{text}");
    assert!(text.contains("\"x1\""), "{text}");
}

#[test]
fn validate_rejects_garbage_and_missing_files() {
    let f = Files::new();
    let p = f.write("junk.csv", "agent,c1\nx1,\"0.2;0.3\"\n");
    assert_eq!(run(&["validate", "--system", &p]).status.code(), Some(2));
    assert_eq!(
        run(&["validate", "--system", &f.path("nope.csv")])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn explicit_weights_row_is_used() {
    let f = Files::new();
    let text =
        fixtures::REFERENCE_SYSTEM_CSV.replacen('\n', "\n!weights,0.4,0.15,0.15,0.15,0.15\n", 1);
    let p = f.write("weighted.csv", &text);
    let o = run(&["validate", "--system", &p]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("weights: 0.4000, 0.1500, 0.1500, 0.1500, 0.1500"));
    assert!(!stdout(&o).contains("uniform"));
}

#[test]
fn analyze_closeness_thresholds() {
    let f = Files::new();
    let o = run(&[
        "analyze",
        "--system",
        &f.path("system.csv"),
        "--regime",
        "closeness",
        "--alpha",
        "0.75",
        "--beta",
        "0.3",
        "--out",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let part = &doc["partition"];
    assert_eq!(part["regime"], "closeness");
    assert_eq!(part["positive"], serde_json::json!(["x1"]));
    assert_eq!(part["central"], serde_json::json!(["x2", "x4", "x5", "x6"]));
    assert_eq!(part["negative"], serde_json::json!(["x3"]));
    assert_eq!(part["unclassified"], serde_json::json!([]));
    assert_eq!(doc["aggregates"][0]["closeness"], 0.8368);
}

#[test]
fn analyze_quasi_order_thresholds() {
    let f = Files::new();
    let o = run(&[
        "analyze",
        "--system",
        &f.path("system.csv"),
        "--gamma-upper",
        "0.7,0.4",
        "--gamma-lower",
        "0.25,0.85",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("## partition (pfn)"));
    assert!(text.contains("| unclassified | x3 |"), "{text}");
}

#[test]
fn analyze_loss_with_score_rule() {
    let f = Files::new();
    let o = run(&[
        "analyze",
        "--system",
        &f.path("system.csv"),
        "--loss",
        &f.path("loss.json"),
        "--rule",
        "score",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let expected = "## score matrix\n\n\
        | agent | P | B | N |\n\
        |---|---|---|---|\n\
        | x1 | -0.1633 | 0.0779 | 0.6286 |\n\
        | x2 | 0.5031 | -0.0132 | 0.2172 |\n\
        | x3 | 0.6168 | -0.0442 | 0.0080 |\n\
        | x4 | 0.5480 | -0.0243 | 0.1471 |\n\
        | x5 | 0.5390 | -0.0219 | 0.1623 |\n\
        | x6 | 0.4476 | -0.0010 | 0.2885 |\n";
    assert!(text.contains(expected), "{text}");
    assert!(text.contains("| positive | x1 |"));
    assert!(text.contains("| central | x2 x3 x4 x5 x6 |"));
}

#[test]
fn analyze_panel_with_closeness_rule() {
    let f = Files::new();
    let o = run(&[
        "analyze",
        "--system",
        &f.path("system.csv"),
        "--panel",
        &f.path("panel.json"),
        "--rule",
        "closeness",
        "--out",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(
        text.contains("# group closeness matrix\nagent,P,B,N\n"),
        "{text}"
    );
    assert!(text.contains("negative,x3\n"), "{text}");
}

#[test]
fn analyze_pfn_matrix_layout() {
    let f = Files::new();
    let o = run(&[
        "analyze",
        "--system",
        &f.path("system.csv"),
        "--loss",
        &f.path("loss.json"),
        "--precision",
        "3",
    ]);
    let text = stdout(&o);
    assert!(text.contains("## expected loss matrix"));
    assert!(text.contains("| x1 | P(0.494,0.638) |"), "{text}");
    assert!(text.contains("| unclassified | x3 x4 |"));
}

#[test]
fn output_is_deterministic() {
    let f = Files::new();
    let args = [
        "analyze",
        "--system",
        &f.path("system.csv"),
        "--panel",
        &f.path("panel.json"),
        "--out",
        "json",
    ];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn configuration_errors_exit_3() {
    let f = Files::new();
    let sys = f.path("system.csv");
    let loss = f.path("loss.json");
    let cases: Vec<Vec<&str>> = vec![
        vec!["analyze", "--system", &sys],
        vec![
            "analyze", "--system", &sys, "--loss", &loss, "--alpha", "0.5", "--beta", "0.1",
        ],
        vec![
            "analyze", "--system", &sys, "--regime", "score", "--alpha", "0.2", "--beta", "0.5",
        ],
        vec![
            "analyze",
            "--system",
            &sys,
            "--regime",
            "closeness",
            "--alpha",
            "0.9",
            "--beta",
            "-0.1",
        ],
        vec![
            "analyze", "--system", &sys, "--regime", "score", "--alpha", "0.5",
        ],
        vec![
            "analyze",
            "--system",
            &sys,
            "--gamma-upper",
            "0.25,0.85",
            "--gamma-lower",
            "0.7,0.4",
        ],
        vec![
            "analyze",
            "--system",
            &sys,
            "--gamma-upper",
            "0.9,0.9",
            "--gamma-lower",
            "0.1,0.9",
        ],
        vec![
            "analyze",
            "--system",
            &sys,
            "--loss",
            &loss,
            "--precision",
            "0",
        ],
        vec![
            "analyze", "--system", &sys, "--loss", &loss, "--rule", "median",
        ],
    ];
    for args in cases {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(3), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn non_monotone_loss_is_a_configuration_error() {
    let f = Files::new();
    let broken = r#"{"pp":{"mu":0.9,"nu":0.1},"bp":{"mu":0.1,"nu":0.9},"np":{"mu":0.9,"nu":0.3},
        "pn":{"mu":0.9,"nu":0.2},"bn":{"mu":0.5,"nu":0.6},"nn":{"mu":0.2,"nu":0.8}}"#;
    let p = f.write("broken.json", broken);
    let o = run(&["analyze", "--system", &f.path("system.csv"), "--loss", &p]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn tolerance_from_environment() {
    let f = Files::new();
    let args = [
        "analyze",
        "--system",
        &f.path("system.csv"),
        "--loss",
        &f.path("loss.json"),
    ];
    // a loose tolerance makes x4's B and N losses comparable
    let o = bin()
        .args(args)
        .env("PFCONFLICT_EPS", "1e-3")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("| unclassified | x3 |"),
        "{}",
        stdout(&o)
    );
    let o = bin()
        .args(args)
        .env("PFCONFLICT_EPS", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reproduce_reports_every_check() {
    let o = run(&["reproduce"]);
    let text = stdout(&o);
    let lines: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
        .collect();
    assert_eq!(lines.len(), 18);
    // the only mismatch is the published x6 closeness value
    let failed: Vec<&&str> = lines.iter().filter(|l| l.starts_with("FAIL")).collect();
    assert_eq!(failed.len(), 1, "{text}");
    assert!(failed[0].contains("aggregate closeness"));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn reproduce_catches_a_perturbed_cell() {
    let f = Files::new();
    let perturbed = fixtures::REFERENCE_SYSTEM_CSV.replacen("x1,\"1.0,0.0\"", "x1,\"0.5,0.5\"", 1);
    let p = f.write("perturbed.csv", &perturbed);
    let o = run(&["reproduce", "--system", &p]);
    assert_eq!(o.status.code(), Some(4));
    let text = stdout(&o);
    assert!(text.contains("FAIL  expected loss matrix"), "{text}");
    assert!(text.contains("FAIL  aggregates"), "{text}");
}

#[test]
fn precision_does_not_change_verdicts() {
    let verdicts = |prec: &str| {
        let o = run(&["reproduce", "--tables", "--precision", prec]);
        let text = stdout(&o);
        let lines: Vec<String> = text
            .lines()
            .filter(|l| l.starts_with("PASS") || l.starts_with("FAIL"))
            .map(String::from)
            .collect();
        (o.status.code(), lines)
    };
    let (code1, v1) = verdicts("1");
    let (code8, v8) = verdicts("8");
    assert_eq!(code1, code8);
    assert_eq!(v1, v8);
}

#[test]
fn reproduce_tables_render() {
    let o = run(&["reproduce", "--tables", "--precision", "4"]);
    let text = stdout(&o);
    for title in [
        "## aggregates",
        "## expected loss matrix",
        "## group closeness matrix",
    ] {
        assert!(text.contains(title), "{title}");
    }
    let o = run(&["reproduce", "--tables", "--out", "json"]);
    let json_part: String = stdout(&o)
        .lines()
        .take_while(|l| !l.starts_with("PASS") && !l.starts_with("FAIL"))
        .collect::<Vec<_>>()
        .join("\n");
    let docs: serde_json::Value = serde_json::from_str(&json_part).unwrap();
    assert_eq!(docs.as_array().unwrap().len(), 7);
}
