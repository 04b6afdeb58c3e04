use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("tests/fixtures");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn baric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_baric"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn baric_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_baric"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn strings(v: &Value) -> Vec<Vec<String>> {
    serde_json::from_value(v.clone()).unwrap()
}

#[test]
fn solve_exit_codes() {
    let two = fixture("two_homomorphisms.json");
    let out = baric(&["solve", &two]);
    assert_eq!(out.status.code(), Some(2));
    let text = stdout(&out);
    assert!(text.contains("(1, 1, 1)") && text.contains("(-1, 1, -1)"), "{text}");
    assert!(text.contains("verdict: multiple"));

    let out = baric(&["solve", &fixture("idempotent_kernel.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("(0, 0, 1)"));

    let out = baric(&["solve", &fixture("zero.json")]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stdout(&out).contains("weight homomorphisms: 0"));

    // The two solutions coincide mod 2.
    let out = baric(&["solve", &two, "--field", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn errors_exit_one() {
    let out = baric(&["solve", "/nonexistent/algebra.json"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));

    let out = baric_stdin(
        &["solve", "-"],
        r#"{"field": "Q", "dim": 2, "gamma": [[1, 1, 3, "1"]]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("gamma[0].k"), "{}", stderr(&out));

    let out = baric_stdin(
        &["solve", "-"],
        r#"{"field": "Q", "dim": 1, "gamma": [[1, 1, 1, "1/0"]]}"#,
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("gamma[0]"));

    // Usage errors must not collide with the "multiple" exit code.
    assert_eq!(baric(&["solve"]).status.code(), Some(1));
    assert_eq!(baric(&["solve", "x.json", "--field", "4"]).status.code(), Some(1));
    assert_eq!(
        baric(&["solve", "x.json", "--max-scan", "2000000000"]).status.code(),
        Some(1)
    );
    assert_eq!(baric(&["--help"]).status.code(), Some(0));
}

#[test]
fn help_documents_caps() {
    let out = baric(&["solve", "--help"]);
    let text = stdout(&out);
    assert!(text.contains("--max-scan") && text.contains("hard ceiling 10^9"), "{text}");
}

#[test]
fn exhaustive_cap_is_reported() {
    let out = baric(&[
        "census",
        &fixture("two_homomorphisms.json"),
        "--field",
        "3",
        "--max-cells",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("1000"), "{}", stderr(&out));
}

#[test]
fn text_and_json_verdicts_agree() {
    for (file, field) in [
        ("two_homomorphisms.json", None),
        ("two_homomorphisms.json", Some("2")),
        ("two_homomorphisms.json", Some("3")),
        ("idempotent_kernel.json", None),
        ("idempotent_kernel.json", Some("5")),
        ("zero.json", None),
        ("constant_product.json", None),
    ] {
        for cmd in ["solve", "certify"] {
            let path = fixture(file);
            let mut args = vec![cmd, path.as_str()];
            if let Some(f) = field {
                args.extend(["--field", f]);
            }
            let text = baric(&args);
            args.push("--json");
            let machine = baric(&args);
            assert_eq!(text.status.code(), machine.status.code(), "{cmd} {file}");
            let doc = json(&machine);
            let verdict = doc["verdict"].as_str().unwrap();
            assert!(stdout(&text).contains(&format!("verdict: {verdict}")));
            let sols = strings(&doc["solutions"]);
            let expected = match sols.len() {
                0 => 3,
                1 => 0,
                _ => 2,
            };
            assert_eq!(machine.status.code(), Some(expected));
            for s in sols {
                assert!(stdout(&text).contains(&format!("({})", s.join(", "))));
            }
        }
    }
}

#[test]
fn certify_json_schema() {
    let out = baric(&["certify", &fixture("two_homomorphisms.json"), "--json"]);
    let doc = json(&out);
    assert_eq!(doc["field"], "Q");
    assert_eq!(doc["dim"], 3);
    assert_eq!(doc["verdict"], "multiple");
    assert_eq!(doc["method"], "eigen");
    assert!(doc["fast_path"].is_null());
    assert_eq!(
        strings(&doc["solutions"]),
        vec![vec!["-1", "1", "-1"], vec!["1", "1", "1"]]
    );

    let out = baric(&["certify", &fixture("constant_product.json"), "--json"]);
    let doc = json(&out);
    assert_eq!(doc["field"]["prime"], 2);
    assert_eq!(doc["method"], "exhaustive");
    assert_eq!(doc["fast_path"], "constant-j-columns");
}

#[test]
fn seminat_make_flips_signs() {
    let two = fixture("two_homomorphisms.json");
    let out = baric(&["seminat-make", &two, "--alpha", "-1,1,-1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let flip = vec![vec!["-1", "0", "0"], vec!["0", "1", "0"], vec!["0", "0", "-1"]];
    assert_eq!(strings(&doc["transition"]), flip);
    assert_eq!(strings(&doc["inverse"]), flip);

    // The new constants form a valid algebra file whose standard basis is
    // semi-natural, so (1,1,1) is among its homomorphisms.
    let constants = serde_json::to_string(&doc["structure_constants"]).unwrap();
    let solved = baric_stdin(&["solve", "-", "--json"], &constants);
    assert_eq!(solved.status.code(), Some(2));
    assert!(strings(&json(&solved)["solutions"]).contains(&vec!["1".into(), "1".into(), "1".into()]));

    let out = baric(&["seminat-make", &two, "--alpha", "1,1,1", "--json"]);
    let doc = json(&out);
    assert_eq!(
        strings(&doc["transition"]),
        vec![vec!["1", "0", "0"], vec!["0", "1", "0"], vec!["0", "0", "1"]]
    );

    let out = baric(&["seminat-make", &two, "--alpha", "-1,1,-1"]);
    let text = stdout(&out);
    assert!(text.contains("e1·e1 = e2"), "{text}");
}

#[test]
fn seminat_make_rejects_non_solutions() {
    let two = fixture("two_homomorphisms.json");
    let out = baric(&["seminat-make", &two, "--alpha", "0,0,0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("zero vector"));

    let out = baric(&["seminat-make", &two, "--alpha", "1,0,1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("(1,1)"), "{}", stderr(&out));

    let out = baric(&["seminat-make", &two, "--alpha", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn seminat_check_reports_both_tests() {
    let two = fixture("two_homomorphisms.json");
    let out = baric(&["seminat-check", &two, &fixture("flip.txt"), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["semi_natural"], true);
    assert_eq!(doc["row_sums_solve"], true);
    assert!(doc["violation"].is_null());

    let out = baric(&["seminat-check", &two, &fixture("shear.txt"), "--json"]);
    assert_eq!(out.status.code(), Some(2));
    let doc = json(&out);
    assert_eq!(doc["semi_natural"], false);
    assert_eq!(doc["row_sums_solve"], false);
    assert_eq!(doc["row_sums"], serde_json::json!(["2", "1", "1"]));
}

#[test]
fn change_basis_round_trips() {
    let two = fixture("two_homomorphisms.json");
    let out = baric(&["change-basis", &two, &fixture("shear.txt")]);
    assert_eq!(out.status.code(), Some(0));
    let moved = stdout(&out);
    let solved = baric_stdin(&["solve", "-", "--json"], &moved);
    assert_eq!(
        strings(&json(&solved)["solutions"]),
        vec![vec!["0", "1", "-1"], vec!["2", "1", "1"]]
    );

    // Flipping twice returns the original constants.
    let once = stdout(&baric(&["change-basis", &two, &fixture("flip.txt")]));
    let dir = std::env::temp_dir().join(format!("baric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let once_path = dir.join("once.json");
    std::fs::write(&once_path, &once).unwrap();
    let twice = baric(&["change-basis", once_path.to_str().unwrap(), &fixture("flip.txt"), "--json"]);
    let original: Value = serde_json::from_str(&std::fs::read_to_string(&two).unwrap()).unwrap();
    let mut got = json(&twice)["gamma"].as_array().unwrap().clone();
    let mut want = original["gamma"].as_array().unwrap().clone();
    let key = |v: &Value| v.to_string();
    got.sort_by_key(key);
    want.sort_by_key(key);
    assert_eq!(got, want);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn census_outputs() {
    let two = fixture("two_homomorphisms.json");
    let out = baric(&["census", &two, "--field", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["num_weight_homs"], 2);
    assert_eq!(doc["num_seminat_bases"], 864);
    assert_eq!(doc["num_classes"], 2);
    assert_eq!(doc["rs_group_order"], 432);
    assert_eq!(doc["class_sizes"], serde_json::json!([432, 432]));

    let text = stdout(&baric(&["census", &two, "--field", "3"]));
    assert!(text.contains("864") && text.contains("432, 432"), "{text}");

    let doc = json(&baric(&["census", &fixture("constant_product.json"), "--json"]));
    assert_eq!(
        (doc["num_weight_homs"].as_u64(), doc["num_seminat_bases"].as_u64(), doc["num_classes"].as_u64()),
        (Some(1), Some(2), Some(1))
    );

    let out = baric(&["census", &two]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("census requires a finite field"));
}

#[test]
fn random_files_are_reproducible_and_baric() {
    let a = baric(&["random", "--dim", "3", "--field", "5", "--seed", "11", "--baric"]);
    let b = baric(&["random", "--dim", "3", "--field", "5", "--seed", "11", "--baric"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let solved = baric_stdin(&["solve", "-", "--json"], &stdout(&a));
    let sols = strings(&json(&solved)["solutions"]);
    assert!(sols.contains(&vec!["1".into(), "1".into(), "1".into()]));

    let q = baric(&["random", "--dim", "2", "--field", "Q", "--seed", "1"]);
    assert_eq!(json(&q)["field"], "Q");
}

#[test]
fn self_test_command_passes() {
    let out = baric(&["verify-paper"]);
    let text = stdout(&out);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 10);
    assert!(!text.contains("[FAIL]"));

    let out = baric(&["verify-paper", "--seed", "99", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["seed"], 99);
    assert_eq!(doc["passed"], true);
    assert_eq!(doc["checks"].as_array().unwrap().len(), 10);
}
