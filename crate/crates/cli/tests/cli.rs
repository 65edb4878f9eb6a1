use std::process::{Command, Output};

fn sl2cover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl2cover"))
        .args(args)
        .env_clear()
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn passing_suite_exits_zero_with_json() {
    let out = sl2cover(&["verify", "plancherel", "--p", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let results = json["results"].as_array().unwrap();
    assert_eq!(results.len(), 2);
    for r in results {
        for c in r["checks"].as_array().unwrap() {
            assert_eq!(c["status"], "pass");
            assert!(c["paper_anchor"].is_string());
        }
    }
}

#[test]
fn failing_check_exits_one() {
    let out = sl2cover(&[
        "verify",
        "gelfand-graev",
        "--p",
        "3",
        "--w-pi",
        "+1",
        "--cases",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text
        .lines()
        .any(|l| l.contains("s-delta-second") && l.contains("FAIL")));
    assert!(text
        .lines()
        .any(|l| l.contains("sign-action") && l.contains("pass")));
}

#[test]
fn bad_configuration_exits_two() {
    for args in [
        &["verify", "all", "--p", "9"][..],
        &["verify", "all", "--p", "3", "--shell-depth", "1"],
        &["verify", "all", "--p", "3", "--torus-range", "0"],
    ] {
        assert_eq!(sl2cover(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn reproducible_runs_are_byte_identical() {
    let args = [
        "verify",
        "invariants",
        "--p",
        "2,3",
        "--cases",
        "20",
        "--format",
        "json",
        "--reproducible",
    ];
    let a = sl2cover(&args);
    let b = sl2cover(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn report_can_be_written_to_a_file() {
    let dir = std::env::temp_dir().join(format!("sl2cover-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = sl2cover(&[
        "verify",
        "gauss-sum",
        "--p",
        "5",
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report =
        sl2cover_cli::report::Report::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.checks().count(), 2 * 3);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn compute_gauss_sum() {
    let out = sl2cover(&["compute", "gauss-sum", "--p", "5", "--c-val", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("c = p^-1"));
    // |tau|^2 = 1/5 for the quadratic character mod 5
    let approx = text
        .lines()
        .find(|l| l.trim_start().starts_with("approx:"))
        .unwrap();
    let z = approx.split_whitespace().nth(1).unwrap();
    let (re, im) = z
        .trim_end_matches('i')
        .split_at(z[1..].find(['+', '-']).unwrap() + 1);
    let (re, im): (f64, f64) = (re.parse().unwrap(), im.parse().unwrap());
    assert!((re * re + im * im - 0.2).abs() < 1e-9, "{z}");
}

#[test]
fn compute_local_coefficient_and_plancherel() {
    let out = sl2cover(&["compute", "local-coefficient", "--p", "3", "--w-pi", "-1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("exact:").count(), 1);
    let out = sl2cover(&["compute", "plancherel", "--p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).matches("exact:").count(), 6);
}

#[test]
fn environment_selects_primes() {
    let out = Command::new(env!("CARGO_BIN_EXE_sl2cover"))
        .args(["verify", "functional-equation", "--format", "json"])
        .env_clear()
        .env("SL2COVER_P", "7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(json["results"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["p"] == 7));
}
